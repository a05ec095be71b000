"""From-scratch sequence classifiers with exact analytic gradients.

Variants share one container: an optional recurrent cell (SimpleRNN, LSTM or
GRU) followed by a stack of dense layers applied frame-wise, with an optional
dropout transformation before each dense layer.  Logistic regression and the
MLP baseline are the cell-free special cases.  ``backward`` runs full
backpropagation through time over the sequence; gradients are exact for the
weighted-MSE-plus-derivative-penalty loss and are validated against central
finite differences in the test suite.
"""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

VARIANTS = ("lr", "mlp", "simplernn", "lstm", "gru", "final")

ACTIVATIONS = ("sigmoid", "tanh", "relu", "identity")


def _act(name: str, z: np.ndarray) -> np.ndarray:
    if name == "sigmoid":
        return expit(z)
    if name == "tanh":
        return np.tanh(z)
    if name == "relu":
        return np.maximum(z, 0.0)
    if name == "identity":
        return z
    raise ValueError(f"unknown activation {name!r}")


def _act_grad(name: str, z: np.ndarray, a: np.ndarray) -> np.ndarray:
    """d activation / d z, from pre-activation z and activation a."""
    if name == "sigmoid":
        return a * (1.0 - a)
    if name == "tanh":
        return 1.0 - a * a
    if name == "relu":
        return (z > 0).astype(z.dtype)
    if name == "identity":
        return np.ones_like(z)
    raise ValueError(f"unknown activation {name!r}")


# ---------------------------------------------------------------------------
# parameter containers


@dataclass
class DenseParams:
    weights: np.ndarray  # (out, in)
    bias: np.ndarray     # (out,)
    activation: str = "sigmoid"

    def __post_init__(self):
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")
        if self.weights.ndim != 2 or self.bias.shape != (self.weights.shape[0],):
            raise ValueError("inconsistent dense dimensions")

    @property
    def in_dim(self) -> int:
        return self.weights.shape[1]

    @property
    def out_dim(self) -> int:
        return self.weights.shape[0]


@dataclass
class SimpleRNNParams:
    w: np.ndarray  # (h, in)
    u: np.ndarray  # (h, h)
    b: np.ndarray  # (h,)

    @property
    def hidden(self) -> int:
        return self.w.shape[0]

    @property
    def in_dim(self) -> int:
        return self.w.shape[1]

    def zero_state(self):
        return np.zeros(self.hidden)


_LSTM_GATES = ("i", "f", "o", "c")


@dataclass
class LSTMParams:
    w_i: np.ndarray; w_f: np.ndarray; w_o: np.ndarray; w_c: np.ndarray  # (h, in)
    u_i: np.ndarray; u_f: np.ndarray; u_o: np.ndarray; u_c: np.ndarray  # (h, h)
    b_i: np.ndarray; b_f: np.ndarray; b_o: np.ndarray; b_c: np.ndarray  # (h,)

    @property
    def hidden(self) -> int:
        return self.w_i.shape[0]

    @property
    def in_dim(self) -> int:
        return self.w_i.shape[1]

    def zero_state(self):
        h = self.hidden
        return (np.zeros(h), np.zeros(h))


_GRU_GATES = ("z", "r", "h")


@dataclass
class GRUParams:
    w_z: np.ndarray; w_r: np.ndarray; w_h: np.ndarray  # (h, in)
    u_z: np.ndarray; u_r: np.ndarray; u_h: np.ndarray  # (h, h)
    b_z: np.ndarray; b_r: np.ndarray; b_h: np.ndarray  # (h,)

    @property
    def hidden(self) -> int:
        return self.w_z.shape[0]

    @property
    def in_dim(self) -> int:
        return self.w_z.shape[1]

    def zero_state(self):
        return np.zeros(self.hidden)


CellParams = SimpleRNNParams | LSTMParams | GRUParams


@dataclass
class ModelParams:
    variant: str
    cell: CellParams | None
    dense: list[DenseParams]
    dropout_p: float = 0.0
    seed: int | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if not 0.0 <= self.dropout_p < 1.0:
            raise ValueError(f"dropout_p must be in [0, 1), got {self.dropout_p}")
        if not self.dense:
            raise ValueError("model needs at least one dense layer")
        if self.dense[-1].out_dim != 1:
            raise ValueError("final layer must have output dimension 1")
        dims = [self.cell.hidden if self.cell is not None else None]
        for layer in self.dense:
            if dims[-1] is not None and layer.in_dim != dims[-1]:
                raise ValueError("dense layer dimensions do not chain")
            dims.append(layer.out_dim)

    @property
    def in_dim(self) -> int:
        return self.cell.in_dim if self.cell is not None else self.dense[0].in_dim

    def copy(self) -> "ModelParams":
        return copy.deepcopy(self)


def param_arrays(model: ModelParams) -> list[tuple[str, np.ndarray]]:
    """Named parameter arrays in a fixed, stable order."""
    out: list[tuple[str, np.ndarray]] = []
    cell = model.cell
    if isinstance(cell, SimpleRNNParams):
        out += [("cell.w", cell.w), ("cell.u", cell.u), ("cell.b", cell.b)]
    elif isinstance(cell, LSTMParams):
        for g in _LSTM_GATES:
            out += [(f"cell.w_{g}", getattr(cell, f"w_{g}")),
                    (f"cell.u_{g}", getattr(cell, f"u_{g}")),
                    (f"cell.b_{g}", getattr(cell, f"b_{g}"))]
    elif isinstance(cell, GRUParams):
        for g in _GRU_GATES:
            out += [(f"cell.w_{g}", getattr(cell, f"w_{g}")),
                    (f"cell.u_{g}", getattr(cell, f"u_{g}")),
                    (f"cell.b_{g}", getattr(cell, f"b_{g}"))]
    elif cell is not None:
        raise TypeError(f"unknown cell type {type(cell)}")
    for i, layer in enumerate(model.dense):
        out += [(f"dense{i}.weights", layer.weights), (f"dense{i}.bias", layer.bias)]
    return out


def get_flat(model: ModelParams) -> np.ndarray:
    return np.concatenate([arr.ravel() for _, arr in param_arrays(model)])


def set_flat(model: ModelParams, flat: np.ndarray) -> None:
    pos = 0
    for _, arr in param_arrays(model):
        arr.flat[:] = flat[pos:pos + arr.size]
        pos += arr.size
    if pos != flat.size:
        raise ValueError(f"flat vector length {flat.size} != parameter count {pos}")


def zero_grads(model: ModelParams) -> dict[str, np.ndarray]:
    return {name: np.zeros_like(arr) for name, arr in param_arrays(model)}


def grads_flat(model: ModelParams, grads: dict[str, np.ndarray]) -> np.ndarray:
    return np.concatenate([grads[name].ravel() for name, _ in param_arrays(model)])


# ---------------------------------------------------------------------------
# initialization


def _glorot(rng: np.random.Generator, out_dim: int, in_dim: int) -> np.ndarray:
    r = np.sqrt(6.0 / (in_dim + out_dim))
    return rng.uniform(-r, r, size=(out_dim, in_dim))


def _recurrent_init(rng: np.random.Generator, h: int) -> np.ndarray:
    r = 1.0 / np.sqrt(h)
    return rng.uniform(-r, r, size=(h, h))


def _dense_stack(rng, dims_acts):
    return [DenseParams(_glorot(rng, o, i), np.zeros(o), act) for i, o, act in dims_acts]


def init_lr(in_dim: int, seed: int = 0) -> ModelParams:
    rng = np.random.default_rng(seed)
    return ModelParams("lr", None, _dense_stack(rng, [(in_dim, 1, "sigmoid")]), seed=seed)


def init_mlp(in_dim: int, hidden: int = 12, seed: int = 0) -> ModelParams:
    rng = np.random.default_rng(seed)
    dense = _dense_stack(rng, [(in_dim, hidden, "tanh"), (hidden, 1, "sigmoid")])
    return ModelParams("mlp", None, dense, seed=seed)


def init_simplernn(in_dim: int, hidden: int = 8, seed: int = 0) -> ModelParams:
    rng = np.random.default_rng(seed)
    cell = SimpleRNNParams(_glorot(rng, hidden, in_dim), _recurrent_init(rng, hidden),
                           np.zeros(hidden))
    return ModelParams("simplernn", cell,
                       _dense_stack(rng, [(hidden, 1, "sigmoid")]), seed=seed)


def _init_lstm_cell(rng, in_dim, hidden) -> LSTMParams:
    kw = {}
    for g in _LSTM_GATES:
        kw[f"w_{g}"] = _glorot(rng, hidden, in_dim)
        kw[f"u_{g}"] = _recurrent_init(rng, hidden)
        kw[f"b_{g}"] = np.zeros(hidden)
    kw["b_f"] = np.ones(hidden)  # open forget gate at start of training
    return LSTMParams(**kw)


def init_lstm(in_dim: int, hidden: int = 8, seed: int = 0) -> ModelParams:
    rng = np.random.default_rng(seed)
    cell = _init_lstm_cell(rng, in_dim, hidden)
    return ModelParams("lstm", cell, _dense_stack(rng, [(hidden, 1, "sigmoid")]), seed=seed)


def init_gru(in_dim: int, hidden: int = 8, seed: int = 0) -> ModelParams:
    rng = np.random.default_rng(seed)
    kw = {}
    for g in _GRU_GATES:
        kw[f"w_{g}"] = _glorot(rng, hidden, in_dim)
        kw[f"u_{g}"] = _recurrent_init(rng, hidden)
        kw[f"b_{g}"] = np.zeros(hidden)
    cell = GRUParams(**kw)
    return ModelParams("gru", cell, _dense_stack(rng, [(hidden, 1, "sigmoid")]), seed=seed)


def init_final(in_dim: int, lstm_units: int = 16, dense_units: int = 8,
               dropout_p: float = 0.2, seed: int = 0) -> ModelParams:
    """Stacked detector: LSTM -> dropout -> dense(relu) -> dropout -> dense(sigmoid)."""
    rng = np.random.default_rng(seed)
    cell = _init_lstm_cell(rng, in_dim, lstm_units)
    dense = _dense_stack(rng, [(lstm_units, dense_units, "relu"),
                               (dense_units, 1, "sigmoid")])
    return ModelParams("final", cell, dense, dropout_p=dropout_p, seed=seed)


# ---------------------------------------------------------------------------
# single-step cell semantics (also the reference for the vectorized paths)


def cell_step(cell: CellParams, x: np.ndarray, state):
    """One recurrent update; returns (output, new state)."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (cell.in_dim,):
        raise ValueError(f"input shape {x.shape} != ({cell.in_dim},)")
    if isinstance(cell, SimpleRNNParams):
        h = np.asarray(state, dtype=np.float64)
        h_new = np.tanh(cell.w @ x + cell.u @ h + cell.b)
        return h_new, h_new
    if isinstance(cell, LSTMParams):
        h, c = (np.asarray(s, dtype=np.float64) for s in state)
        i = expit(cell.w_i @ x + cell.u_i @ h + cell.b_i)
        f = expit(cell.w_f @ x + cell.u_f @ h + cell.b_f)
        o = expit(cell.w_o @ x + cell.u_o @ h + cell.b_o)
        g = np.tanh(cell.w_c @ x + cell.u_c @ h + cell.b_c)
        c_new = f * c + i * g
        h_new = o * np.tanh(c_new)
        return h_new, (h_new, c_new)
    if isinstance(cell, GRUParams):
        h = np.asarray(state, dtype=np.float64)
        z = expit(cell.w_z @ x + cell.u_z @ h + cell.b_z)
        r = expit(cell.w_r @ x + cell.u_r @ h + cell.b_r)
        h_tilde = np.tanh(cell.w_h @ x + cell.u_h @ (r * h) + cell.b_h)
        h_new = (1.0 - z) * h + z * h_tilde
        return h_new, h_new
    raise TypeError(f"unknown cell type {type(cell)}")


# ---------------------------------------------------------------------------
# forward


def _dropout_masks(model: ModelParams, mode: str, rng) -> list[np.ndarray | None]:
    """One mask per dense layer, shared across all time steps of the sequence."""
    if mode == "eval" or model.dropout_p == 0.0:
        return [None] * len(model.dense)
    if rng is None:
        raise ValueError("train-mode forward with dropout needs an rng or seed")
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    keep = 1.0 - model.dropout_p
    return [(gen.random(layer.in_dim) < keep).astype(np.float64) for layer in model.dense]


def _cell_forward(cell: CellParams, x: np.ndarray) -> dict:
    """Run the cell over the whole sequence, keeping per-step caches."""
    T = x.shape[0]
    h_dim = cell.hidden
    H = np.zeros((T, h_dim))
    cache = {"x": x, "H": H}
    if isinstance(cell, SimpleRNNParams):
        zx = x @ cell.w.T + cell.b
        h = np.zeros(h_dim)
        for t in range(T):
            h = np.tanh(zx[t] + cell.u @ h)
            H[t] = h
    elif isinstance(cell, LSTMParams):
        I, F, O, G = (np.zeros((T, h_dim)) for _ in range(4))
        C = np.zeros((T, h_dim))
        TC = np.zeros((T, h_dim))
        zx_i = x @ cell.w_i.T + cell.b_i
        zx_f = x @ cell.w_f.T + cell.b_f
        zx_o = x @ cell.w_o.T + cell.b_o
        zx_c = x @ cell.w_c.T + cell.b_c
        h = np.zeros(h_dim)
        c = np.zeros(h_dim)
        for t in range(T):
            i = expit(zx_i[t] + cell.u_i @ h)
            f = expit(zx_f[t] + cell.u_f @ h)
            o = expit(zx_o[t] + cell.u_o @ h)
            g = np.tanh(zx_c[t] + cell.u_c @ h)
            c = f * c + i * g
            tc = np.tanh(c)
            h = o * tc
            I[t], F[t], O[t], G[t], C[t], TC[t], H[t] = i, f, o, g, c, tc, h
        cache.update(I=I, F=F, O=O, G=G, C=C, TC=TC)
    elif isinstance(cell, GRUParams):
        Z, R, HT = (np.zeros((T, h_dim)) for _ in range(3))
        RH = np.zeros((T, h_dim))  # r * h_prev, reused by the backward pass
        zx_z = x @ cell.w_z.T + cell.b_z
        zx_r = x @ cell.w_r.T + cell.b_r
        zx_h = x @ cell.w_h.T + cell.b_h
        h = np.zeros(h_dim)
        for t in range(T):
            z = expit(zx_z[t] + cell.u_z @ h)
            r = expit(zx_r[t] + cell.u_r @ h)
            rh = r * h
            ht = np.tanh(zx_h[t] + cell.u_h @ rh)
            h = (1.0 - z) * h + z * ht
            Z[t], R[t], HT[t], RH[t], H[t] = z, r, ht, rh, h
        cache.update(Z=Z, R=R, HT=HT, RH=RH)
    else:
        raise TypeError(f"unknown cell type {type(cell)}")
    return cache


def _dense_forward(model: ModelParams, A: np.ndarray, masks) -> tuple[np.ndarray, list]:
    keep = 1.0 - model.dropout_p
    caches = []
    for layer, mask in zip(model.dense, masks):
        A_in = A * (mask / keep) if mask is not None else A
        Z = A_in @ layer.weights.T + layer.bias
        A = _act(layer.activation, Z)
        caches.append((A_in, Z, A))
    return A, caches


def _forward_full(model: ModelParams, x: np.ndarray, mode: str, rng):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != model.in_dim:
        raise ValueError(f"input shape {x.shape} incompatible with model input "
                         f"dimension {model.in_dim}")
    if mode not in ("train", "eval"):
        raise ValueError(f"mode must be 'train' or 'eval', got {mode!r}")
    masks = _dropout_masks(model, mode, rng)
    cell_cache = _cell_forward(model.cell, x) if model.cell is not None else None
    A0 = cell_cache["H"] if cell_cache is not None else x
    out, dense_caches = _dense_forward(model, A0, masks)
    return out[:, 0], cell_cache, dense_caches, masks


def forward(model: ModelParams, x: np.ndarray, mode: str = "eval", rng=None) -> np.ndarray:
    """Per-frame output probabilities for one input sequence (T, in_dim).

    Recurrent state starts at zero and is never carried across sequences.
    Dropout is active only in train mode, with inverted scaling; ``rng`` may be
    a seed or a Generator and fully determines the masks.
    """
    return _forward_full(model, x, mode, rng)[0]


def predict_binary(model: ModelParams, x: np.ndarray, threshold: float) -> np.ndarray:
    """Eval-mode forward thresholded at ``output >= threshold``."""
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must be in (0, 1), got {threshold}")
    return (forward(model, x, mode="eval") >= threshold).astype(np.uint8)


# ---------------------------------------------------------------------------
# loss and backward


def loss_value(outputs: np.ndarray, targets: np.ndarray, spec) -> float:
    """Weighted MSE (weights by target class, normalized by total weight) plus
    a penalty on the output's discrete derivative."""
    y = np.asarray(outputs, dtype=np.float64)
    r = np.asarray(targets, dtype=np.float64)
    if y.shape != r.shape:
        raise ValueError(f"length mismatch: {y.shape} vs {r.shape}")
    w = np.where(r == 1, spec.positive_weight, spec.negative_weight)
    value = float(np.sum(w * (y - r) ** 2) / np.sum(w))
    if spec.derivative_lambda > 0 and y.size > 1:
        value += spec.derivative_lambda * float(np.sum(np.diff(y) ** 2))
    return value


def loss_output_grad(outputs: np.ndarray, targets: np.ndarray, spec) -> np.ndarray:
    y = np.asarray(outputs, dtype=np.float64)
    r = np.asarray(targets, dtype=np.float64)
    w = np.where(r == 1, spec.positive_weight, spec.negative_weight)
    dy = 2.0 * w * (y - r) / np.sum(w)
    if spec.derivative_lambda > 0 and y.size > 1:
        d = np.diff(y)
        dy[1:] += 2.0 * spec.derivative_lambda * d
        dy[:-1] -= 2.0 * spec.derivative_lambda * d
    return dy


def _dense_backward(model: ModelParams, dY: np.ndarray, caches, masks, grads):
    keep = 1.0 - model.dropout_p
    dA = dY
    for idx in range(len(model.dense) - 1, -1, -1):
        layer = model.dense[idx]
        A_in, Z, A = caches[idx]
        dZ = dA * _act_grad(layer.activation, Z, A)
        grads[f"dense{idx}.weights"] += dZ.T @ A_in
        grads[f"dense{idx}.bias"] += dZ.sum(axis=0)
        dA = dZ @ layer.weights
        if masks[idx] is not None:
            dA = dA * (masks[idx] / keep)
    return dA  # gradient w.r.t. the dense stack's input (cell output or x)


def _cell_backward(cell: CellParams, cache: dict, dH: np.ndarray, grads):
    x = cache["x"]
    H = cache["H"]
    T, h_dim = H.shape
    H_prev = np.vstack([np.zeros((1, h_dim)), H[:-1]])
    if isinstance(cell, SimpleRNNParams):
        dZ = np.zeros((T, h_dim))
        dh_next = np.zeros(h_dim)
        for t in range(T - 1, -1, -1):
            dh = dH[t] + dh_next
            dz = dh * (1.0 - H[t] * H[t])
            dh_next = cell.u.T @ dz
            dZ[t] = dz
        grads["cell.w"] += dZ.T @ x
        grads["cell.u"] += dZ.T @ H_prev
        grads["cell.b"] += dZ.sum(axis=0)
        return
    if isinstance(cell, LSTMParams):
        I, F, O, G, C, TC = (cache[k] for k in ("I", "F", "O", "G", "C", "TC"))
        C_prev = np.vstack([np.zeros((1, h_dim)), C[:-1]])
        dZi, dZf, dZo, dZg = (np.zeros((T, h_dim)) for _ in range(4))
        dh_next = np.zeros(h_dim)
        dc_next = np.zeros(h_dim)
        for t in range(T - 1, -1, -1):
            dh = dH[t] + dh_next
            do = dh * TC[t]
            dzo = do * O[t] * (1.0 - O[t])
            dc = dh * O[t] * (1.0 - TC[t] * TC[t]) + dc_next
            df = dc * C_prev[t]
            dzf = df * F[t] * (1.0 - F[t])
            di = dc * G[t]
            dzi = di * I[t] * (1.0 - I[t])
            dg = dc * I[t]
            dzg = dg * (1.0 - G[t] * G[t])
            dc_next = dc * F[t]
            dh_next = (cell.u_i.T @ dzi + cell.u_f.T @ dzf
                       + cell.u_o.T @ dzo + cell.u_c.T @ dzg)
            dZi[t], dZf[t], dZo[t], dZg[t] = dzi, dzf, dzo, dzg
        for g, dZ in zip(_LSTM_GATES, (dZi, dZf, dZo, dZg)):
            grads[f"cell.w_{g}"] += dZ.T @ x
            grads[f"cell.u_{g}"] += dZ.T @ H_prev
            grads[f"cell.b_{g}"] += dZ.sum(axis=0)
        return
    if isinstance(cell, GRUParams):
        Z, R, HT, RH = (cache[k] for k in ("Z", "R", "HT", "RH"))
        dAz, dAr, dAh = (np.zeros((T, h_dim)) for _ in range(3))
        dh_next = np.zeros(h_dim)
        for t in range(T - 1, -1, -1):
            h_prev = H_prev[t]
            dh = dH[t] + dh_next
            da_z = dh * (HT[t] - h_prev) * Z[t] * (1.0 - Z[t])
            da_h = dh * Z[t] * (1.0 - HT[t] * HT[t])
            s = cell.u_h.T @ da_h
            da_r = s * h_prev * R[t] * (1.0 - R[t])
            dh_next = (dh * (1.0 - Z[t]) + cell.u_z.T @ da_z
                       + cell.u_r.T @ da_r + s * R[t])
            dAz[t], dAr[t], dAh[t] = da_z, da_r, da_h
        grads["cell.w_z"] += dAz.T @ x
        grads["cell.u_z"] += dAz.T @ H_prev
        grads["cell.b_z"] += dAz.sum(axis=0)
        grads["cell.w_r"] += dAr.T @ x
        grads["cell.u_r"] += dAr.T @ H_prev
        grads["cell.b_r"] += dAr.sum(axis=0)
        grads["cell.w_h"] += dAh.T @ x
        grads["cell.u_h"] += dAh.T @ RH
        grads["cell.b_h"] += dAh.sum(axis=0)
        return
    raise TypeError(f"unknown cell type {type(cell)}")


def backward(model: ModelParams, x: np.ndarray, targets: np.ndarray, loss_spec,
             mode: str = "eval", rng=None) -> tuple[float, dict[str, np.ndarray]]:
    """Loss and exact gradients for one sequence, accumulated over all frames.

    With ``mode='train'`` the dropout masks are drawn once and shared by the
    forward pass and the gradients (gradients are exact for the sampled masks).
    """
    targets = np.asarray(targets, dtype=np.float64)
    y, cell_cache, dense_caches, masks = _forward_full(model, x, mode, rng)
    if targets.shape != y.shape:
        raise ValueError(f"targets shape {targets.shape} != outputs {y.shape}")
    value = loss_value(y, targets, loss_spec)
    dY = loss_output_grad(y, targets, loss_spec)[:, None]
    grads = zero_grads(model)
    dA0 = _dense_backward(model, dY, dense_caches, masks, grads)
    if model.cell is not None:
        _cell_backward(model.cell, cell_cache, dA0, grads)
    return value, grads


# ---------------------------------------------------------------------------
# serialization


def save_model(model: ModelParams, extra: dict | None = None) -> str:
    """JSON checkpoint: variant, dims, flat row-major parameter arrays."""
    doc = {
        "variant": model.variant,
        "dropout_p": model.dropout_p,
        "seed": model.seed,
        "dense": [
            {"out": l.out_dim, "in": l.in_dim, "activation": l.activation}
            for l in model.dense
        ],
        "cell": None,
        "params": {name: {"shape": list(arr.shape), "data": arr.ravel().tolist()}
                   for name, arr in param_arrays(model)},
    }
    if model.cell is not None:
        kind = {SimpleRNNParams: "simplernn", LSTMParams: "lstm", GRUParams: "gru"}[
            type(model.cell)]
        doc["cell"] = {"kind": kind, "hidden": model.cell.hidden,
                       "in": model.cell.in_dim}
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=2)


def load_model(text: str) -> tuple[ModelParams, dict]:
    """Inverse of :func:`save_model`; returns (model, leftover metadata)."""
    doc = json.loads(text)
    params = {name: np.array(p["data"], dtype=np.float64).reshape(p["shape"])
              for name, p in doc["params"].items()}

    def take(name):
        return params[name]

    cell = None
    if doc["cell"] is not None:
        kind = doc["cell"]["kind"]
        if kind == "simplernn":
            cell = SimpleRNNParams(take("cell.w"), take("cell.u"), take("cell.b"))
        elif kind == "lstm":
            cell = LSTMParams(**{f"{p}_{g}": take(f"cell.{p}_{g}")
                                 for g in _LSTM_GATES for p in ("w", "u", "b")})
        elif kind == "gru":
            cell = GRUParams(**{f"{p}_{g}": take(f"cell.{p}_{g}")
                                for g in _GRU_GATES for p in ("w", "u", "b")})
        else:
            raise ValueError(f"unknown cell kind {kind!r}")
    dense = [DenseParams(take(f"dense{i}.weights"), take(f"dense{i}.bias"),
                         spec["activation"])
             for i, spec in enumerate(doc["dense"])]
    model = ModelParams(doc["variant"], cell, dense, dropout_p=doc["dropout_p"],
                        seed=doc.get("seed"))
    known = {"variant", "dropout_p", "seed", "dense", "cell", "params"}
    meta = {k: v for k, v in doc.items() if k not in known}
    return model, meta
