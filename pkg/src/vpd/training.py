"""Losses, the per-sequence training loop, file-level splits, and threshold tuning."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace

import numpy as np

from . import nets
from .event_log import FrameSeries
from .features import FeatureSpec, window_expand
from .morphology import MorphFilterSpec
from .passage_metric import PQReport, extract_intervals, match_passages, summarize_components


class DivergenceError(RuntimeError):
    """Training produced a non-finite loss."""

    def __init__(self, epoch: int, value: float):
        super().__init__(f"non-finite loss {value!r} at epoch {epoch}")
        self.epoch = epoch


@dataclass(frozen=True)
class LossSpec:
    """Class-weighted MSE with an optional output-derivative penalty."""

    positive_weight: float = 1.0
    negative_weight: float = 1.0
    derivative_lambda: float = 0.0

    def __post_init__(self):
        if self.positive_weight <= 0 or self.negative_weight <= 0:
            raise ValueError("class weights must be positive")
        if self.derivative_lambda < 0:
            raise ValueError("derivative_lambda must be >= 0")

    def to_dict(self) -> dict:
        return {"positive_weight": self.positive_weight,
                "negative_weight": self.negative_weight,
                "derivative_lambda": self.derivative_lambda}

    @classmethod
    def from_dict(cls, d: dict) -> "LossSpec":
        return cls(**d)


def loss(outputs, targets, spec: LossSpec) -> float:
    """See :func:`vpd.nets.loss_value`; exposed here next to the training loop."""
    return nets.loss_value(outputs, targets, spec)


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 40
    learning_rate: float = 1e-2
    optimizer: str = "adam"
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    seed: int = 0
    loss: LossSpec = field(default_factory=LossSpec)
    threshold_grid: float = 0.01
    shuffle_files: bool = True
    clip_norm: float | None = 5.0

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if not 0.0 < self.threshold_grid < 1.0:
            raise ValueError("threshold_grid must be in (0, 1)")
        if self.optimizer not in ("sgd", "adam"):
            raise ValueError(f"unknown optimizer {self.optimizer!r}")
        if self.learning_rate < 0:
            raise ValueError("learning_rate must be >= 0")

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in
             ("epochs", "learning_rate", "optimizer", "beta1", "beta2", "eps",
              "seed", "threshold_grid", "shuffle_files", "clip_norm")}
        d["loss"] = self.loss.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "TrainConfig":
        d = dict(d)
        if "loss" in d:
            d["loss"] = LossSpec.from_dict(d["loss"])
        return cls(**d)


class _Adam:
    def __init__(self, config: TrainConfig, shapes: dict):
        self.cfg = config
        self.m = {k: np.zeros(s) for k, s in shapes.items()}
        self.v = {k: np.zeros(s) for k, s in shapes.items()}
        self.t = 0

    def step(self, arrays: dict, grads: dict) -> None:
        cfg = self.cfg
        self.t += 1
        correction1 = 1.0 - cfg.beta1 ** self.t
        correction2 = 1.0 - cfg.beta2 ** self.t
        for name, arr in arrays.items():
            g = grads[name]
            m = self.m[name]
            v = self.v[name]
            m *= cfg.beta1
            m += (1.0 - cfg.beta1) * g
            v *= cfg.beta2
            v += (1.0 - cfg.beta2) * g * g
            arr -= cfg.learning_rate * (m / correction1) / (
                np.sqrt(v / correction2) + cfg.eps)


class _SGD:
    def __init__(self, config: TrainConfig, shapes: dict):
        self.cfg = config

    def step(self, arrays: dict, grads: dict) -> None:
        for name, arr in arrays.items():
            arr -= self.cfg.learning_rate * grads[name]


def _clip_global_norm(grads: dict, max_norm: float) -> None:
    total = np.sqrt(sum(float(np.sum(g * g)) for g in grads.values()))
    if total > max_norm and total > 0:
        scale = max_norm / total
        for g in grads.values():
            g *= scale


def train(model_init: nets.ModelParams,
          dataset: list[tuple[np.ndarray, np.ndarray]],
          config: TrainConfig) -> tuple[nets.ModelParams, list[float]]:
    """Per-sequence gradient descent: one parameter update per file.

    Deterministic given the config seed (file order shuffling and dropout masks
    are derived from it).  Returns the final-epoch parameters and the per-epoch
    mean training loss.
    """
    if not dataset:
        raise ValueError("empty training dataset")
    model = model_init.copy()
    arrays = dict(nets.param_arrays(model))
    shapes = {k: v.shape for k, v in arrays.items()}
    opt = (_Adam if config.optimizer == "adam" else _SGD)(config, shapes)
    order_rng = np.random.default_rng(np.random.SeedSequence([config.seed, 0x5EED]))

    trace = []
    for epoch in range(config.epochs):
        order = np.arange(len(dataset))
        if config.shuffle_files:
            order_rng.shuffle(order)
        epoch_losses = []
        for file_idx in order:
            x, targets = dataset[file_idx]
            drop_rng = np.random.default_rng(
                np.random.SeedSequence([config.seed, epoch, int(file_idx)]))
            value, grads = nets.backward(model, x, targets, config.loss,
                                         mode="train", rng=drop_rng)
            if not np.isfinite(value):
                raise DivergenceError(epoch, value)
            if config.clip_norm is not None:
                _clip_global_norm(grads, config.clip_norm)
            opt.step(arrays, grads)
            epoch_losses.append(value)
        trace.append(float(np.mean(epoch_losses)))
    return model, trace


# ---------------------------------------------------------------------------
# splits


@dataclass(frozen=True)
class SplitPlan:
    """Fold assignment at log-file granularity; frames inside files are never split."""

    assignments: dict
    n_folds: int
    kind: str = "kfold"  # or "holdout" with folds {0: train, 1: test}

    def fold_files(self, fold: int) -> list:
        return sorted(f for f, k in self.assignments.items() if k == fold)

    def train_files(self, fold: int) -> list:
        return sorted(f for f, k in self.assignments.items() if k != fold)

    def plan_hash(self) -> str:
        blob = ";".join(f"{f}={k}" for f, k in sorted(self.assignments.items()))
        return hashlib.sha256(f"{self.kind}:{self.n_folds}:{blob}".encode()).hexdigest()[:16]


def make_splits(file_ids, n_folds: int, seed: int = 0) -> SplitPlan:
    """Seeded shuffle into near-equal folds (sizes differ by at most one)."""
    ids = list(file_ids)
    if n_folds < 2:
        raise ValueError("n_folds must be >= 2")
    if n_folds > len(ids):
        raise ValueError(f"cannot make {n_folds} folds from {len(ids)} files")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(len(ids))
    assignments = {ids[int(p)]: i % n_folds for i, p in enumerate(perm)}
    return SplitPlan(assignments, n_folds, kind="kfold")


def train_test_split(file_ids, test_fraction: float = 0.2, seed: int = 0) -> SplitPlan:
    """Single seeded partition; fold 0 is train, fold 1 is test."""
    ids = list(file_ids)
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must be in (0, 1)")
    n_test = max(1, round(len(ids) * test_fraction))
    if n_test >= len(ids):
        raise ValueError("too few files for the requested test fraction")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(len(ids))
    assignments = {ids[int(p)]: (1 if i < n_test else 0) for i, p in enumerate(perm)}
    return SplitPlan(assignments, 2, kind="holdout")


# ---------------------------------------------------------------------------
# threshold selection


def sequences_from_series(series_list: list[FrameSeries],
                          spec: FeatureSpec) -> list[tuple[np.ndarray, np.ndarray]]:
    """(inputs, reference targets) pairs ready for training/evaluation."""
    return [(window_expand(s, spec), s.channel("ref_pass").astype(np.float64))
            for s in series_list]


def _corpus_pq_at(prob_ref_pairs, threshold: float,
                  post_filter: MorphFilterSpec | None) -> PQReport:
    components = []
    for probs, ref in prob_ref_pairs:
        pred = (probs >= threshold).astype(np.uint8)
        if post_filter is not None:
            pred = post_filter(pred)
        components.extend(match_passages(extract_intervals(ref), extract_intervals(pred)))
    return summarize_components(components)


def select_threshold(model: nets.ModelParams,
                     series_list: list[FrameSeries],
                     feature_spec: FeatureSpec,
                     grid_step: float = 0.01,
                     post_filter: MorphFilterSpec | None = None) -> tuple[float, float]:
    """Sweep the threshold grid {step, 2*step, ...} and return the corpus-PQ
    maximizer (ties go to the smallest threshold), with its training PQ."""
    if not 0.0 < grid_step < 1.0:
        raise ValueError("grid_step must be in (0, 1)")
    pairs = [(nets.forward(model, window_expand(s, feature_spec)),
              s.channel("ref_pass")) for s in series_list]
    n = int(np.ceil(1.0 / grid_step))
    grid = [i * grid_step for i in range(1, n) if i * grid_step < 1.0]
    best_t, best_pq = None, -1.0
    for t in grid:
        pq = _corpus_pq_at(pairs, t, post_filter).pq
        if pq > best_pq:
            best_t, best_pq = t, pq
    return float(best_t), float(best_pq)
