"""Experiment orchestration: model comparison, feature ablation, evaluation.

Every experiment follows one path: split files, train per fold, pick the
output threshold on the training files, then score held-out files with the
passage metric.  Results carry both the mean of per-fold PQ ratios and the
aggregated (sum R, sum Err) so either averaging convention can be inspected.
"""
from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from . import nets
from .event_log import INPUT_CHANNELS, FrameSeries
from .features import FeatureSpec, window_expand
from .morphology import MorphFilterSpec
from .passage_metric import (PQReport, extract_intervals, match_passages,
                             summarize_components)
from .training import (DivergenceError, SplitPlan, TrainConfig, make_splits,
                       select_threshold, sequences_from_series, train,
                       train_test_split)

MODEL_TAGS = ("basic", "lr", "mlp", "simplernn", "lstm", "gru", "final")


@dataclass(frozen=True)
class ModelSetting:
    """Per-family architecture knobs; ``window`` only matters for lr/mlp."""

    tag: str
    window: int = 0
    hidden: int = 8
    dense_units: int = 8
    dropout_p: float = 0.2
    use_morph: bool = False

    def build(self, in_dim: int, seed: int) -> nets.ModelParams | None:
        if self.tag == "basic":
            return None
        if self.tag == "lr":
            return nets.init_lr(in_dim, seed=seed)
        if self.tag == "mlp":
            return nets.init_mlp(in_dim, hidden=12, seed=seed)
        if self.tag == "simplernn":
            return nets.init_simplernn(in_dim, hidden=self.hidden, seed=seed)
        if self.tag == "lstm":
            return nets.init_lstm(in_dim, hidden=self.hidden, seed=seed)
        if self.tag == "gru":
            return nets.init_gru(in_dim, hidden=self.hidden, seed=seed)
        if self.tag == "final":
            return nets.init_final(in_dim, lstm_units=self.hidden,
                                   dense_units=self.dense_units,
                                   dropout_p=self.dropout_p, seed=seed)
        raise ValueError(f"unknown model tag {self.tag!r}")

    def to_dict(self) -> dict:
        return {"tag": self.tag, "window": self.window, "hidden": self.hidden,
                "dense_units": self.dense_units, "dropout_p": self.dropout_p,
                "use_morph": self.use_morph}


def default_zoo(window: int = 8) -> list[ModelSetting]:
    return [
        ModelSetting("basic"),
        ModelSetting("lr", window=window),
        ModelSetting("mlp", window=window),
        ModelSetting("simplernn", hidden=8),
        ModelSetting("lstm", hidden=8),
        ModelSetting("gru", hidden=8),
        ModelSetting("final", hidden=16, dense_units=8, dropout_p=0.2, use_morph=True),
    ]


@dataclass(frozen=True)
class HarnessConfig:
    train: TrainConfig = field(default_factory=TrainConfig)
    channels: tuple[str, ...] = INPUT_CHANNELS
    window: int = 8
    n_folds: int | None = None      # k-fold when set, otherwise a holdout split
    test_fraction: float = 0.2
    split_seed: int = 0
    repeats: int = 1                # independent init/dropout seeds per fold
    morph: MorphFilterSpec = field(default_factory=MorphFilterSpec)
    final_hidden: int = 16
    final_dense: int = 8
    final_dropout: float = 0.2

    def to_dict(self) -> dict:
        return {
            "train": self.train.to_dict(),
            "channels": list(self.channels),
            "window": self.window,
            "n_folds": self.n_folds,
            "test_fraction": self.test_fraction,
            "split_seed": self.split_seed,
            "repeats": self.repeats,
            "morph": {"open_width": self.morph.open_width,
                      "close_width": self.morph.close_width,
                      "order": self.morph.order},
            "final_hidden": self.final_hidden,
            "final_dense": self.final_dense,
            "final_dropout": self.final_dropout,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "HarnessConfig":
        d = dict(d)
        if "train" in d:
            d["train"] = TrainConfig.from_dict(d["train"])
        if "channels" in d:
            d["channels"] = tuple(d["channels"])
        if "morph" in d and not isinstance(d["morph"], MorphFilterSpec):
            d["morph"] = MorphFilterSpec(**d["morph"])
        return cls(**d)


def architecture_search_config(base: HarnessConfig | None = None) -> HarnessConfig:
    """The bounded search regime: small cells, capped epochs, many repeats."""
    base = base or HarnessConfig()
    train = TrainConfig.from_dict({**base.train.to_dict(),
                                   "epochs": min(base.train.epochs, 40)})
    return HarnessConfig(
        train=train, channels=base.channels, window=base.window,
        n_folds=base.n_folds, test_fraction=base.test_fraction,
        split_seed=base.split_seed, repeats=30, morph=base.morph,
        final_hidden=8, final_dense=8, final_dropout=base.final_dropout)


@dataclass
class ExperimentResult:
    model_tag: str
    channels: tuple[str, ...]
    window: int
    fold_reports: list[PQReport]
    thresholds: list[float]
    plan_hash: str
    config: dict
    error: str | None = None

    @property
    def mean_pq(self) -> float:
        return float(np.mean([r.pq for r in self.fold_reports])) if self.fold_reports else float("nan")

    @property
    def std_pq(self) -> float:
        return float(np.std([r.pq for r in self.fold_reports])) if self.fold_reports else float("nan")

    @property
    def agg_r(self) -> int:
        return sum(r.r for r in self.fold_reports)

    @property
    def agg_sum_err(self) -> int:
        return sum(r.sum_err for r in self.fold_reports)

    def to_dict(self) -> dict:
        return {
            "model": self.model_tag,
            "channels": list(self.channels),
            "window": self.window,
            "mean_pq": self.mean_pq,
            "std_pq": self.std_pq,
            "agg_r": self.agg_r,
            "agg_sum_err": self.agg_sum_err,
            "thresholds": self.thresholds,
            "fold_reports": [r.to_dict() for r in self.fold_reports],
            "plan_hash": self.plan_hash,
            "config": self.config,
            "error": self.error,
        }


def evaluate_model(model: nets.ModelParams, threshold: float,
                   series_list: list[FrameSeries], feature_spec: FeatureSpec,
                   post_filter: MorphFilterSpec | None = None) -> PQReport:
    """Corpus-aggregated PQ of thresholded (optionally filtered) predictions."""
    components = []
    agree = 0
    total = 0
    for series in series_list:
        probs = nets.forward(model, window_expand(series, feature_spec))
        pred = (probs >= threshold).astype(np.uint8)
        if post_filter is not None:
            pred = post_filter(pred)
        ref = series.channel("ref_pass")
        components.extend(match_passages(extract_intervals(ref), extract_intervals(pred)))
        agree += int(np.sum(ref == pred))
        total += len(series)
    return summarize_components(components, accuracy=agree / total if total else None)


def score_prediction_channel(series_list: list[FrameSeries],
                             channel: str = "basic_clf") -> PQReport:
    """Score an already-binarized channel (e.g. the rule-based classifier)."""
    components = []
    agree = 0
    total = 0
    for series in series_list:
        pred = series.channel(channel)
        ref = series.channel("ref_pass")
        components.extend(match_passages(extract_intervals(ref), extract_intervals(pred)))
        agree += int(np.sum(ref == pred))
        total += len(series)
    return summarize_components(components, accuracy=agree / total if total else None)


def _make_plan(corpus: dict[str, FrameSeries], config: HarnessConfig) -> SplitPlan:
    ids = sorted(corpus)
    if config.n_folds is not None:
        return make_splits(ids, config.n_folds, seed=config.split_seed)
    return train_test_split(ids, config.test_fraction, seed=config.split_seed)


def _eval_folds(plan: SplitPlan) -> list[int]:
    return [1] if plan.kind == "holdout" else list(range(plan.n_folds))


def _model_seed(master: int, tag: str, fold: int, repeat: int) -> int:
    # deliberately independent of the channel subset so ablation rows share seeds
    key = f"{master}:{tag}:{fold}:{repeat}".encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:4], "big")


def _run_one(corpus, plan, config: HarnessConfig, setting: ModelSetting,
             channels: tuple[str, ...]) -> ExperimentResult:
    feature_spec = FeatureSpec(channels=channels, window=setting.window)
    post_filter = config.morph if setting.use_morph else None
    reports: list[PQReport] = []
    thresholds: list[float] = []
    error = None
    try:
        for fold in _eval_folds(plan):
            train_series = [corpus[f] for f in plan.train_files(fold)]
            test_series = [corpus[f] for f in plan.fold_files(fold)]
            if setting.tag == "basic":
                reports.append(score_prediction_channel(test_series))
                thresholds.append(0.5)
                continue
            for repeat in range(config.repeats):
                seed = _model_seed(config.train.seed, setting.tag, fold, repeat)
                model = setting.build(feature_spec.dim, seed=seed)
                train_cfg = TrainConfig.from_dict({**config.train.to_dict(), "seed": seed})
                dataset = sequences_from_series(train_series, feature_spec)
                model, _ = train(model, dataset, train_cfg)
                threshold, _ = select_threshold(model, train_series, feature_spec,
                                                grid_step=train_cfg.threshold_grid,
                                                post_filter=post_filter)
                reports.append(evaluate_model(model, threshold, test_series,
                                              feature_spec, post_filter))
                thresholds.append(threshold)
    except DivergenceError as exc:
        error = str(exc)
    return ExperimentResult(
        model_tag=setting.tag, channels=channels, window=setting.window,
        fold_reports=reports, thresholds=thresholds, plan_hash=plan.plan_hash(),
        config={**config.to_dict(), "model": setting.to_dict()}, error=error)


def run_model_comparison(corpus: dict[str, FrameSeries],
                         config: HarnessConfig | None = None,
                         models: list[ModelSetting] | None = None) -> list[ExperimentResult]:
    """Train and score each model family under one shared split plan."""
    config = config or HarnessConfig()
    models = models if models is not None else default_zoo(window=config.window)
    plan = _make_plan(corpus, config)
    return [_run_one(corpus, plan, config, setting, tuple(config.channels))
            for setting in models]


def channel_subsets(channels=INPUT_CHANNELS) -> list[tuple[str, ...]]:
    """All non-empty subsets, canonical order: by size, then channel order."""
    subsets = []
    for size in range(1, len(channels) + 1):
        subsets.extend(itertools.combinations(channels, size))
    return subsets


def run_ablation(corpus: dict[str, FrameSeries],
                 config: HarnessConfig | None = None) -> list[ExperimentResult]:
    """Final-model runs over every non-empty input-channel subset; identical
    split plan and seeds across subsets."""
    config = config or HarnessConfig()
    missing = [c for c in INPUT_CHANNELS
               if any(c not in s.channels for s in corpus.values())]
    if missing:
        raise ValueError(f"corpus lacks channels {missing} in some files")
    plan = _make_plan(corpus, config)
    setting = ModelSetting("final", hidden=config.final_hidden,
                           dense_units=config.final_dense,
                           dropout_p=config.final_dropout, use_morph=True)
    return [_run_one(corpus, plan, config, setting, subset)
            for subset in channel_subsets()]


def format_results_table(results: list[ExperimentResult]) -> str:
    """Aligned-column text table with both averaging conventions."""
    header = ("Model", "Features", "R", "SumErr", "PQ(mean)", "PQ(std)")
    rows = [header]
    for res in results:
        rows.append((
            res.model_tag,
            "(" + ",".join(res.channels) + ")" + (f" w={res.window}" if res.window else ""),
            str(res.agg_r),
            str(res.agg_sum_err),
            f"{res.mean_pq:.3f}" if res.fold_reports else "-",
            f"{res.std_pq:.3f}" if res.fold_reports else "-",
        ))
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    lines = []
    for i, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)


def results_to_json(results: list[ExperimentResult]) -> str:
    return json.dumps([r.to_dict() for r in results], indent=2)
