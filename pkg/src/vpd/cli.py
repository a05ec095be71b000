"""Command-line front end: generate / train / evaluate / ablate / score."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import harness, nets, synth
from .event_log import densify, parse_log, write_log
from .features import FeatureSpec
from .harness import HarnessConfig, ModelSetting
from .morphology import MorphFilterSpec
from .passage_metric import extract_intervals, match_passages, summarize_components
from .training import TrainConfig, select_threshold, sequences_from_series, train


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    p = Path(path)
    if p.suffix == ".toml":
        import tomllib
        return tomllib.loads(p.read_text())
    return json.loads(p.read_text())


def load_corpus(data_dir: str) -> dict:
    """Directory of *.csv logs -> {file id: dense FrameSeries}."""
    corpus = {}
    paths = sorted(Path(data_dir).glob("*.csv"))
    if not paths:
        raise SystemExit(f"no *.csv log files in {data_dir}")
    for path in paths:
        log = parse_log(path.read_text(), source_id=path.stem)
        if log.records:
            corpus[path.stem] = densify(log)
    return corpus


def cmd_generate(args) -> int:
    raw = _load_config(args.config)
    if raw:
        config = synth.SynthConfig.from_dict(raw)
    else:
        config = synth.paper_like_preset()
    if args.preset == "noiseless":
        config = synth.SynthConfig.from_dict({**config.to_dict(), "noise": {}})
    if args.n_files:
        config = synth.SynthConfig.from_dict({**config.to_dict(), "n_files": args.n_files})
    if args.seed is not None:
        config = synth.SynthConfig.from_dict({**config.to_dict(), "seed": args.seed})

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    logs, truths = synth.generate_dataset(config)
    manifest = {"config": config.to_dict(), "files": {}}
    for log, truth in zip(logs, truths):
        (out / f"{log.source_id}.csv").write_text(write_log(log))
        manifest["files"][log.source_id] = [[iv.start, iv.end] for iv in truth]
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2))
    print(f"wrote {len(logs)} logs and manifest.json to {out}")
    return 0


def cmd_train(args) -> int:
    raw = _load_config(args.config)
    hconfig = HarnessConfig.from_dict(raw) if raw else HarnessConfig()
    corpus = load_corpus(args.data)
    feature_spec = FeatureSpec(channels=tuple(hconfig.channels),
                               window=args.window if args.model in ("lr", "mlp") else 0)
    setting = ModelSetting(args.model, window=feature_spec.window,
                           hidden=hconfig.final_hidden, dense_units=hconfig.final_dense,
                           dropout_p=hconfig.final_dropout,
                           use_morph=(args.model == "final"))
    model = setting.build(feature_spec.dim, seed=hconfig.train.seed)
    series = list(corpus.values())
    dataset = sequences_from_series(series, feature_spec)
    model, trace = train(model, dataset, hconfig.train)
    post = hconfig.morph if setting.use_morph else None
    threshold, train_pq = select_threshold(model, series, feature_spec,
                                           grid_step=hconfig.train.threshold_grid,
                                           post_filter=post)
    extra = {
        "features": feature_spec.to_dict(),
        "threshold": threshold,
        "train_pq": train_pq,
        "morph": hconfig.to_dict()["morph"] if post else None,
        "train_config": hconfig.train.to_dict(),
        "final_train_loss": trace[-1],
    }
    Path(args.out).write_text(nets.save_model(model, extra=extra))
    print(f"trained {args.model} on {len(series)} files: "
          f"final loss {trace[-1]:.5f}, threshold {threshold:.2f}, train PQ {train_pq:.4f}")
    return 0


def _morph_from_args(args, default=None):
    if args.morph is None:
        return default
    if args.morph.lower() in ("none", "off"):
        return None
    parts = args.morph.split(",")
    spec = {"open_width": int(parts[0]), "close_width": int(parts[1])}
    if len(parts) > 2:
        spec["order"] = parts[2]
    return MorphFilterSpec(**spec)


def cmd_evaluate(args) -> int:
    model, meta = nets.load_model(Path(args.model).read_text())
    feature_spec = FeatureSpec.from_dict(meta["features"])
    threshold = args.threshold if args.threshold is not None else meta.get("threshold", 0.5)
    default_morph = MorphFilterSpec(**meta["morph"]) if meta.get("morph") else None
    post = _morph_from_args(args, default_morph)
    corpus = load_corpus(args.data)
    report = harness.evaluate_model(model, threshold, list(corpus.values()),
                                    feature_spec, post_filter=post)
    print(json.dumps(report.to_dict(), indent=2))
    return 0


def cmd_ablate(args) -> int:
    raw = _load_config(args.config)
    hconfig = HarnessConfig.from_dict(raw) if raw else HarnessConfig()
    corpus = load_corpus(args.data)
    results = harness.run_ablation(corpus, hconfig)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "ablation.json").write_text(harness.results_to_json(results))
    table = harness.format_results_table(results)
    (out / "ablation.txt").write_text(table + "\n")
    print(table)
    return 0


def cmd_compare(args) -> int:
    raw = _load_config(args.config)
    hconfig = HarnessConfig.from_dict(raw) if raw else HarnessConfig()
    corpus = load_corpus(args.data)
    results = harness.run_model_comparison(corpus, hconfig)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "comparison.json").write_text(harness.results_to_json(results))
    table = harness.format_results_table(results)
    (out / "comparison.txt").write_text(table + "\n")
    print(table)
    return 0


def cmd_score(args) -> int:
    pred_log = parse_log(Path(args.pred).read_text(), source_id=args.pred)
    ref_log = parse_log(Path(args.ref).read_text(), source_id=args.ref)
    pred_series = densify(pred_log)
    ref_series = densify(ref_log)
    pred_iv = extract_intervals(pred_series.channel(args.pred_channel),
                                pred_series.first_frame)
    ref_iv = extract_intervals(ref_series.channel(args.ref_channel),
                               ref_series.first_frame)
    report = summarize_components(match_passages(ref_iv, pred_iv))
    print(json.dumps(report.to_dict(), indent=2))
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="vpd",
                                     description="Vehicle passage detection toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic log corpus")
    p.add_argument("--config", help="SynthConfig JSON/TOML file")
    p.add_argument("--preset", choices=["paper-like", "noiseless"], default="paper-like")
    p.add_argument("--n-files", type=int, default=0)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("train", help="train one model on a log directory")
    p.add_argument("--config", help="HarnessConfig JSON/TOML file")
    p.add_argument("--data", required=True)
    p.add_argument("--model", choices=[t for t in harness.MODEL_TAGS if t != "basic"],
                   default="final")
    p.add_argument("--window", type=int, default=8, help="history window for lr/mlp")
    p.add_argument("--out", required=True, help="model checkpoint path (JSON)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="score a trained model on a log directory")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--threshold", type=float)
    p.add_argument("--morph", help="open_width,close_width[,order] or 'none'")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("ablate", help="final-model feature-subset ablation")
    p.add_argument("--config")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("compare", help="train and score every model family")
    p.add_argument("--config")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("score", help="score a prediction channel against a reference")
    p.add_argument("--pred", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--pred-channel", default="basic_clf")
    p.add_argument("--ref-channel", default="ref_pass")
    p.set_defaults(func=cmd_score)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
