"""Command line: fold planning and train/predict runs on suite directories.

`plan` writes the nested-CV fold manifest for a suite. `fit` trains one
model per excitation frequency on a phantom-level split and writes test
predictions in the shared report CSV, ready for `shearwave evaluate
--from-csv`.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .config import ExperimentConfig
from .crossval import check_no_leakage, plan_nested_cv
from .data import load_suite
from .formats import PredictionRow, read_manifest, write_predictions
from .model import build_model
from .train import predict_volume, train


def cmd_plan(args) -> int:
    entries = read_manifest(Path(args.suite) / "manifest.csv")
    plan = plan_nested_cv(entries)
    check_no_leakage(plan)
    plan.to_json(args.output)
    print(f"{plan.models_per_frequency} models per frequency, "
          f"{len(plan.folds)} total -> {args.output}")
    return 0


def _phantom_rank(samples) -> dict[str, int]:
    """Order phantom ids within each stiffness level."""
    by_level: dict[float, list[str]] = {}
    for s in samples:
        ids = by_level.setdefault(s.label_pa, [])
        if s.phantom_id not in ids:
            ids.append(s.phantom_id)
    rank = {}
    for ids in by_level.values():
        for i, pid in enumerate(sorted(ids)):
            rank[pid] = i
    return rank


def cmd_fit(args) -> int:
    config = (ExperimentConfig.from_json(args.experiment) if args.experiment
              else ExperimentConfig())
    samples = load_suite(args.suite)
    rank = _phantom_rank(samples)
    n_phantoms = max(rank.values()) + 1
    if n_phantoms < 2:
        raise RuntimeError("need at least 2 phantoms per level to hold one out")
    test_rank = args.test_phantom % n_phantoms

    rows: list[PredictionRow] = []
    for freq in sorted({s.frequency_hz for s in samples}):
        in_freq = [s for s in samples if s.frequency_hz == freq]
        test = [s for s in in_freq if rank[s.phantom_id] == test_rank]
        rest = [s for s in in_freq if rank[s.phantom_id] != test_rank]
        # last position of each remaining phantom validates, the rest train
        val_ids = sorted({s.source_id for s in rest})[-max(1, len(rest) // 5):]
        val = [s for s in rest if s.source_id in val_ids]
        trn = [s for s in rest if s.source_id not in val_ids]
        if not trn or not val or not test:
            raise RuntimeError(f"empty split at {freq} Hz")

        model = build_model(config.model, seed=config.seed)
        result = train(model, trn, val, config)
        print(f"{freq:g} Hz: {len(result.history)} epochs, "
              f"best val {result.best_val_loss:.1f} (kPa^2)")
        for s in test:
            rows.append(PredictionRow(
                source_id=s.source_id, frequency_hz=freq, e_true_pa=s.label_pa,
                e_est_pa=predict_volume(model, s, stride=config.predict_stride)))
    write_predictions(rows, args.output)
    errors = [abs(r.e_est_pa - r.e_true_pa) for r in rows]
    print(f"wrote {len(rows)} test predictions -> {args.output} "
          f"(MAE {np.mean(errors) / 1e3:.2f} kPa)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shearwave-dl")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="write the nested cross-validation fold manifest")
    p.add_argument("suite", help="suite directory containing manifest.csv")
    p.add_argument("output", help="fold manifest JSON path")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("fit", help="train per frequency, predict the held-out phantom")
    p.add_argument("suite", help="preprocessed suite directory")
    p.add_argument("output", help="predictions CSV path")
    p.add_argument("--experiment", default=None, help="experiment config JSON")
    p.add_argument("--test-phantom", type=int, default=-1,
                   help="per-level phantom rank held out for testing (default: last)")
    p.set_defaults(func=cmd_fit)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (RuntimeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
