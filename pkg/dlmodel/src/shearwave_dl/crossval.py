"""Nested cross-validation over phantom identities.

Outer folds rotate one held-out test phantom per stiffness level; the
remaining phantoms run an inner cross-validation that rotates the validation
phantom. One model is trained per (outer, inner) pair and per excitation
frequency, and a volume's prediction pools the inner models of the outer
fold that holds it out.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .config import ExperimentConfig
from .data import VolumeSample
from .formats import ManifestEntry, PredictionRow, write_predictions
from .model import build_model
from .train import TrainResult, predict_volume, train


@dataclass(frozen=True)
class FoldSpec:
    frequency_hz: float
    outer_fold: int
    inner_fold: int
    train_phantoms: tuple[str, ...]
    val_phantoms: tuple[str, ...]
    test_phantoms: tuple[str, ...]


@dataclass
class CrossValPlan:
    folds: list[FoldSpec]
    phantoms_per_level: int
    frequencies: tuple[float, ...]
    # actual split fractions by phantom count (train, val, test)
    split_fractions: tuple[float, float, float]

    @property
    def models_per_frequency(self) -> int:
        return len(self.folds) // len(self.frequencies)

    def to_json(self, path: str | Path) -> None:
        doc = {
            "phantoms_per_level": self.phantoms_per_level,
            "frequencies_hz": list(self.frequencies),
            "models_per_frequency": self.models_per_frequency,
            "models_total": len(self.folds),
            "split_fractions_by_phantom": {
                "train": self.split_fractions[0],
                "val": self.split_fractions[1],
                "test": self.split_fractions[2],
            },
            "folds": [asdict(f) for f in self.folds],
        }
        Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def _phantoms_by_level(entries: Sequence[ManifestEntry]) -> dict[float, list[str]]:
    by_level: dict[float, set[str]] = {}
    for e in entries:
        by_level.setdefault(e.e_true_pa, set()).add(e.phantom_id)
    return {level: sorted(ids) for level, ids in sorted(by_level.items())}


def plan_nested_cv(entries: Sequence[ManifestEntry]) -> CrossValPlan:
    """Build the fold plan from a suite manifest.

    Requires the same number of phantoms at every stiffness level; with P
    phantoms per level this yields P outer folds x (P-1) inner folds models
    per excitation frequency.
    """
    if not entries:
        raise ValueError("empty manifest")
    by_level = _phantoms_by_level(entries)
    counts = {len(ids) for ids in by_level.values()}
    if len(counts) != 1:
        raise ValueError(f"unbalanced phantom counts per level: {by_level}")
    p = counts.pop()
    # test and validation each hold one phantom per level, so training needs
    # at least a third
    if p < 3:
        raise ValueError("need at least 3 phantoms per level to form folds")

    frequencies = tuple(sorted({e.frequency_hz for e in entries}))
    folds: list[FoldSpec] = []
    for freq in frequencies:
        for outer in range(p):
            test = tuple(ids[outer] for ids in by_level.values())
            remaining = [[pid for k, pid in enumerate(ids) if k != outer]
                         for ids in by_level.values()]
            for inner in range(p - 1):
                val = tuple(ids[inner] for ids in remaining)
                trn = tuple(pid for ids in remaining
                            for k, pid in enumerate(ids) if k != inner)
                folds.append(FoldSpec(
                    frequency_hz=freq, outer_fold=outer, inner_fold=inner,
                    train_phantoms=trn, val_phantoms=val, test_phantoms=test,
                ))
    fractions = ((p - 2) / p, 1 / p, 1 / p)
    return CrossValPlan(folds=folds, phantoms_per_level=p,
                        frequencies=frequencies, split_fractions=fractions)


def check_no_leakage(plan: CrossValPlan) -> None:
    """Raise if any phantom appears on both sides of a fold's split."""
    for fold in plan.folds:
        trn, val, test = set(fold.train_phantoms), set(fold.val_phantoms), set(fold.test_phantoms)
        if trn & test or val & test or trn & val:
            raise ValueError(f"phantom leakage in fold {fold}")


def outer_test_partition(plan: CrossValPlan, entries: Sequence[ManifestEntry]) -> dict[str, int]:
    """Map each volume to the single outer fold that holds it out; raises if
    a volume lands in zero or several test sets."""
    assignment: dict[str, int] = {}
    for freq in plan.frequencies:
        outer_tests = {
            f.outer_fold: set(f.test_phantoms)
            for f in plan.folds if f.frequency_hz == freq
        }
        for e in entries:
            if e.frequency_hz != freq:
                continue
            hits = [outer for outer, phantoms in outer_tests.items()
                    if e.phantom_id in phantoms]
            if len(hits) != 1:
                raise ValueError(f"{e.header}: in {len(hits)} outer test sets")
            assignment[e.header] = hits[0]
    return assignment


@dataclass
class NestedCVResult:
    plan: CrossValPlan
    fold_results: list[tuple[FoldSpec, TrainResult]] = field(default_factory=list)
    predictions: list[PredictionRow] = field(default_factory=list)


def run_nested_cv(samples: Sequence[VolumeSample], plan: CrossValPlan,
                  config: ExperimentConfig = ExperimentConfig(),
                  predictions_path: str | Path | None = None) -> NestedCVResult:
    """Train every fold of the plan and pool test predictions.

    A test volume is predicted by each inner model of its outer fold; the
    pooled row is their mean. Rows go to ``predictions_path`` in the shared
    report CSV format when given.
    """
    result = NestedCVResult(plan=plan)
    pooled: dict[tuple[str, float], list[float]] = {}
    truth: dict[tuple[str, float], float] = {}

    for fold_index, fold in enumerate(plan.folds):
        in_freq = [s for s in samples if s.frequency_hz == fold.frequency_hz]
        trn = [s for s in in_freq if s.phantom_id in fold.train_phantoms]
        val = [s for s in in_freq if s.phantom_id in fold.val_phantoms]
        test = [s for s in in_freq if s.phantom_id in fold.test_phantoms]
        if not trn or not val or not test:
            raise ValueError(f"fold {fold} selects an empty split")

        model = build_model(config.model, seed=config.seed + fold_index)
        fold_config = ExperimentConfig(**{**asdict(config), "model": config.model,
                                          "seed": config.seed + fold_index})
        outcome = train(model, trn, val, fold_config)
        result.fold_results.append((fold, outcome))

        for s in test:
            key = (s.source_id, s.frequency_hz)
            pooled.setdefault(key, []).append(
                predict_volume(model, s, stride=config.predict_stride))
            truth[key] = s.label_pa

    for (source_id, freq), values in sorted(pooled.items()):
        result.predictions.append(PredictionRow(
            source_id=source_id, frequency_hz=freq,
            e_true_pa=truth[(source_id, freq)],
            e_est_pa=float(np.mean(values)),
        ))
    if predictions_path is not None:
        write_predictions(result.predictions, predictions_path)
    return result
