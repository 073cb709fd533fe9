"""Scaling-factor calibration, benchmark evaluation, and the damping study.

Reports keep the raw per-dataset rows; per-frequency and ensemble aggregates
are always recomputed from those rows, never stored independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .core import (
    DEFAULT_MODEL,
    MaterialModel,
    VelocityEstimate,
    WaveFieldVolume,
    mae,
    rmse,
)
from .kspace import DEFAULT_OPTIONS, KspaceOptions, dominant_frequency, estimate_elasticity_conventional

__all__ = [
    "DatasetRow",
    "FrequencyStats",
    "EnsembleStats",
    "EvaluationReport",
    "DampingStats",
    "DampingReport",
    "calibrate_q",
    "report_from_rows",
    "evaluate_suite",
    "damping_study",
]

Estimator = Callable[[WaveFieldVolume], tuple[float, VelocityEstimate]]


@dataclass(frozen=True)
class DatasetRow:
    """One evaluated dataset."""

    source_id: str
    frequency_hz: float
    e_true_pa: float
    e_est_pa: float
    valid: bool
    v_mps: float
    dominant_frequency_hz: float


@dataclass(frozen=True)
class FrequencyStats:
    mae_mean_pa: float
    mae_std_pa: float
    rmse_pa: float
    valid_fraction: float
    n: int


@dataclass(frozen=True)
class EnsembleStats:
    mae_mean_pa: float
    mae_std_pa: float
    rmse_pa: float
    n: int


@dataclass(frozen=True)
class EvaluationReport:
    per_dataset: tuple[DatasetRow, ...]
    per_frequency: dict[float, FrequencyStats]
    ensemble: EnsembleStats


def calibrate_q(velocities: Sequence[float], ground_truths: Sequence[float],
                model_base: MaterialModel = DEFAULT_MODEL) -> float:
    """Least-squares scaling factor q fitting E = q * rho * 2(1+nu) * v^2.

    Closed form in the elasticity domain: q = sum(E_i x_i) / sum(x_i^2) with
    x_i = rho * 2(1+nu) * v_i^2.
    """
    v = np.asarray(velocities, dtype=np.float64)
    e = np.asarray(ground_truths, dtype=np.float64)
    if v.shape != e.shape or v.size < 2:
        raise ValueError("need equal-length velocity/ground-truth lists with >= 2 entries")
    if (v < 0).any():
        raise ValueError("velocities must be non-negative")
    x = model_base.rho_kg_m3 * 2.0 * (1.0 + model_base.nu) * v ** 2
    denom = float(np.sum(x * x))
    if denom == 0.0:
        raise ValueError("velocities are all zero; q is unconstrained")
    return float(np.sum(e * x) / denom)


def _frequency_stats(rows: Sequence[DatasetRow]) -> FrequencyStats:
    valid = [r for r in rows if r.valid]
    if valid:
        pred = [r.e_est_pa for r in valid]
        true = [r.e_true_pa for r in valid]
        mae_mean, mae_std = mae(pred, true)
        rmse_pa = rmse(pred, true)
    else:
        mae_mean = mae_std = rmse_pa = math.nan
    return FrequencyStats(mae_mean_pa=mae_mean, mae_std_pa=mae_std, rmse_pa=rmse_pa,
                          valid_fraction=len(valid) / len(rows), n=len(rows))


def report_from_rows(rows: Iterable[DatasetRow]) -> EvaluationReport:
    """Assemble a report; all aggregates derive from the rows alone.

    The ensemble estimate for one source_id is the mean of its valid
    per-frequency moduli; positions with no valid estimate are skipped.
    """
    rows = tuple(rows)
    frequencies = sorted({r.frequency_hz for r in rows})
    per_frequency = {
        f: _frequency_stats([r for r in rows if r.frequency_hz == f]) for f in frequencies
    }

    by_source: dict[str, list[DatasetRow]] = {}
    for r in rows:
        by_source.setdefault(r.source_id, []).append(r)
    ens_pred, ens_true = [], []
    for source_rows in by_source.values():
        valid = [r.e_est_pa for r in source_rows if r.valid]
        if not valid:
            continue
        ens_pred.append(float(np.mean(valid)))
        ens_true.append(source_rows[0].e_true_pa)
    if ens_pred:
        mae_mean, mae_std = mae(ens_pred, ens_true)
        ens = EnsembleStats(mae_mean_pa=mae_mean, mae_std_pa=mae_std,
                            rmse_pa=rmse(ens_pred, ens_true), n=len(ens_pred))
    else:
        ens = EnsembleStats(math.nan, math.nan, math.nan, 0)
    return EvaluationReport(per_dataset=rows, per_frequency=per_frequency, ensemble=ens)


def evaluate_suite(volumes: Iterable[WaveFieldVolume], estimator: Estimator | None = None,
                   model: MaterialModel = DEFAULT_MODEL,
                   options: KspaceOptions = DEFAULT_OPTIONS) -> EvaluationReport:
    """Run an estimator over a ground-truthed dataset collection.

    Rows are grouped per excitation frequency for MAE/RMSE; the per-sample
    ensemble averages the valid estimates a position received across
    frequencies. Invalid estimates only enter the valid-fraction.
    """
    if estimator is None:
        estimator = lambda vol: estimate_elasticity_conventional(vol, model, options)
    rows = []
    for volume in volumes:
        meta = volume.meta
        if meta.ground_truth_e_pa is None:
            raise ValueError(f"volume {meta.source_id!r} carries no ground truth")
        if meta.excitation_frequency_hz is None:
            raise ValueError(f"volume {meta.source_id!r} carries no excitation frequency")
        e_est, est = estimator(volume)
        rows.append(DatasetRow(
            source_id=meta.source_id,
            frequency_hz=meta.excitation_frequency_hz,
            e_true_pa=meta.ground_truth_e_pa,
            e_est_pa=e_est,
            valid=est.valid,
            v_mps=est.v_mps,
            dominant_frequency_hz=est.dominant_frequency_hz,
        ))
    return report_from_rows(rows)


@dataclass(frozen=True)
class DampingStats:
    mean_abs_offset_pa: float
    median_freq_dev_damped_hz: float
    median_freq_dev_undamped_hz: float
    n: int
    n_valid_pairs: int


@dataclass(frozen=True)
class DampingReport:
    per_frequency: dict[float, DampingStats]


def damping_study(pairs: Sequence[tuple[WaveFieldVolume, WaveFieldVolume]],
                  model: MaterialModel = DEFAULT_MODEL,
                  options: KspaceOptions = DEFAULT_OPTIONS) -> DampingReport:
    """Compare elasticity estimates and measured frequencies across
    (undamped, damped) volume pairs sharing scene parameters.

    Per excitation frequency: mean |E_damped - E_undamped| over pairs where
    both estimates are valid, and the median |measured - excitation|
    frequency deviation of each arm.
    """
    if not pairs:
        raise ValueError("no pairs given")
    offsets: dict[float, list[float]] = {}
    devs_d: dict[float, list[float]] = {}
    devs_u: dict[float, list[float]] = {}
    counts: dict[float, int] = {}
    for undamped, damped in pairs:
        mu, md = undamped.meta, damped.meta
        if (mu.source_id != md.source_id
                or mu.excitation_frequency_hz != md.excitation_frequency_hz
                or mu.ground_truth_e_pa != md.ground_truth_e_pa):
            raise ValueError("mismatched pair metadata")
        f_exc = mu.excitation_frequency_hz
        counts[f_exc] = counts.get(f_exc, 0) + 1
        e_u, est_u = estimate_elasticity_conventional(undamped, model, options)
        e_d, est_d = estimate_elasticity_conventional(damped, model, options)
        if est_u.valid and est_d.valid:
            offsets.setdefault(f_exc, []).append(abs(e_d - e_u))
        devs_u.setdefault(f_exc, []).append(abs(dominant_frequency(undamped) - f_exc))
        devs_d.setdefault(f_exc, []).append(abs(dominant_frequency(damped) - f_exc))

    per_frequency = {}
    for f_exc in sorted(counts):
        valid_offsets = offsets.get(f_exc, [])
        per_frequency[f_exc] = DampingStats(
            mean_abs_offset_pa=float(np.mean(valid_offsets)) if valid_offsets else math.nan,
            median_freq_dev_damped_hz=float(np.median(devs_d[f_exc])),
            median_freq_dev_undamped_hz=float(np.median(devs_u[f_exc])),
            n=counts[f_exc],
            n_valid_pairs=len(valid_offsets),
        )
    return DampingReport(per_frequency=per_frequency)
