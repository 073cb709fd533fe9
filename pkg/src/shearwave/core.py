"""Shared physical types, the linear elastic material model, and error metrics.

Displacement volumes are stored as float32 arrays indexed [time][depth][lateral];
elasticity is carried in pascals everywhere, kPa only at presentation boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

__all__ = [
    "AcquisitionMeta",
    "MaterialModel",
    "DEFAULT_MODEL",
    "VelocityEstimate",
    "WaveFieldVolume",
    "VELOCITY_BAND_MPS",
    "youngs_modulus_from_velocity",
    "velocity_from_youngs_modulus",
    "mae",
    "rmse",
]

# Phase velocities outside this band are treated as failed estimates
# (typical soft-tissue range).
VELOCITY_BAND_MPS = (1.0, 10.0)


@dataclass(frozen=True)
class AcquisitionMeta:
    """Per-dataset acquisition metadata attached to a wave-field volume."""

    excitation_frequency_hz: float | None = None
    ground_truth_e_pa: float | None = None
    damped: bool = False
    source_id: str = ""
    surface_index: int | None = None

    def __post_init__(self):
        if self.excitation_frequency_hz is not None and not self.excitation_frequency_hz > 0:
            raise ValueError("excitation_frequency_hz must be positive when present")
        if self.ground_truth_e_pa is not None and not self.ground_truth_e_pa > 0:
            raise ValueError("ground_truth_e_pa must be positive when present")
        if self.surface_index is not None and self.surface_index < 0:
            raise ValueError("surface_index must be non-negative when present")


@dataclass(frozen=True)
class MaterialModel:
    """Linear elastic model E = q * rho * 2(1 + nu) * v^2."""

    q: float = 0.84
    rho_kg_m3: float = 1000.0
    nu: float = 0.5

    def __post_init__(self):
        if not self.q > 0:
            raise ValueError("q must be positive")
        if not self.rho_kg_m3 > 0:
            raise ValueError("rho_kg_m3 must be positive")
        if not 0.0 <= self.nu <= 0.5:
            raise ValueError("nu must lie in [0, 0.5]")

    @property
    def velocity_to_modulus_factor(self) -> float:
        """Factor F such that E = F * v^2."""
        return self.q * self.rho_kg_m3 * 2.0 * (1.0 + self.nu)


DEFAULT_MODEL = MaterialModel()


@dataclass(frozen=True)
class VelocityEstimate:
    """Phase-velocity estimate with validity gate and measured dominant frequency.

    ``valid`` is False when the velocity falls outside VELOCITY_BAND_MPS or no
    spectral peak was found; ``cause`` then names the reason.
    """

    v_mps: float
    valid: bool
    dominant_frequency_hz: float
    cause: str | None = None

    def __post_init__(self):
        if self.valid and not (VELOCITY_BAND_MPS[0] <= self.v_mps <= VELOCITY_BAND_MPS[1]):
            raise ValueError("valid estimate outside the velocity band")


@dataclass(frozen=True)
class WaveFieldVolume:
    """3D spatio-temporal displacement field with physical sampling metadata.

    ``data`` holds optical phase-difference values (proportional to axial
    displacement) as float32, indexed [time][depth][lateral].
    """

    data: np.ndarray
    dx_m: float
    dz_m: float
    dt_s: float
    meta: AcquisitionMeta = field(default_factory=AcquisitionMeta)

    def __post_init__(self):
        arr = np.ascontiguousarray(self.data, dtype=np.float32)
        if arr.ndim != 3:
            raise ValueError("data must be a 3D array indexed [time][depth][lateral]")
        if not np.isfinite(arr).all():
            raise ValueError("data contains non-finite values")
        for name in ("dx_m", "dz_m", "dt_s"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        object.__setattr__(self, "data", arr)

    @property
    def frames(self) -> int:
        return self.data.shape[0]

    @property
    def depth_px(self) -> int:
        return self.data.shape[1]

    @property
    def width_px(self) -> int:
        return self.data.shape[2]

    def with_data(self, data: np.ndarray, **meta_updates) -> "WaveFieldVolume":
        """New volume with replaced data (and optional metadata updates)."""
        meta = replace(self.meta, **meta_updates) if meta_updates else self.meta
        return WaveFieldVolume(data=data, dx_m=self.dx_m, dz_m=self.dz_m,
                               dt_s=self.dt_s, meta=meta)


def youngs_modulus_from_velocity(v_mps: float, model: MaterialModel = DEFAULT_MODEL) -> float:
    """Young's modulus in Pa from shear-wave phase velocity in m/s."""
    if v_mps < 0:
        raise ValueError("velocity must be non-negative")
    return model.velocity_to_modulus_factor * v_mps * v_mps


def velocity_from_youngs_modulus(e_pa: float, model: MaterialModel = DEFAULT_MODEL) -> float:
    """Phase velocity in m/s that maps back to the given modulus; inverse of
    :func:`youngs_modulus_from_velocity`."""
    if e_pa < 0:
        raise ValueError("modulus must be non-negative")
    return math.sqrt(e_pa / model.velocity_to_modulus_factor)


def _check_pairs(predictions, targets) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(predictions, dtype=np.float64)
    t = np.asarray(targets, dtype=np.float64)
    if p.size == 0:
        raise ValueError("empty prediction list")
    if p.shape != t.shape:
        raise ValueError("predictions and targets differ in length")
    return p, t


def mae(predictions, targets) -> tuple[float, float]:
    """Mean and population standard deviation of absolute errors, in Pa."""
    p, t = _check_pairs(predictions, targets)
    err = np.abs(p - t)
    return float(err.mean()), float(err.std())


def rmse(predictions, targets) -> float:
    """Root mean squared error in Pa."""
    p, t = _check_pairs(predictions, targets)
    return float(np.sqrt(np.mean((p - t) ** 2)))
