"""Conventional phase-velocity estimation in the 2D Fourier domain.

A wave-field volume is reduced to a lateral/time space-time map by averaging
over depth. A zero-padded 2D FFT turns the map into k-space; after relative
amplitude thresholding, each surviving temporal frequency contributes
v = f / k from its strongest wavenumber bin, and the contributions are
combined by magnitude-weighted mean. Estimates outside the soft-tissue band
are flagged invalid rather than raised.

Zero padding (x4 per axis by default) matters: at small lateral fields of
view the raw wavenumber resolution is coarser than the signal's k for slow
waves, and the padded grid plus weighted combination is what makes the
estimate usable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_MODEL,
    MaterialModel,
    VelocityEstimate,
    WaveFieldVolume,
    youngs_modulus_from_velocity,
)
from .preprocess import DEFAULT_CROP_DEPTH_PX, crop_below_surface, detect_surface

__all__ = [
    "SpaceTimeMap",
    "KspaceOptions",
    "space_time_map",
    "kspace_velocity",
    "dominant_frequency",
    "estimate_elasticity_conventional",
    "ensemble_estimate",
]


@dataclass(frozen=True)
class SpaceTimeMap:
    """Depth-averaged wave field, indexed [lateral][time]."""

    values: np.ndarray
    dx_m: float
    dt_s: float

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError("space-time map must be 2D [lateral][time]")
        if self.dx_m <= 0 or self.dt_s <= 0:
            raise ValueError("dx_m and dt_s must be positive")
        object.__setattr__(self, "values", arr)


@dataclass(frozen=True)
class KspaceOptions:
    """Tunable knobs of the k-space estimator.

    ``min_peak_to_mean`` rejects spectra whose peak does not stand out from
    the mean magnitude: white noise tops out near 3 while even weak coherent
    waves reach the hundreds, so the default separates them with wide margin.
    Set it to 0 to disable the noise gate.
    """

    padding: int = 4
    threshold_fraction: float = 0.10
    velocity_band_mps: tuple[float, float] = (1.0, 10.0)
    window: str = "rect"  # or "hann"
    min_peak_to_mean: float = 8.0

    def __post_init__(self):
        if self.padding < 1:
            raise ValueError("padding factor must be >= 1")
        if not 0.0 <= self.threshold_fraction < 1.0:
            raise ValueError("threshold_fraction must lie in [0, 1)")
        if self.velocity_band_mps[0] >= self.velocity_band_mps[1]:
            raise ValueError("velocity band must be ordered (low, high)")
        if self.window not in ("rect", "hann"):
            raise ValueError("window must be 'rect' or 'hann'")
        if self.min_peak_to_mean < 0:
            raise ValueError("min_peak_to_mean must be non-negative")


DEFAULT_OPTIONS = KspaceOptions()


def space_time_map(volume: WaveFieldVolume) -> SpaceTimeMap:
    """Mean over the depth axis: out[x][t] = mean_z data[t][z][x]."""
    values = volume.data.mean(axis=1, dtype=np.float64).T
    return SpaceTimeMap(values=values, dx_m=volume.dx_m, dt_s=volume.dt_s)


def _invalid(cause: str) -> VelocityEstimate:
    return VelocityEstimate(v_mps=math.nan, valid=False,
                            dominant_frequency_hz=math.nan, cause=cause)


def kspace_velocity(stmap: SpaceTimeMap, options: KspaceOptions = DEFAULT_OPTIONS) -> VelocityEstimate:
    """Phase velocity from the 2D Fourier transform of a space-time map.

    Steps: subtract the map mean; zero-padded 2D FFT; restrict to positive
    temporal frequencies and the wavenumber sign carrying more energy; reject
    spectra without a dominant peak (see KspaceOptions.min_peak_to_mean);
    zero bins below threshold_fraction of the peak; per temporal frequency
    take v = f/k at the strongest surviving wavenumber; combine by
    magnitude-weighted mean; gate to the velocity band.
    """
    m = stmap.values
    if m.shape[0] < 4 or m.shape[1] < 4:
        raise ValueError("space-time map must be at least 4x4")

    m = m - m.mean()
    if options.window == "hann":
        m = m * np.hanning(m.shape[0])[:, None] * np.hanning(m.shape[1])[None, :]

    nk = m.shape[0] * options.padding
    nf = m.shape[1] * options.padding
    mag = np.abs(np.fft.fft2(m, s=(nk, nf)))
    ks = np.fft.fftfreq(nk, d=stmap.dx_m)          # cycles / m
    fs = np.fft.fftfreq(nf, d=stmap.dt_s)          # Hz

    f_sel = fs > 0
    k_pos = ks > 0
    k_neg = ks < 0
    # A wave travelling toward +x puts its f > 0 energy at k < 0 (and vice
    # versa); keep whichever sign holds more of it.
    energy_pos = float((mag[np.ix_(k_pos, f_sel)] ** 2).sum())
    energy_neg = float((mag[np.ix_(k_neg, f_sel)] ** 2).sum())
    k_sel = k_pos if energy_pos >= energy_neg else k_neg

    quad = mag[np.ix_(k_sel, f_sel)]               # (k bins, f bins)
    k_abs = np.abs(ks[k_sel])
    f_vals = fs[f_sel]

    peak = float(quad.max()) if quad.size else 0.0
    if peak <= 0.0:
        return _invalid("no spectral peak")
    if peak < options.min_peak_to_mean * float(quad.mean()):
        return _invalid("no spectral peak")
    threshold = options.threshold_fraction * peak
    quad = np.where(quad < threshold, 0.0, quad)

    row_best = quad.max(axis=0)                    # strongest magnitude per f
    row_kidx = quad.argmax(axis=0)
    surviving = row_best > 0.0
    if not surviving.any():
        return _invalid("no spectral peak")

    velocities = f_vals[surviving] / k_abs[row_kidx[surviving]]
    weights = row_best[surviving]
    v = float(np.sum(weights * velocities) / np.sum(weights))

    ki, fi = np.unravel_index(int(quad.argmax()), quad.shape)
    dominant_hz = float(f_vals[fi])

    lo, hi = options.velocity_band_mps
    if not lo <= v <= hi:
        return VelocityEstimate(v_mps=v, valid=False, dominant_frequency_hz=dominant_hz,
                                cause="outside velocity band")
    return VelocityEstimate(v_mps=v, valid=True, dominant_frequency_hz=dominant_hz)


def dominant_frequency(volume: WaveFieldVolume, padding: int = 4) -> float:
    """Dominant temporal frequency of the spatially averaged signal, Hz.

    The mean-subtracted average trace is zero-padded and transformed; the
    zero-frequency bin is excluded. A constant volume has no oscillation and
    is an error.
    """
    if volume.frames < 8:
        raise ValueError("need at least 8 frames")
    trace = volume.data.mean(axis=(1, 2), dtype=np.float64)
    trace = trace - trace.mean()
    n = volume.frames * padding
    mag = np.abs(np.fft.rfft(trace, n=n))
    mag[0] = 0.0
    if mag.max() <= 0.0:
        raise ValueError("no oscillation")
    freqs = np.fft.rfftfreq(n, d=volume.dt_s)
    return float(freqs[int(mag.argmax())])


def estimate_elasticity_conventional(
    volume: WaveFieldVolume,
    model: MaterialModel = DEFAULT_MODEL,
    options: KspaceOptions = DEFAULT_OPTIONS,
    crop_depth: int = DEFAULT_CROP_DEPTH_PX,
) -> tuple[float, VelocityEstimate]:
    """Full conventional pipeline: crop below surface, space-time map,
    k-space velocity, material model.

    Returns (modulus in Pa, velocity estimate); an invalid velocity yields a
    NaN modulus. Volumes shallower than the crop depth are used in full.
    """
    surface = volume.meta.surface_index
    if surface is None:
        surface = int(np.median(detect_surface(volume)))
    depth = min(crop_depth, volume.depth_px - surface)
    if depth < 1:
        raise ValueError("surface leaves no depth to analyse")
    if surface > 0 or depth < volume.depth_px:
        volume = crop_below_surface(volume, depth=depth, surface=surface)

    estimate = kspace_velocity(space_time_map(volume), options)
    if not estimate.valid:
        return math.nan, estimate
    return youngs_modulus_from_velocity(estimate.v_mps, model), estimate


def ensemble_estimate(per_frequency: list[tuple[float, bool]]) -> float:
    """Mean modulus over the valid per-frequency estimates."""
    if not per_frequency:
        raise ValueError("empty estimate list")
    values = [e for e, valid in per_frequency if valid]
    if not values:
        raise ValueError("all estimates invalid")
    return float(np.mean(values))
