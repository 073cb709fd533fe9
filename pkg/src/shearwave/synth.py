"""Synthetic wave-field generation with known ground-truth elasticity.

The forward model is a laterally propagating plane wave: for depths at or
below the surface,

    u(t, z, x) = A_eff * exp(-x*dx/L_lat) * exp(-(z - z_s)*dz/L_dep)
                 * sin(2*pi*f_eff*(t*dt - x*dx/v) + phi0) + N(0, sigma)

with v derived from the ground-truth modulus through the material model,
A_eff = amplitude * amplitude_damping_factor, and f_eff the excitation
frequency plus a single per-scene jitter draw. Above the surface only noise
remains. Everything is deterministic given the scene seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .core import (
    DEFAULT_MODEL,
    AcquisitionMeta,
    MaterialModel,
    WaveFieldVolume,
    velocity_from_youngs_modulus,
)

__all__ = [
    "Geometry",
    "PAPER_GEOMETRY",
    "SceneSpec",
    "SuiteConfig",
    "noise_sigma_for_snr",
    "generate_wavefield",
    "generate_benchmark_suite",
    "generate_damping_pair",
]

CROP_DEPTH_PX = 128


@dataclass(frozen=True)
class Geometry:
    """Sampling grid of one acquisition."""

    width_px: int
    depth_px: int
    frames: int
    dx_m: float
    dz_m: float
    dt_s: float

    def __post_init__(self):
        if min(self.width_px, self.depth_px, self.frames) < 1:
            raise ValueError("geometry dimensions must be >= 1")
        if min(self.dx_m, self.dz_m, self.dt_s) <= 0:
            raise ValueError("geometry spacings must be positive")


# 118 x 400 px over ~3.5 mm x 2 mm, 208 frames at 11.4 kHz.
PAPER_GEOMETRY = Geometry(
    width_px=118,
    depth_px=400,
    frames=208,
    dx_m=3.5e-3 / 118,
    dz_m=2.0e-3 / 400,
    dt_s=1.0 / 11400.0,
)


@dataclass(frozen=True)
class SceneSpec:
    """Full parameterization of one synthetic acquisition.

    Attenuation lengths are 1/e decay lengths in meters (math.inf disables
    decay). ``frequency_jitter_hz`` and ``amplitude_damping_factor`` emulate
    shaft damping; the jitter is drawn once per scene.
    """

    e_true_pa: float
    excitation_frequency_hz: float
    amplitude: float = 1.0
    lateral_attenuation_m: float = math.inf
    depth_attenuation_m: float = math.inf
    surface_index: int = 0
    noise_sigma: float = 0.0
    frequency_jitter_hz: float = 0.0
    amplitude_damping_factor: float = 1.0
    phase0: float = 0.0
    geometry: Geometry = PAPER_GEOMETRY
    seed: int = 0
    source_id: str = "scene"
    dropout_fraction: float = 0.0

    def __post_init__(self):
        if not self.e_true_pa > 0:
            raise ValueError("e_true_pa must be positive")
        if not self.excitation_frequency_hz > 0:
            raise ValueError("excitation_frequency_hz must be positive")
        if not self.amplitude > 0:
            raise ValueError("amplitude must be positive")
        if not 0.0 <= self.amplitude_damping_factor <= 1.0:
            raise ValueError("amplitude_damping_factor must lie in [0, 1]")
        if self.noise_sigma < 0 or self.frequency_jitter_hz < 0:
            raise ValueError("noise_sigma and frequency_jitter_hz must be non-negative")
        if not 0.0 <= self.dropout_fraction < 1.0:
            raise ValueError("dropout_fraction must lie in [0, 1)")
        if self.lateral_attenuation_m <= 0 or self.depth_attenuation_m <= 0:
            raise ValueError("attenuation lengths must be positive (inf allowed)")
        if self.surface_index < 0 or self.surface_index + CROP_DEPTH_PX > self.geometry.depth_px:
            raise ValueError(
                f"surface_index + {CROP_DEPTH_PX} must not exceed depth_px "
                "(volume must stay croppable)"
            )


def noise_sigma_for_snr(amplitude: float, snr_db: float) -> float:
    """Gaussian noise sigma giving the requested SNR against the wave's RMS
    amplitude (amplitude / sqrt(2))."""
    return (amplitude / math.sqrt(2.0)) / (10.0 ** (snr_db / 20.0))


def generate_wavefield(spec: SceneSpec, model: MaterialModel = DEFAULT_MODEL) -> WaveFieldVolume:
    """Synthesize one wave-field volume from a scene specification.

    Jitter and noise come from independent child streams of the scene seed, so
    volumes that differ only in damping parameters share identical noise.
    """
    geo = spec.geometry
    period_s = 1.0 / spec.excitation_frequency_hz
    if geo.frames * geo.dt_s < period_s:
        raise ValueError("geometry too small: less than one temporal period of the excitation")

    jitter_ss, noise_ss = np.random.SeedSequence(spec.seed).spawn(2)
    jitter = np.random.default_rng(jitter_ss).standard_normal() * spec.frequency_jitter_hz
    f_eff = spec.excitation_frequency_hz + jitter
    a_eff = spec.amplitude * spec.amplitude_damping_factor
    v = velocity_from_youngs_modulus(spec.e_true_pa, model)

    t = np.arange(geo.frames, dtype=np.float64) * geo.dt_s
    x = np.arange(geo.width_px, dtype=np.float64) * geo.dx_m
    z = np.arange(geo.depth_px, dtype=np.float64)

    # Phase does not depend on depth: evaluate on a (time, lateral) sheet and
    # scale by the depth envelope.
    phase = 2.0 * math.pi * f_eff * (t[:, None] - x[None, :] / v) + spec.phase0
    sheet = np.exp(-x / spec.lateral_attenuation_m)[None, :] * np.sin(phase)

    below = z >= spec.surface_index
    envelope = np.zeros(geo.depth_px, dtype=np.float64)
    envelope[below] = a_eff * np.exp(
        -(z[below] - spec.surface_index) * geo.dz_m / spec.depth_attenuation_m
    )

    data = envelope[None, :, None] * sheet[:, None, :]

    rng = np.random.default_rng(noise_ss)
    if spec.noise_sigma > 0:
        data = data + rng.normal(0.0, spec.noise_sigma, size=data.shape)
    if spec.dropout_fraction > 0:
        data[rng.random(size=data.shape) < spec.dropout_fraction] = 0.0

    meta = AcquisitionMeta(
        excitation_frequency_hz=spec.excitation_frequency_hz,
        ground_truth_e_pa=spec.e_true_pa,
        damped=(spec.amplitude_damping_factor < 1.0 or spec.frequency_jitter_hz > 0.0),
        source_id=spec.source_id,
        surface_index=spec.surface_index,
    )
    return WaveFieldVolume(data=data, dx_m=geo.dx_m, dz_m=geo.dz_m, dt_s=geo.dt_s, meta=meta)


@dataclass(frozen=True)
class SuiteConfig:
    """Benchmark-suite parameters: stiffness levels x phantoms x positions,
    repeated per excitation frequency. Defaults reproduce the study design
    (4 levels x 5 phantoms x 25 positions = 500 scenes per frequency)."""

    stiffness_levels_pa: tuple[float, ...] = (17e3, 56e3, 97e3, 139e3)
    frequencies_hz: tuple[float, ...] = (200.0, 400.0, 600.0, 800.0, 1000.0)
    phantoms_per_level: int = 5
    positions_per_phantom: int = 25
    master_seed: int = 0
    geometry: Geometry = PAPER_GEOMETRY
    amplitude: float = 1.0
    noise_sigma: float = 0.0
    lateral_attenuation_m: float = math.inf
    depth_attenuation_m: float = math.inf
    surface_index: int = 40
    frequency_jitter_hz: float = 0.0
    amplitude_damping_factor: float = 1.0
    dropout_fraction: float = 0.0
    randomize_phase: bool = True

    def __post_init__(self):
        if len(self.stiffness_levels_pa) < 1 or len(self.frequencies_hz) < 1:
            raise ValueError("need at least one stiffness level and one frequency")
        if self.phantoms_per_level < 1 or self.positions_per_phantom < 1:
            raise ValueError("phantoms_per_level and positions_per_phantom must be >= 1")


def _scene_seed(master_seed: int, *indices: int) -> int:
    state = np.random.SeedSequence((master_seed, *indices)).generate_state(1, np.uint64)
    return int(state[0])


def phantom_label(level_pa: float, phantom: int) -> str:
    return f"g{level_pa / 1000.0:g}k-ph{phantom}"


def generate_benchmark_suite(config: SuiteConfig) -> list[SceneSpec]:
    """Expand a suite config into the full list of scene specifications.

    Scenes are ordered frequency-major, then level, phantom, position. Each
    scene gets its own seed derived from the master seed and its indices, so
    generation order (or parallelism) never changes the output. The source_id
    identifies the measurement position and is shared across frequencies.
    """
    scenes: list[SceneSpec] = []
    for fi, freq in enumerate(config.frequencies_hz):
        for li, level in enumerate(config.stiffness_levels_pa):
            for pi in range(config.phantoms_per_level):
                for xi in range(config.positions_per_phantom):
                    seed = _scene_seed(config.master_seed, fi, li, pi, xi)
                    if config.randomize_phase:
                        phase0 = float(np.random.default_rng(seed).uniform(0.0, 2.0 * math.pi))
                    else:
                        phase0 = 0.0
                    scenes.append(SceneSpec(
                        e_true_pa=level,
                        excitation_frequency_hz=freq,
                        amplitude=config.amplitude,
                        lateral_attenuation_m=config.lateral_attenuation_m,
                        depth_attenuation_m=config.depth_attenuation_m,
                        surface_index=config.surface_index,
                        noise_sigma=config.noise_sigma,
                        frequency_jitter_hz=config.frequency_jitter_hz,
                        amplitude_damping_factor=config.amplitude_damping_factor,
                        dropout_fraction=config.dropout_fraction,
                        phase0=phase0,
                        geometry=config.geometry,
                        seed=seed,
                        source_id=f"{phantom_label(level, pi)}-pos{xi:02d}",
                    ))
    return scenes


def generate_damping_pair(
    spec: SceneSpec, model: MaterialModel = DEFAULT_MODEL
) -> tuple[WaveFieldVolume, WaveFieldVolume]:
    """Generate the same scene without and with damping.

    The undamped arm forces amplitude_damping_factor = 1 and zero jitter;
    the damped arm uses ``spec`` as given. Seeds are shared, so in the
    noise-free case the damped data is an exact amplitude-scaled copy.
    """
    undamped_spec = replace(spec, amplitude_damping_factor=1.0, frequency_jitter_hz=0.0)
    return generate_wavefield(undamped_spec, model), generate_wavefield(spec, model)
