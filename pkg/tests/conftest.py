"""Shared fixtures: exact-bin scenes and plane-wave maps.

The canonical exact-bin grid has 100 lateral px at 40 um and 200 frames at
1/10000 s, so the frequency resolution is 50 Hz and the wavenumber
resolution 250 1/m. A 1000 Hz wave at 4 m/s lands exactly on temporal bin 20
and spatial bin 1, which makes the k-space pipeline exact.
"""

import numpy as np
import pytest

from shearwave import Geometry, MaterialModel, SceneSpec
from shearwave.kspace import SpaceTimeMap

EXACT_BIN_GEOMETRY = Geometry(width_px=100, depth_px=160, frames=200,
                              dx_m=40e-6, dz_m=5e-6, dt_s=1e-4)

# Wide lateral field of view (11.8 mm): the padded wavenumber resolution is
# ~21 1/m, fine enough for accurate estimates across the soft-tissue band.
WIDE_GEOMETRY = Geometry(width_px=118, depth_px=160, frames=208,
                         dx_m=1e-4, dz_m=5e-6, dt_s=1.0 / 11400.0)

UNIT_Q_MODEL = MaterialModel(q=1.0)


def make_plane_wave_map(v_mps, f_hz, width=100, frames=200, dx=40e-6, dt=1e-4,
                        amplitude=1.0, phase=0.0):
    """Analytic space-time map of a plane wave travelling toward +x."""
    t = np.arange(frames) * dt
    x = np.arange(width) * dx
    values = amplitude * np.sin(2.0 * np.pi * f_hz * (t[None, :] - x[:, None] / v_mps) + phase)
    return SpaceTimeMap(values=values, dx_m=dx, dt_s=dt)


@pytest.fixture
def exact_bin_scene():
    """48 kPa under a q=1 model gives v = 4 m/s; with f = 1000 Hz both f and
    k = 250 1/m are exact FFT bins of EXACT_BIN_GEOMETRY."""
    return SceneSpec(
        e_true_pa=48e3,
        excitation_frequency_hz=1000.0,
        geometry=EXACT_BIN_GEOMETRY,
        surface_index=20,
        source_id="exact-bin",
        seed=7,
    )
