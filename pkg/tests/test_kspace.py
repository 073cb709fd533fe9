import math

import numpy as np
import pytest

from shearwave import (
    AcquisitionMeta,
    KspaceOptions,
    SceneSpec,
    WaveFieldVolume,
    dominant_frequency,
    ensemble_estimate,
    estimate_elasticity_conventional,
    generate_wavefield,
    kspace_velocity,
    noise_sigma_for_snr,
    space_time_map,
)
from shearwave.kspace import SpaceTimeMap
from tests.conftest import UNIT_Q_MODEL, WIDE_GEOMETRY, make_plane_wave_map


class TestSpaceTimeMap:
    def test_identical_depth_columns(self):
        rng = np.random.default_rng(0)
        sheet = rng.random((8, 10)).astype(np.float32)  # (t, x)
        data = np.repeat(sheet[:, None, :], 8, axis=1)
        vol = WaveFieldVolume(data=data, dx_m=1e-4, dz_m=1e-5, dt_s=1e-4)
        out = space_time_map(vol)
        assert np.array_equal(out.values, sheet.T.astype(np.float64))

    def test_single_depth_is_transpose(self):
        rng = np.random.default_rng(1)
        data = rng.random((6, 1, 5)).astype(np.float32)
        out = space_time_map(WaveFieldVolume(data=data, dx_m=1e-4, dz_m=1e-5, dt_s=1e-4))
        assert np.array_equal(out.values, data[:, 0, :].T.astype(np.float64))

    def test_matches_elementwise_mean_oracle(self):
        rng = np.random.default_rng(2)
        data = rng.random((8, 8, 8)).astype(np.float32)
        vol = WaveFieldVolume(data=data, dx_m=1e-4, dz_m=1e-5, dt_s=1e-4)
        out = space_time_map(vol)
        for x in range(8):
            for t in range(8):
                expected = float(np.mean(data[t, :, x].astype(np.float64)))
                assert out.values[x, t] == pytest.approx(expected, rel=1e-14)


class TestKspaceVelocity:
    def test_exact_bin_plane_wave(self):
        est = kspace_velocity(make_plane_wave_map(v_mps=4.0, f_hz=1000.0))
        assert est.valid
        assert est.v_mps == pytest.approx(4.0, rel=1e-9)
        assert est.dominant_frequency_hz == pytest.approx(1000.0, abs=1e-9)

    def test_more_exact_bin_combinations(self):
        # (v, f) pairs whose k = f/v is a multiple of 250 1/m and f a multiple of 50 Hz
        for v, f in ((1.5, 750.0), (2.0, 1000.0), (5.0, 2500.0)):
            est = kspace_velocity(make_plane_wave_map(v_mps=v, f_hz=f))
            assert est.valid
            assert est.v_mps == pytest.approx(v, rel=1e-9)

    def test_all_zero_map_invalid(self):
        est = kspace_velocity(SpaceTimeMap(np.zeros((32, 32)), 1e-4, 1e-4))
        assert not est.valid
        assert est.cause == "no spectral peak"
        assert math.isnan(est.v_mps)

    def test_slow_wave_gated(self):
        est = kspace_velocity(make_plane_wave_map(v_mps=0.5, f_hz=1000.0))
        assert not est.valid
        assert est.cause == "outside velocity band"
        assert est.v_mps == pytest.approx(0.5, rel=0.05)

    def test_amplitude_invariance(self):
        base = make_plane_wave_map(v_mps=3.0, f_hz=900.0)
        ref = kspace_velocity(base)
        for c in (0.5, 3.7, 1e4):
            scaled = SpaceTimeMap(base.values * c, base.dx_m, base.dt_s)
            est = kspace_velocity(scaled)
            assert est.valid == ref.valid
            assert est.v_mps == pytest.approx(ref.v_mps, rel=1e-9)

    def test_dc_invariance(self):
        base = make_plane_wave_map(v_mps=3.0, f_hz=900.0)
        ref = kspace_velocity(base)
        shifted = SpaceTimeMap(base.values + 5.0, base.dx_m, base.dt_s)
        est = kspace_velocity(shifted)
        assert est.valid == ref.valid
        assert est.v_mps == pytest.approx(ref.v_mps, rel=1e-9)

    def test_off_bin_error_within_one_padded_bin_per_axis(self):
        pad = 4
        width, dx, frames, dt = 256, 3e-4, 208, 1.0 / 11400.0
        df = 1.0 / (frames * dt * pad)
        dk = 1.0 / (width * dx * pad)
        for v in (1.5, 3.0, 8.0):
            for f in (200.0, 600.0, 1000.0):
                est = kspace_velocity(make_plane_wave_map(
                    v_mps=v, f_hz=f, width=width, dx=dx, frames=frames, dt=dt))
                k = f / v
                assert (f - df) / (k + dk) <= est.v_mps <= (f + df) / (k - dk)

    def test_gate_soundness_on_random_maps(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            v = float(10 ** rng.uniform(-0.5, 1.3))      # 0.32 .. 20 m/s
            f = float(rng.uniform(200.0, 2000.0))
            amp = float(rng.uniform(0.1, 5.0))
            noise = float(rng.uniform(0.0, 2.0))
            m = make_plane_wave_map(v_mps=v, f_hz=f, width=48, frames=64,
                                    dx=2e-4, dt=1e-4, amplitude=amp)
            values = m.values + rng.normal(0.0, noise, m.values.shape)
            est = kspace_velocity(SpaceTimeMap(values, m.dx_m, m.dt_s))
            if est.valid:
                assert 1.0 <= est.v_mps <= 10.0

    def test_rejects_tiny_maps(self):
        with pytest.raises(ValueError):
            kspace_velocity(SpaceTimeMap(np.zeros((3, 16)), 1e-4, 1e-4))

    def test_options_validation(self):
        with pytest.raises(ValueError):
            KspaceOptions(padding=0)
        with pytest.raises(ValueError):
            KspaceOptions(threshold_fraction=1.5)
        with pytest.raises(ValueError):
            KspaceOptions(window="hamming")

    def test_hann_window_still_recovers_velocity(self):
        est = kspace_velocity(make_plane_wave_map(v_mps=4.0, f_hz=1000.0),
                              KspaceOptions(window="hann"))
        assert est.valid
        assert est.v_mps == pytest.approx(4.0, rel=0.05)


class TestDominantFrequency:
    def volume_with_trace(self, trace):
        data = np.broadcast_to(np.asarray(trace, dtype=np.float32)[:, None, None],
                               (len(trace), 4, 4)).copy()
        return WaveFieldVolume(data=data, dx_m=1e-4, dz_m=1e-5, dt_s=1e-4)

    def test_pure_tone_exact_bin(self):
        t = np.arange(200) * 1e-4
        vol = self.volume_with_trace(np.sin(2 * np.pi * 1000.0 * t))
        assert dominant_frequency(vol) == pytest.approx(1000.0, abs=1e-9)

    def test_constant_volume_errors(self):
        vol = self.volume_with_trace(np.full(64, 2.0))
        with pytest.raises(ValueError, match="no oscillation"):
            dominant_frequency(vol)

    def test_scene_on_paper_grid_within_padded_bin(self):
        spec = SceneSpec(e_true_pa=56e3, excitation_frequency_hz=400.0,
                         geometry=WIDE_GEOMETRY, surface_index=10, seed=4)
        vol = generate_wavefield(spec)
        padded_bin = 11400.0 / (208 * 4)
        assert dominant_frequency(vol) == pytest.approx(400.0, abs=padded_bin)

    def test_half_padded_bin_for_pure_tones(self):
        frames, dt, pad = 160, 1e-4, 4
        half_bin = 0.5 / (frames * dt * pad)
        rng = np.random.default_rng(11)
        for _ in range(10):
            f = float(rng.uniform(400.0, 3800.0))
            t = np.arange(frames) * dt
            vol = self.volume_with_trace(np.sin(2 * np.pi * f * t + rng.uniform(0, 2 * np.pi)))
            assert abs(dominant_frequency(vol) - f) <= half_bin * (1 + 1e-9)

    def test_requires_eight_frames(self):
        with pytest.raises(ValueError, match="8 frames"):
            dominant_frequency(self.volume_with_trace(np.zeros(4)))


class TestConventionalEstimate:
    def test_exact_bin_scene_with_calibrated_q(self, exact_bin_scene):
        # generated under q=1 so v = 4 m/s; estimating with q = 0.84 gives
        # E = 0.84 * 1000 * 3 * 16 = 40.32 kPa
        vol = generate_wavefield(exact_bin_scene, UNIT_Q_MODEL)
        e, est = estimate_elasticity_conventional(vol)
        assert est.valid
        assert e == pytest.approx(40_320.0, rel=1e-9)

    def test_all_zero_volume_invalid(self):
        vol = WaveFieldVolume(data=np.zeros((16, 8, 8)), dx_m=1e-4, dz_m=1e-5, dt_s=1e-4,
                              meta=AcquisitionMeta(surface_index=0))
        e, est = estimate_elasticity_conventional(vol)
        assert not est.valid
        assert math.isnan(e)

    def test_benchmark_scene_with_mild_noise(self):
        spec = SceneSpec(e_true_pa=56e3, excitation_frequency_hz=800.0,
                         geometry=WIDE_GEOMETRY, surface_index=20,
                         noise_sigma=noise_sigma_for_snr(1.0, 20.0), seed=9)
        e, est = estimate_elasticity_conventional(generate_wavefield(spec))
        assert est.valid
        assert e == pytest.approx(56e3, rel=0.15)


class TestEnsemble:
    def test_mean_of_valid(self):
        assert ensemble_estimate([(10e3, True), (20e3, True), (30e3, True)]) == 20e3

    def test_invalid_entries_excluded(self):
        assert ensemble_estimate([(10e3, True), (99e3, False), (20e3, True)]) == 15e3

    def test_all_invalid_errors(self):
        with pytest.raises(ValueError, match="invalid"):
            ensemble_estimate([(10e3, False)])
        with pytest.raises(ValueError):
            ensemble_estimate([])
