"""Fixtures: a desk-scale suite generated through the primary toolkit's CLI.

The data flows through the published external surfaces only: `shearwave
generate` + `shearwave preprocess` subprocesses produce volume files and a
manifest, which this package reads back with its own format readers.
"""

import json
import shutil
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
import torch

import shearwave_dl as dl

DESK_SUITE = {
    "stiffness_levels_pa": [17000.0, 56000.0, 97000.0, 139000.0],
    "frequencies_hz": [800.0],
    "phantoms_per_level": 2,
    "positions_per_phantom": 5,
    "master_seed": 20,
    "noise_sigma": 0.0,
    "surface_index": 20,
    "geometry": {"width_px": 118, "depth_px": 160, "frames": 208,
                 "dx_m": 1e-4, "dz_m": 5e-6, "dt_s": 8.771929824561403e-05},
}


def run_cli(*args: str) -> None:
    subprocess.run([sys.executable, "-m", "shearwave.cli", *args],
                   check=True, capture_output=True, text=True)


@pytest.fixture(scope="session")
def desk_suite_dir(tmp_path_factory) -> Path:
    """Noise-free 2 phantoms/level x 5 positions at one frequency,
    preprocessed to 64x64 frames."""
    base = tmp_path_factory.mktemp("desk")
    config = base / "suite.json"
    config.write_text(json.dumps(DESK_SUITE))
    raw = base / "raw"
    pre = base / "pre"
    run_cli("generate", str(config), str(raw))
    run_cli("preprocess", str(raw), str(pre),
            "--crop-depth", "128", "--kernel", "3", "--resize", "64", "64")
    if not (pre / "manifest.csv").exists():
        shutil.copy(raw / "manifest.csv", pre / "manifest.csv")
    return pre


@pytest.fixture(scope="session")
def desk_samples(desk_suite_dir) -> list[dl.VolumeSample]:
    return dl.load_suite(desk_suite_dir)


def toy_sample(frames=24, height=16, width=16, label=50e3, seed=0,
               source_id="toy", phantom_id="toy-ph0", frequency=800.0) -> dl.VolumeSample:
    rng = np.random.default_rng(seed)
    data = rng.normal(size=(frames, height, width)).astype(np.float32)
    return dl.VolumeSample(
        tensor=torch.from_numpy(dl.standardize(data)),
        label_pa=label, source_id=source_id, phantom_id=phantom_id,
        frequency_hz=frequency,
    )


TOY_MODEL_CONFIG = dl.ModelConfig(input_frame=(16, 16), stem_stride=(1, 1, 1))
