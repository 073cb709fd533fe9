"""Loading preprocessed volumes and cutting temporal windows."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

from .formats import ManifestEntry, read_manifest, read_volume


@dataclass
class VolumeSample:
    """One standardized volume ready for windowing."""

    tensor: torch.Tensor  # (frames, height, width) float32, zero mean unit variance
    label_pa: float
    source_id: str
    phantom_id: str
    frequency_hz: float

    @property
    def frames(self) -> int:
        return int(self.tensor.shape[0])


def standardize(data: np.ndarray) -> np.ndarray:
    """Per-volume zero mean, unit variance; amplitude scaling then has no
    effect on the network input."""
    data = data.astype(np.float32)
    mean = float(data.mean())
    std = float(data.std())
    if std == 0.0:
        return data - mean
    return (data - mean) / std


def load_sample(base_dir: str | Path, entry: ManifestEntry) -> VolumeSample:
    volume = read_volume(Path(base_dir) / entry.header)
    if volume.ground_truth_e_pa is None:
        raise ValueError(f"{entry.header}: volume carries no ground-truth label")
    return VolumeSample(
        tensor=torch.from_numpy(standardize(volume.data)),
        label_pa=volume.ground_truth_e_pa,
        source_id=entry.source_id,
        phantom_id=entry.phantom_id,
        frequency_hz=entry.frequency_hz,
    )


def load_suite(base_dir: str | Path) -> list[VolumeSample]:
    base_dir = Path(base_dir)
    entries = read_manifest(base_dir / "manifest.csv")
    return [load_sample(base_dir, e) for e in entries]


def window_start_count(frames: int, window: int) -> int:
    """Number of valid window start positions (stride 1)."""
    if frames < window:
        raise ValueError(f"volume has {frames} frames, shorter than window {window}")
    return frames - window + 1


def cut_window(sample: VolumeSample, start: int, window: int) -> torch.Tensor:
    if start < 0 or start + window > sample.frames:
        raise ValueError("window out of range")
    return sample.tensor[start:start + window]


def random_window(sample: VolumeSample, window: int, rng: np.random.Generator) -> torch.Tensor:
    start = int(rng.integers(0, window_start_count(sample.frames, window)))
    return cut_window(sample, start, window)
