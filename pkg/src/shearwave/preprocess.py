"""Volume preprocessing: surface detection, cropping, median filtering, resizing.

The standard chain is crop -> median -> resize; every step is a pure function
from volume to volume.
"""

from __future__ import annotations

from dataclasses import replace

import numpy as np
from scipy import ndimage

from .core import WaveFieldVolume

__all__ = [
    "detect_surface",
    "crop_below_surface",
    "median_filter_3d",
    "resize_frames",
    "preprocess_volume",
]

DEFAULT_CROP_DEPTH_PX = 128


def detect_surface(volume: WaveFieldVolume, kappa: float = 4.0,
                   smooth_width: int = 5) -> np.ndarray:
    """Per-lateral-column surface depth indices.

    For each column, the first depth index whose temporal standard deviation
    exceeds ``kappa`` times the background noise level; the background is the
    smallest per-depth-row median of temporal std, i.e. the quietest row.
    Detected indices are smoothed laterally with a median of ``smooth_width``.
    """
    if volume.frames < 2:
        raise ValueError("need at least 2 frames to detect a surface")
    std_map = volume.data.std(axis=0, dtype=np.float64)  # (depth, lateral)
    background = float(np.median(std_map, axis=1).min())
    crossing = std_map > kappa * background

    has_surface = crossing.any(axis=0)
    if not has_surface.any():
        raise ValueError("no surface found")
    first = np.argmax(crossing, axis=0)
    # Columns that never cross fall back to the median of detected columns.
    fallback = int(np.median(first[has_surface]))
    first = np.where(has_surface, first, fallback)
    return ndimage.median_filter(first, size=smooth_width, mode="nearest")


def crop_below_surface(volume: WaveFieldVolume, depth: int = DEFAULT_CROP_DEPTH_PX,
                       surface: int | None = None) -> WaveFieldVolume:
    """Keep ``depth`` pixels starting at the surface.

    The surface comes from the argument, the volume metadata, or (last resort)
    the median of :func:`detect_surface`. The output metadata has
    surface_index reset to 0.
    """
    if depth < 1:
        raise ValueError("crop depth must be >= 1")
    if surface is None:
        surface = volume.meta.surface_index
    if surface is None:
        surface = int(np.median(detect_surface(volume)))
    if surface < 0:
        raise ValueError("surface index must be non-negative")
    if surface + depth > volume.depth_px:
        raise ValueError(
            f"insufficient depth below surface: {surface} + {depth} > {volume.depth_px}"
        )
    return volume.with_data(volume.data[:, surface:surface + depth, :], surface_index=0)


def median_filter_3d(volume: WaveFieldVolume, kernel: int = 3) -> WaveFieldVolume:
    """Median filter with a cubic kernel; borders replicate edge values."""
    if kernel < 1 or kernel % 2 == 0:
        raise ValueError("kernel must be odd and >= 1")
    if kernel > min(volume.frames, volume.depth_px, volume.width_px):
        raise ValueError("kernel larger than a volume dimension")
    if kernel == 1:
        return volume
    return volume.with_data(ndimage.median_filter(volume.data, size=kernel, mode="nearest"))


def _area_weights(n_in: int, n_out: int) -> np.ndarray:
    """Row-stochastic (n_out, n_in) matrix averaging input cells over the
    exact area each output cell covers."""
    scale = n_in / n_out
    w = np.zeros((n_out, n_in), dtype=np.float64)
    for j in range(n_out):
        a, b = j * scale, (j + 1) * scale
        lo, hi = int(np.floor(a)), int(np.ceil(b))
        for i in range(lo, min(hi, n_in)):
            overlap = min(b, i + 1) - max(a, i)
            if overlap > 0:
                w[j, i] = overlap / scale
    return w


def resize_frames(volume: WaveFieldVolume, out_w: int = 64, out_h: int = 64) -> WaveFieldVolume:
    """Downsample every frame to (out_h, out_w) by exact area averaging.

    Area averaging preserves the per-frame mean; pixel spacings are rescaled
    so the physical extent is unchanged. Upsampling is rejected.
    """
    if out_w < 1 or out_h < 1:
        raise ValueError("output dimensions must be >= 1")
    if out_w > volume.width_px or out_h > volume.depth_px:
        raise ValueError("upsampling requested; resize_frames only downsamples")

    w_h = _area_weights(volume.depth_px, out_h)
    w_w = _area_weights(volume.width_px, out_w)
    data = volume.data.astype(np.float64)
    tmp = np.tensordot(data, w_w, axes=([2], [1]))        # (t, depth, out_w)
    out = np.tensordot(tmp, w_h, axes=([1], [1]))         # (t, out_w, out_h)
    out = np.ascontiguousarray(np.swapaxes(out, 1, 2))    # (t, out_h, out_w)

    meta = volume.meta
    if meta.surface_index is not None:
        meta = replace(meta, surface_index=int(round(
            meta.surface_index * out_h / volume.depth_px)))
    return WaveFieldVolume(
        data=out,
        dx_m=volume.dx_m * volume.width_px / out_w,
        dz_m=volume.dz_m * volume.depth_px / out_h,
        dt_s=volume.dt_s,
        meta=meta,
    )


def preprocess_volume(volume: WaveFieldVolume, crop_depth: int | None = DEFAULT_CROP_DEPTH_PX,
                      kernel: int | None = 3,
                      resize: tuple[int, int] | None = None) -> WaveFieldVolume:
    """Standard chain: crop below surface, median filter, optional resize.

    Any stage can be skipped by passing None (kernel=1 also skips filtering).
    """
    out = volume
    if crop_depth is not None:
        out = crop_below_surface(out, depth=crop_depth)
    if kernel is not None and kernel > 1:
        out = median_filter_3d(out, kernel=kernel)
    if resize is not None:
        out = resize_frames(out, out_w=resize[0], out_h=resize[1])
    return out
