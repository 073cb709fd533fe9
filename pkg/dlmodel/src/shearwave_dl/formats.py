"""Readers and writers for the shearwave toolkit's file formats.

The volume format is a key/value text header (.wfh) beside a raw
little-endian float32 payload in [time][depth][lateral] order; the manifest
and report CSVs carry fixed headers. Implemented standalone so this package
depends on the primary toolkit only through its published formats.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

FORMAT_NAME = "wavefield-volume"
FORMAT_VERSION = "1"

REPORT_HEADER = ("source_id", "frequency_hz", "e_true_pa", "e_est_pa",
                 "valid", "v_mps", "dominant_frequency_hz")
MANIFEST_HEADER = ("header", "source_id", "phantom_id", "frequency_hz", "e_true_pa", "seed")


@dataclass(frozen=True)
class Volume:
    """One wave-field dataset: data[time][depth][lateral] plus metadata."""

    data: np.ndarray
    dx_m: float
    dz_m: float
    dt_s: float
    excitation_frequency_hz: float | None
    ground_truth_e_pa: float | None
    damped: bool
    source_id: str
    surface_index: int | None

    @property
    def frames(self) -> int:
        return self.data.shape[0]


@dataclass(frozen=True)
class ManifestEntry:
    header: str
    source_id: str
    phantom_id: str
    frequency_hz: float
    e_true_pa: float
    seed: int


def read_volume(path: str | Path) -> Volume:
    header_path = Path(path)
    fields: dict[str, str] = {}
    for line in header_path.read_text(encoding="utf-8").splitlines():
        if line.strip():
            key, _, value = line.partition(":")
            fields[key.strip()] = value.strip()
    if fields.get("format") != FORMAT_NAME or fields.get("version") != FORMAT_VERSION:
        raise ValueError(f"{header_path}: not a {FORMAT_NAME}/{FORMAT_VERSION} header")
    if fields.get("dtype") != "float32-le" or fields.get("order") != "time,depth,lateral":
        raise ValueError(f"{header_path}: unsupported payload layout")

    shape = (int(fields["frames"]), int(fields["depth_px"]), int(fields["width_px"]))
    payload = (header_path.parent / fields["payload"]).read_bytes()
    expected = shape[0] * shape[1] * shape[2] * 4
    if len(payload) != expected:
        raise ValueError(f"{header_path}: payload size mismatch ({len(payload)} != {expected})")
    data = np.frombuffer(payload, dtype="<f4").reshape(shape)

    return Volume(
        data=data,
        dx_m=float(fields["dx_m"]),
        dz_m=float(fields["dz_m"]),
        dt_s=float(fields["dt_s"]),
        excitation_frequency_hz=(float(fields["excitation_frequency_hz"])
                                 if "excitation_frequency_hz" in fields else None),
        ground_truth_e_pa=(float(fields["ground_truth_e_pa"])
                           if "ground_truth_e_pa" in fields else None),
        damped=fields.get("damped") == "true",
        source_id=fields.get("source_id", ""),
        surface_index=(int(fields["surface_index"]) if "surface_index" in fields else None),
    )


def read_manifest(path: str | Path) -> list[ManifestEntry]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != MANIFEST_HEADER:
            raise ValueError(f"{path}: unexpected manifest header {header!r}")
        return [ManifestEntry(rec[0], rec[1], rec[2], float(rec[3]), float(rec[4]), int(rec[5]))
                for rec in reader if rec]


@dataclass(frozen=True)
class PredictionRow:
    source_id: str
    frequency_hz: float
    e_true_pa: float
    e_est_pa: float
    valid: bool = True
    v_mps: float = float("nan")
    dominant_frequency_hz: float = float("nan")


def write_predictions(rows: Sequence[PredictionRow], path: str | Path) -> None:
    """Prediction rows in the shared report CSV format (sorted, full precision)."""
    ordered = sorted(rows, key=lambda r: (r.source_id, r.frequency_hz))
    lines = [",".join(REPORT_HEADER)]
    for r in ordered:
        lines.append(",".join((
            r.source_id,
            repr(float(r.frequency_hz)),
            repr(float(r.e_true_pa)),
            repr(float(r.e_est_pa)),
            "true" if r.valid else "false",
            repr(float(r.v_mps)),
            repr(float(r.dominant_frequency_hz)),
        )))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
