"""File formats: volume header + raw payload, suite configs, CSV reports.

The volume format is a human-readable key/value header (.wfh) beside a raw
little-endian float32 payload in [time][depth][lateral] order, so any
language can parse it with a dozen lines of code. Round trips are byte-exact.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import AcquisitionMeta, WaveFieldVolume
from .evaluation import DampingReport, DatasetRow, EvaluationReport
from .synth import Geometry, SceneSpec, SuiteConfig

__all__ = [
    "FORMAT_NAME",
    "FORMAT_VERSION",
    "REPORT_HEADER",
    "write_volume",
    "read_volume",
    "write_report",
    "read_report",
    "write_summary",
    "write_damping_report",
    "ManifestEntry",
    "write_manifest",
    "read_manifest",
    "load_suite_config",
    "save_suite_config",
]

FORMAT_NAME = "wavefield-volume"
FORMAT_VERSION = 1

REPORT_HEADER = ("source_id", "frequency_hz", "e_true_pa", "e_est_pa",
                 "valid", "v_mps", "dominant_frequency_hz")


def _fmt(value: float) -> str:
    """Full-precision decimal text that round-trips through float()."""
    return repr(float(value))


def _payload_path(header_path: Path) -> Path:
    return header_path.with_suffix(".raw")


def write_volume(volume: WaveFieldVolume, path: str | Path) -> None:
    """Write the header file at ``path`` and the payload beside it."""
    header_path = Path(path)
    payload_path = _payload_path(header_path)
    if not np.isfinite(volume.data).all():
        raise ValueError("refusing to write non-finite values")

    meta = volume.meta
    lines = [
        f"format: {FORMAT_NAME}",
        f"version: {FORMAT_VERSION}",
        f"frames: {volume.frames}",
        f"depth_px: {volume.depth_px}",
        f"width_px: {volume.width_px}",
        f"dx_m: {_fmt(volume.dx_m)}",
        f"dz_m: {_fmt(volume.dz_m)}",
        f"dt_s: {_fmt(volume.dt_s)}",
        "dtype: float32-le",
        "order: time,depth,lateral",
        f"payload: {payload_path.name}",
        f"source_id: {meta.source_id}",
        f"damped: {'true' if meta.damped else 'false'}",
    ]
    if meta.excitation_frequency_hz is not None:
        lines.append(f"excitation_frequency_hz: {_fmt(meta.excitation_frequency_hz)}")
    if meta.ground_truth_e_pa is not None:
        lines.append(f"ground_truth_e_pa: {_fmt(meta.ground_truth_e_pa)}")
    if meta.surface_index is not None:
        lines.append(f"surface_index: {meta.surface_index}")

    payload_path.write_bytes(volume.data.astype("<f4").tobytes(order="C"))
    header_path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _parse_header(text: str, path: Path) -> dict[str, str]:
    fields: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if ":" not in line:
            raise ValueError(f"{path}:{lineno}: malformed header line {line!r}")
        key, _, value = line.partition(":")
        fields[key.strip()] = value.strip()
    return fields


def read_volume(path: str | Path) -> WaveFieldVolume:
    """Read a volume written by :func:`write_volume`."""
    header_path = Path(path)
    fields = _parse_header(header_path.read_text(encoding="utf-8"), header_path)

    if fields.get("format") != FORMAT_NAME:
        raise ValueError(f"{header_path}: not a {FORMAT_NAME} header")
    if fields.get("version") != str(FORMAT_VERSION):
        raise ValueError(f"{header_path}: unknown format version {fields.get('version')!r}")
    if fields.get("dtype") != "float32-le":
        raise ValueError(f"{header_path}: unsupported dtype {fields.get('dtype')!r}")
    if fields.get("order") != "time,depth,lateral":
        raise ValueError(f"{header_path}: unsupported order {fields.get('order')!r}")

    frames = int(fields["frames"])
    depth_px = int(fields["depth_px"])
    width_px = int(fields["width_px"])
    payload_path = header_path.parent / fields["payload"]
    payload = payload_path.read_bytes()
    expected = frames * depth_px * width_px * 4
    if len(payload) != expected:
        raise ValueError(
            f"{payload_path}: payload size mismatch: got {len(payload)} bytes, "
            f"expected {expected}"
        )
    data = np.frombuffer(payload, dtype="<f4").reshape(frames, depth_px, width_px)

    meta = AcquisitionMeta(
        excitation_frequency_hz=(float(fields["excitation_frequency_hz"])
                                 if "excitation_frequency_hz" in fields else None),
        ground_truth_e_pa=(float(fields["ground_truth_e_pa"])
                           if "ground_truth_e_pa" in fields else None),
        damped=fields.get("damped", "false") == "true",
        source_id=fields.get("source_id", ""),
        surface_index=(int(fields["surface_index"]) if "surface_index" in fields else None),
    )
    return WaveFieldVolume(data=data, dx_m=float(fields["dx_m"]), dz_m=float(fields["dz_m"]),
                           dt_s=float(fields["dt_s"]), meta=meta)


def write_report(report: EvaluationReport, path: str | Path) -> None:
    """Per-dataset rows as CSV, sorted by source_id then frequency."""
    rows = sorted(report.per_dataset, key=lambda r: (r.source_id, r.frequency_hz))
    out = [",".join(REPORT_HEADER)]
    for r in rows:
        out.append(",".join((
            r.source_id,
            _fmt(r.frequency_hz),
            _fmt(r.e_true_pa),
            _fmt(r.e_est_pa),
            "true" if r.valid else "false",
            _fmt(r.v_mps),
            _fmt(r.dominant_frequency_hz),
        )))
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def read_report(path: str | Path) -> list[DatasetRow]:
    """Parse a report CSV back into per-dataset rows."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != REPORT_HEADER:
            raise ValueError(f"{path}: unexpected report header {header!r}")
        rows = []
        for rec in reader:
            if not rec:
                continue
            rows.append(DatasetRow(
                source_id=rec[0],
                frequency_hz=float(rec[1]),
                e_true_pa=float(rec[2]),
                e_est_pa=float(rec[3]),
                valid=rec[4] == "true",
                v_mps=float(rec[5]),
                dominant_frequency_hz=float(rec[6]),
            ))
    return rows


def write_summary(report: EvaluationReport, path: str | Path) -> None:
    """Aggregate statistics as JSON (per frequency plus ensemble)."""
    doc = {
        "per_frequency": {
            _fmt(f): {
                "mae_mean_pa": s.mae_mean_pa,
                "mae_std_pa": s.mae_std_pa,
                "rmse_pa": s.rmse_pa,
                "valid_fraction": s.valid_fraction,
                "n": s.n,
            }
            for f, s in sorted(report.per_frequency.items())
        },
        "ensemble": {
            "mae_mean_pa": report.ensemble.mae_mean_pa,
            "mae_std_pa": report.ensemble.mae_std_pa,
            "rmse_pa": report.ensemble.rmse_pa,
            "n": report.ensemble.n,
        },
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def write_damping_report(report: DampingReport, path: str | Path) -> None:
    header = ("frequency_hz", "mean_abs_offset_pa", "median_freq_dev_damped_hz",
              "median_freq_dev_undamped_hz", "n", "n_valid_pairs")
    out = [",".join(header)]
    for f, s in sorted(report.per_frequency.items()):
        out.append(",".join((
            _fmt(f), _fmt(s.mean_abs_offset_pa), _fmt(s.median_freq_dev_damped_hz),
            _fmt(s.median_freq_dev_undamped_hz), str(s.n), str(s.n_valid_pairs),
        )))
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


@dataclass(frozen=True)
class ManifestEntry:
    """One generated scene file in a suite manifest."""

    header: str  # header filename, relative to the manifest
    source_id: str
    phantom_id: str
    frequency_hz: float
    e_true_pa: float
    seed: int


MANIFEST_HEADER = ("header", "source_id", "phantom_id", "frequency_hz", "e_true_pa", "seed")


def write_manifest(entries: Sequence[ManifestEntry], path: str | Path) -> None:
    out = [",".join(MANIFEST_HEADER)]
    for e in entries:
        out.append(",".join((e.header, e.source_id, e.phantom_id,
                             _fmt(e.frequency_hz), _fmt(e.e_true_pa), str(e.seed))))
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def read_manifest(path: str | Path) -> list[ManifestEntry]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != MANIFEST_HEADER:
            raise ValueError(f"{path}: unexpected manifest header {header!r}")
        return [ManifestEntry(rec[0], rec[1], rec[2], float(rec[3]), float(rec[4]), int(rec[5]))
                for rec in reader if rec]


def _geometry_from_dict(doc: dict) -> Geometry:
    return Geometry(
        width_px=int(doc["width_px"]),
        depth_px=int(doc["depth_px"]),
        frames=int(doc["frames"]),
        dx_m=float(doc["dx_m"]),
        dz_m=float(doc["dz_m"]),
        dt_s=float(doc["dt_s"]),
    )


def load_suite_config(path: str | Path) -> SuiteConfig:
    """Suite config from a JSON document; null attenuation means infinite."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))

    def att(key: str) -> float:
        value = doc.get(key)
        return math.inf if value is None else float(value)

    kwargs = {}
    if "stiffness_levels_pa" in doc:
        kwargs["stiffness_levels_pa"] = tuple(float(v) for v in doc["stiffness_levels_pa"])
    if "frequencies_hz" in doc:
        kwargs["frequencies_hz"] = tuple(float(v) for v in doc["frequencies_hz"])
    for key in ("phantoms_per_level", "positions_per_phantom", "master_seed", "surface_index"):
        if key in doc:
            kwargs[key] = int(doc[key])
    for key in ("amplitude", "noise_sigma", "frequency_jitter_hz",
                "amplitude_damping_factor", "dropout_fraction"):
        if key in doc:
            kwargs[key] = float(doc[key])
    if "randomize_phase" in doc:
        kwargs["randomize_phase"] = bool(doc["randomize_phase"])
    kwargs["lateral_attenuation_m"] = att("lateral_attenuation_m")
    kwargs["depth_attenuation_m"] = att("depth_attenuation_m")
    if "geometry" in doc:
        kwargs["geometry"] = _geometry_from_dict(doc["geometry"])
    return SuiteConfig(**kwargs)


def save_suite_config(config: SuiteConfig, path: str | Path) -> None:
    doc = {
        "stiffness_levels_pa": list(config.stiffness_levels_pa),
        "frequencies_hz": list(config.frequencies_hz),
        "phantoms_per_level": config.phantoms_per_level,
        "positions_per_phantom": config.positions_per_phantom,
        "master_seed": config.master_seed,
        "amplitude": config.amplitude,
        "noise_sigma": config.noise_sigma,
        "lateral_attenuation_m": (None if math.isinf(config.lateral_attenuation_m)
                                  else config.lateral_attenuation_m),
        "depth_attenuation_m": (None if math.isinf(config.depth_attenuation_m)
                                else config.depth_attenuation_m),
        "surface_index": config.surface_index,
        "frequency_jitter_hz": config.frequency_jitter_hz,
        "amplitude_damping_factor": config.amplitude_damping_factor,
        "dropout_fraction": config.dropout_fraction,
        "randomize_phase": config.randomize_phase,
        "geometry": {
            "width_px": config.geometry.width_px,
            "depth_px": config.geometry.depth_px,
            "frames": config.geometry.frames,
            "dx_m": config.geometry.dx_m,
            "dz_m": config.geometry.dz_m,
            "dt_s": config.geometry.dt_s,
        },
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def scene_filename(spec: SceneSpec) -> str:
    """Canonical header filename for a generated scene."""
    return f"{spec.source_id}_f{spec.excitation_frequency_hz:g}.wfh"
