"""Command-line interface: generate, preprocess, estimate, calibrate,
evaluate, damping.

All defaults mirror the processing pipeline (crop 128 px, kernel 3,
threshold 0.10, band 1-10 m/s, q = 0.84). Batch subcommands run a bounded
worker pool; results are collected in input order so the worker count never
changes the output bytes.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Iterable, Sequence

from . import io as swio
from .core import MaterialModel, WaveFieldVolume
from .evaluation import DatasetRow, calibrate_q, damping_study, report_from_rows
from .kspace import KspaceOptions, estimate_elasticity_conventional
from .preprocess import preprocess_volume
from .synth import generate_benchmark_suite, generate_wavefield

WORKERS_ENV = "SHEARWAVE_WORKERS"


def _default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise SystemExit(f"error: {WORKERS_ENV} must be an integer, got {env!r}")
    return min(4, os.cpu_count() or 1)


def _map_ordered(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _find_headers(path: Path) -> list[Path]:
    if path.is_file():
        return [path]
    return sorted(path.glob("*.wfh"))


def _load_volumes(path: Path) -> list[WaveFieldVolume]:
    headers = _find_headers(path)
    if not headers:
        raise RuntimeError(f"no volumes found in {path}")
    return [swio.read_volume(h) for h in headers]


def _model_from_args(args) -> MaterialModel:
    return MaterialModel(q=args.q, rho_kg_m3=args.rho, nu=args.nu)


def _options_from_args(args) -> KspaceOptions:
    return KspaceOptions(padding=args.padding, threshold_fraction=args.threshold,
                         velocity_band_mps=(args.band[0], args.band[1]),
                         min_peak_to_mean=args.min_peak)


def _add_model_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--q", type=float, default=0.84, help="material scaling factor")
    parser.add_argument("--rho", type=float, default=1000.0, help="density kg/m^3")
    parser.add_argument("--nu", type=float, default=0.5, help="Poisson's ratio")


def _add_kspace_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--padding", type=int, default=4, help="FFT zero-padding factor")
    parser.add_argument("--threshold", type=float, default=0.10,
                        help="relative k-space amplitude threshold")
    parser.add_argument("--band", type=float, nargs=2, default=[1.0, 10.0],
                        metavar=("LO", "HI"), help="valid velocity band, m/s")
    parser.add_argument("--min-peak", type=float, default=8.0,
                        help="minimum k-space peak-to-mean ratio (0 disables)")
    parser.add_argument("--crop-depth", type=int, default=128,
                        help="depth in pixels kept below the surface")


def _add_workers_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--workers", type=int, default=None,
                        help=f"worker threads (default: ${WORKERS_ENV} or cpu count, max 4)")


def cmd_generate(args) -> int:
    config = swio.load_suite_config(Path(args.config))
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    scenes = generate_benchmark_suite(config)
    workers = args.workers or _default_workers()

    def write_scene(spec):
        name = swio.scene_filename(spec)
        swio.write_volume(generate_wavefield(spec), outdir / name)
        return name

    names = _map_ordered(write_scene, scenes, workers)
    entries = [
        swio.ManifestEntry(
            header=name,
            source_id=spec.source_id,
            phantom_id=_phantom_id(spec.source_id),
            frequency_hz=spec.excitation_frequency_hz,
            e_true_pa=spec.e_true_pa,
            seed=spec.seed,
        )
        for spec, name in zip(scenes, names)
    ]
    swio.write_manifest(entries, outdir / "manifest.csv")
    print(f"wrote {len(scenes)} volumes and manifest.csv to {outdir}")
    return 0


def _phantom_id(source_id: str) -> str:
    # suite source_id layout: <level>-ph<i>-pos<j>; the phantom is everything
    # before the position suffix
    return source_id.rsplit("-pos", 1)[0]


def cmd_preprocess(args) -> int:
    indir = Path(args.input)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    headers = _find_headers(indir)
    if not headers:
        raise RuntimeError(f"no volumes found in {indir}")
    crop = None if args.no_crop else args.crop_depth
    resize = tuple(args.resize) if args.resize else None
    kernel = args.kernel if args.kernel and args.kernel > 1 else None
    workers = args.workers or _default_workers()

    def process(header):
        volume = swio.read_volume(header)
        out = preprocess_volume(volume, crop_depth=crop, kernel=kernel, resize=resize)
        swio.write_volume(out, outdir / header.name)
        return header.name

    _map_ordered(process, headers, workers)
    manifest = indir / "manifest.csv" if indir.is_dir() else None
    if manifest is not None and manifest.exists():
        (outdir / "manifest.csv").write_bytes(manifest.read_bytes())
    print(f"preprocessed {len(headers)} volumes into {outdir}")
    return 0


def _estimate_rows(volumes, model, options, crop_depth, workers) -> list[DatasetRow]:
    def run(volume):
        e_est, est = estimate_elasticity_conventional(volume, model, options,
                                                      crop_depth=crop_depth)
        meta = volume.meta
        return DatasetRow(
            source_id=meta.source_id,
            frequency_hz=meta.excitation_frequency_hz or math.nan,
            e_true_pa=meta.ground_truth_e_pa if meta.ground_truth_e_pa is not None else math.nan,
            e_est_pa=e_est,
            valid=est.valid,
            v_mps=est.v_mps,
            dominant_frequency_hz=est.dominant_frequency_hz,
        )

    return _map_ordered(run, volumes, workers)


def cmd_estimate(args) -> int:
    volumes = _load_volumes(Path(args.input))
    rows = _estimate_rows(volumes, _model_from_args(args), _options_from_args(args),
                          args.crop_depth, args.workers or _default_workers())
    swio.write_report(report_from_rows(rows), args.output)
    n_valid = sum(r.valid for r in rows)
    print(f"estimated {len(rows)} volumes ({n_valid} valid) -> {args.output}")
    return 0


def cmd_calibrate(args) -> int:
    volumes = _load_volumes(Path(args.input))
    model_base = MaterialModel(q=1.0, rho_kg_m3=args.rho, nu=args.nu)
    options = _options_from_args(args)
    velocities, truths = [], []
    for volume in volumes:
        if volume.meta.ground_truth_e_pa is None:
            continue
        _, est = estimate_elasticity_conventional(volume, model_base, options,
                                                  crop_depth=args.crop_depth)
        if est.valid:
            velocities.append(est.v_mps)
            truths.append(volume.meta.ground_truth_e_pa)
    if len(velocities) < 2:
        raise RuntimeError("need at least 2 valid ground-truthed estimates to calibrate")
    q = calibrate_q(velocities, truths, model_base)
    print(f"q = {q:.6f}  (fit on {len(velocities)} estimates)")
    if args.output:
        Path(args.output).write_text(
            f'{{"q": {q!r}, "n": {len(velocities)}}}\n', encoding="utf-8")
    return 0


def cmd_evaluate(args) -> int:
    if args.from_csv:
        rows = swio.read_report(args.from_csv)
        if not rows:
            raise RuntimeError(f"no rows in {args.from_csv}")
    else:
        volumes = _load_volumes(Path(args.input))
        missing = [v.meta.source_id for v in volumes if v.meta.ground_truth_e_pa is None]
        if missing:
            raise RuntimeError(f"volumes without ground truth: {missing[:5]}")
        rows = _estimate_rows(volumes, _model_from_args(args), _options_from_args(args),
                              args.crop_depth, args.workers or _default_workers())
    report = report_from_rows(rows)
    swio.write_report(report, args.output)
    summary_path = args.summary or str(Path(args.output).with_suffix(".summary.json"))
    swio.write_summary(report, summary_path)
    for f, s in sorted(report.per_frequency.items()):
        print(f"{f:7.1f} Hz  MAE {s.mae_mean_pa / 1e3:7.2f} +- {s.mae_std_pa / 1e3:6.2f} kPa"
              f"  RMSE {s.rmse_pa / 1e3:7.2f} kPa  valid {s.valid_fraction:.0%} of {s.n}")
    e = report.ensemble
    print(f"ensemble  MAE {e.mae_mean_pa / 1e3:7.2f} +- {e.mae_std_pa / 1e3:6.2f} kPa"
          f"  RMSE {e.rmse_pa / 1e3:7.2f} kPa  n {e.n}")
    return 0


def cmd_damping(args) -> int:
    undamped = {(v.meta.source_id, v.meta.excitation_frequency_hz): v
                for v in _load_volumes(Path(args.undamped))}
    damped = {(v.meta.source_id, v.meta.excitation_frequency_hz): v
              for v in _load_volumes(Path(args.damped))}
    keys = sorted(set(undamped) & set(damped))
    if not keys:
        raise RuntimeError("no matching (source_id, frequency) pairs between the two directories")
    pairs = [(undamped[k], damped[k]) for k in keys]
    report = damping_study(pairs, _model_from_args(args), _options_from_args(args))
    swio.write_damping_report(report, args.output)
    for f, s in sorted(report.per_frequency.items()):
        print(f"{f:7.1f} Hz  |dE| {s.mean_abs_offset_pa / 1e3:6.2f} kPa"
              f"  freq dev (damped) {s.median_freq_dev_damped_hz:6.2f} Hz"
              f"  (undamped) {s.median_freq_dev_undamped_hz:6.2f} Hz  n {s.n}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shearwave",
        description="Shear-wave elastography toolkit: synthesis, estimation, evaluation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="synthesize a benchmark suite from a JSON config")
    p.add_argument("config", help="suite config (JSON)")
    p.add_argument("outdir", help="output directory for volumes and manifest")
    _add_workers_arg(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("preprocess", help="crop, median-filter, and optionally resize volumes")
    p.add_argument("input", help="volume header file or directory")
    p.add_argument("outdir", help="output directory")
    p.add_argument("--crop-depth", type=int, default=128)
    p.add_argument("--no-crop", action="store_true", help="skip surface cropping")
    p.add_argument("--kernel", type=int, default=3, help="median kernel (0 or 1 skips)")
    p.add_argument("--resize", type=int, nargs=2, metavar=("W", "H"), default=None)
    _add_workers_arg(p)
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("estimate", help="conventional elasticity estimates to CSV")
    p.add_argument("input", help="volume header file or directory")
    p.add_argument("output", help="output CSV path")
    _add_model_args(p)
    _add_kspace_args(p)
    _add_workers_arg(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("calibrate", help="fit the material scaling factor q")
    p.add_argument("input", help="directory of ground-truthed volumes")
    p.add_argument("--output", default=None, help="optional JSON output path")
    p.add_argument("--rho", type=float, default=1000.0)
    p.add_argument("--nu", type=float, default=0.5)
    _add_kspace_args(p)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("evaluate", help="per-frequency and ensemble error report")
    p.add_argument("input", nargs="?", default=None, help="directory of ground-truthed volumes")
    p.add_argument("output", help="output CSV path")
    p.add_argument("--from-csv", default=None,
                   help="evaluate existing prediction rows instead of running the estimator")
    p.add_argument("--summary", default=None, help="summary JSON path")
    _add_model_args(p)
    _add_kspace_args(p)
    _add_workers_arg(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("damping", help="compare damped/undamped volume pairs")
    p.add_argument("--undamped", required=True, help="directory of undamped volumes")
    p.add_argument("--damped", required=True, help="directory of damped volumes")
    p.add_argument("output", help="output CSV path")
    _add_model_args(p)
    _add_kspace_args(p)
    p.set_defaults(func=cmd_damping)

    return parser


def main(argv: Iterable[str] | None = None) -> int:
    args = build_parser().parse_args(list(argv) if argv is not None else None)
    if args.command == "evaluate" and not args.from_csv and args.input is None:
        print("error: evaluate needs an input directory or --from-csv", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (RuntimeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
