"""Shear-wave elastography toolkit.

Synthesizes spatio-temporal wave-field volumes with known ground-truth
elasticity, estimates phase velocity with a k-space pipeline, maps velocity
to Young's modulus with a linear material model, and evaluates estimators
with MAE/RMSE, calibration, ensemble, and damping analyses.
"""

from .core import (
    DEFAULT_MODEL,
    VELOCITY_BAND_MPS,
    AcquisitionMeta,
    MaterialModel,
    VelocityEstimate,
    WaveFieldVolume,
    mae,
    rmse,
    velocity_from_youngs_modulus,
    youngs_modulus_from_velocity,
)
from .evaluation import (
    DampingReport,
    DatasetRow,
    EvaluationReport,
    calibrate_q,
    damping_study,
    evaluate_suite,
    report_from_rows,
)
from .kspace import (
    KspaceOptions,
    SpaceTimeMap,
    dominant_frequency,
    ensemble_estimate,
    estimate_elasticity_conventional,
    kspace_velocity,
    space_time_map,
)
from .preprocess import (
    crop_below_surface,
    detect_surface,
    median_filter_3d,
    preprocess_volume,
    resize_frames,
)
from .synth import (
    PAPER_GEOMETRY,
    Geometry,
    SceneSpec,
    SuiteConfig,
    generate_benchmark_suite,
    generate_damping_pair,
    generate_wavefield,
    noise_sigma_for_snr,
)

__version__ = "0.1.0"
