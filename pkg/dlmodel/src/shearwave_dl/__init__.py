"""Spatio-temporal deep-learning elasticity regressor.

Consumes the shearwave toolkit's volume files and manifests, trains a
densely connected 3D CNN on 16-frame windows, and writes predictions in the
shared report CSV format.
"""

from .config import ExperimentConfig
from .crossval import (
    CrossValPlan,
    FoldSpec,
    check_no_leakage,
    outer_test_partition,
    plan_nested_cv,
    run_nested_cv,
)
from .data import (
    VolumeSample,
    cut_window,
    load_sample,
    load_suite,
    random_window,
    standardize,
    window_start_count,
)
from .formats import (
    ManifestEntry,
    PredictionRow,
    Volume,
    read_manifest,
    read_volume,
    write_predictions,
)
from .model import ModelConfig, WaveRegressor, build_model, parameter_count
from .train import TrainResult, predict_volume, train

__version__ = "0.1.0"
