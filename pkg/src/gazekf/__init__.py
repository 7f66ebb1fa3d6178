"""Extended Kalman filter smoothing for noisy time series (eye-gaze traces),
with a moving-average baseline and an RMSE evaluation harness."""

from .ekf import (
    FilterConfig,
    FilterNumericsError,
    StepRecord,
    initial_state_from_measurement,
    numerical_jacobian,
    predict,
    run_filter,
    step,
    update,
)
from .gazeio import (
    GazeSample,
    TimedSeries,
    emit_gaze_csv,
    ingest_gaze_csv,
    to_per_axis_series,
)
from .metrics import RmseReport, nis, nis_value, rmse
from .models import (
    MeasurementModel,
    ProcessModel,
    StateEstimate,
    make_constant_velocity_model,
    make_identity_measurement,
    make_pendulum_model,
)
from .sma import SmaConfig, sma_filter
from .synth import (
    SynthConfig,
    SynthDataset,
    generate_synthetic,
    read_dataset_csv,
    write_dataset_csv,
)

__all__ = [
    "FilterConfig",
    "FilterNumericsError",
    "GazeSample",
    "MeasurementModel",
    "ProcessModel",
    "RmseReport",
    "SmaConfig",
    "StateEstimate",
    "StepRecord",
    "SynthConfig",
    "SynthDataset",
    "TimedSeries",
    "emit_gaze_csv",
    "generate_synthetic",
    "ingest_gaze_csv",
    "initial_state_from_measurement",
    "make_constant_velocity_model",
    "make_identity_measurement",
    "make_pendulum_model",
    "nis",
    "nis_value",
    "numerical_jacobian",
    "predict",
    "read_dataset_csv",
    "rmse",
    "run_filter",
    "sma_filter",
    "step",
    "to_per_axis_series",
    "update",
    "write_dataset_csv",
]

__version__ = "0.1.0"
