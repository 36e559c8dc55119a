"""
Training Module - Experiment configuration, runner, callbacks, sweeps
"""
from .callbacks import (
    BestParamsCallback,
    CallbackList,
    EarlyStoppingCallback,
    LoggingCallback,
    MetricTrackerCallback,
    TrainingCallback
)
from .experiment import (
    DataConfig,
    ExperimentConfig,
    TrainingConfig,
    golden_config,
    parse_override_value
)
from .sweep import (
    AXES,
    SweepResult,
    default_axis_values,
    format_score,
    oversmoothing_direction,
    sweep,
    timing_overhead
)
from .trainer import ExperimentRunner, run_experiment, supervised_loss

__all__ = [
    'AXES',
    'BestParamsCallback',
    'CallbackList',
    'DataConfig',
    'EarlyStoppingCallback',
    'ExperimentConfig',
    'ExperimentRunner',
    'LoggingCallback',
    'MetricTrackerCallback',
    'SweepResult',
    'TrainingCallback',
    'TrainingConfig',
    'default_axis_values',
    'format_score',
    'golden_config',
    'oversmoothing_direction',
    'parse_override_value',
    'run_experiment',
    'supervised_loss',
    'sweep',
    'timing_overhead'
]
