"""
Evaluation Module - Metrics
"""
from .metrics import (
    aggregate_metrics,
    auroc,
    calculate_all_metrics,
    calculate_mae,
    calculate_rmse,
    primary_metric_name,
    r_squared
)

__all__ = [
    'aggregate_metrics',
    'auroc',
    'calculate_all_metrics',
    'calculate_mae',
    'calculate_rmse',
    'primary_metric_name',
    'r_squared'
]
