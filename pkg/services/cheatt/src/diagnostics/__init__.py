"""
Diagnostics Module - Oversmoothing and convergence forensics
"""
from .oversmoothing import (
    SINGULAR_VALUE_THRESHOLD,
    OversmoothingComparison,
    attention_spectrum,
    batch_feature_metrics,
    compare_oversmoothing,
    final_layer_statistics,
    high_frequency_ratio,
    normalized_singular_values,
    singular_value_cutoff,
    token_cosine_similarity
)
from .report import (
    ConvergenceReport,
    LayerMetrics,
    OversmoothingReport,
    attention_convergence_report,
    head_values,
    layer_report
)

__all__ = [
    'SINGULAR_VALUE_THRESHOLD',
    'ConvergenceReport',
    'LayerMetrics',
    'OversmoothingComparison',
    'OversmoothingReport',
    'attention_convergence_report',
    'attention_spectrum',
    'batch_feature_metrics',
    'compare_oversmoothing',
    'final_layer_statistics',
    'head_values',
    'high_frequency_ratio',
    'layer_report',
    'normalized_singular_values',
    'singular_value_cutoff',
    'token_cosine_similarity'
]
