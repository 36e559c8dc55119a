"""
Attention Module - Attention maps, Markov checks, PageRank and A^kV convergence
"""
from .convergence import empirical_decay_rate, power_convergence_curve
from .maps import (
    AttentionMap,
    MarkovReport,
    compute_attention,
    second_eigenvalue_modulus,
    spectral_radius_estimate,
    stationary_distribution,
    verify_markov_conditions
)
from .pagerank import (
    PageRankState,
    check_contraction,
    pagerank_error_curve,
    pagerank_fixed_point,
    pagerank_step
)

__all__ = [
    'AttentionMap',
    'MarkovReport',
    'PageRankState',
    'check_contraction',
    'compute_attention',
    'empirical_decay_rate',
    'pagerank_error_curve',
    'pagerank_fixed_point',
    'pagerank_step',
    'power_convergence_curve',
    'second_eigenvalue_modulus',
    'spectral_radius_estimate',
    'stationary_distribution',
    'verify_markov_conditions'
]
