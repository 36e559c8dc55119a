"""
Polyfilter Module - Matrix-polynomial graph filters over attention maps
"""
from .base import PolynomialBasis
from .bases import ChebyshevBasis, JacobiBasis, LegendreBasis, PowerBasis
from .factory import BasisFactory
from .filter import (
    DEFAULT_ORDER,
    PolyFilter,
    apply_filter,
    basis_term_apply,
    check_spectral_domain,
    coefficient_decay_profile,
    combine_terms,
    default_coefficients,
    spectral_response,
    to_monomial,
    truncation_order
)

__all__ = [
    'BasisFactory',
    'ChebyshevBasis',
    'DEFAULT_ORDER',
    'JacobiBasis',
    'LegendreBasis',
    'PolyFilter',
    'PolynomialBasis',
    'PowerBasis',
    'apply_filter',
    'basis_term_apply',
    'check_spectral_domain',
    'coefficient_decay_profile',
    'combine_terms',
    'default_coefficients',
    'spectral_response',
    'to_monomial',
    'truncation_order'
]
