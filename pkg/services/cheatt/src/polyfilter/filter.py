"""
polyfilter/filter.py
🎛️ Matrix-polynomial attention filters H = Σ α_k P_k(A)
"""
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from attention import AttentionMap, power_convergence_curve, spectral_radius_estimate
from errors import ContractError, ParameterError, ShapeError
from linalg import DenseMatrix, as_matrix
from .base import PolynomialBasis
from .factory import BasisFactory

logger = logging.getLogger(__name__)

DEFAULT_ORDER = 5
MIN_ORDER = 0
MAX_ORDER = 32
SPECTRAL_RADIUS_SLACK = 1e-8


def default_coefficients(order: int) -> np.ndarray:
    """α_0 = 0.5, α_1 = 1, α_k = 2^-k for k >= 2"""
    coeffs = np.array([2.0 ** (-k) for k in range(order + 1)])
    coeffs[0] = 0.5
    if order >= 1:
        coeffs[1] = 1.0
    return coeffs


@dataclass
class PolyFilter:
    """
    Basis + truncation order j + coefficients α_0..α_j

    Coefficients are sign-unconstrained.
    """

    basis: PolynomialBasis
    order: int
    coeffs: np.ndarray

    def __post_init__(self):
        if isinstance(self.basis, str):
            self.basis = BasisFactory.create(self.basis)
        if not (MIN_ORDER <= int(self.order) <= MAX_ORDER):
            raise ParameterError(f"filter order must be in [{MIN_ORDER}, {MAX_ORDER}], got {self.order}")
        self.order = int(self.order)
        coeffs = np.asarray(self.coeffs, dtype=np.float64).reshape(-1)
        if coeffs.shape[0] != self.order + 1:
            raise ShapeError(
                f"filter of order {self.order} needs {self.order + 1} coefficients, got {coeffs.shape[0]}"
            )
        if not np.all(np.isfinite(coeffs)):
            raise ParameterError("filter coefficients must be finite")
        self.coeffs = coeffs

    @classmethod
    def default(cls, basis: Union[str, PolynomialBasis] = "chebyshev", order: int = DEFAULT_ORDER) -> "PolyFilter":
        """Initial filter: vanilla attention plus a small identity skip"""
        return cls(basis=basis, order=order, coeffs=default_coefficients(order))

    @classmethod
    def vanilla(cls, basis: Union[str, PolynomialBasis] = "chebyshev", order: int = 1) -> "PolyFilter":
        """α = (0, 1, 0, ...): reproduces AV"""
        coeffs = np.zeros(order + 1)
        if order >= 1:
            coeffs[1] = 1.0
        return cls(basis=basis, order=order, coeffs=coeffs)

    @classmethod
    def identity(cls, basis: Union[str, PolynomialBasis] = "chebyshev", order: int = 1) -> "PolyFilter":
        """α = (1, 0, ...): returns V"""
        coeffs = np.zeros(order + 1)
        coeffs[0] = 1.0
        return cls(basis=basis, order=order, coeffs=coeffs)

    def with_coeffs(self, coeffs) -> "PolyFilter":
        return PolyFilter(basis=self.basis, order=self.order, coeffs=coeffs)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'basis': self.basis.get_basis_info(),
            'order': self.order,
            'coeffs': self.coeffs.tolist()
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PolyFilter":
        return cls(
            basis=BasisFactory.from_info(data['basis']),
            order=data['order'],
            coeffs=data['coeffs']
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyFilter):
            return NotImplemented
        return (
            self.basis == other.basis
            and self.order == other.order
            and np.array_equal(self.coeffs, other.coeffs)
        )


def _check_block(a: AttentionMap, v: DenseMatrix) -> DenseMatrix:
    v = as_matrix(v, "v")
    if v.shape[0] != a.n:
        raise ShapeError(f"v has {v.shape[0]} rows, attention map is {a.n}x{a.n}")
    return v


def check_spectral_domain(a: AttentionMap, slack: float = SPECTRAL_RADIUS_SLACK) -> float:
    """
    Assert spectral radius <= 1 + slack so no rescaling is needed

    The max-row-sum bound settles every stochastic map without iterating.

    Returns:
        The bound that was accepted

    Raises:
        ContractError: If the spectral radius exceeds 1 + slack
    """
    inf_norm = float(np.abs(a.matrix).sum(axis=1).max())
    if inf_norm <= 1.0 + slack:
        return inf_norm
    radius = spectral_radius_estimate(np.abs(a.matrix))
    if radius > 1.0 + slack:
        raise ContractError(f"attention map spectral radius {radius:.6f} exceeds 1 (no rescaling applied)")
    return radius


def basis_term_apply(
    a: AttentionMap,
    v: DenseMatrix,
    basis: Union[str, PolynomialBasis],
    order: int
) -> List[DenseMatrix]:
    """
    [P_0(A)V, ..., P_j(A)V] by the basis recurrence on n x d blocks

    Args:
        a: Attention map (n x n)
        v: Value block (n x d)
        basis: Basis instance or registered name
        order: Highest degree j

    Returns:
        list of j + 1 blocks (n x d)
    """
    v = _check_block(a, v)
    if order < 0:
        raise ParameterError(f"order must be >= 0, got {order}")
    if isinstance(basis, str):
        basis = BasisFactory.create(basis)
    return basis.apply_terms(a.matrix, v, order)


def combine_terms(terms: Sequence[np.ndarray], coeffs: np.ndarray) -> np.ndarray:
    """Σ α_k terms[k], accumulated in index order"""
    out = coeffs[0] * terms[0]
    for alpha, term in zip(coeffs[1:], terms[1:]):
        out = out + alpha * term
    return out


def apply_filter(
    a: AttentionMap,
    v: DenseMatrix,
    f: PolyFilter,
    check_domain: bool = True
) -> DenseMatrix:
    """
    HV = Σ_k α_k P_k(A) V

    Cost O(j n² d): j block products, never an n x n matrix power.

    Args:
        a: Attention map
        v: Value block (n x d)
        f: Polynomial filter
        check_domain: Verify spectral radius <= 1 first

    Returns:
        Filtered block (n x d)
    """
    if check_domain:
        check_spectral_domain(a)
    terms = basis_term_apply(a, v, f.basis, f.order)
    return combine_terms(terms, f.coeffs)


def truncation_order(a: AttentionMap, v: DenseMatrix, bound: float, k_max: int) -> int:
    """
    Smallest j <= k_max with ||A^(j+1)V − A^jV||_F <= bound

    Returns k_max when no j qualifies; the caller decides what to do.
    """
    if bound <= 0:
        raise ParameterError(f"bound must be positive, got {bound}")
    v = _check_block(a, v)
    if k_max < 1:
        return 0
    curve = power_convergence_curve(a, v, k_max)
    for j, delta in enumerate(curve):
        if delta <= bound:
            return j
    logger.debug(f"truncation_order: no j <= {k_max} reaches bound {bound:.3e}")
    return k_max


def spectral_response(f: PolyFilter, lambda_grid) -> np.ndarray:
    """
    Scalar response g(λ) = Σ α_k P_k(λ) on a grid

    Points outside [-1, 1] are still evaluated but logged as a domain
    warning (Chebyshev terms grow without bound there).
    """
    grid = np.asarray(lambda_grid, dtype=np.float64)
    outside = np.abs(grid) > 1.0 + SPECTRAL_RADIUS_SLACK
    if np.any(outside):
        logger.warning(
            f"⚠️ spectral_response: {int(outside.sum())} grid point(s) outside [-1, 1] "
            f"for {f.basis.name} basis"
        )
    terms = f.basis.evaluate(grid, f.order)
    return combine_terms(terms, f.coeffs)


def to_monomial(f: PolyFilter) -> np.ndarray:
    """Monomial coefficients (increasing powers) of g = Σ α_k P_k"""
    return f.coeffs @ f.basis.to_monomial(f.order)


def coefficient_decay_profile(
    filters: Sequence[Union[PolyFilter, np.ndarray]],
    names: Optional[Sequence[str]] = None
) -> Dict[str, List[float]]:
    """
    |α_k| per order for each layer's filter, for qualitative inspection

    Args:
        filters: One filter (or raw coefficient vector) per layer
        names: Optional layer names (default layer0, layer1, ...)

    Returns:
        dict: layer name -> [|α_0|, ..., |α_j|]
    """
    names = list(names) if names is not None else [f"layer{i}" for i in range(len(filters))]
    if len(names) != len(filters):
        raise ShapeError(f"{len(names)} names for {len(filters)} filters")
    profile = {}
    for name, f in zip(names, filters):
        coeffs = f.coeffs if isinstance(f, PolyFilter) else np.asarray(f, dtype=np.float64)
        profile[name] = np.abs(coeffs).tolist()
    return profile
