"""
polyfilter/bases.py
📐 Concrete polynomial bases: Power, Chebyshev, Legendre, Jacobi
"""
import logging
from typing import Any, Dict, Tuple

from errors import ParameterError
from .base import PolynomialBasis

logger = logging.getLogger(__name__)


class PowerBasis(PolynomialBasis):
    """Monomials P_k = x^k (the plain graph filter Σ w_k A^k)"""

    name = "power"

    def recurrence(self, k: int) -> Tuple[float, float, float]:
        return 1.0, 0.0, 0.0


class ChebyshevBasis(PolynomialBasis):
    """First-kind Chebyshev: T_k = 2x T_(k-1) - T_(k-2), T_1 = x"""

    name = "chebyshev"

    def recurrence(self, k: int) -> Tuple[float, float, float]:
        if k == 1:
            return 1.0, 0.0, 0.0
        return 2.0, 0.0, 1.0


class LegendreBasis(PolynomialBasis):
    """Classical Legendre normalization P_k(1) = 1: k P_k = (2k-1) x P_(k-1) - (k-1) P_(k-2)"""

    name = "legendre"

    def recurrence(self, k: int) -> Tuple[float, float, float]:
        return (2.0 * k - 1.0) / k, 0.0, (k - 1.0) / k


class JacobiBasis(PolynomialBasis):
    """
    Monic Jacobi polynomials for weight (1-x)^a (1+x)^b

    P_k = (x - b_(k-1)) P_(k-1) - a_(k-1) P_(k-2) with

        b_m = (b² - a²) / ((2m+a+b)(2m+a+b+2))
        a_m = 4m(m+a)(m+b)(m+a+b) / ((2m+a+b)² (2m+a+b+1)(2m+a+b-1))

    P_1 = x - (b-a)/(a+b+2), so P_1(A) = A only when a == b.
    """

    name = "jacobi"

    DEFAULT_A = 1.0
    DEFAULT_B = 1.0

    def __init__(self, config: Dict[str, Any] = None):
        config = dict(config or {})
        a = float(config.get('a', self.DEFAULT_A))
        b = float(config.get('b', self.DEFAULT_B))
        if a <= -1.0 or b <= -1.0:
            raise ParameterError(f"Jacobi parameters must be > -1, got a={a}, b={b}")
        super().__init__({'a': a, 'b': b})
        self.a = a
        self.b = b

    def _shift(self, m: int) -> float:
        a, b = self.a, self.b
        if m == 0:
            return (b - a) / (a + b + 2.0)
        s = 2.0 * m + a + b
        return (b * b - a * a) / (s * (s + 2.0))

    def _weight(self, m: int) -> float:
        a, b = self.a, self.b
        if m == 1:
            # (m+a+b) cancels against (2m+a+b-1); keeps a+b = -1 finite
            return 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) ** 2 * (3.0 + a + b))
        s = 2.0 * m + a + b
        return 4.0 * m * (m + a) * (m + b) * (m + a + b) / (s * s * (s + 1.0) * (s - 1.0))

    def recurrence(self, k: int) -> Tuple[float, float, float]:
        beta = -self._shift(k - 1)
        gamma = self._weight(k - 1) if k > 1 else 0.0
        return 1.0, beta, gamma
