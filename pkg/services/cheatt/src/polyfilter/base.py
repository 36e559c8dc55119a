"""
polyfilter/base.py
🧠 Base Polynomial Basis Interface (Strategy Pattern)
"""
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Tuple

import numpy as np


class PolynomialBasis(ABC):
    """
    Abstract base class cho polynomial bases

    Every basis is described by one three-term recurrence

        P_0 = 1
        P_k = (alpha_k x + beta_k) P_(k-1) - gamma_k P_(k-2),   k >= 1

    with P_(-1) = 0. The same coefficients drive the scalar evaluation
    (spectral response), the block evaluation on n x d value matrices and
    the reverse-mode adjoint in the autodiff tape.
    """

    name: str = "base"

    def __init__(self, config: Dict[str, Any] = None):
        """
        Args:
            config: Basis parameters (only Jacobi uses any)
        """
        self.config = dict(config or {})

    @abstractmethod
    def recurrence(self, k: int) -> Tuple[float, float, float]:
        """
        (alpha_k, beta_k, gamma_k) of the k-th step, k >= 1

        gamma_1 multiplies P_(-1) = 0 and is ignored.
        """
        pass

    def evaluate(self, x, order: int) -> List[np.ndarray]:
        """
        Scalar values [P_0(x), ..., P_order(x)] at every point of x

        Args:
            x: Points (any shape)
            order: Highest degree j

        Returns:
            list of j + 1 arrays shaped like x
        """
        x = np.asarray(x, dtype=np.float64)
        terms = [np.ones_like(x)]
        prev = np.zeros_like(x)
        for k in range(1, order + 1):
            alpha, beta, gamma = self.recurrence(k)
            nxt = alpha * x * terms[-1] + beta * terms[-1]
            if k > 1:
                nxt = nxt - gamma * prev
            prev = terms[-1]
            terms.append(nxt)
        return terms

    def apply_terms(self, matrix: np.ndarray, v: np.ndarray, order: int) -> List[np.ndarray]:
        """
        Blocks [P_0(A)V, ..., P_order(A)V] without forming P_k(A)

        Works on stacked inputs: matrix (..., n, n), v (..., n, d).
        """
        terms = [v]
        prev = None
        for k in range(1, order + 1):
            alpha, beta, gamma = self.recurrence(k)
            cur = terms[-1]
            nxt = alpha * np.matmul(matrix, cur)
            if beta != 0.0:
                nxt = nxt + beta * cur
            if k > 1 and gamma != 0.0:
                nxt = nxt - gamma * prev
            prev = cur
            terms.append(nxt)
        return terms

    def to_monomial(self, order: int) -> np.ndarray:
        """
        Monomial coefficients of P_0..P_order

        Returns:
            (order + 1) x (order + 1) array; row k holds P_k's coefficients
            in increasing powers of x
        """
        size = order + 1
        table = np.zeros((size, size))
        table[0, 0] = 1.0
        for k in range(1, size):
            alpha, beta, gamma = self.recurrence(k)
            row = np.zeros(size)
            row[1:] += alpha * table[k - 1, :-1]
            row += beta * table[k - 1]
            if k > 1:
                row -= gamma * table[k - 2]
            table[k] = row
        return table

    def get_basis_info(self) -> Dict[str, Any]:
        """
        Get info về basis

        Returns:
            dict: name + parameters
        """
        return {'name': self.name, 'params': dict(self.config)}

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolynomialBasis):
            return NotImplemented
        return self.get_basis_info() == other.get_basis_info()

    def __hash__(self) -> int:
        return hash((self.name, tuple(sorted(self.config.items()))))

    def __repr__(self) -> str:
        if self.config:
            params = ', '.join(f"{k}={v}" for k, v in sorted(self.config.items()))
            return f"{self.__class__.__name__}({params})"
        return f"{self.__class__.__name__}()"
