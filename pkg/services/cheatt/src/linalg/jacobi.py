"""
linalg/jacobi.py
🔄 Jacobi-rotation eigensolver and one-sided Jacobi SVD
"""
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from errors import ContractError, ConvergenceError
from .dense import DenseMatrix, as_matrix, frobenius_norm

logger = logging.getLogger(__name__)

DEFAULT_MAX_SWEEPS = 100
SYMMETRY_TOLERANCE = 1e-10


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenpairs of a symmetric matrix, eigenvalues descending"""

    eigenvalues: np.ndarray
    eigenvectors: DenseMatrix  # columns are orthonormal eigenvectors

    def reconstruct(self) -> DenseMatrix:
        """U Λ Uᵀ"""
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.T


def _off_diagonal_mass(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return frobenius_norm(off)


def _rotation(app: float, aqq: float, apq: float) -> Tuple[float, float]:
    """(c, s) of the rotation that annihilates a[p, q]"""
    theta = (aqq - app) / (2.0 * apq)
    if theta == 0.0:
        t = 1.0
    elif abs(theta) > 1e150:
        t = 0.5 / theta
    else:
        t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    return c, t * c


def sym_eigen(
    s: DenseMatrix,
    tol: float = 1e-12,
    max_sweeps: int = DEFAULT_MAX_SWEEPS
) -> EigenDecomposition:
    """
    Cyclic Jacobi eigen-decomposition of a symmetric matrix

    Sweeps visit (p, q) pairs in row-major order so results are
    bit-reproducible. Iteration stops once the off-diagonal Frobenius
    mass is <= tol * max(1, ||S||_F).

    Args:
        s: Symmetric square matrix
        tol: Relative stopping tolerance
        max_sweeps: Sweep budget

    Returns:
        EigenDecomposition with descending eigenvalues

    Raises:
        ContractError: Non-square or non-symmetric input
        ConvergenceError: Budget exhausted
    """
    a = as_matrix(s, "s").copy()
    n = a.shape[0]
    if a.shape[1] != n:
        raise ContractError(f"sym_eigen needs a square matrix, got {a.shape}")
    if np.max(np.abs(a - a.T)) > SYMMETRY_TOLERANCE:
        raise ContractError("sym_eigen needs a symmetric matrix")

    # exact symmetry from here on
    a = 0.5 * (a + a.T)
    v = np.eye(n)
    threshold = tol * max(1.0, frobenius_norm(a))

    converged = _off_diagonal_mass(a) <= threshold
    sweep = 0
    while not converged and sweep < max_sweeps:
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                c, sn = _rotation(a[p, p], a[q, q], apq)

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - sn * col_q
                a[:, q] = sn * col_p + c * col_q

                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - sn * row_q
                a[q, :] = sn * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0

                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - sn * vec_q
                v[:, q] = sn * vec_p + c * vec_q

        converged = _off_diagonal_mass(a) <= threshold

    if not converged:
        raise ConvergenceError(
            f"sym_eigen did not converge in {max_sweeps} sweeps "
            f"(off-diagonal mass {_off_diagonal_mass(a):.3e})"
        )

    logger.debug(f"sym_eigen: n={n}, sweeps={sweep}")

    eigenvalues = np.diag(a).copy()
    # stable sort keeps the sweep order for ties
    order = np.argsort(-eigenvalues, kind="stable")
    return EigenDecomposition(
        eigenvalues=eigenvalues[order],
        eigenvectors=np.ascontiguousarray(v[:, order])
    )


def svd(
    m: DenseMatrix,
    tol: float = 1e-12,
    max_sweeps: int = DEFAULT_MAX_SWEEPS
) -> Tuple[DenseMatrix, np.ndarray, DenseMatrix]:
    """
    One-sided (Hestenes) Jacobi SVD

    Columns of a working copy are rotated pairwise until every pair is
    orthogonal to within tol relative to the product of their norms.

    Args:
        m: Any finite matrix
        tol: Relative orthogonality tolerance
        max_sweeps: Sweep budget

    Returns:
        U (rows x r), sigma (r,) descending, Vt (r x cols) with r = min(rows, cols)

    Raises:
        ConvergenceError: Budget exhausted
    """
    m = as_matrix(m, "m")
    rows, cols = m.shape
    if rows < cols:
        u_t, sigma, vt_t = svd(m.T, tol=tol, max_sweeps=max_sweeps)
        return vt_t.T.copy(), sigma, u_t.T.copy()

    w = m.copy()
    v = np.eye(cols)
    # columns at roundoff level of ||m|| count as zero
    negligible = (rows * np.finfo(np.float64).eps * frobenius_norm(m)) ** 2

    converged = False
    sweep = 0
    while not converged and sweep < max_sweeps:
        sweep += 1
        rotated = False
        for p in range(cols - 1):
            for q in range(p + 1, cols):
                alpha = float(w[:, p] @ w[:, p])
                beta = float(w[:, q] @ w[:, q])
                gamma = float(w[:, p] @ w[:, q])
                if gamma == 0.0 or min(alpha, beta) <= negligible:
                    continue
                if abs(gamma) <= tol * np.sqrt(alpha * beta):
                    continue
                rotated = True
                c, sn = _rotation(alpha, beta, gamma)

                col_p = w[:, p].copy()
                col_q = w[:, q].copy()
                w[:, p] = c * col_p - sn * col_q
                w[:, q] = sn * col_p + c * col_q

                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - sn * vec_q
                v[:, q] = sn * vec_p + c * vec_q
        converged = not rotated

    if not converged:
        raise ConvergenceError(f"svd did not converge in {max_sweeps} sweeps")

    logger.debug(f"svd: shape={m.shape}, sweeps={sweep}")

    sigma = np.sqrt(np.sum(w * w, axis=0))
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    w = w[:, order]
    v = v[:, order]

    u = np.zeros_like(w)
    nonzero = sigma > 0
    u[:, nonzero] = w[:, nonzero] / sigma[nonzero]

    return u, sigma, np.ascontiguousarray(v.T)
