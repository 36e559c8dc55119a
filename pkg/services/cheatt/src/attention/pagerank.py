"""
attention/pagerank.py
🔁 Damped PageRank power iteration over a row-stochastic transition matrix
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from errors import ConvergenceError, ParameterError, ShapeError
from linalg import DenseMatrix, as_matrix

logger = logging.getLogger(__name__)

FIXED_POINT_TOLERANCE = 1e-14
FIXED_POINT_MAX_ITER = 100_000
CONTRACTION_SLACK = 1e-12


@dataclass(frozen=True)
class PageRankState:
    """π^(t) together with the iteration counter and its L1 error to π*"""

    scores: np.ndarray
    iteration: int = 0
    err: float = field(default=float("nan"))

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=np.float64)
        if scores.ndim != 1 or scores.size == 0:
            raise ShapeError(f"PageRank scores must be a non-empty vector, got {scores.shape}")
        if np.any(scores < 0):
            raise ParameterError("PageRank scores must be nonnegative")
        if abs(scores.sum() - 1.0) > 1e-10:
            raise ParameterError(f"PageRank scores must sum to 1 (got {scores.sum():.12f})")
        object.__setattr__(self, "scores", scores)

    @classmethod
    def uniform(cls, n: int) -> "PageRankState":
        return cls(scores=np.full(n, 1.0 / n))


def _check_eps(eps: float):
    # eps = 1 is the full-reset case and stays legal
    if not (0.0 < eps <= 1.0):
        raise ParameterError(f"damping eps must lie in (0, 1], got {eps}")


def _check_stochastic(m: DenseMatrix) -> DenseMatrix:
    m = as_matrix(m, "transition matrix")
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"transition matrix must be square, got {m.shape}")
    if np.any(np.abs(m.sum(axis=1) - 1.0) > 1e-10):
        raise ParameterError("transition matrix rows must sum to 1")
    return m


def _step(m: DenseMatrix, scores: np.ndarray, eps: float) -> np.ndarray:
    n = scores.shape[0]
    nxt = (1.0 - eps) * (m.T @ scores) + eps / n
    # renormalize against roundoff drift
    return nxt / nxt.sum()


def pagerank_step(
    m: DenseMatrix,
    pi: PageRankState,
    eps: float,
    reference: Optional[np.ndarray] = None
) -> PageRankState:
    """
    One damped power-iteration step π ← (1−eps)·mᵀπ + eps/N

    Args:
        m: Row-stochastic transition matrix (N x N)
        pi: Current state
        eps: Damping / teleport probability in (0, 1]
        reference: Optional π* used to fill Err(t)

    Returns:
        PageRankState with iteration + 1
    """
    _check_eps(eps)
    m = _check_stochastic(m)
    if m.shape[0] != pi.scores.shape[0]:
        raise ShapeError(f"state has {pi.scores.shape[0]} nodes, matrix has {m.shape[0]}")

    scores = _step(m, pi.scores, eps)
    err = float(np.abs(scores - reference).sum()) if reference is not None else float("nan")
    return PageRankState(scores=scores, iteration=pi.iteration + 1, err=err)


def pagerank_fixed_point(
    m: DenseMatrix,
    eps: float,
    tol: float = FIXED_POINT_TOLERANCE,
    max_iter: int = FIXED_POINT_MAX_ITER
) -> np.ndarray:
    """
    π* reached when successive iterates differ by <= tol in L1

    Raises:
        ConvergenceError: If the budget runs out first
    """
    _check_eps(eps)
    m = _check_stochastic(m)
    n = m.shape[0]
    scores = np.full(n, 1.0 / n)
    for it in range(max_iter):
        nxt = _step(m, scores, eps)
        if np.abs(nxt - scores).sum() <= tol:
            logger.debug(f"PageRank fixed point after {it + 1} iterations (N={n}, eps={eps})")
            return nxt
        scores = nxt
    raise ConvergenceError(f"PageRank did not reach a fixed point in {max_iter} iterations")


def pagerank_error_curve(
    m: DenseMatrix,
    eps: float,
    t_max: int,
    start: Optional[PageRankState] = None
) -> List[float]:
    """
    Err(t) = Σ_v |π_v^(t) − π_v*| for t = 0..t_max

    Args:
        m: Row-stochastic transition matrix
        eps: Damping in (0, 1]
        t_max: Last iteration index
        start: Initial state (uniform when omitted)

    Returns:
        List of t_max + 1 errors
    """
    if t_max < 0:
        raise ParameterError(f"t_max must be >= 0, got {t_max}")
    reference = pagerank_fixed_point(m, eps)
    state = start if start is not None else PageRankState.uniform(reference.shape[0])

    curve = [float(np.abs(state.scores - reference).sum())]
    for _ in range(t_max):
        state = pagerank_step(m, state, eps, reference=reference)
        curve.append(state.err)
    return curve


def check_contraction(
    curve: List[float],
    eps: float,
    slack: float = CONTRACTION_SLACK
) -> List[int]:
    """
    Indices t where Err(t) > (1−eps)·Err(t−1) + slack

    An empty list means the geometric contraction bound held at every step.
    """
    violations = [
        t for t in range(1, len(curve))
        if curve[t] > (1.0 - eps) * curve[t - 1] + slack
    ]
    if violations:
        logger.warning(f"⚠️ Contraction bound violated at {len(violations)} step(s): {violations[:5]}")
    return violations
