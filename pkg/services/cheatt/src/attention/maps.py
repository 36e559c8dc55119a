"""
attention/maps.py
🎯 Attention maps softmax(QKᵀ/√d) and their Markov-chain certificates
"""
import logging
from dataclasses import asdict, dataclass

import numpy as np

from errors import ConvergenceError, ShapeError
from linalg import DenseMatrix, as_matrix, softmax_rows

logger = logging.getLogger(__name__)

# Below this an entry counts as a true zero rather than softmax underflow
POSITIVITY_FLOOR = 1e-300
STOCHASTIC_TOLERANCE = 1e-10


@dataclass(frozen=True)
class AttentionMap:
    """
    Square token-to-token transition matrix

    Construction only checks shape and finiteness; the Markov properties
    are certified by verify_markov_conditions (an identity matrix is a
    legal AttentionMap that simply fails irreducibility).
    """

    matrix: DenseMatrix

    def __post_init__(self):
        m = as_matrix(self.matrix, "attention matrix")
        if m.shape[0] != m.shape[1]:
            raise ShapeError(f"attention map must be square, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ShapeError("attention map contains non-finite entries")
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def is_valid(self, tol: float = STOCHASTIC_TOLERANCE) -> bool:
        """Rows sum to 1 and every entry is strictly positive"""
        rows_ok = np.all(np.abs(self.matrix.sum(axis=1) - 1.0) <= tol)
        return bool(rows_ok and self.matrix.min() > POSITIVITY_FLOOR)


@dataclass(frozen=True)
class MarkovReport:
    """Outcome of the stochasticity / irreducibility / aperiodicity checks"""

    is_stochastic: bool
    min_entry: float
    is_irreducible: bool
    is_aperiodic: bool
    spectral_gap_estimate: float

    def to_dict(self) -> dict:
        return asdict(self)


def compute_attention(q: DenseMatrix, k: DenseMatrix, d: int) -> AttentionMap:
    """
    Scaled dot-product attention map softmax(q kᵀ / √d)

    Args:
        q: Queries (n x d)
        k: Keys (n x d)
        d: Head dimension

    Returns:
        AttentionMap (n x n)

    Raises:
        ShapeError: If q, k are not both n x d
    """
    q = as_matrix(q, "q")
    k = as_matrix(k, "k")
    if q.shape != k.shape or q.shape[1] != d:
        raise ShapeError(f"compute_attention: q {q.shape}, k {k.shape}, d={d}")
    return AttentionMap(softmax_rows(q @ k.T, np.sqrt(d)))


def stationary_distribution(
    m: DenseMatrix,
    tol: float = 1e-14,
    max_iter: int = 100_000
) -> np.ndarray:
    """
    Left Perron vector π of a row-stochastic matrix (πᵀ m = πᵀ, Σπ = 1)

    Plain power iteration from the uniform vector until successive
    iterates differ by <= tol in L1.
    """
    m = as_matrix(m, "m")
    n = m.shape[0]
    pi = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        nxt = m.T @ pi
        nxt /= nxt.sum()
        if np.abs(nxt - pi).sum() <= tol:
            return nxt
        pi = nxt
    raise ConvergenceError(f"stationary distribution did not converge in {max_iter} iterations")


def _power_rate(apply, n: int, iterations: int, window: int, seed: int) -> float:
    """Geometric-mean growth rate of ||B^k x|| over the last `window` steps"""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n)
    x /= np.linalg.norm(x)
    log_ratios = []
    for _ in range(iterations):
        y = apply(x)
        norm = np.linalg.norm(y)
        if norm == 0.0:
            return 0.0
        log_ratios.append(np.log(norm))
        x = y / norm
    tail = log_ratios[-window:]
    return float(np.exp(np.mean(tail)))


def second_eigenvalue_modulus(
    m: DenseMatrix,
    iterations: int = 1000,
    window: int = 200,
    seed: int = 0
) -> float:
    """
    |λ₂| of a row-stochastic matrix

    Deflates the Perron pair (1, π) via B = m - 1 πᵀ and estimates the
    spectral radius of B by power iteration. The geometric mean over a
    trailing window handles complex-conjugate λ₂ pairs.
    """
    m = as_matrix(m, "m")
    n = m.shape[0]
    if n == 1:
        return 0.0
    pi = stationary_distribution(m)
    deflated = m - np.outer(np.ones(n), pi)
    return _power_rate(lambda x: deflated @ x, n, iterations, window, seed)


def spectral_radius_estimate(
    m: DenseMatrix,
    iterations: int = 500,
    window: int = 100,
    seed: int = 0
) -> float:
    """Spectral radius by power iteration (exact limit for nonnegative m)"""
    m = as_matrix(m, "m")
    return _power_rate(lambda x: m @ x, m.shape[0], iterations, window, seed)


def verify_markov_conditions(a: AttentionMap, eps: float = STOCHASTIC_TOLERANCE) -> MarkovReport:
    """
    Certify the three PageRank convergence conditions on an attention map

    Strict positivity is a sufficient certificate for both irreducibility
    (complete connectivity) and aperiodicity (self-loops on every state).

    Args:
        a: Attention map
        eps: Row-sum tolerance for stochasticity

    Returns:
        MarkovReport
    """
    m = a.matrix
    row_sums = m.sum(axis=1)
    is_stochastic = bool(np.all(np.abs(row_sums - 1.0) <= eps))
    min_entry = float(m.min())
    positive = min_entry > POSITIVITY_FLOOR

    if is_stochastic and positive:
        lambda_2 = second_eigenvalue_modulus(m)
        gap = float(np.clip(1.0 - lambda_2, 0.0, 1.0))
    else:
        # no Perron gap guarantee without stochastic positivity
        gap = 0.0

    report = MarkovReport(
        is_stochastic=is_stochastic,
        min_entry=min_entry,
        is_irreducible=positive,
        is_aperiodic=positive,
        spectral_gap_estimate=gap
    )

    if not (is_stochastic and positive):
        logger.warning(
            f"⚠️ Attention map fails Markov conditions: stochastic={is_stochastic}, "
            f"min_entry={min_entry:.3e}"
        )

    return report
