"""
attention/convergence.py
📉 Convergence of A^k V by iterated left multiplication
"""
import logging
from typing import List, Sequence

import numpy as np

from errors import ShapeError
from linalg import DenseMatrix, as_matrix, frobenius_norm
from .maps import AttentionMap

logger = logging.getLogger(__name__)


def power_convergence_curve(
    a: AttentionMap,
    v: DenseMatrix,
    k_max: int,
    relative: bool = False
) -> List[float]:
    """
    δ_k = ||A^k V − A^(k−1) V||_F for k = 1..k_max

    A^k is never formed; each step costs one n x n by n x d product.

    Args:
        a: Attention map (n x n)
        v: Value block (n x d)
        k_max: Number of steps
        relative: Divide every δ_k by ||AV||_F (zero AV leaves the curve absolute)

    Returns:
        List of k_max differences
    """
    v = as_matrix(v, "v")
    if v.shape[0] != a.n:
        raise ShapeError(f"v has {v.shape[0]} rows, attention map is {a.n}x{a.n}")
    if k_max < 1:
        raise ShapeError(f"k_max must be >= 1, got {k_max}")

    m = a.matrix
    prev = v
    curve = []
    norm_av = None
    for _ in range(k_max):
        cur = m @ prev
        if norm_av is None:
            norm_av = frobenius_norm(cur)
        curve.append(frobenius_norm(cur - prev))
        prev = cur

    if relative and norm_av > 0.0:
        curve = [delta / norm_av for delta in curve]
    return curve


def empirical_decay_rate(curve: Sequence[float], floor: float = 1e-10, tail: int = 10) -> float:
    """
    Late-stage per-step decay ratio of a convergence curve

    Uses the geometric mean of δ_k / δ_(k−1) over the last `tail` steps
    whose values are still above the roundoff floor.

    Returns:
        Ratio in [0, ∞); 0.0 when the curve hits the floor almost at once
    """
    values = np.asarray(curve, dtype=np.float64)
    above = np.flatnonzero(values > floor)
    if above.size < 2:
        return 0.0
    # contiguous prefix above the floor
    last = above[0]
    for idx in above[1:]:
        if idx != last + 1:
            break
        last = idx
    usable = values[: last + 1]
    if usable.size < 2:
        return 0.0
    window = usable[-(tail + 1):]
    ratios = window[1:] / window[:-1]
    return float(np.exp(np.mean(np.log(ratios))))
