"""
linalg/dense.py
🧮 Dense matrix kernel: product, row softmax, Frobenius norm
"""
import numpy as np
from numpy.typing import NDArray

from errors import NonFiniteError, ParameterError, ShapeError

# Row-major float64 2-D array
DenseMatrix = NDArray[np.float64]

# Smallest positive normal double; softmax entries never go below this
SOFTMAX_FLOOR = np.finfo(np.float64).tiny


def as_matrix(m, name: str = "matrix") -> DenseMatrix:
    """
    Coerce input to a C-contiguous float64 2-D array

    Raises:
        ShapeError: If input is not 2-D or has an empty dimension
    """
    arr = np.ascontiguousarray(m, dtype=np.float64)
    if arr.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ShapeError(f"{name} must have positive rows and cols, got {arr.shape}")
    return arr


def ensure_finite(m: np.ndarray, op: str) -> np.ndarray:
    """Raise NonFiniteError if an op result contains NaN/Inf"""
    if not np.all(np.isfinite(m)):
        raise NonFiniteError(f"{op} produced non-finite values")
    return m


def matmul(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    """
    Standard matrix product a @ b

    Raises:
        ShapeError: If a.cols != b.rows
    """
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"matmul: {a.shape} x {b.shape} (inner dims differ)")
    return ensure_finite(a @ b, "matmul")


def softmax_rows(m: DenseMatrix, scale: float = 1.0) -> DenseMatrix:
    """
    Row-wise softmax of m / scale, stabilized by row-max subtraction

    Works on any array whose last axis holds the logits, so batched
    (B, n, n) score tensors go through the same code path.

    Args:
        m: Logits
        scale: Positive divisor (sqrt(d) for scaled dot-product attention)

    Returns:
        Strictly positive array whose rows sum to 1

    Raises:
        ParameterError: scale <= 0
    """
    if scale <= 0:
        raise ParameterError(f"softmax scale must be positive, got {scale}")
    z = np.asarray(m, dtype=np.float64) / scale
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    # underflowed entries would break strict positivity
    e = np.maximum(e, SOFTMAX_FLOOR)
    return e / e.sum(axis=-1, keepdims=True)


def frobenius_norm(m: DenseMatrix) -> float:
    """sqrt of the sum of squared entries"""
    m = np.asarray(m, dtype=np.float64)
    return float(np.sqrt(np.sum(m * m)))
