"""
Linalg Module - Dense real kernel shared by every other module
"""
from .dense import (
    DenseMatrix,
    as_matrix,
    ensure_finite,
    frobenius_norm,
    matmul,
    softmax_rows
)
from .jacobi import EigenDecomposition, svd, sym_eigen

__all__ = [
    'DenseMatrix',
    'EigenDecomposition',
    'as_matrix',
    'ensure_finite',
    'frobenius_norm',
    'matmul',
    'softmax_rows',
    'svd',
    'sym_eigen'
]
