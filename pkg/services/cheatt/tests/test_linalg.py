"""
tests/test_linalg.py
"""
import numpy as np
import pytest

from errors import ContractError, NonFiniteError, ParameterError, ShapeError
from linalg import as_matrix, frobenius_norm, matmul, softmax_rows, svd, sym_eigen
from linalg.dense import SOFTMAX_FLOOR


class TestDense:

    def test_matmul_matches_numpy(self, rng):
        a = rng.standard_normal((3, 5))
        b = rng.standard_normal((5, 2))
        np.testing.assert_allclose(matmul(a, b), a @ b, rtol=0, atol=1e-14)

    def test_matmul_inner_dimension_mismatch(self):
        with pytest.raises(ShapeError):
            matmul(np.ones((2, 3)), np.ones((2, 3)))

    def test_matmul_overflow_is_non_finite(self):
        with np.errstate(over="ignore"):
            with pytest.raises(NonFiniteError):
                matmul([[1e200]], [[1e200]])

    def test_as_matrix_rejects_vectors_and_empty(self):
        with pytest.raises(ShapeError):
            as_matrix(np.ones(3))
        with pytest.raises(ShapeError):
            as_matrix(np.ones((0, 3)))

    def test_frobenius_norm(self):
        assert frobenius_norm([[3.0, 4.0]]) == 5.0

    def test_softmax_rows_stochastic_and_positive(self, rng):
        p = softmax_rows(rng.standard_normal((6, 6)) * 10)
        np.testing.assert_allclose(p.sum(axis=1), 1.0, atol=1e-12)
        assert p.min() > 0

    def test_softmax_underflow_stays_positive(self):
        p = softmax_rows(np.array([[0.0, -1e6]]))
        assert p[0, 1] >= SOFTMAX_FLOOR
        assert p[0, 0] == pytest.approx(1.0)

    def test_softmax_uniform_row(self):
        np.testing.assert_allclose(softmax_rows(np.zeros((2, 4))), 0.25)

    @pytest.mark.parametrize("scale", [0.0, -2.0])
    def test_softmax_scale_must_be_positive(self, scale):
        with pytest.raises(ParameterError):
            softmax_rows(np.zeros((2, 2)), scale=scale)


class TestSymEigen:

    def test_reconstruction_and_order(self, rng):
        x = rng.standard_normal((6, 6))
        s = x + x.T
        eig = sym_eigen(s)
        np.testing.assert_allclose(eig.reconstruct(), s, atol=1e-10)
        assert np.all(np.diff(eig.eigenvalues) <= 0)
        np.testing.assert_allclose(eig.eigenvalues, np.linalg.eigvalsh(s)[::-1], atol=1e-10)

    def test_eigenvectors_orthonormal(self, rng):
        x = rng.standard_normal((5, 5))
        u = sym_eigen(x @ x.T).eigenvectors
        np.testing.assert_allclose(u.T @ u, np.eye(5), atol=1e-10)

    def test_diagonal_input_sorted(self):
        eig = sym_eigen(np.diag([1.0, 3.0, 2.0]))
        np.testing.assert_array_equal(eig.eigenvalues, [3.0, 2.0, 1.0])

    def test_sorted_by_signed_value(self):
        np.testing.assert_array_equal(sym_eigen(np.diag([1.0, -3.0])).eigenvalues, [1.0, -3.0])
        np.testing.assert_allclose(sym_eigen(np.array([[0.0, 1.0], [1.0, 0.0]])).eigenvalues, [1.0, -1.0], atol=1e-14)

    def test_non_symmetric_rejected(self):
        with pytest.raises(ContractError):
            sym_eigen(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_non_square_rejected(self):
        with pytest.raises(ContractError):
            sym_eigen(np.ones((2, 3)))

    def test_deterministic(self, rng):
        x = rng.standard_normal((4, 4))
        s = x + x.T
        first, second = sym_eigen(s), sym_eigen(s)
        np.testing.assert_array_equal(first.eigenvalues, second.eigenvalues)
        np.testing.assert_array_equal(first.eigenvectors, second.eigenvectors)


class TestSVD:

    @pytest.mark.parametrize("shape", [(7, 4), (3, 5), (4, 4)])
    def test_reconstruction(self, rng, shape):
        m = rng.standard_normal(shape)
        u, sigma, vt = svd(m)
        r = min(shape)
        assert u.shape == (shape[0], r) and sigma.shape == (r,) and vt.shape == (r, shape[1])
        np.testing.assert_allclose((u * sigma) @ vt, m, atol=1e-10)
        np.testing.assert_allclose(sigma, np.linalg.svd(m, compute_uv=False), atol=1e-10)
        assert np.all(np.diff(sigma) <= 0)

    def test_rank_one(self, rng):
        m = np.outer(rng.standard_normal(5), rng.standard_normal(3))
        _, sigma, _ = svd(m)
        assert sigma[0] == pytest.approx(frobenius_norm(m), rel=1e-12)
        assert np.all(sigma[1:] <= 1e-12 * sigma[0])

    def test_zero_matrix(self):
        u, sigma, vt = svd(np.zeros((3, 2)))
        np.testing.assert_array_equal(sigma, 0.0)
