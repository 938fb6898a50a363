import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pdhglp.sparse import (SparseMatrix, conjugate_gradient, frobenius_norm,
                           matvec, matvec_transpose, spectral_norm_estimate)

from conftest import random_sparse_dense


def dense_strategy(max_m=8, max_n=8):
    return st.integers(1, max_m).flatmap(lambda m: st.integers(1, max_n).flatmap(
        lambda n: st.lists(
            st.lists(st.one_of(st.just(0.0),
                               st.floats(-10, 10, allow_nan=False)),
                     min_size=n, max_size=n),
            min_size=m, max_size=m)))


def test_from_dense_round_trip(rng):
    arr = random_sparse_dense(rng, 7, 5)
    A = SparseMatrix.from_dense(arr)
    assert A.shape == (7, 5)
    assert np.array_equal(A.to_dense(), arr)
    assert A.nnz == np.count_nonzero(arr)


def test_from_coo_sums_duplicates_and_prunes_zeros():
    A = SparseMatrix.from_coo(2, 3,
                              rows=[0, 0, 1, 1, 0],
                              cols=[1, 1, 2, 2, 0],
                              vals=[2.0, 3.0, 1.5, -1.5, 4.0])
    expect = np.array([[4.0, 5.0, 0.0], [0.0, 0.0, 0.0]])
    assert np.array_equal(A.to_dense(), expect)
    assert A.nnz == 2  # the (1, 2) pair cancelled exactly


def test_validation_rejects_bad_structure():
    with pytest.raises(ValueError):
        SparseMatrix(1, 2, [0, 2], [1, 0], [1.0, 2.0])  # decreasing columns
    with pytest.raises(ValueError):
        SparseMatrix(1, 2, [0, 1], [0], [0.0])  # explicit zero
    with pytest.raises(ValueError):
        SparseMatrix(1, 2, [0, 1], [5], [1.0])  # column out of range
    with pytest.raises(ValueError):
        SparseMatrix(1, 2, [0, 1], [0], [np.inf])  # non-finite


def test_matvec_matches_dense(rng):
    for m, n in [(1, 1), (4, 7), (9, 3)]:
        arr = random_sparse_dense(rng, m, n)
        A = SparseMatrix.from_dense(arr)
        x = rng.standard_normal(n)
        y = rng.standard_normal(m)
        assert np.allclose(matvec(A, x), arr @ x, rtol=1e-13, atol=1e-13)
        assert np.allclose(matvec_transpose(A, y), arr.T @ y,
                           rtol=1e-13, atol=1e-13)


def test_matvec_dimension_errors(rng):
    A = SparseMatrix.from_dense(random_sparse_dense(rng, 3, 4))
    with pytest.raises(ValueError):
        matvec(A, np.zeros(3))
    with pytest.raises(ValueError):
        matvec_transpose(A, np.zeros(4))


@settings(max_examples=60, deadline=None)
@given(dense_strategy())
def test_matvec_linearity_and_adjoint(rows):
    arr = np.array(rows)
    A = SparseMatrix.from_dense(arr)
    m, n = arr.shape
    rng = np.random.default_rng(0)
    x1, x2 = rng.standard_normal(n), rng.standard_normal(n)
    y = rng.standard_normal(m)
    lin = matvec(A, 2.0 * x1 + x2)
    assert np.allclose(lin, 2.0 * matvec(A, x1) + matvec(A, x2),
                       rtol=1e-12, atol=1e-12)
    # adjoint identity <Ax, y> == <x, A^T y>
    lhs = float(matvec(A, x1) @ y)
    rhs = float(x1 @ matvec_transpose(A, y))
    scale = 1.0 + abs(lhs) + abs(rhs)
    assert abs(lhs - rhs) <= 1e-12 * scale


def test_take_rows_and_scale(rng):
    arr = random_sparse_dense(rng, 6, 4)
    A = SparseMatrix.from_dense(arr)
    sub = A.take_rows([4, 1])
    assert np.array_equal(sub.to_dense(), arr[[4, 1]])
    d1 = rng.uniform(0.5, 2.0, 6)
    d2 = rng.uniform(0.5, 2.0, 4)
    scaled = A.scale(d1, d2)
    assert np.allclose(scaled.to_dense(), np.diag(d1) @ arr @ np.diag(d2),
                       rtol=1e-14, atol=0)


def test_frobenius_norm(rng):
    arr = random_sparse_dense(rng, 5, 5)
    A = SparseMatrix.from_dense(arr)
    assert np.isclose(frobenius_norm(A), np.linalg.norm(arr), rtol=1e-14)


def test_spectral_norm_against_svd(rng):
    for m, n in [(5, 8), (10, 4), (1, 1), (12, 12)]:
        arr = random_sparse_dense(rng, m, n, density=0.6)
        A = SparseMatrix.from_dense(arr)
        true = np.linalg.norm(arr, 2)
        est, ok = spectral_norm_estimate(A, rel_tol=1e-6, max_iter=50000,
                                         seed=0, with_flag=True)
        assert ok
        assert est <= true * (1 + 1e-12)
        assert true <= est * (1 + 1e-6)


def test_spectral_norm_zero_matrix():
    A = SparseMatrix(3, 3, [0, 0, 0, 0], [], [])
    assert spectral_norm_estimate(A) == 0.0


def test_spectral_norm_deterministic(rng):
    A = SparseMatrix.from_dense(random_sparse_dense(rng, 6, 6))
    a = spectral_norm_estimate(A, seed=0)
    b = spectral_norm_estimate(A, seed=0)
    assert a == b


def test_conjugate_gradient_spd(rng):
    n = 12
    M = rng.standard_normal((n, n))
    H = M @ M.T + n * np.eye(n)
    b = rng.standard_normal(n)
    x = conjugate_gradient(lambda v: H @ v, b, rel_tol=1e-13)
    assert np.allclose(H @ x, b, rtol=0, atol=1e-10 * np.linalg.norm(b))


def test_conjugate_gradient_zero_rhs():
    x = conjugate_gradient(lambda v: v, np.zeros(4))
    assert np.array_equal(x, np.zeros(4))
