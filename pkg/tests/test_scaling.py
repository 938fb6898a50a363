import numpy as np
import pytest

from pdhglp import (PrimalDualPoint, ScalingRecord, SparseMatrix, StandardLP,
                    as_general, house, pock_chambolle_scale, precondition,
                    ruiz_scale)

from conftest import random_sparse_dense


def test_scaling_record_validation():
    with pytest.raises(ValueError):
        ScalingRecord(np.array([1.0, -1.0]), np.array([1.0]))
    with pytest.raises(ValueError):
        ScalingRecord(np.array([np.inf]), np.array([1.0]))


def test_scale_unscale_round_trip(rng):
    rec = ScalingRecord(rng.uniform(0.5, 2.0, 3), rng.uniform(0.5, 2.0, 5))
    z = PrimalDualPoint(rng.standard_normal(5), rng.standard_normal(3))
    back = rec.scale_point(rec.unscale_point(z))
    assert np.allclose(back.x, z.x, rtol=1e-15)
    assert np.allclose(back.y, z.y, rtol=1e-15)


def test_ruiz_single_entry():
    # A = [[4]]: row and column inf norms are both 4, so one step gives
    # D1 = D2 = 1/2 and the scaled entry is exactly 1; later steps no-op.
    A = SparseMatrix.from_dense([[4.0]])
    rec = ruiz_scale(A, iters=10)
    assert rec.D1[0] == 0.5 and rec.D2[0] == 0.5
    assert A.scale(rec.D1, rec.D2).to_dense()[0, 0] == 1.0


def test_ruiz_equilibrates_norms(rng):
    arr = random_sparse_dense(rng, 6, 9, density=0.5)
    arr[0] *= 1e4  # badly scaled row
    arr[:, 1] *= 1e-3
    A = SparseMatrix.from_dense(arr)
    rec = ruiz_scale(A, iters=40)
    S = A.scale(rec.D1, rec.D2).to_dense()
    row_inf = np.max(np.abs(S), axis=1)
    col_inf = np.max(np.abs(S), axis=0)
    nz_rows = row_inf > 0
    nz_cols = col_inf > 0
    assert np.all(np.abs(row_inf[nz_rows] - 1.0) < 1e-6)
    assert np.all(np.abs(col_inf[nz_cols] - 1.0) < 1e-6)


def test_ruiz_keeps_zero_rows():
    A = SparseMatrix.from_dense([[1.0, 0.0], [0.0, 0.0]])
    rec = ruiz_scale(A, iters=5)
    assert rec.D1[1] == 1.0  # zero row untouched
    assert rec.D2[1] == 1.0


def test_pock_chambolle_hand_value():
    # row norms (5, 1); col norms (3, sqrt(17))
    A = SparseMatrix.from_dense([[3.0, 4.0], [0.0, 1.0]])
    rec = pock_chambolle_scale(A)
    assert np.allclose(rec.D1, [1.0 / np.sqrt(5.0), 1.0])
    assert np.allclose(rec.D2, [1.0 / np.sqrt(3.0), 17.0 ** -0.25])


def test_precondition_standard_consistency(rng):
    arr = random_sparse_dense(rng, 5, 8, density=0.6)
    arr[2] *= 50.0
    lp = StandardLP(arr, rng.standard_normal(5), rng.standard_normal(8))
    scaled, rec = precondition(lp)
    # scaled data matches D1 A D2 / D1 b / D2 c
    assert np.allclose(scaled.A.to_dense(),
                       rec.D1[:, None] * arr * rec.D2[None, :], rtol=1e-14)
    assert np.allclose(scaled.b, rec.D1 * lp.b, rtol=1e-14)
    assert np.allclose(scaled.c, rec.D2 * lp.c, rtol=1e-14)
    # objective value is invariant under the variable change x = D2 x~
    x_t = np.abs(rng.standard_normal(8))
    assert np.isclose(scaled.c @ x_t, lp.c @ (rec.D2 * x_t), rtol=1e-13)


def test_precondition_reduces_spread(rng):
    arr = random_sparse_dense(rng, 6, 10, density=0.6)
    arr[0] *= 1e5
    arr[:, 3] *= 1e-4
    lp = StandardLP(arr, np.ones(6), np.ones(10))
    scaled, _ = precondition(lp)
    S = scaled.A.to_dense()

    def spread(M):
        a = np.abs(M[M != 0.0])
        return np.max(a) / np.min(a)

    assert spread(S) < spread(arr) / 10.0


def test_precondition_general_splits_rows():
    gl = house(0.5, 0.1)
    scaled, rec = precondition(gl)
    assert scaled.m_E == gl.m_E and scaled.m_I == gl.m_I
    A, _ = gl.stacked()
    S, _ = scaled.stacked()
    assert np.allclose(S.to_dense(),
                       rec.D1[:, None] * A.to_dense() * rec.D2[None, :],
                       rtol=1e-14)


def test_precondition_preserves_feasible_set_mapping(rng):
    # a point is feasible for the scaled problem iff its unscaled image is
    # feasible for the original
    lp = StandardLP([[1.0, 2.0, 0.0], [0.0, 1.0, 3.0]],
                    [3.0, 4.0], [1.0, 1.0, 1.0])
    scaled, rec = precondition(lp)
    x_t = np.array([1.0, 0.5, 1.0])
    r_scaled = scaled.A.to_dense() @ x_t - scaled.b
    x = rec.D2 * x_t
    r_orig = np.array(lp.A.to_dense()) @ x - lp.b
    assert np.allclose(r_scaled, rec.D1 * r_orig, rtol=1e-13)


def test_compose_is_elementwise_product():
    a = ScalingRecord(np.array([2.0]), np.array([3.0, 4.0]))
    b = ScalingRecord(np.array([0.5]), np.array([2.0, 0.25]))
    c = a.compose(b)
    assert np.array_equal(c.D1, [1.0])
    assert np.array_equal(c.D2, [6.0, 1.0])


def test_precondition_house_no_inequalities_round_trip():
    gl = as_general(StandardLP([[2.0, 1.0]], [1.0], [1.0, 1.0]))
    scaled, rec = precondition(gl)
    assert scaled.m_I == 0
    z_t = PrimalDualPoint(np.array([1.0, 1.0]), np.array([1.0]))
    z = rec.unscale_point(z_t)
    assert np.allclose(rec.scale_point(z).x, z_t.x)
