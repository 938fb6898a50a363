import numpy as np
import pytest
from scipy.optimize import linprog

from pdhglp import GeneralLP, StandardLP


def linprog_value(problem):
    """Optimal value via an independent simplex/IPM oracle (HiGHS)."""
    if isinstance(problem, StandardLP):
        res = linprog(problem.c, A_eq=problem.A.to_dense(), b_eq=problem.b,
                      bounds=[(0, None)] * problem.n, method="highs")
    else:
        kw = {}
        if problem.m_E:
            kw.update(A_eq=problem.A_E.to_dense(), b_eq=problem.b_E)
        if problem.m_I:
            kw.update(A_ub=problem.A_I.to_dense(), b_ub=problem.b_I)
        res = linprog(problem.c, bounds=[(0, None)] * problem.n,
                      method="highs", **kw)
    assert res.status == 0, f"oracle LP solve failed: {res.message}"
    return res.fun


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_sparse_dense(rng, m, n, density=0.4):
    mask = rng.random((m, n)) < density
    vals = rng.standard_normal((m, n))
    return np.where(mask, vals, 0.0)
