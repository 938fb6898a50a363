"""Diagonal preconditioning: Ruiz equilibration then l2 Pock-Chambolle.

The composite scaling replaces A by D1 A D2, b by D1 b and c by D2 c;
solutions map back as x = D2 x_tilde, y = D1 y_tilde.
"""

from dataclasses import dataclass

import numpy as np

from .model import GeneralLP, StandardLP, PrimalDualPoint
from .sparse import SparseMatrix


@dataclass
class ScalingRecord:
    D1: np.ndarray  # row scales
    D2: np.ndarray  # column scales

    def __post_init__(self):
        if np.any(self.D1 <= 0) or np.any(self.D2 <= 0) \
           or not (np.all(np.isfinite(self.D1)) and np.all(np.isfinite(self.D2))):
            raise ValueError("scales must be positive and finite")

    def compose(self, other):
        return ScalingRecord(self.D1 * other.D1, self.D2 * other.D2)

    def unscale_point(self, z):
        return PrimalDualPoint(self.D2 * z.x, self.D1 * z.y, z.y_ineq_valid)

    def scale_point(self, z):
        return PrimalDualPoint(z.x / self.D2, z.y / self.D1, z.y_ineq_valid)


def _row_of(A):
    return np.repeat(np.arange(A.n_rows), np.diff(A.indptr))


def ruiz_scale(A, iters=10):
    """Simultaneous Ruiz equilibration: each step divides every row and
    column by the square root of its current infinity norm (zero rows and
    columns keep scale 1)."""
    D1 = np.ones(A.n_rows)
    D2 = np.ones(A.n_cols)
    row_of = _row_of(A)
    data = A.data.copy()
    for _ in range(iters):
        absdata = np.abs(data)
        row_inf = np.zeros(A.n_rows)
        np.maximum.at(row_inf, row_of, absdata)
        col_inf = np.zeros(A.n_cols)
        np.maximum.at(col_inf, A.indices, absdata)
        row_inf[row_inf == 0.0] = 1.0
        col_inf[col_inf == 0.0] = 1.0
        d1 = 1.0 / np.sqrt(row_inf)
        d2 = 1.0 / np.sqrt(col_inf)
        D1 *= d1
        D2 *= d2
        data *= d1[row_of] * d2[A.indices]
    return ScalingRecord(D1, D2)


def pock_chambolle_scale(A):
    """l2 variant: D1 = 1/sqrt(row l2 norms), D2 = 1/sqrt(col l2 norms),
    zero rows/columns scale 1."""
    sq = A.data * A.data
    row_sq = np.zeros(A.n_rows)
    np.add.at(row_sq, _row_of(A), sq)
    col_sq = np.zeros(A.n_cols)
    np.add.at(col_sq, A.indices, sq)
    row_n = np.sqrt(row_sq)
    col_n = np.sqrt(col_sq)
    row_n[row_n == 0.0] = 1.0
    col_n[col_n == 0.0] = 1.0
    return ScalingRecord(1.0 / np.sqrt(row_n), 1.0 / np.sqrt(col_n))


def precondition(problem, ruiz_iters=10):
    """Scale a StandardLP or GeneralLP by Ruiz(10) then Pock-Chambolle.

    Returns (scaled problem of the same type, composite ScalingRecord).
    """
    if isinstance(problem, StandardLP):
        A = problem.A
    else:
        A, _ = problem.stacked()
    rec_r = ruiz_scale(A, ruiz_iters)
    A_r = A.scale(rec_r.D1, rec_r.D2)
    rec_pc = pock_chambolle_scale(A_r)
    rec = rec_r.compose(rec_pc)
    A_s = A.scale(rec.D1, rec.D2)
    c_s = rec.D2 * problem.c
    if isinstance(problem, StandardLP):
        return StandardLP(A_s, rec.D1 * problem.b, c_s), rec
    m_E = problem.m_E
    A_E = A_s.take_rows(np.arange(m_E))
    A_I = A_s.take_rows(np.arange(m_E, A_s.n_rows))
    gl = GeneralLP(A_E, rec.D1[:m_E] * problem.b_E,
                   A_I, rec.D1[m_E:] * problem.b_I, c_s, problem.n)
    return gl, rec
