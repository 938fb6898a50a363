"""Problem representations and optimality diagnostics.

Standard form: min c^T x s.t. Ax = b, x >= 0.
General form:  min c^T x s.t. A_E x = b_E, A_I x <= b_I, x >= 0, with dual
variables y = (y_E free, y_I <= 0).

The partition (N, B1, B2) classifies primal coordinates at an optimum:
N has strictly positive reduced cost, B1 strictly positive value, B2 both
at zero (the degenerate set).  For general form there is a mirror
classification of the inequality rows.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .sparse import SparseMatrix, matvec, matvec_transpose, \
    spectral_norm_estimate, conjugate_gradient

DEFAULT_CLASSIFY_TOL = 1e-6


def _finite_vector(v, name):
    v = np.ascontiguousarray(v, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError(f"{name} must be a vector")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} must be finite")
    return v


class StandardLP:
    """min c^T x s.t. Ax = b, x >= 0."""

    __slots__ = ("A", "b", "c")

    def __init__(self, A, b, c):
        if not isinstance(A, SparseMatrix):
            A = SparseMatrix.from_dense(np.asarray(A, dtype=np.float64))
        self.A = A
        self.b = _finite_vector(b, "b")
        self.c = _finite_vector(c, "c")
        if self.b.shape != (A.n_rows,) or self.c.shape != (A.n_cols,):
            raise ValueError("b/c dimensions inconsistent with A")

    @property
    def m(self):
        return self.A.n_rows

    @property
    def n(self):
        return self.A.n_cols


class GeneralLP:
    """min c^T x s.t. A_E x = b_E, A_I x <= b_I, x >= 0."""

    __slots__ = ("A_E", "b_E", "A_I", "b_I", "c", "n", "_stacked")

    def __init__(self, A_E, b_E, A_I, b_I, c, n=None):
        if not isinstance(A_E, SparseMatrix):
            A_E = SparseMatrix.from_dense(np.asarray(A_E, dtype=np.float64))
        if not isinstance(A_I, SparseMatrix):
            A_I = SparseMatrix.from_dense(np.asarray(A_I, dtype=np.float64))
        self.A_E = A_E
        self.A_I = A_I
        self.b_E = _finite_vector(b_E, "b_E")
        self.b_I = _finite_vector(b_I, "b_I")
        self.c = _finite_vector(c, "c")
        self.n = A_E.n_cols if n is None else int(n)
        if A_E.n_cols != self.n or A_I.n_cols != self.n:
            raise ValueError("A_E and A_I must share the variable count")
        if self.b_E.shape != (A_E.n_rows,) or self.b_I.shape != (A_I.n_rows,):
            raise ValueError("right-hand side dimensions inconsistent")
        if self.c.shape != (self.n,):
            raise ValueError("c dimension inconsistent")
        self._stacked = None

    @property
    def m_E(self):
        return self.A_E.n_rows

    @property
    def m_I(self):
        return self.A_I.n_rows

    def stacked(self):
        """(A_E; A_I) as one SparseMatrix plus the stacked rhs (cached)."""
        if self._stacked is None:
            indptr = np.concatenate([self.A_E.indptr,
                                     self.A_E.indptr[-1] + self.A_I.indptr[1:]])
            indices = np.concatenate([self.A_E.indices, self.A_I.indices])
            data = np.concatenate([self.A_E.data, self.A_I.data])
            A = SparseMatrix(self.m_E + self.m_I, self.n, indptr, indices,
                             data, _checked=True)
            self._stacked = (A, np.concatenate([self.b_E, self.b_I]))
        return self._stacked


@dataclass
class PrimalDualPoint:
    x: np.ndarray
    y: np.ndarray
    # for general form: whether y on inequality rows is known to be <= 0
    y_ineq_valid: Optional[bool] = None

    def __post_init__(self):
        self.x = np.ascontiguousarray(self.x, dtype=np.float64)
        self.y = np.ascontiguousarray(self.y, dtype=np.float64)

    def as_vector(self):
        return np.concatenate([self.x, self.y])

    def copy(self):
        return PrimalDualPoint(self.x.copy(), self.y.copy(), self.y_ineq_valid)


@dataclass
class Partition:
    N: np.ndarray
    B1: np.ndarray
    B2: np.ndarray
    # general form only: classification of inequality rows
    N_D: Optional[np.ndarray] = None
    B1_D: Optional[np.ndarray] = None
    B2_D: Optional[np.ndarray] = None

    @property
    def B(self):
        return np.sort(np.concatenate([self.B1, self.B2]))


@dataclass
class DeltaMetric:
    value: float
    argmin_kind: Optional[str]  # reduced_cost | primal_slack | dual_slack_row | dual_value
    argmin_index: Optional[int]


@dataclass
class VariableMap:
    """Recovers general-form points from the slack-extended standard form."""
    gl: "GeneralLP"

    def to_general(self, z_std):
        return PrimalDualPoint(z_std.x[:self.gl.n].copy(), z_std.y.copy())

    def to_standard_point(self, z_gen):
        slack = self.gl.b_I - matvec(self.gl.A_I, z_gen.x)
        return PrimalDualPoint(np.concatenate([z_gen.x, slack]),
                               z_gen.y.copy())


def matrix_norm(A):
    """Tight deterministic spectral-norm value used for classification
    thresholds (partition, delta, active-set bitmasks)."""
    return spectral_norm_estimate(A, rel_tol=1e-6, max_iter=50000, seed=0)


def _problem_matrix(problem):
    if isinstance(problem, StandardLP):
        return problem.A, problem.b
    return problem.stacked()


def objective_value(problem, x):
    return float(problem.c @ x)


def to_standard(gl):
    """Slack-variable reformulation of a GeneralLP.

    Returns (StandardLP, VariableMap); the standard form has one extra
    nonnegative slack column per inequality row.
    """
    n, m_E, m_I = gl.n, gl.m_E, gl.m_I
    A_stack, b = gl.stacked()
    if m_I == 0:
        lp = StandardLP(A_stack, b, gl.c.copy())
        return lp, VariableMap(gl)
    # append identity slack columns on the inequality rows
    rows = [A_stack.indptr[i + 1] - A_stack.indptr[i] for i in range(m_E + m_I)]
    indptr = np.zeros(m_E + m_I + 1, dtype=np.int64)
    indices, data = [], []
    for i in range(m_E + m_I):
        lo, hi = A_stack.indptr[i], A_stack.indptr[i + 1]
        row_idx = A_stack.indices[lo:hi]
        row_dat = A_stack.data[lo:hi]
        if i >= m_E:
            row_idx = np.concatenate([row_idx, [n + (i - m_E)]])
            row_dat = np.concatenate([row_dat, [1.0]])
        indices.append(row_idx)
        data.append(row_dat)
        indptr[i + 1] = indptr[i] + len(row_idx)
    A = SparseMatrix(m_E + m_I, n + m_I, indptr,
                     np.concatenate(indices), np.concatenate(data),
                     _checked=True)
    c = np.concatenate([gl.c, np.zeros(m_I)])
    return StandardLP(A, b, c), VariableMap(gl)


def as_general(problem):
    """View a StandardLP as a GeneralLP with an empty inequality block."""
    if isinstance(problem, GeneralLP):
        return problem
    empty = SparseMatrix(0, problem.n, np.zeros(1, dtype=np.int64),
                         np.zeros(0), np.zeros(0), _checked=True)
    return GeneralLP(problem.A, problem.b, empty, np.zeros(0),
                     problem.c, problem.n)


def reduced_costs(problem, y):
    A, _ = _problem_matrix(problem)
    return problem.c - matvec_transpose(A, y)


def partition(problem, z_star, tol=DEFAULT_CLASSIFY_TOL, A_norm=None):
    """Classify coordinates of an (approximately) optimal point.

    i goes to N when its reduced cost exceeds tol * ||A||_2, else to B1
    when x_i > tol, else to B2.  For GeneralLP the inequality rows are
    classified the same way from their slacks and multipliers.
    """
    A, b = _problem_matrix(problem)
    if A_norm is None:
        A_norm = matrix_norm(A)
    rc = problem.c - matvec_transpose(A, z_star.y)
    in_N = rc > tol * A_norm
    idx = np.arange(len(rc))
    N = idx[in_N]
    rest = idx[~in_N]
    in_B1 = z_star.x[rest] > tol
    B1 = rest[in_B1]
    B2 = rest[~in_B1]
    if isinstance(problem, StandardLP):
        return Partition(N, B1, B2)
    m_I = problem.m_I
    slack = problem.b_I - matvec(problem.A_I, z_star.x)
    y_I = z_star.y[problem.m_E:]
    jdx = np.arange(m_I)
    in_ND = slack > tol * A_norm
    N_D = jdx[in_ND]
    restd = jdx[~in_ND]
    in_B1D = -y_I[restd] > tol
    B1_D = restd[in_B1D]
    B2_D = restd[~in_B1D]
    return Partition(N, B1, B2, N_D, B1_D, B2_D)


def delta_metric(problem, z_star, part, A_norm):
    """Non-degeneracy metric: the smallest of the scaled reduced costs over
    N, the primal values over B1, and (general form) the scaled row slacks
    over N_D and multiplier magnitudes over B1_D."""
    A, _ = _problem_matrix(problem)
    rc = problem.c - matvec_transpose(A, z_star.y)
    candidates = []
    for i in part.N:
        candidates.append((rc[i] / A_norm, "reduced_cost", int(i)))
    for i in part.B1:
        candidates.append((z_star.x[i], "primal_slack", int(i)))
    if isinstance(problem, GeneralLP) and part.N_D is not None:
        slack = problem.b_I - matvec(problem.A_I, z_star.x)
        y_I = z_star.y[problem.m_E:]
        for j in part.N_D:
            candidates.append((slack[j] / A_norm, "dual_slack_row", int(j)))
        for j in part.B1_D:
            candidates.append((-y_I[j], "dual_value", int(j)))
    if not candidates:
        return DeltaMetric(float("inf"), None, None)
    value, kind, index = min(candidates, key=lambda t: t[0])
    return DeltaMetric(float(value), kind, index)


def kkt_residual(problem, z):
    """l2 norm of the stacked KKT violations: primal equality and
    inequality residuals, x negativity, dual infeasibility, y_I
    positivity, and the positive part of the duality gap."""
    x, y = z.x, z.y
    if isinstance(problem, StandardLP):
        A, b = problem.A, problem.b
        m_E = problem.m
        eq = matvec(A, x) - b
        ineq = np.zeros(0)
        y_I = np.zeros(0)
    else:
        A, b = problem.stacked()
        m_E = problem.m_E
        ax = matvec(A, x)
        eq = ax[:m_E] - b[:m_E]
        ineq = np.maximum(ax[m_E:] - b[m_E:], 0.0)
        y_I = np.maximum(y[m_E:], 0.0)
    dual = np.maximum(matvec_transpose(A, y) - problem.c, 0.0)
    gap = max(float(problem.c @ x) - float(b @ y), 0.0)
    parts = np.concatenate([eq, ineq, np.maximum(-x, 0.0), dual, y_I, [gap]])
    return float(np.linalg.norm(parts))


def min_norm_subgradient(lp, z):
    """The l2-min-norm element of F(z) = (c - A^T y + normal cone at x;
    Ax - b): on coordinates with x_i = 0 the normal cone absorbs any
    positive reduced cost."""
    rc = lp.c - matvec_transpose(lp.A, z.y)
    g_x = np.where(z.x > 0.0, rc, np.minimum(rc, 0.0))
    g_y = matvec(lp.A, z.x) - lp.b
    return g_x, g_y


def subdifferential_distance(lp, z, s, metric="l2"):
    """dist(0, F(z)) in the l2 or P_s-inverse geometry.

    Both use the closed-form l2-min-norm selection; Ps_inverse solves
    P_s w = g by CG (matvec only) to relative tolerance 1e-10, where
    P_s = [[I/s, A^T], [A, I/s]] is the proximal metric of the sweep.
    """
    g_x, g_y = min_norm_subgradient(lp, z)
    if metric == "l2":
        return float(np.sqrt(g_x @ g_x + g_y @ g_y))
    if metric != "Ps_inverse":
        raise ValueError(f"unknown metric {metric!r}")
    sigma = matrix_norm(lp.A)
    if not (0.0 < s) or s * sigma * (1.0 + 1e-6) >= 1.0:
        raise ValueError("s outside (0, 1/||A||_2): P_s not positive definite")
    n = lp.n

    def apply_ps(w):
        wx, wy = w[:n], w[n:]
        top = wx / s + matvec_transpose(lp.A, wy)
        bot = wy / s + matvec(lp.A, wx)
        return np.concatenate([top, bot])

    g = np.concatenate([g_x, g_y])
    w = conjugate_gradient(apply_ps, g, rel_tol=1e-10)
    return float(np.sqrt(max(g @ w, 0.0)))
