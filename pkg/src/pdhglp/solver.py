"""PDHG iteration, P_s geometry, normalized duality gap and solve loop.

The iteration for min_{x>=0} max_y c^T x - y^T A x + b^T y:

    x_{k+1} = proj_{>=0}(x_k - s (c - A^T y_k))
    y_{k+1} = y_k - s (A (2 x_{k+1} - x_k) - b)

with y additionally projected onto <= 0 on inequality rows in general
form.  Termination is on the KKT residual of the original (unscaled)
problem, checked every log_every iterations.
"""

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .model import (DEFAULT_CLASSIFY_TOL, GeneralLP, PrimalDualPoint,
                    StandardLP, kkt_residual, matrix_norm)
from .sparse import matvec, matvec_transpose, spectral_norm_estimate

CSV_HEADER = "iter,kkt,ps_step_norm,dist_to_final,active_primal,active_dualslack"


@dataclass
class SolverConfig:
    step_size: Optional[float] = None   # None: step_scale / safe ||A||_2
    step_scale: float = 0.5
    max_iters: int = 300000
    kkt_tol: float = 1e-8
    log_every: int = 1
    seed: int = 0
    record_iterates: bool = False

    def __post_init__(self):
        if self.step_size is not None and self.step_size <= 0:
            raise ValueError("step_size must be positive")
        if self.kkt_tol <= 0:
            raise ValueError("kkt_tol must be positive")
        if self.log_every < 1:
            raise ValueError("log_every must be >= 1")


class IterateLog:
    """Per-logged-iteration records.

    ps_step_norm at row k is ||z_{k+1} - z_k||_{P_s} (the step leaving the
    logged iterate, obtained from a lookahead step at termination).
    dist_to_final is the l2 distance to the final iterate, filled post hoc
    from snapshots when record_iterates is on, NaN otherwise.  Bitmasks:
    bit i of active_primal is x_i > 0 (exact); bit i of active_dualslack is
    (c - A^T y)_i > tol * ||A||_2.
    """

    def __init__(self):
        self.iters = []
        self.kkt = []
        self.ps_step_norm = []
        self.dist_to_final = []
        self.active_primal = []
        self.active_dualslack = []
        self.wall = []
        self.snapshots = None  # list of (x, y) when record_iterates

    def __len__(self):
        return len(self.iters)

    def finalize(self, z_final_vec):
        if self.snapshots is not None:
            self.dist_to_final = [
                float(np.linalg.norm(np.concatenate([sx, sy]) - z_final_vec))
                for sx, sy in self.snapshots]
        else:
            self.dist_to_final = [float("nan")] * len(self.iters)

    def to_csv(self):
        lines = [CSV_HEADER]
        for i in range(len(self.iters)):
            lines.append(",".join([
                str(self.iters[i]),
                repr(self.kkt[i]),
                repr(self.ps_step_norm[i]),
                repr(self.dist_to_final[i]),
                format(self.active_primal[i], "x"),
                format(self.active_dualslack[i], "x"),
            ]))
        return "\n".join(lines) + "\n"

    def write_csv(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_csv())


@dataclass
class SolveResult:
    z_final: PrimalDualPoint
    status: str  # optimal_tol | iter_limit | numerical_error
    iterations: int
    log: IterateLog
    step_size: float = 0.0
    sigma_hat: float = 0.0
    kkt_final: float = float("nan")


def _split_problem(problem):
    """(A, b, m_eq): rows >= m_eq are inequality rows."""
    if isinstance(problem, StandardLP):
        return problem.A, problem.b, problem.m
    A, b = problem.stacked()
    return A, b, problem.m_E


def pdhg_step(lp, z, s):
    """One PDHG update for a StandardLP."""
    if s <= 0:
        raise ValueError("step size must be positive")
    x1 = np.maximum(z.x - s * (lp.c - matvec_transpose(lp.A, z.y)), 0.0)
    y1 = z.y - s * (matvec(lp.A, 2.0 * x1 - z.x) - lp.b)
    out = PrimalDualPoint(x1, y1)
    if not (np.all(np.isfinite(x1)) and np.all(np.isfinite(y1))):
        raise FloatingPointError("numerical_error: non-finite PDHG iterate")
    return out


def pdhg_step_general(gl, z, s):
    """One PDHG update for a GeneralLP (duals on inequality rows are
    projected onto the nonpositive halfline)."""
    if s <= 0:
        raise ValueError("step size must be positive")
    A, b = gl.stacked()
    x1 = np.maximum(z.x - s * (gl.c - matvec_transpose(A, z.y)), 0.0)
    y1 = z.y - s * (matvec(A, 2.0 * x1 - z.x) - b)
    y1[gl.m_E:] = np.minimum(y1[gl.m_E:], 0.0)
    if not (np.all(np.isfinite(x1)) and np.all(np.isfinite(y1))):
        raise FloatingPointError("numerical_error: non-finite PDHG iterate")
    return PrimalDualPoint(x1, y1, y_ineq_valid=True)


def _xy(z):
    if isinstance(z, PrimalDualPoint):
        return z.x, z.y
    return np.asarray(z[0], dtype=np.float64), np.asarray(z[1], dtype=np.float64)


def ps_norm(z, A, s):
    """||z||_{P_s} = sqrt((||x||^2 + ||y||^2)/s + 2 y^T A x).

    P_s = [[I/s, A^T], [A, I/s]] is the metric in which the primal-first
    sweep (x then y, with dual extrapolation) is a proximal-point step, so
    distances to fixed points are non-increasing in this norm.  Valid for
    0 < s < 1/||A||_2; negative round-off in the radicand is clamped to
    zero down to -1e-12 and an error is raised below that.
    """
    if s <= 0:
        raise ValueError("s must be positive")
    x, y = _xy(z)
    radicand = (x @ x + y @ y) / s + 2.0 * float(y @ matvec(A, x))
    if radicand < -1e-12:
        raise ValueError(f"P_s radicand {radicand} < -1e-12; "
                         "s is too large for this A")
    return float(np.sqrt(max(radicand, 0.0)))


def normalized_duality_gap(lp, z, r, with_direction=False):
    """rho_r(z): the radius-r normalized duality gap of a StandardLP.

    Maximizes g^T d over ||d|| <= r, x + d_x >= 0 where g = (-(c - A^T y),
    b - Ax); solved by bisection on the ball multiplier, with the clipped
    limit handled when the constrained maximizer is interior to the ball.
    with_direction=True also returns the maximizing d = (d_x, d_y).
    """
    if r <= 0:
        raise ValueError("r must be positive")
    x, y = z.x, z.y
    g_x = -(lp.c - matvec_transpose(lp.A, y))
    g_y = lp.b - matvec(lp.A, x)
    norm_g = float(np.sqrt(g_x @ g_x + g_y @ g_y))
    if norm_g == 0.0:
        zero = np.zeros(len(x) + len(y))
        return (0.0, zero) if with_direction else 0.0

    def direction(lam):
        return np.maximum(g_x / lam, -x), g_y / lam

    def radius(lam):
        dx, dy = direction(lam)
        return float(np.sqrt(dx @ dx + dy @ dy))

    lam_hi = norm_g / r
    if radius(lam_hi) >= r - 1e-12:
        # ||d|| is within tolerance of r already at the bracket end
        lo_found = None
    else:
        lo_found = None
        lam = lam_hi
        for _ in range(2000):
            lam *= 0.5
            if lam < 1e-300:
                break
            if radius(lam) > r:
                lo_found = lam
                break
        if lo_found is None:
            # maximizer interior to the ball: the lam -> 0 clipped limit
            dx = np.where(g_x < 0.0, -x, 0.0)
            val = max(float(g_x @ dx) / r, 0.0)
            if with_direction:
                return val, np.concatenate([dx, np.zeros(len(g_y))])
            return val
    if lo_found is None:
        lam = lam_hi
    else:
        lo, hi = lo_found, lam_hi  # radius(lo) > r >= radius(hi)
        for _ in range(500):
            mid = 0.5 * (lo + hi)
            rad = radius(mid)
            if abs(rad - r) <= 1e-12:
                lam = mid
                break
            if rad > r:
                lo = mid
            else:
                hi = mid
            if (hi - lo) <= 1e-16 * hi:
                break
        else:
            lam = 0.5 * (lo + hi)
        if abs(radius(lam) - r) > 1e-12:
            lam = 0.5 * (lo + hi)
    dx, dy = direction(lam)
    val = max((float(g_x @ dx) + float(g_y @ dy)) / r, 0.0)
    if with_direction:
        return val, np.concatenate([dx, dy])
    return val


class _Kernel:
    """Holds the CSR arrays and scratch buffers for fused sweeps."""

    def __init__(self, A, b, c, s, m_eq, x, y):
        self.A = A
        self.b = np.ascontiguousarray(b)
        self.c = np.ascontiguousarray(c)
        self.s = float(s)
        self.m_eq = int(m_eq)
        self.x = x
        self.y = y
        self.xp = np.zeros_like(x)
        self.yp = np.zeros_like(y)
        self.aty = np.zeros(A.n_cols)
        self.ax = np.zeros(A.n_rows)

    def sweep(self, iters):
        kernels.pdhg_sweep(self.A.data, self.A.indices, self.A.indptr,
                           self.A.n_rows, self.A.n_cols, self.b, self.c,
                           self.s, self.m_eq, iters,
                           self.x, self.y, self.xp, self.yp,
                           self.aty, self.ax)


def _bitmask(flags):
    mask = 0
    for i in np.nonzero(flags)[0]:
        mask |= 1 << int(i)
    return mask


def solve(problem, config=None, z0=None, original=None):
    """Run PDHG until the KKT tolerance or the iteration limit.

    original: optional (original problem, ScalingRecord) pair; when given,
    termination KKT and the active-set bitmasks are evaluated on the
    unscaled problem while the iteration runs on `problem`.  ps_step_norm
    and dist_to_final stay in the solving geometry.
    """
    config = config or SolverConfig()
    A, b, m_eq = _split_problem(problem)
    m, n = A.n_rows, A.n_cols
    sigma = spectral_norm_estimate(A, rel_tol=1e-4, max_iter=5000,
                                   seed=config.seed)
    if config.step_size is not None:
        s = config.step_size
    elif sigma > 0.0:
        s = config.step_scale / (sigma * (1.0 + 1e-4))
    else:
        s = config.step_scale

    if original is not None:
        orig_problem, scaling = original
        A_cls, _, _ = _split_problem(orig_problem)
    else:
        orig_problem, scaling = problem, None
        A_cls = A
    A_norm_cls = matrix_norm(A_cls)
    rc_tol = DEFAULT_CLASSIFY_TOL * A_norm_cls

    x = np.zeros(n) if z0 is None else np.ascontiguousarray(z0.x, dtype=np.float64).copy()
    y = np.zeros(m) if z0 is None else np.ascontiguousarray(z0.y, dtype=np.float64).copy()
    if x.shape != (n,) or y.shape != (m,):
        raise ValueError("z0 dimensions do not match the problem")
    kern = _Kernel(A, b, problem.c, s, m_eq, x, y)

    log = IterateLog()
    if config.record_iterates:
        log.snapshots = []
    t0 = time.perf_counter()
    status = None
    k = 0

    def point_for_checks():
        z = PrimalDualPoint(x.copy(), y.copy(),
                            y_ineq_valid=(m_eq < m) or None)
        if scaling is not None:
            z = scaling.unscale_point(z)
        return z

    while True:
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            status = "numerical_error"
            x[:] = kern.xp
            y[:] = kern.yp
            break
        z_chk = point_for_checks()
        kkt = kkt_residual(orig_problem, z_chk)
        rc = orig_problem.c - matvec_transpose(A_cls, z_chk.y)
        log.iters.append(k)
        log.kkt.append(float(kkt))
        log.active_primal.append(_bitmask(z_chk.x > 0.0))
        log.active_dualslack.append(_bitmask(rc > rc_tol))
        log.wall.append(time.perf_counter() - t0)
        if log.snapshots is not None:
            log.snapshots.append((x.copy(), y.copy()))
        stop = (kkt <= config.kkt_tol) or (k >= config.max_iters)
        # lookahead step: gives this row its ||z_{k+1} - z_k||_{P_s}
        kern.sweep(1)
        step = float("inf")
        if np.all(np.isfinite(x)) and np.all(np.isfinite(y)):
            try:
                step = ps_norm((x - kern.xp, y - kern.yp), A, s)
            except ValueError:
                pass  # indefinite radicand: forced step size, diverging
        if not np.isfinite(step) and not stop:
            status = "numerical_error"
            log.ps_step_norm.append(step)
            x[:] = kern.xp
            y[:] = kern.yp
            break
        log.ps_step_norm.append(float(step))
        if stop:
            status = "optimal_tol" if kkt <= config.kkt_tol else "iter_limit"
            x[:] = kern.xp  # keep z_k, not the lookahead iterate
            y[:] = kern.yp
            break
        advance = min(config.log_every - 1, config.max_iters - (k + 1))
        if advance > 0:
            kern.sweep(advance)
        k += 1 + advance

    z_final = point_for_checks()
    log.finalize(np.concatenate([x, y]))
    kkt_final = kkt_residual(orig_problem, z_final)
    return SolveResult(z_final, status, k, log, step_size=s,
                       sigma_hat=sigma, kkt_final=float(kkt_final))
