"""Polyhedral geometry toolkit: projections, sharpness estimation, the
brute-force Hoffman constant for tiny systems, and the homogeneous-system
decomposition (forced-equality rows P, strictly-satisfiable rows Q) with
its alpha_0 / angle bounds.

Conventions: a PolyhedralSystem is {F x = g, F_ineq x <= g_ineq}.  The
sharpness constant alpha of a system is the largest constant with
alpha * dist(x, solution set) <= ||(F x - g; [F_ineq x - g_ineq]^+)||_2.
"""

import itertools
import json
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog, nnls

from .model import GeneralLP
from .solver import SolverConfig, solve
from .sparse import SparseMatrix, conjugate_gradient, matvec, matvec_transpose

SIGN_TOL = 1e-12
ENUM_CAP = 12  # support-pattern enumeration limit: 2^ENUM_CAP patterns


@dataclass
class PolyhedralSystem:
    F: SparseMatrix
    g: np.ndarray
    F_ineq: SparseMatrix
    g_ineq: np.ndarray

    def __post_init__(self):
        self.g = np.ascontiguousarray(self.g, dtype=np.float64)
        self.g_ineq = np.ascontiguousarray(self.g_ineq, dtype=np.float64)
        if self.F.n_cols != self.F_ineq.n_cols:
            raise ValueError("equality and inequality blocks disagree on n")
        if self.g.shape != (self.F.n_rows,) or \
           self.g_ineq.shape != (self.F_ineq.n_rows,):
            raise ValueError("right-hand side dimensions inconsistent")

    @classmethod
    def from_dense(cls, Feq, geq, Fineq, gineq):
        Feq = np.atleast_2d(np.asarray(Feq, dtype=np.float64))
        Fineq = np.atleast_2d(np.asarray(Fineq, dtype=np.float64))
        n = Fineq.shape[1] if Fineq.size else Feq.shape[1]
        if Feq.size == 0:
            Feq = Feq.reshape(0, n)
        if Fineq.size == 0:
            Fineq = Fineq.reshape(0, n)
        return cls(SparseMatrix.from_dense(Feq), np.asarray(geq, dtype=np.float64).reshape(-1),
                   SparseMatrix.from_dense(Fineq), np.asarray(gineq, dtype=np.float64).reshape(-1))

    @property
    def n(self):
        return self.F.n_cols

    def residual(self, v):
        v = np.asarray(v, dtype=np.float64)
        parts = []
        if self.F.n_rows:
            parts.append(matvec(self.F, v) - self.g)
        if self.F_ineq.n_rows:
            parts.append(np.maximum(matvec(self.F_ineq, v) - self.g_ineq, 0.0))
        if not parts:
            return 0.0
        return float(np.linalg.norm(np.concatenate(parts)))

    def merged_with(self, other):
        if self.n != other.n:
            raise ValueError("systems live in different spaces")
        Feq = np.vstack([self.F.to_dense(), other.F.to_dense()])
        Fin = np.vstack([self.F_ineq.to_dense(), other.F_ineq.to_dense()])
        return PolyhedralSystem.from_dense(
            Feq, np.concatenate([self.g, other.g]),
            Fin, np.concatenate([self.g_ineq, other.g_ineq]))


ENUM_PROJECT_CAP = 14  # active-set enumeration limit for exact projection


def _project_enumerate(p, sys, cand_rows):
    """Exact projection by active-set enumeration with a KKT certificate.

    Walks subsets W of the inequality rows by increasing size (pruning
    supersets of affinely-inconsistent ones), projects onto the affine
    hull {Fx=g, F_W x = g_W} by least squares, and returns the first
    candidate that is primal feasible and admits nonnegative multipliers
    (checked by NNLS).  That certificate makes the result the true
    projection up to least-squares round-off, with no dependence on the
    system's conditioning along thin faces.  Returns None when nothing
    certifies (numerically infeasible system).
    """
    Fd = sys.F.to_dense()
    g = sys.g
    Fi = sys.F_ineq.to_dense()
    gi = sys.g_ineq
    scale = 1.0 + float(np.linalg.norm(p))
    cert_tol = 1e-9 * scale
    alive = {frozenset()}
    for size in range(len(cand_rows) + 1):
        new_alive = set()
        for W in itertools.combinations(cand_rows, size):
            fs = frozenset(W)
            if size and any(fs - {j} not in alive for j in fs):
                continue
            H = np.vstack([Fd, Fi[list(W)]])
            rhs = np.concatenate([g, gi[list(W)]])
            if H.shape[0] == 0:
                x = p.copy()
            else:
                w = np.linalg.lstsq(H, H @ p - rhs, rcond=None)[0]
                x = p - w
                if np.linalg.norm(H @ x - rhs) > cert_tol * (1.0 + np.linalg.norm(rhs)):
                    continue  # affine system inconsistent: prune supersets
            new_alive.add(fs)
            if sys.residual(x) > cert_tol:
                continue
            target = p - x
            cols = [Fd.T, -Fd.T] if Fd.size else []
            if size:
                cols.append(Fi[list(W)].T)
            if cols:
                _, rnorm = nnls(np.hstack(cols), target)
            else:
                rnorm = float(np.linalg.norm(target))
            if rnorm <= cert_tol:
                return x
        alive = new_alive
        if not alive:
            break
    return None


def _project_dykstra(p, sys, cand_rows, tol, max_iter):
    """Dykstra's alternating projections onto {Fx=g} and each halfspace."""
    have_eq = sys.F.n_rows > 0
    rows = [sys.F_ineq.row_dense(i) for i in cand_rows]
    rhs = [float(sys.g_ineq[i]) for i in cand_rows]
    sq = [float(f @ f) for f in rows]
    n_sets = (1 if have_eq else 0) + len(rows)
    if n_sets == 0:
        return p.copy()

    def project_affine(v):
        r = matvec(sys.F, v) - sys.g
        lam = conjugate_gradient(
            lambda u: matvec(sys.F, matvec_transpose(sys.F, u)),
            r, rel_tol=1e-13)
        return v - matvec_transpose(sys.F, lam)

    x = p.copy()
    corr = [np.zeros_like(p) for _ in range(n_sets)]
    change = np.inf
    for _ in range(max_iter):
        x_start = x.copy()
        si = 0
        if have_eq:
            zed = x + corr[si]
            x = project_affine(zed)
            corr[si] = zed - x
            si += 1
        for j in range(len(rows)):
            zed = x + corr[si]
            viol = float(rows[j] @ zed) - rhs[j]
            if viol > 0.0:
                x = zed - (viol / sq[j]) * rows[j]
            else:
                x = zed
            corr[si] = zed - x
            si += 1
        change = float(np.linalg.norm(x - x_start))
        if sys.residual(x) <= tol and change <= 0.1 * tol * (1.0 + float(np.linalg.norm(x))):
            return x
    raise RuntimeError(
        f"projection did not converge: residual {sys.residual(x):.3e}, "
        f"last cycle change {change:.3e} (infeasible or stalled)")


def project_polyhedron(p, sys, tol=1e-9, max_iter=100000, method="auto"):
    """Euclidean projection of p onto {Fx=g, F_ineq x <= g_ineq}.

    method: "enumerate" (exact active-set enumeration, for systems with
    at most ENUM_PROJECT_CAP inequality rows), "dykstra" (iterative, any
    size, accurate to roughly tol), or "auto" to pick by size.  Raises
    when the system is infeasible or the iteration stalls.
    """
    p = np.asarray(p, dtype=np.float64)
    if sys.residual(p) <= 1e-14 * (1.0 + float(np.linalg.norm(p))):
        return p.copy()
    cand_rows = []
    for i in range(sys.F_ineq.n_rows):
        lo, hi = sys.F_ineq.indptr[i], sys.F_ineq.indptr[i + 1]
        if hi > lo:
            cand_rows.append(i)
        elif sys.g_ineq[i] < 0.0:
            raise RuntimeError("infeasible zero inequality row")
    if method == "auto":
        method = "enumerate" if len(cand_rows) <= ENUM_PROJECT_CAP else "dykstra"
    if method == "enumerate":
        x = _project_enumerate(p, sys, cand_rows)
        if x is None:
            raise RuntimeError("projection failed: no active set certifies "
                               "(system numerically infeasible)")
        return x
    if method != "dykstra":
        raise ValueError(f"unknown projection method {method!r}")
    return _project_dykstra(p, sys, cand_rows, tol, max_iter)


def empirical_sharpness(sys, probes, proj_tol=1e-11, max_iter=200000):
    """min over infeasible probes of residual / distance-to-solutions; an
    upper bound on the sharpness constant.  Raises if every probe is
    feasible."""
    ratios = []
    for p in probes:
        p = np.asarray(p, dtype=np.float64)
        res = sys.residual(p)
        if res <= 1e-12 * (1.0 + float(np.linalg.norm(p))):
            continue
        q = project_polyhedron(p, sys, tol=proj_tol, max_iter=max_iter)
        dist = float(np.linalg.norm(p - q))
        if dist == 0.0:
            continue  # feasible within round-off
        ratios.append(res / dist)
    if not ratios:
        raise ValueError("all probes feasible; cannot estimate sharpness")
    return min(ratios)


def _strictly_negativable(Fd, Fi, S):
    """Is there x with F x = 0 and F_ineq[S] x < 0 componentwise?

    By homogeneity this is equivalent to feasibility of
    {F x = 0, F_ineq[S] x <= -1}, decided exactly by HiGHS.  This is the
    membership test for the subset family S(F, F_ineq) of the Hoffman
    enumeration: relaxing exactly the rows in S leaves a subspace.
    (A pure rank test cannot decide this; whether a subspace meets the
    open negative orthant is not a rank condition.  Flagged for review.)
    """
    if not len(S):
        return True
    n = Fd.shape[1] if Fd.size else Fi.shape[1]
    kw = {}
    if Fd.size:
        kw = {"A_eq": Fd, "b_eq": np.zeros(Fd.shape[0])}
    res = linprog(c=np.zeros(n), A_ub=Fi[list(S)], b_ub=-np.ones(len(S)),
                  bounds=[(None, None)] * n, method="highs", **kw)
    return res.status == 0


def _sign_feasible(w, n_sign, tol=SIGN_TOL):
    if n_sign == 0:
        return True
    head = w[:n_sign]
    return bool(np.all(head >= -tol))


def _min_norm_on_sphere(M, n_sign, seed=0, pgd_iters=300):
    """min ||M w|| over unit w with w[:n_sign] >= 0.

    Candidates: sign-feasible singular vectors (checking both signs),
    seeded combinations inside near-degenerate singular subspaces, and
    projected-gradient refinement.  Every candidate is feasible, so the
    returned value never undershoots the true minimum; singular-pair
    stationarity makes it exact for generic data.
    """
    M = np.asarray(M, dtype=np.float64)
    k = M.shape[1]
    if k == 0:
        return np.inf
    _, svals, Vt = np.linalg.svd(M, full_matrices=True)
    svals = np.concatenate([svals, np.zeros(k - len(svals))])
    rng = np.random.default_rng(seed)
    cands = []

    def value(w):
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return None
        return float(np.linalg.norm(M @ (w / nw)))

    def consider(w):
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return
        w = w / nw
        if _sign_feasible(w, n_sign):
            cands.append(float(np.linalg.norm(M @ w)))
        elif _sign_feasible(-w, n_sign):
            cands.append(float(np.linalg.norm(M @ w)))

    for i in range(k):
        consider(Vt[i])
    # near-equal singular values: sample inside the degenerate subspace
    i = 0
    while i < k:
        j = i + 1
        while j < k and abs(svals[j] - svals[i]) <= 1e-9 * max(1.0, svals[i]):
            j += 1
        if j - i > 1:
            for _ in range(8):
                coef = rng.standard_normal(j - i)
                consider(coef @ Vt[i:j])
        i = j

    # projected gradient descent on ||M w||^2 over the sphere with the
    # sign constraint on the leading block
    G = M.T @ M
    lip = 2.0 * (svals[0] ** 2) if svals[0] > 0 else 1.0
    eta = 1.0 / lip

    def pgd(w):
        w = w.copy()
        if _sign_feasible(-w, n_sign) and not _sign_feasible(w, n_sign):
            w = -w
        if n_sign:
            w[:n_sign] = np.maximum(w[:n_sign], 0.0)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return
        w /= nw
        best = float(np.linalg.norm(M @ w))
        for _ in range(pgd_iters):
            w = w - eta * 2.0 * (G @ w)
            if n_sign:
                w[:n_sign] = np.maximum(w[:n_sign], 0.0)
            nw = np.linalg.norm(w)
            if nw == 0.0:
                return
            w /= nw
            best = min(best, float(np.linalg.norm(M @ w)))
        cands.append(best)

    starts = [Vt[i] for i in range(min(k, 6))]
    starts += [np.abs(Vt[i]) for i in range(min(k, 3))]
    starts += [rng.standard_normal(k) for _ in range(3)]
    for w in starts:
        pgd(np.asarray(w, dtype=np.float64))
    return min(cands) if cands else np.inf


def hoffman_brute_force(sys, dim_limit=10):
    """Exact sharpness constant by enumeration, for tiny systems only.

    Enumerates subsets S of inequality rows whose relaxation leaves a
    subspace (strict-negativity test above), and for each solves the
    sphere-constrained minimum over v >= 0 supported on S plus a free
    range-of-F block; the overall minimum over subsets is the constant.
    """
    mF, mI, n = sys.F.n_rows, sys.F_ineq.n_rows, sys.n
    if mF + mI + n > dim_limit:
        raise ValueError(
            f"system size {mF}+{mI} rows + {n} cols exceeds dim_limit="
            f"{dim_limit}; use empirical_sharpness instead")
    Fd = sys.F.to_dense()
    Fi = sys.F_ineq.to_dense()
    if mF:
        U, sv, _ = np.linalg.svd(Fd)
        rank = int(np.sum(sv > 1e-12 * (sv[0] if len(sv) else 1.0)))
        Qb = U[:, :rank]
    else:
        rank = 0
        Qb = np.zeros((0, 0))
    FtQ = Fd.T @ Qb if rank else np.zeros((n, 0))

    best = np.inf
    for size in range(mI + 1):
        for S in itertools.combinations(range(mI), size):
            if not _strictly_negativable(Fd, Fi, S):
                continue
            blocks = [Fi[list(S)].T] if S else []
            if rank:
                blocks.append(FtQ)
            if not blocks:
                continue
            M = np.hstack(blocks) if len(blocks) > 1 else blocks[0]
            val = _min_norm_on_sphere(M, n_sign=len(S))
            best = min(best, val)
    if not np.isfinite(best):
        raise ValueError("system has no rows; sharpness undefined")
    return float(best)


def _aux_strictness_lp(Fd, Fi, i):
    """GeneralLP for: max t s.t. Fv=0, F_ineq v <= 0, F_ineq[i] v <= -t,
    ||v||_inf <= 1, with v split into nonnegative parts."""
    mF, d = Fd.shape
    mI = Fi.shape[0]
    nv = 2 * d + 1  # [p, q, t]
    A_E = np.zeros((mF, nv))
    A_E[:, :d] = Fd
    A_E[:, d:2 * d] = -Fd
    rows = []
    rhs = []
    for r in range(mI):
        row = np.zeros(nv)
        row[:d] = Fi[r]
        row[d:2 * d] = -Fi[r]
        if r == i:
            row[2 * d] = 1.0
        rows.append(row)
        rhs.append(0.0)
    for j in range(d):
        row = np.zeros(nv)
        row[j] = 1.0
        row[d + j] = -1.0
        rows.append(row)
        rhs.append(1.0)
        row = np.zeros(nv)
        row[j] = -1.0
        row[d + j] = 1.0
        rows.append(row)
        rhs.append(1.0)
    c = np.zeros(nv)
    c[2 * d] = -1.0
    return GeneralLP(A_E, np.zeros(mF), np.array(rows), np.array(rhs), c, nv)


def homogeneous_partition(F, F_ineq, strict_tol=1e-7):
    """Split inequality rows of {Fv=0, F_ineq v <= 0} into Q (admits a
    feasible point making the row strictly negative) and P (forced to
    equality on the whole cone).  Each row is decided by an auxiliary LP
    solved with this package's own PDHG solver at 1e-9."""
    Fd = F.to_dense()
    Fi = F_ineq.to_dense()
    mI = Fi.shape[0]
    P, Q = [], []
    cfg = SolverConfig(kkt_tol=1e-9, max_iters=500000, log_every=1000)
    for i in range(mI):
        gl = _aux_strictness_lp(Fd, Fi, i)
        res = solve(gl, cfg)
        if res.status != "optimal_tol":
            raise RuntimeError(
                f"auxiliary strictness solve failed on row {i}: {res.status}")
        t_star = res.z_final.x[2 * Fd.shape[1]]
        (Q if t_star > strict_tol else P).append(i)
    return np.array(P, dtype=np.int64), np.array(Q, dtype=np.int64)


def _alpha0_of_K(Fi_Q, seed=0):
    """Lower bound min_{w>=0, ||w||=1} ||F_Q^T w||; (value, certified)."""
    q = Fi_Q.shape[0]
    if q == 0:
        return np.inf, True
    M = Fi_Q.T  # d x q, every column sign-constrained
    if q <= ENUM_CAP:
        best = np.inf
        for size in range(1, q + 1):
            for S in itertools.combinations(range(q), size):
                best = min(best, _min_norm_on_sphere(M[:, list(S)],
                                                     n_sign=size, seed=seed))
        return float(best), True
    return float(_min_norm_on_sphere(M, n_sign=q, seed=seed)), False


def _alpha0_of_L(Fd, Fi_P, seed=0, pattern_tol=1e-9):
    """Exact sharpness of {Fv=0, F_P v <= 0} when that system's solution
    set is the subspace L = {Fv=0, F_P v=0}: minimize the residual
    ||(Fv; [F_P v]^+)|| over unit v orthogonal to L.  (value, certified)."""
    H = np.vstack([Fd, Fi_P]) if Fi_P.size else Fd
    if H.size == 0:
        return np.inf, True
    _, sv, Vt = np.linalg.svd(H)
    rank = int(np.sum(sv > 1e-12 * (sv[0] if len(sv) else 1.0)))
    if rank == 0:
        return np.inf, True
    B = Vt[:rank].T  # d x rank, orthonormal basis of L-perp
    FB = Fd @ B if Fd.size else np.zeros((0, rank))
    PB = Fi_P @ B if Fi_P.size else np.zeros((0, rank))
    p_rows = PB.shape[0]

    def residual_of(w):
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return None
        w = w / nw
        r_eq = FB @ w
        r_in = np.maximum(PB @ w, 0.0)
        return float(np.sqrt(r_eq @ r_eq + r_in @ r_in))

    cands = []
    certified = p_rows <= ENUM_CAP
    if certified:
        for size in range(p_rows + 1):
            for T in itertools.combinations(range(p_rows), size):
                M = np.vstack([FB, PB[list(T)]]) if T else FB
                if M.shape[0] == 0:
                    continue
                _, _, Vw = np.linalg.svd(M, full_matrices=True)
                for w in Vw:
                    for sgn in (1.0, -1.0):
                        ww = sgn * w
                        act = PB @ ww
                        ok = True
                        if T and np.min(act[list(T)]) < -pattern_tol:
                            ok = False
                        off = [r for r in range(p_rows) if r not in T]
                        if ok and off and np.max(act[off]) > pattern_tol:
                            ok = False
                        if ok:
                            cands.append(residual_of(ww))
    rng = np.random.default_rng(seed)
    G_eq = FB.T @ FB
    lip = 2.0 * (np.linalg.norm(H, 2) ** 2 + 1.0)

    def pgd(w):
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return
        w = w / nw
        best = residual_of(w)
        for _ in range(400):
            grad = 2.0 * (G_eq @ w) + 2.0 * (PB.T @ np.maximum(PB @ w, 0.0))
            w = w - grad / lip
            nw = np.linalg.norm(w)
            if nw == 0.0:
                return
            w = w / nw
            best = min(best, residual_of(w))
        cands.append(best)

    for _ in range(8):
        pgd(rng.standard_normal(rank))
    cands = [c for c in cands if c is not None]
    return (float(min(cands)) if cands else np.inf), certified


def alpha0_bounds(F, F_ineq, P, Q, seed=0):
    """(alpha0_L_lower, alpha0_K_lower) for the partitioned homogeneous
    system; certification flags are carried by the assembled report."""
    Fd = F.to_dense()
    Fi = F_ineq.to_dense()
    aL, _ = _alpha0_of_L(Fd, Fi[list(P)] if len(P) else Fi[:0], seed=seed)
    aK, _ = _alpha0_of_K(Fi[list(Q)] if len(Q) else Fi[:0], seed=seed)
    return float(aL), float(aK)


def angle_estimate(L_sys, K_sys, samples=60, seed=0, proj_tol=1e-9):
    """Sampled upper estimate of the subspace-cone angle
    inf_{u not in L∩K} max(dist(u,L), dist(u,K)) / dist(u, L∩K)."""
    rng = np.random.default_rng(seed)
    inter = L_sys.merged_with(K_sys)
    d = L_sys.n
    probes = [rng.standard_normal(d) for _ in range(samples)]
    for u in probes[:min(samples, 20)]:
        probes.append(project_polyhedron(u, L_sys, tol=proj_tol))
        probes.append(project_polyhedron(u, K_sys, tol=proj_tol))
    ratios = []
    for u in probes:
        qi = project_polyhedron(u, inter, tol=proj_tol)
        di = float(np.linalg.norm(u - qi))
        if di <= 1e-8 * (1.0 + float(np.linalg.norm(u))):
            continue
        dl = float(np.linalg.norm(u - project_polyhedron(u, L_sys, tol=proj_tol)))
        dk = float(np.linalg.norm(u - project_polyhedron(u, K_sys, tol=proj_tol)))
        ratios.append(max(dl, dk) / di)
    if not ratios:
        raise ValueError("all probes lie in the intersection")
    return float(min(min(ratios), 1.0))


@dataclass
class HomogeneousSharpnessReport:
    P: np.ndarray
    Q: np.ndarray
    alpha0_K_lower: float
    alpha0_L_lower: float
    angle_lower_estimate: float
    alpha_lower: float
    alpha_upper: float
    alpha0_K_certified: bool = False
    alpha0_L_certified: bool = False
    angle_certified: bool = False

    @property
    def alpha_lower_certified(self):
        return (self.alpha0_K_certified and self.alpha0_L_certified
                and self.angle_certified)

    def to_json_dict(self):
        return {
            "P": [int(i) for i in self.P],
            "Q": [int(i) for i in self.Q],
            "alpha0_L_lower": self.alpha0_L_lower,
            "alpha0_L_certified": bool(self.alpha0_L_certified),
            "alpha0_K_lower": self.alpha0_K_lower,
            "alpha0_K_certified": bool(self.alpha0_K_certified),
            "angle_lower_estimate": self.angle_lower_estimate,
            "angle_certified": bool(self.angle_certified),
            "alpha_lower": self.alpha_lower,
            "alpha_lower_certified": bool(self.alpha_lower_certified),
            "alpha_upper": self.alpha_upper,
        }

    def to_text(self):
        return json.dumps(self.to_json_dict(), indent=2)


def homogeneous_sharpness_report(F, F_ineq, samples=60, seed=0):
    """Partition the rows, bound alpha0 on both pieces, and combine with
    the angle: angle * min(alpha0_L, alpha0_K) <= alpha <= min(...)."""
    P, Q = homogeneous_partition(F, F_ineq)
    Fd = F.to_dense()
    Fi = F_ineq.to_dense()
    Fi_P = Fi[list(P)] if len(P) else Fi[:0]
    Fi_Q = Fi[list(Q)] if len(Q) else Fi[:0]
    aL, aL_cert = _alpha0_of_L(Fd, Fi_P, seed=seed)
    aK, aK_cert = _alpha0_of_K(Fi_Q, seed=seed)
    n = F.n_cols
    if len(Q) == 0:
        # K is the whole space: every ratio in the angle infimum is 1
        angle, angle_cert = 1.0, True
    elif Fd.size == 0 and len(P) == 0:
        # L is the whole space: symmetric case
        angle, angle_cert = 1.0, True
    else:
        L_sys = PolyhedralSystem.from_dense(
            np.vstack([Fd, Fi_P]) if Fi_P.size else Fd,
            np.zeros(Fd.shape[0] + Fi_P.shape[0]),
            np.zeros((0, n)), np.zeros(0))
        K_sys = PolyhedralSystem.from_dense(
            np.zeros((0, n)), np.zeros(0), Fi_Q, np.zeros(len(Q)))
        angle = angle_estimate(L_sys, K_sys, samples=samples, seed=seed)
        angle_cert = False
    upper = min(aL, aK)
    lower = angle * upper if np.isfinite(upper) else upper
    return HomogeneousSharpnessReport(
        P=P, Q=Q, alpha0_K_lower=float(aK), alpha0_L_lower=float(aL),
        angle_lower_estimate=float(angle), alpha_lower=float(lower),
        alpha_upper=float(upper), alpha0_K_certified=aK_cert,
        alpha0_L_certified=aL_cert, angle_certified=angle_cert)


def _columns_dense(A, cols):
    dense = A.to_dense()
    return dense[:, cols]


def identification_cone_system(lp, part, R):
    """Homogeneous cone in (u, v) tied to the identification bound: Au=0,
    A_B^T v <= 0, u >= 0 on N and B2, and the scaled gap row
    (c^T u - b^T v)/R <= 0."""
    if R <= 0:
        raise ValueError("R must be positive")
    A = lp.A.to_dense()
    m, n = A.shape
    B = np.sort(np.concatenate([part.B1, part.B2])).astype(int)
    eq = np.hstack([A, np.zeros((m, m))])
    rows = []
    for j in B:
        rows.append(np.concatenate([np.zeros(n), A[:, j]]))
    for i in np.sort(np.concatenate([part.N, part.B2]).astype(int)):
        r = np.zeros(n + m)
        r[i] = -1.0
        rows.append(r)
    rows.append(np.concatenate([lp.c, -lp.b]) / R)
    return PolyhedralSystem.from_dense(eq, np.zeros(m), np.array(rows),
                                       np.zeros(len(rows)))


def local_cone_system(lp, part, R2):
    """Homogeneous cone in (u_B, v) for the local rate: A_B u_B = 0,
    u >= 0 on B2, A_B^T v <= 0, and (c_B^T u_B - b^T v)/R2 <= 0.
    Columns in N are dropped."""
    if R2 <= 0:
        raise ValueError("R2 must be positive")
    A = lp.A.to_dense()
    m, n = A.shape
    B = np.sort(np.concatenate([part.B1, part.B2])).astype(int)
    nb = len(B)
    pos = {int(j): k for k, j in enumerate(B)}
    eq = np.hstack([A[:, B], np.zeros((m, m))])
    rows = []
    for i in np.sort(part.B2.astype(int)):
        r = np.zeros(nb + m)
        r[pos[int(i)]] = -1.0
        rows.append(r)
    for j in B:
        rows.append(np.concatenate([np.zeros(nb), A[:, j]]))
    rows.append(np.concatenate([lp.c[B], -lp.b]) / R2)
    return PolyhedralSystem.from_dense(eq, np.zeros(m), np.array(rows),
                                       np.zeros(len(rows)))


def active_set_polyhedron(lp, part, R):
    """The shifted solution-set polyhedron in (x, y): Ax=b, A_B^T y <= c_B,
    x >= 0 on N and B2, (c^T x - b^T y)/R <= 0.  Its solution set is
    z* + K for the cone K of identification_cone_system."""
    A = lp.A.to_dense()
    m, n = A.shape
    B = np.sort(np.concatenate([part.B1, part.B2])).astype(int)
    eq = np.hstack([A, np.zeros((m, m))])
    rows, rhs = [], []
    for j in B:
        rows.append(np.concatenate([np.zeros(n), A[:, j]]))
        rhs.append(lp.c[j])
    for i in np.sort(np.concatenate([part.N, part.B2]).astype(int)):
        r = np.zeros(n + m)
        r[i] = -1.0
        rows.append(r)
        rhs.append(0.0)
    rows.append(np.concatenate([lp.c, -lp.b]) / R)
    rhs.append(0.0)
    return PolyhedralSystem.from_dense(eq, lp.b, np.array(rows),
                                       np.array(rhs))


def kkt_polyhedron(lp, R):
    """The optimal-set polyhedron of a StandardLP in (x, y): Ax=b,
    A^T y <= c, x >= 0, (c^T x - b^T y)/R <= 0."""
    A = lp.A.to_dense()
    m, n = A.shape
    eq = np.hstack([A, np.zeros((m, m))])
    rows, rhs = [], []
    for j in range(n):
        rows.append(np.concatenate([np.zeros(n), A[:, j]]))
        rhs.append(lp.c[j])
    for i in range(n):
        r = np.zeros(n + m)
        r[i] = -1.0
        rows.append(r)
        rhs.append(0.0)
    rows.append(np.concatenate([lp.c, -lp.b]) / R)
    rhs.append(0.0)
    return PolyhedralSystem.from_dense(eq, lp.b, np.array(rows),
                                       np.array(rhs))
