"""Built-in test problems: the house polygon dual, the thin wedge, random
planted-solution LPs, and coefficient perturbation.
"""

import numpy as np

from .model import GeneralLP, PrimalDualPoint, StandardLP
from .sparse import SparseMatrix


def house(kappa=0.5, delta=0.1):
    """Six-generator LP whose dual feasible region is a house-shaped
    polygon: walls |y1| <= 1, floor y2 >= -1, cap y2 <= kappa - delta,
    roof |y1| + y2/kappa <= 1.  The dual maximizes y2, so the optimal
    value is kappa - delta; delta controls how non-degenerate the cap
    optimum is (delta = 0 puts it at the degenerate roof peak).
    """
    if not (kappa > 0.0 and kappa < 1.0):
        raise ValueError("kappa must lie in (0, 1)")
    if not (0.0 <= delta <= kappa):
        raise ValueError("delta must lie in [0, kappa]")
    # generators g_i (rows): walls, floor, cap, two roof slopes
    G = np.array([
        [-1.0, 0.0],
        [1.0, 0.0],
        [0.0, -1.0],
        [0.0, 1.0],
        [1.0, 1.0 / kappa],
        [-1.0, 1.0 / kappa],
    ])
    A_E = G.T  # 2 x 6: primal asks for sum x_i g_i = (0, 1)
    b_E = np.array([0.0, 1.0])
    c = np.array([1.0, 1.0, 1.0, kappa - delta, 1.0, 1.0])
    empty = SparseMatrix(0, 6, np.zeros(1, dtype=np.int64), np.zeros(0),
                         np.zeros(0), _checked=True)
    return GeneralLP(A_E, b_E, empty, np.zeros(0), c, 6)


def wedge(kappa=1e-2):
    """Three-variable standard LP with a thin dual optimal face.

    Unique primal optimum (1, 0, 0); the dual optimal face is the segment
    {y2 = 1, 0 <= y1 <= (1 + kappa)/kappa}, whose length blows up as
    kappa -> 0.  Sharpness near the far end of the face degrades like
    kappa, making this the canonical slow-local-rate example.
    """
    if kappa <= 0.0:
        raise ValueError("kappa must be positive")
    A = np.array([[0.0, -1.0, kappa], [1.0, 0.0, -1.0]])
    b = np.array([0.0, 1.0])
    c = np.array([1.0, 0.0, kappa])
    return StandardLP(A, b, c)


def _perturbed_data(data, sigma, rng):
    out = data + sigma * rng.standard_normal(len(data))
    while np.any(out == 0.0):
        # keep the sparsity pattern: redraw entries that cancelled exactly
        hit = out == 0.0
        out[hit] = data[hit] + sigma * rng.standard_normal(int(hit.sum()))
    return out


def perturb(problem, sigma, seed=0):
    """Additive N(0, sigma^2) noise on every stored entry of the matrix
    blocks (the sparsity pattern is preserved) and on every entry of the
    right-hand sides and costs.  Returns the same problem type."""
    if sigma < 0.0:
        raise ValueError("sigma must be nonnegative")
    rng = np.random.default_rng(seed)
    if isinstance(problem, StandardLP):
        A = problem.A
        A2 = SparseMatrix(A.n_rows, A.n_cols, A.indptr.copy(),
                          A.indices.copy(), _perturbed_data(A.data, sigma, rng),
                          _checked=True)
        b2 = problem.b + sigma * rng.standard_normal(len(problem.b))
        c2 = problem.c + sigma * rng.standard_normal(len(problem.c))
        return StandardLP(A2, b2, c2)
    ae, ai = problem.A_E, problem.A_I
    ae2 = SparseMatrix(ae.n_rows, ae.n_cols, ae.indptr.copy(),
                       ae.indices.copy(), _perturbed_data(ae.data, sigma, rng),
                       _checked=True)
    ai2 = SparseMatrix(ai.n_rows, ai.n_cols, ai.indptr.copy(),
                       ai.indices.copy(), _perturbed_data(ai.data, sigma, rng),
                       _checked=True)
    be2 = problem.b_E + sigma * rng.standard_normal(len(problem.b_E))
    bi2 = problem.b_I + sigma * rng.standard_normal(len(problem.b_I))
    c2 = problem.c + sigma * rng.standard_normal(len(problem.c))
    return GeneralLP(ae2, be2, ai2, bi2, c2, problem.n)


def random_planted_lp(m, n, degenerate=False, seed=0):
    """Random standard LP with a planted optimal pair.

    A is Gaussian with density 0.4 (every row and column touched), basis
    columns are drawn until A_B is comfortably nonsingular, x*_B is
    uniform in [0.5, 1.5], b = A x*, and c = A^T y* + r with strictly
    positive off-basis reduced costs r -- so (x*, y*) is optimal and, in
    the non-degenerate case, the unique primal-dual solution.  With
    degenerate=True one basic primal value and one off-basis reduced cost
    are zeroed, breaking strict complementarity.

    Returns (StandardLP, PrimalDualPoint).
    """
    if n < m:
        raise ValueError("need n >= m to plant a basis")
    rng = np.random.default_rng(seed)
    A = None
    basis = None
    for _ in range(50):
        mask = rng.random((m, n)) < 0.4
        vals = rng.standard_normal((m, n))
        cand = np.where(mask, vals, 0.0)
        for i in np.where(~cand.any(axis=1))[0]:
            cand[i, rng.integers(n)] = rng.standard_normal()
        for j in np.where(~cand.any(axis=0))[0]:
            cand[rng.integers(m), j] = rng.standard_normal()
        bas = np.sort(rng.choice(n, size=m, replace=False))
        sv = np.linalg.svd(cand[:, bas], compute_uv=False)
        if sv[-1] > 1e-6:
            A = cand
            basis = bas
            break
    if A is None:
        raise RuntimeError("failed to draw a well-conditioned basis")
    x_star = np.zeros(n)
    x_star[basis] = rng.uniform(0.5, 1.5, size=m)
    if degenerate:
        x_star[basis[0]] = 0.0
    b = A @ x_star
    y_star = rng.standard_normal(m)
    off = np.setdiff1d(np.arange(n), basis)
    r = np.zeros(n)
    r[off] = rng.uniform(0.5, 1.5, size=len(off))
    if degenerate and len(off):
        r[off[0]] = 0.0
    c = A.T @ y_star + r
    return StandardLP(A, b, c), PrimalDualPoint(x_star, y_star)
