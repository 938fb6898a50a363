"""Pure-Python fallback for the compiled kernels in ``_core.pyx``.

Same signatures, same in-place conventions.  Matvecs go through scipy's
serial CSR/CSC routines, which accumulate in the same row-major index
order as the compiled scatter loops.
"""

import numpy as np
import scipy.sparse as sp


def backend_name():
    return "python"


def _as_csr(data, indices, indptr, m, n):
    return sp.csr_matrix((np.asarray(data), np.asarray(indices), np.asarray(indptr)),
                         shape=(m, n), copy=False)


def csr_matvec(data, indices, indptr, m, x, out):
    n = len(x)
    A = _as_csr(data, indices, indptr, m, n)
    out[:] = A @ np.asarray(x)


def csr_matvec_transpose(data, indices, indptr, m, n, y, out):
    A = _as_csr(data, indices, indptr, m, n)
    # A.T is a CSC view over the same arrays; its matvec is exactly the
    # deterministic scatter over the rows of A.
    out[:] = A.T @ np.asarray(y)


def pdhg_sweep(data, indices, indptr, m, n, b, c, s, m_eq, iters,
               x, y, xp, yp, aty, ax):
    A = _as_csr(data, indices, indptr, m, n)
    At = A.T
    b = np.asarray(b)
    c = np.asarray(c)
    for _ in range(iters):
        xp[:] = x
        yp[:] = y
        aty[:] = At @ yp
        np.maximum(xp - s * (c - aty), 0.0, out=x)
        ax[:] = A @ (2.0 * x - xp)
        y[:] = yp - s * (ax - b)
        if m_eq < m:
            np.minimum(y[m_eq:], 0.0, out=y[m_eq:])
