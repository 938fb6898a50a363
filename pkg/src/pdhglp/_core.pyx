# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: CSR matvecs and the fused PDHG sweep.

Accumulation order is fixed (row-major, index order within each row) so
results are reproducible bit for bit across runs.  The pure-Python module
``_core_py`` implements the same signatures and is selected at import time
when this extension is unavailable.
"""

import numpy as np

cimport numpy as cnp


def backend_name():
    return "compiled"


def csr_matvec(double[::1] data, int[::1] indices, int[::1] indptr,
               Py_ssize_t m, double[::1] x, double[::1] out):
    """out = A x for A in CSR form (m rows)."""
    cdef Py_ssize_t i, p
    cdef double acc
    for i in range(m):
        acc = 0.0
        for p in range(indptr[i], indptr[i + 1]):
            acc += data[p] * x[indices[p]]
        out[i] = acc


def csr_matvec_transpose(double[::1] data, int[::1] indices, int[::1] indptr,
                         Py_ssize_t m, Py_ssize_t n, double[::1] y,
                         double[::1] out):
    """out = A^T y by scatter over the rows of A (no transpose stored)."""
    cdef Py_ssize_t i, j, p
    cdef double yi
    for j in range(n):
        out[j] = 0.0
    for i in range(m):
        yi = y[i]
        for p in range(indptr[i], indptr[i + 1]):
            out[indices[p]] += data[p] * yi


def pdhg_sweep(double[::1] data, int[::1] indices, int[::1] indptr,
               Py_ssize_t m, Py_ssize_t n, double[::1] b, double[::1] c,
               double s, Py_ssize_t m_eq, Py_ssize_t iters,
               double[::1] x, double[::1] y,
               double[::1] xp, double[::1] yp,
               double[::1] aty, double[::1] ax):
    """Run ``iters`` PDHG iterations in place.

    On exit (x, y) holds the final iterate and (xp, yp) the one before it.
    Rows with index >= m_eq are inequality rows: their duals are projected
    onto the nonpositive halfline after every update.  aty (len n) and
    ax (len m) are scratch buffers.
    """
    cdef Py_ssize_t t, i, j, p
    cdef double yi, acc, v
    for t in range(iters):
        for j in range(n):
            xp[j] = x[j]
        for i in range(m):
            yp[i] = y[i]
        # aty = A^T y
        for j in range(n):
            aty[j] = 0.0
        for i in range(m):
            yi = yp[i]
            for p in range(indptr[i], indptr[i + 1]):
                aty[indices[p]] += data[p] * yi
        # x = proj_{>=0}(x - s (c - A^T y))
        for j in range(n):
            v = xp[j] - s * (c[j] - aty[j])
            x[j] = v if v > 0.0 else 0.0
        # y update with extrapolated primal 2 x_new - x_old
        for i in range(m):
            acc = 0.0
            for p in range(indptr[i], indptr[i + 1]):
                j = indices[p]
                acc += data[p] * (2.0 * x[j] - xp[j])
            v = yp[i] - s * (acc - b[i])
            if i >= m_eq and v > 0.0:
                v = 0.0
            y[i] = v
