"""Sparse CSR storage and the matrix-free kernels everything else uses.

The matrix is stored in compressed row form only; transpose products are
computed by scattering over rows rather than materializing A^T, keeping
memory proportional to the number of stored entries.
"""

import numpy as np

from . import kernels


class SparseMatrix:
    """Immutable CSR matrix with deterministic matvec kernels.

    Invariants enforced at construction: column indices strictly increasing
    within each row, offsets non-decreasing, no stored exact zeros.
    """

    __slots__ = ("n_rows", "n_cols", "indptr", "indices", "data")

    def __init__(self, n_rows, n_cols, indptr, indices, data, _checked=False):
        self.n_rows = int(n_rows)
        self.n_cols = int(n_cols)
        self.indptr = np.ascontiguousarray(indptr, dtype=np.int32)
        self.indices = np.ascontiguousarray(indices, dtype=np.int32)
        self.data = np.ascontiguousarray(data, dtype=np.float64)
        if not _checked:
            self._validate()

    def _validate(self):
        if self.indptr.shape != (self.n_rows + 1,):
            raise ValueError("indptr must have length n_rows + 1")
        if self.indptr[0] != 0 or self.indptr[-1] != len(self.data):
            raise ValueError("indptr must start at 0 and end at nnz")
        if np.any(np.diff(self.indptr) < 0):
            raise ValueError("indptr must be non-decreasing")
        if len(self.indices) != len(self.data):
            raise ValueError("indices and data length mismatch")
        if len(self.indices):
            if self.indices.min() < 0 or self.indices.max() >= self.n_cols:
                raise ValueError("column index out of range")
        for i in range(self.n_rows):
            lo, hi = self.indptr[i], self.indptr[i + 1]
            if hi - lo > 1 and np.any(np.diff(self.indices[lo:hi]) <= 0):
                raise ValueError("column indices must be strictly increasing per row")
        if np.any(self.data == 0.0):
            raise ValueError("explicit zeros are not stored")
        if not np.all(np.isfinite(self.data)):
            raise ValueError("matrix entries must be finite")

    @classmethod
    def from_dense(cls, arr):
        arr = np.asarray(arr, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError("from_dense expects a 2-D array")
        m, n = arr.shape
        indptr = np.zeros(m + 1, dtype=np.int64)
        indices = []
        data = []
        for i in range(m):
            (cols,) = np.nonzero(arr[i])
            indices.append(cols)
            data.append(arr[i, cols])
            indptr[i + 1] = indptr[i] + len(cols)
        indices = np.concatenate(indices) if indices else np.zeros(0)
        data = np.concatenate(data) if data else np.zeros(0)
        return cls(m, n, indptr, indices, data, _checked=True)

    @classmethod
    def from_coo(cls, n_rows, n_cols, rows, cols, vals):
        """Build from triplets; duplicate (row, col) pairs are summed and
        exact zeros pruned after summation."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        vals = np.asarray(vals, dtype=np.float64)
        if not (len(rows) == len(cols) == len(vals)):
            raise ValueError("triplet arrays must have equal length")
        if len(rows) and (rows.min() < 0 or rows.max() >= n_rows
                          or cols.min() < 0 or cols.max() >= n_cols):
            raise ValueError("triplet index out of range")
        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        # sum duplicates
        if len(rows):
            keep = np.ones(len(rows), dtype=bool)
            keep[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
            group = np.cumsum(keep) - 1
            summed = np.zeros(group[-1] + 1)
            np.add.at(summed, group, vals)
            rows, cols, vals = rows[keep], cols[keep], summed
        nz = vals != 0.0
        rows, cols, vals = rows[nz], cols[nz], vals[nz]
        indptr = np.zeros(n_rows + 1, dtype=np.int64)
        np.add.at(indptr, rows + 1, 1)
        indptr = np.cumsum(indptr)
        return cls(n_rows, n_cols, indptr, cols, vals, _checked=True)

    @property
    def shape(self):
        return (self.n_rows, self.n_cols)

    @property
    def nnz(self):
        return len(self.data)

    def to_dense(self):
        out = np.zeros((self.n_rows, self.n_cols))
        for i in range(self.n_rows):
            lo, hi = self.indptr[i], self.indptr[i + 1]
            out[i, self.indices[lo:hi]] = self.data[lo:hi]
        return out

    def row_dense(self, i):
        out = np.zeros(self.n_cols)
        lo, hi = self.indptr[i], self.indptr[i + 1]
        out[self.indices[lo:hi]] = self.data[lo:hi]
        return out

    def take_rows(self, idx):
        idx = np.asarray(idx, dtype=np.int64)
        indptr = np.zeros(len(idx) + 1, dtype=np.int64)
        chunks_i, chunks_d = [], []
        for k, i in enumerate(idx):
            lo, hi = self.indptr[i], self.indptr[i + 1]
            chunks_i.append(self.indices[lo:hi])
            chunks_d.append(self.data[lo:hi])
            indptr[k + 1] = indptr[k] + (hi - lo)
        indices = np.concatenate(chunks_i) if chunks_i else np.zeros(0)
        data = np.concatenate(chunks_d) if chunks_d else np.zeros(0)
        return SparseMatrix(len(idx), self.n_cols, indptr, indices, data,
                            _checked=True)

    def scale(self, d_row, d_col):
        """Return diag(d_row) @ A @ diag(d_col) with the same pattern."""
        d_row = np.asarray(d_row, dtype=np.float64)
        d_col = np.asarray(d_col, dtype=np.float64)
        row_of = np.repeat(np.arange(self.n_rows), np.diff(self.indptr))
        data = self.data * d_row[row_of] * d_col[self.indices]
        return SparseMatrix(self.n_rows, self.n_cols, self.indptr,
                            self.indices, data, _checked=True)

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.shape == other.shape
                and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices)
                and np.array_equal(self.data, other.data))

    def __repr__(self):
        return f"SparseMatrix({self.n_rows}x{self.n_cols}, nnz={self.nnz})"


def matvec(A, x):
    """A @ x with fixed row-major accumulation order."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.shape != (A.n_cols,):
        raise ValueError(f"matvec: expected length {A.n_cols}, got {x.shape}")
    out = np.empty(A.n_rows)
    kernels.csr_matvec(A.data, A.indices, A.indptr, A.n_rows, x, out)
    return out


def matvec_transpose(A, y):
    """A^T @ y by scatter over the rows of A."""
    y = np.ascontiguousarray(y, dtype=np.float64)
    if y.shape != (A.n_rows,):
        raise ValueError(f"matvec_transpose: expected length {A.n_rows}, got {y.shape}")
    out = np.empty(A.n_cols)
    kernels.csr_matvec_transpose(A.data, A.indices, A.indptr, A.n_rows,
                                 A.n_cols, y, out)
    return out


def frobenius_norm(A):
    return float(np.sqrt(np.sum(A.data * A.data)))


def spectral_norm_estimate(A, rel_tol=1e-4, max_iter=5000, seed=0,
                           with_flag=False):
    """Power-iteration estimate of ||A||_2.

    Iterates v <- A^T A v from a seeded random start; the returned value
    sigma_hat converges to ||A||_2 from below, with ||A||_2 <= sigma_hat *
    (1 + rel_tol) once the relative change stalls below rel_tol / 10.
    All-zero matrices return 0.  With with_flag=True also returns whether
    the stall criterion was met within max_iter.
    """
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    if A.nnz == 0:
        return (0.0, True) if with_flag else 0.0
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(A.n_cols)
    nv = np.linalg.norm(v)
    v /= nv
    sigma = 0.0
    converged = False
    for _ in range(max_iter):
        u = matvec(A, v)
        sigma_new = float(np.linalg.norm(u))
        w = matvec_transpose(A, u)
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            # v landed exactly in the null space of A^T A
            sigma, converged = sigma_new, sigma_new == 0.0
            break
        v = w / nw
        if sigma > 0.0 and abs(sigma_new - sigma) <= 0.1 * rel_tol * sigma_new:
            sigma = sigma_new
            converged = True
            break
        sigma = sigma_new
    return (sigma, converged) if with_flag else sigma


def conjugate_gradient(apply_op, rhs, rel_tol=1e-12, max_iter=None):
    """CG for SPD operators given as a matvec closure; returns the solution.

    rel_tol is on the residual norm relative to ||rhs||.
    """
    rhs = np.asarray(rhs, dtype=np.float64)
    n = len(rhs)
    if max_iter is None:
        max_iter = 20 * n + 100
    x = np.zeros(n)
    r = rhs.copy()
    p = r.copy()
    rho = float(r @ r)
    nrhs = float(np.sqrt(rho))
    if nrhs == 0.0:
        return x
    tol2 = (rel_tol * nrhs) ** 2
    for _ in range(max_iter):
        if rho <= tol2:
            break
        q = apply_op(p)
        denom = float(p @ q)
        if denom <= 0.0:
            # operator not PD along p within round-off; bail with best iterate
            break
        alpha = rho / denom
        x += alpha * p
        r -= alpha * q
        rho_new = float(r @ r)
        p = r + (rho_new / rho) * p
        rho = rho_new
    return x
