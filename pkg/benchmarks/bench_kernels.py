"""Timing comparison of the compiled and pure-Python PDHG kernels.

Runs the fused sweep and the two matvecs on a random planted instance
with both backends (the pure one is loaded directly, no env tricks) and
prints iterations/second.  Usage: python benchmarks/bench_kernels.py
[m] [n] [iters]
"""

import sys
import time

import numpy as np

from pdhglp import _core_py
from pdhglp import kernels as active
from pdhglp.instances import random_planted_lp


def bench_backend(mod, lp, iters):
    A, b, c = lp.A, lp.b, lp.c
    m, n = A.shape
    s = 0.9 / np.linalg.norm(A.to_dense(), 2)
    x = np.zeros(n)
    y = np.zeros(m)
    xp, yp = np.zeros(n), np.zeros(m)
    aty, ax = np.zeros(n), np.zeros(m)
    # warm up once so import/jit effects stay out of the timing
    mod.pdhg_sweep(A.data, A.indices, A.indptr, m, n, b, c, s, m, 10,
                   x, y, xp, yp, aty, ax)
    t0 = time.perf_counter()
    mod.pdhg_sweep(A.data, A.indices, A.indptr, m, n, b, c, s, m, iters,
                   x, y, xp, yp, aty, ax)
    sweep_dt = time.perf_counter() - t0
    t0 = time.perf_counter()
    for _ in range(iters):
        mod.csr_matvec(A.data, A.indices, A.indptr, m, x, ax)
        mod.csr_matvec_transpose(A.data, A.indices, A.indptr, m, n, y, aty)
    mv_dt = time.perf_counter() - t0
    return sweep_dt, mv_dt, (x.copy(), y.copy())


def main():
    m = int(sys.argv[1]) if len(sys.argv) > 1 else 200
    n = int(sys.argv[2]) if len(sys.argv) > 2 else 400
    iters = int(sys.argv[3]) if len(sys.argv) > 3 else 20000
    lp, _ = random_planted_lp(m, n, seed=7)
    print(f"instance: {m}x{n}, nnz={lp.A.nnz}, {iters} iterations")
    print(f"active backend: {active.BACKEND}")
    results = {}
    for name, mod in (("compiled", active), ("pure-python", _core_py)):
        if name == "compiled" and active.BACKEND != "compiled":
            print("compiled backend unavailable; skipping")
            continue
        sweep_dt, mv_dt, final = bench_backend(mod, lp, iters)
        results[name] = (sweep_dt, final)
        print(f"{name:12s} sweep: {iters / sweep_dt:10.0f} it/s "
              f"({sweep_dt:.3f} s)   matvec pair: {iters / mv_dt:10.0f} it/s")
    if len(results) == 2:
        (xc, yc) = results["compiled"][1]
        (xp_, yp_) = results["pure-python"][1]
        same = np.array_equal(xc, xp_) and np.array_equal(yc, yp_)
        print(f"bitwise identical iterates: {same}")
        print(f"speedup: {results['pure-python'][0] / results['compiled'][0]:.1f}x")


if __name__ == "__main__":
    main()
