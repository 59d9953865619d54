"""Benchmark the compiled chain kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--L 4 6 8] [--periods 5]

Measures the matrix-free Hamiltonian application and the adaptive evolution
loop on the strongly driven interacting chain, reporting the speedup of the
compiled extension over the numpy fallback and the agreement between them.
"""

import argparse
import time

import numpy as np

from glidedtc.backend import BACKEND, get_backend
from glidedtc.manybody import ChainParams, build_initial_state


def time_apply(backend, psi, L, repeats):
    fn = backend.chain_apply
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn(psi, L, 0.3, 0.7, 0.2, 0.0, 0, False)
    return (time.perf_counter() - t0) / repeats


def time_evolve(backend, psi, L, alpha, t_out, tol):
    t0 = time.perf_counter()
    out = backend.chain_evolve(psi, L, alpha, 1.0, 0.2, 0.0, 0, False,
                               t_out, tol, 10**8)
    return time.perf_counter() - t0, out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--L", type=int, nargs="+", default=[4, 6, 8])
    parser.add_argument("--periods", type=int, default=5)
    parser.add_argument("--alpha", type=float, default=17.11)
    parser.add_argument("--tol", type=float, default=1e-10)
    args = parser.parse_args()

    if BACKEND != "cython":
        print("compiled extension not available; nothing to compare")
        return

    cy = get_backend("cython")
    py = get_backend("python")
    print(f"alpha = {args.alpha}, J = 0.2, {args.periods} periods, tol = {args.tol}")
    print(f"{'L':>3} {'apply py':>12} {'apply cy':>12} {'x':>6} "
          f"{'evolve py':>12} {'evolve cy':>12} {'x':>6} {'max |diff|':>11}")
    for L in args.L:
        params = ChainParams(L=L, alpha=args.alpha, J=0.2)
        psi = build_initial_state(L)
        repeats = max(3, 3000 // (1 << L))
        ta_py = time_apply(py, psi, L, repeats)
        ta_cy = time_apply(cy, psi, L, repeats)
        t_out = np.linspace(0.0, args.periods * params.period,
                            8 * args.periods + 1)
        te_py, out_py = time_evolve(py, psi, L, args.alpha, t_out, args.tol)
        te_cy, out_cy = time_evolve(cy, psi, L, args.alpha, t_out, args.tol)
        diff = float(np.max(np.abs(out_py - out_cy)))
        print(f"{L:>3} {ta_py*1e6:>10.1f}us {ta_cy*1e6:>10.1f}us "
              f"{ta_py/ta_cy:>6.1f} {te_py:>11.3f}s {te_cy:>11.3f}s "
              f"{te_py/te_cy:>6.1f} {diff:>11.2e}")


if __name__ == "__main__":
    main()
