"""Compare the numba and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--bound 1e6] [--repeat 3]

Times the prime sieve and the factorization-pattern kernel on the quartic
x^4 - x^2 - 1, checks that both backends return identical arrays, and prints
a table of best-of-N wall times.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from orbivol.numbertheory import kernels

QUARTIC = np.array([-1, 0, -1, 0, 1], dtype=np.int64)  # ascending coefficients


def best_of(fn, repeat):
    best, result = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bound", type=float, default=1e6)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    bound = int(args.bound)

    backends = [kernels.numpy_backend]
    if kernels.numba_backend is None:
        print("numba not installed: timing the numpy backend only")
    else:
        backends.insert(0, kernels.numba_backend)
        # compile outside the timed region
        kernels.numba_backend.sieve(100)
        kernels.numba_backend.factor_pattern(QUARTIC, np.array([3, 5, 7], dtype=np.int64))

    rows, outputs = [], {}
    for be in backends:
        t_sieve, primes = best_of(lambda: be.sieve(bound), args.repeat)
        primes = primes[primes > 5]
        t_fact, pattern = best_of(lambda: be.factor_pattern(QUARTIC, primes), args.repeat)
        outputs[be.name] = (primes, pattern)
        rows.append((be.name, t_sieve, t_fact, len(primes)))

    print(f"primes <= {bound:.0e}, best of {args.repeat}")
    print(f"{'backend':<8} {'sieve [s]':>10} {'factor_pattern [s]':>19} {'primes':>9}")
    for name, ts, tf, n in rows:
        print(f"{name:<8} {ts:>10.4f} {tf:>19.4f} {n:>9}")
    if len(rows) == 2:
        (p1, f1), (p2, f2) = outputs.values()
        same = np.array_equal(p1, p2) and np.array_equal(f1, f2)
        print(f"speedup (numpy/numba): sieve {rows[1][1] / rows[0][1]:.1f}x, "
              f"factor_pattern {rows[1][2] / rows[0][2]:.1f}x; outputs identical: {same}")


if __name__ == "__main__":
    main()
