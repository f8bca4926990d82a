"""Benchmark the mod-p row reduction kernel: numba jit vs the pure
numpy fallback.

The backend is chosen at import time from COHH_BACKEND / COHH_NO_NUMBA,
so this script imports the private implementations directly and times
both on the same inputs.

Usage: python3 scripts/bench_linalg.py [--sizes 100,200,400] [--prime 3]
"""

import argparse
import time

import numpy as np

from cohh._kernels import _rref_mod_p_numpy, _rref_mod_p_python


def time_kernel(kernel, a: np.ndarray, p: int, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        work = a.copy()
        start = time.perf_counter()
        kernel(work, p)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="100,200,400,800",
                        help="comma-separated square matrix sizes")
    parser.add_argument("--prime", type=int, default=3)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    kernels = [("numpy", _rref_mod_p_numpy)]
    try:
        from numba import njit
        jit = njit("int64(int64[:, ::1], int64)", cache=True)(
            _rref_mod_p_python)
        kernels.append(("numba", jit))
    except ImportError:
        print("numba not importable; timing the numpy fallback only")

    rng = np.random.default_rng(args.seed)
    p = args.prime
    sizes = [int(s) for s in args.sizes.split(",")]

    # warm up the jit outside the timed region
    for name, kernel in kernels:
        kernel(np.zeros((2, 2), dtype=np.int64), p)

    print(f"rref over F_{p}, best of {args.repeats}")
    header = f"{'size':>6}" + "".join(f"{name:>12}" for name, _ in kernels)
    print(header)
    for n in sizes:
        a = rng.integers(0, p, size=(n, n), dtype=np.int64)
        ranks = set()
        row = f"{n:>6}"
        for name, kernel in kernels:
            elapsed = time_kernel(kernel, a, p, args.repeats)
            work = a.copy()
            ranks.add(int(kernel(work, p)))
            row += f"{elapsed * 1e3:>10.1f}ms"
        assert len(ranks) == 1, "backends disagree on the rank"
        print(row)


if __name__ == "__main__":
    main()
