"""Compare the compiled and pure-Python exact-arithmetic kernels.

Runs the four LP kernels on identical rational workloads with both backends
and prints per-kernel timings plus the speedup. Usage:

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

import triloc._core_py as py_backend
from triloc.rational import rat

try:
    import triloc._core as c_backend
except ImportError:
    c_backend = None


def make_tableau(rows, cols, rng):
    T = np.empty((rows, cols), dtype=object)
    for i in range(rows):
        for j in range(cols):
            k = int(rng.integers(-6, 7))
            T[i, j] = rat(k, int(rng.integers(1, 5))) if k else rat(0)
    return T


def make_sparse_row(size, rng):
    return {int(j): rat(int(rng.integers(1, 9)), int(rng.integers(1, 7)))
            for j in rng.choice(2 * size, size=size, replace=False)}


def bench_tableau_pivot(backend, repeat):
    rng = np.random.default_rng(0)
    base = make_tableau(60, 150, rng)
    # force nonzero pivots along the walked diagonal
    for k in range(min(base.shape)):
        if not base[k, k]:
            base[k, k] = rat(1)
    start = time.perf_counter()
    for _ in range(repeat):
        T = base.copy()
        for k in range(0, 40):
            backend.tableau_pivot(T, k, k)
    return time.perf_counter() - start


def bench_sparse_axpy(backend, repeat):
    rng = np.random.default_rng(1)
    src = make_sparse_row(160, rng)
    factor = rat(3, 7)
    start = time.perf_counter()
    for _ in range(repeat * 3000):
        dst = dict(src)
        backend.sparse_axpy(dst, src, factor)
    return time.perf_counter() - start


def bench_sparse_scale(backend, repeat):
    rng = np.random.default_rng(2)
    row = make_sparse_row(160, rng)
    up, down = rat(5, 3), rat(3, 5)
    start = time.perf_counter()
    for _ in range(repeat * 3000):
        backend.sparse_scale(row, up)
        backend.sparse_scale(row, down)
    return time.perf_counter() - start


def bench_sparse_dot(backend, repeat):
    rng = np.random.default_rng(3)
    col = make_sparse_row(120, rng)
    y = [rat(int(rng.integers(-4, 5)), 3) for _ in range(240)]
    start = time.perf_counter()
    for _ in range(repeat * 6000):
        backend.sparse_dot(col, y)
    return time.perf_counter() - start


BENCHES = (
    ("tableau_pivot", bench_tableau_pivot),
    ("sparse_axpy", bench_sparse_axpy),
    ("sparse_scale", bench_sparse_scale),
    ("sparse_dot", bench_sparse_dot),
)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3,
                        help="workload multiplier (default 3)")
    args = parser.parse_args()
    if c_backend is None:
        print("compiled backend unavailable; showing pure Python only")
    print(f"{'kernel':<16}{'python':>10}{'compiled':>10}{'speedup':>9}")
    for name, bench in BENCHES:
        t_py = bench(py_backend, args.repeat)
        if c_backend is None:
            print(f"{name:<16}{t_py:>9.3f}s{'-':>10}{'-':>9}")
            continue
        t_c = bench(c_backend, args.repeat)
        print(f"{name:<16}{t_py:>9.3f}s{t_c:>9.3f}s{t_py / t_c:>8.2f}x")


if __name__ == "__main__":
    main()
