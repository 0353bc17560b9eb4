"""Compare the compiled and numpy grid-scan kernels.

    python benchmarks/bench_kernels.py            # one row, best of 7
    python benchmarks/bench_kernels.py --full     # whole default grid per backend
"""

import argparse
import time
import timeit

import numpy as np

from minekrige import DEFAULT_GRID, CorrelogramModel, build_lambda, builtin_table1, grid_search, precompute
from minekrige.kernels import available_backends
from minekrige.search import _RowScanner


def bench_row(samples, model, pre, backend, repeat=7, number=20):
    easts = np.ascontiguousarray(DEFAULT_GRID.east_nodes())
    scanner = _RowScanner(samples, model, pre, easts, backend)
    obj = np.empty(easts.size)
    mean = np.empty(easts.size)
    t = min(timeit.repeat(lambda: scanner.row(12.3, obj, mean), number=number, repeat=repeat)) / number
    return t


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--full", action="store_true", help="also time a full default-grid search per backend")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    samples = builtin_table1()
    model = CorrelogramModel()
    pre = precompute(build_lambda(samples, model))
    backends = available_backends()
    print(f"n={samples.n} samples, row of {DEFAULT_GRID.n_east} nodes, backends: {', '.join(backends)}")

    row_times = {b: bench_row(samples, model, pre, b) for b in backends}
    for b, t in row_times.items():
        print(f"  {b:7s} {t * 1e3:8.3f} ms/row  ->  {t * DEFAULT_GRID.n_north:6.2f} s projected for the default grid")
    if "cython" in row_times:
        print(f"  speedup cython/python: {row_times['python'] / row_times['cython']:.2f}x")

    if args.full:
        for b in backends:
            t0 = time.perf_counter()
            rep, idx = grid_search(samples, model, DEFAULT_GRID, workers=args.workers, backend=b)
            dt = time.perf_counter() - t0
            print(f"  full grid [{b}] {dt:6.2f} s  node=({rep.node[0]:.1f}, {rep.node[1]:.1f}) objective={rep.objective:.3e}")


if __name__ == "__main__":
    main()
