"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py --m 10 --repeat 3

The first numba call per kernel includes JIT compilation (or a cache load)
and is excluded by a warm-up run.
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from tsnet import _kernels
from tsnet.generators import build_niederreiter
from tsnet.gfpoly import parse_poly


def workloads(m: int):
    sys = build_niederreiter(2, [parse_poly("x", 2), parse_poly("x+1", 2)], m)
    X = sys.generate().coords
    N = len(X)
    small = X[: min(N, 256)]
    cands = [np.append(np.unique(small[:, i]), 2**m) for i in range(2)]
    ranks = np.column_stack([np.searchsorted(c, small[:, i]) for i, c in enumerate(cands)])
    sizes = np.array([len(c) for c in cands])
    d = (m // 2, m - m // 2)
    divisors = np.array([2 ** (m - di) for di in d])
    strides = np.array([2 ** d[1], 1])
    G = np.array([2 ** (m - 1) + 3, 2 ** (m - 2) + 1])
    return {
        f"pair_min (N={N}, sequence form)": lambda be: _kernels.pair_min(X, 2, m, m, True, backend=be),
        f"cell_counts (N={N})": lambda be: _kernels.cell_counts(X, divisors, strides, 2**m, backend=be),
        f"box_count (N={N})": lambda be: _kernels.box_count(X, G, backend=be),
        f"corner_counts (N={len(small)})": lambda be: _kernels.corner_counts(ranks, sizes, backend=be),
    }


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times) if repeat < 3 else statistics.median(times)


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=10, help="log2 of the number of points")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    backends = [b for b in ("numba", "numpy") if b in _kernels.KERNELS]
    print(f"{'kernel':38s}" + "".join(f"{b:>12s}" for b in backends) + f"{'speed-up':>10s}")
    for name, fn in workloads(args.m).items():
        row = []
        for be in backends:
            fn(be)  # warm-up / compile
            row.append(best_of(lambda: fn(be), args.repeat))
        ratio = row[1] / row[0] if len(row) == 2 and row[0] > 0 else float("nan")
        print(f"{name:38s}" + "".join(f"{t * 1e3:10.2f}ms" for t in row) + f"{ratio:9.1f}x")


if __name__ == "__main__":
    main()
