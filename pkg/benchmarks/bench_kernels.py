#!/usr/bin/env python3
"""Benchmark the compiled scoring kernels against the numpy fallback.

Times the three batch kernels and a full ranking run on synthetic data:

    python3 benchmarks/bench_kernels.py [--rows 10000] [--cols 100] [--repeat 5]
"""

from __future__ import annotations

import argparse
import pathlib
import sys
import time

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from tanisearch import DescriptorMatrix, DrugClass, rank_database  # noqa: E402
from tanisearch import _kernels_py  # noqa: E402

try:
    from tanisearch import _ckernels
except ImportError:
    _ckernels = None


def best_of(repeat, func, *args):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        func(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rows", type=int, default=10_000)
    parser.add_argument("--cols", type=int, default=100)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    block = rng.uniform(-5.0, 5.0, size=(args.rows, args.cols))
    ref = np.ascontiguousarray(block[0])
    w = rng.uniform(0.1, 4.0, size=args.cols)

    backends = [("python", _kernels_py)]
    if _ckernels is not None:
        backends.append(("cython", _ckernels))
    else:
        print("compiled backend not built; run `python3 setup.py build_ext --inplace`")

    kernels = [
        ("tanimoto_block", lambda b: (block, ref)),
        ("euclidean_block", lambda b: (block, ref)),
        ("weighted_euclidean_block", lambda b: (block, ref, w)),
    ]

    print(f"{args.rows} x {args.cols} block, best of {args.repeat}")
    print(f"{'kernel':28s}" + "".join(f"{name:>12s}" for name, _ in backends)
          + ("     speedup" if len(backends) == 2 else ""))
    for kernel_name, make_args in kernels:
        times = []
        for _, mod in backends:
            func = getattr(mod, kernel_name)
            times.append(best_of(args.repeat, func, *make_args(mod)))
        row = f"{kernel_name:28s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:11.2f}x"
        print(row)

    # consistency across backends on this data
    if _ckernels is not None:
        worst = max(
            float(np.nanmax(np.abs(
                getattr(_kernels_py, name)(*make_args(None))
                - getattr(_ckernels, name)(*make_args(None))
            )))
            for name, make_args in kernels
        )
        print(f"max |python - cython| over all kernels: {worst:.3e}")

    ids = [f"m{i:05d}" for i in range(args.rows)]
    matrix = DescriptorMatrix(
        ids, [DrugClass.ATS] * args.rows,
        [f"a{j}" for j in range(args.cols)], block,
    )
    elapsed = best_of(args.repeat, rank_database, matrix, ids[0])
    print(f"full weighted ranking pipeline: {elapsed * 1e3:.2f}ms "
          f"({args.rows / elapsed:,.0f} rows/s)")


if __name__ == "__main__":
    main()
