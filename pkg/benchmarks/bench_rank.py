#!/usr/bin/env python3
"""Benchmark the compiled elimination kernel against the pure-Python twin.

Run after an editable install:

    python3 benchmarks/bench_rank.py [--repeat 5]

Measures the raw Bareiss kernel on random quadruple matrices and the
end-to-end rank-triple classification sweep that dominates the table
reproductions.
"""

from __future__ import annotations

import argparse
import random
import time

from sloccrank._kernels import pure

try:
    from sloccrank._kernels import _core as compiled
except ImportError:
    compiled = None

from sloccrank.coeffmatrix import coefficient_matrix
from sloccrank.families import instantiate
from sloccrank.scalars import common_denominator


def random_matrix(rng: random.Random, rows: int, cols: int, span: int = 9):
    return [
        tuple(rng.randint(-span, span) for _ in range(4))
        for _ in range(rows * cols)
    ]


def bench_kernel(backend, mats, rows, cols) -> float:
    start = time.perf_counter()
    for m in mats:
        backend.bareiss(m, rows, cols)
    return time.perf_counter() - start


def bench_triples(backend_name: str, count: int, seed: int) -> float:
    # route the package-level kernel through one backend for the sweep
    import sloccrank._kernels as kernels
    import sloccrank.coeffmatrix as cm

    backend = pure if backend_name == "pure" else compiled
    saved = kernels.bareiss
    kernels.bareiss = backend.bareiss
    cm.bareiss = backend.bareiss
    rng = random.Random(seed)
    try:
        start = time.perf_counter()
        for _ in range(count):
            a = rng.randint(-6, 6)
            b = rng.randint(-6, 6)
            if a == 0 and b == 0:
                continue
            psi = instantiate("L_ab3'", (a, b))
            for bits in ((1, 2), (1, 3), (1, 4)):
                C = coefficient_matrix(psi, bits)
                flat = []
                for row in C.entries:
                    quads, _ = common_denominator(row)
                    flat.extend(quads)
                backend.bareiss(flat, C.rows, C.cols)
        return time.perf_counter() - start
    finally:
        kernels.bareiss = saved
        cm.bareiss = saved


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--mats", type=int, default=2000)
    parser.add_argument("--triples", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if compiled is None:
        print("compiled kernel not built; showing pure-Python numbers only")

    rng = random.Random(args.seed)
    print(f"{'case':<28}{'pure [ms]':>12}{'compiled [ms]':>16}{'speedup':>10}")
    for rows, cols in ((4, 4), (4, 8), (8, 8)):
        mats = [random_matrix(rng, rows, cols) for _ in range(args.mats)]
        t_pure = min(bench_kernel(pure, mats, rows, cols) for _ in range(args.repeat))
        line = f"bareiss {rows}x{cols} x{args.mats:<8}{t_pure * 1e3:>11.1f}"
        if compiled is not None:
            t_comp = min(
                bench_kernel(compiled, mats, rows, cols) for _ in range(args.repeat)
            )
            line += f"{t_comp * 1e3:>16.1f}{t_pure / t_comp:>9.2f}x"
        print(line)

    t_pure = min(bench_triples("pure", args.triples, args.seed) for _ in range(args.repeat))
    line = f"rank triples x{args.triples:<13}{t_pure * 1e3:>11.1f}"
    if compiled is not None:
        t_comp = min(
            bench_triples("compiled", args.triples, args.seed) for _ in range(args.repeat)
        )
        line += f"{t_comp * 1e3:>16.1f}{t_pure / t_comp:>9.2f}x"
    print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
