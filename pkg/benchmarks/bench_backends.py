"""Timing comparison of the compiled and pure-numpy process kernels.

Imports both kernel modules directly (the HFREE_BACKEND variable plays no
part here), runs them on identical inputs, checks the outputs agree, and
prints per-size medians.  The first compiled call is a discarded warmup so
JIT time never pollutes the numbers.

    python3 benchmarks/bench_backends.py --sizes 64,128,256 --reps 3
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from hfree import _kernels_numpy
from hfree.graphs import edge_arrays, edge_count, replicate_rng
from hfree.patterns import parse_pattern
from hfree.process import plan_arrays

try:
    from hfree import _kernels_numba
except ImportError:
    _kernels_numba = None


def _time(fn, reps: int) -> float:
    samples = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def bench(pattern: str, sizes: list[int], reps: int, seed: int) -> None:
    h = parse_pattern(pattern)
    k, p, ptr, flat = plan_arrays(h)
    print(f"pattern {h.label()}, {reps} timed runs per size, median seconds")
    header = f"{'n':>6} {'numpy run':>12} {'numba run':>12} {'speedup':>8}   {'numpy cyc':>12} {'numba cyc':>12}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        eu, ev = edge_arrays(n)
        order = np.argsort(replicate_rng(seed, n).random(edge_count(n)), kind="stable")

        accepted = _kernels_numpy.run_process(n, eu, ev, order, k, p, ptr, flat)
        t_np = _time(lambda: _kernels_numpy.run_process(n, eu, ev, order, k, p, ptr, flat), reps)

        ids = np.flatnonzero(accepted)
        cyc_np = _kernels_numpy.cycle_counts(n, eu[ids], ev[ids])
        t_np_cyc = _time(lambda: _kernels_numpy.cycle_counts(n, eu[ids], ev[ids]), reps)

        if _kernels_numba is None:
            print(f"{n:>6} {t_np:>12.4f} {'n/a':>12} {'n/a':>8}   {t_np_cyc:>12.4f} {'n/a':>12}")
            continue

        accepted_nb = _kernels_numba.run_process(n, eu, ev, order, k, p, ptr, flat)
        if not np.array_equal(accepted, accepted_nb):
            raise AssertionError(f"backend outputs differ at n={n}")
        t_nb = _time(lambda: _kernels_numba.run_process(n, eu, ev, order, k, p, ptr, flat), reps)

        cyc_nb = _kernels_numba.cycle_counts(n, eu[ids], ev[ids])
        if tuple(cyc_np) != tuple(cyc_nb):
            raise AssertionError(f"cycle counts differ at n={n}: {cyc_np} vs {cyc_nb}")
        t_nb_cyc = _time(lambda: _kernels_numba.cycle_counts(n, eu[ids], ev[ids]), reps)

        speed = t_np / t_nb if t_nb > 0 else float("inf")
        print(f"{n:>6} {t_np:>12.4f} {t_nb:>12.4f} {speed:>7.1f}x   {t_np_cyc:>12.4f} {t_nb_cyc:>12.4f}")
    if _kernels_numba is None:
        print("numba kernels unavailable; only the numpy timings were taken")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pattern", default="K3")
    ap.add_argument("--sizes", default="64,128,256", help="comma-separated vertex counts")
    ap.add_argument("--reps", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    sizes = [int(t) for t in args.sizes.split(",") if t.strip()]
    bench(args.pattern, sizes, args.reps, args.seed)


if __name__ == "__main__":
    main()
