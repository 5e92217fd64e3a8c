#!/usr/bin/env python3
"""Timing comparison of the numpy and numba kernel backends.

Each hot kernel runs the same synthetic workload on every available
backend and reports the mean wall time per call. Kernels are called
once before timing, so numba's compilation cost never pollutes the
numbers.

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --directions 5000 --requests 20000
"""

import argparse
import time

import numpy as np

from dirkit.kernels import ACTIVE_BACKEND, BACKENDS


def time_per_call(fn, call_args, repeats):
    fn(*call_args)
    start = time.perf_counter()
    for _ in range(repeats):
        fn(*call_args)
    return (time.perf_counter() - start) / repeats


def build_workloads(args, rng):
    base_az = rng.uniform(0.0, 360.0, args.directions)
    base_el = rng.uniform(-90.0, 90.0, args.directions)
    req_az = rng.uniform(0.0, 360.0, args.requests)
    req_el = rng.uniform(-90.0, 90.0, args.requests)
    values = np.sort(rng.uniform(0.0, 24000.0, args.bins))
    queries = rng.uniform(0.0, 24000.0, args.requests)
    positions = rng.uniform(0.0, 1.0, args.positions)
    return {
        "nearest_direction": (base_az, base_el, req_az, req_el),
        "nearest_value": (values, queries),
        "fourier_basis": (args.order, positions),
        "cosine_basis": (args.order, positions),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(
        description="Benchmark the numpy and numba kernel backends."
    )
    parser.add_argument("--directions", type=int, default=2000,
                        help="base grid size for the nearest-direction search")
    parser.add_argument("--requests", type=int, default=5000,
                        help="lookup count for both nearest-neighbor kernels")
    parser.add_argument("--bins", type=int, default=4096,
                        help="base size for the nearest-value search")
    parser.add_argument("--positions", type=int, default=4096,
                        help="evaluation points for the basis kernels")
    parser.add_argument("--order", type=int, default=32,
                        help="basis order for the design-matrix kernels")
    parser.add_argument("--repeats", type=int, default=20,
                        help="timed calls per kernel and backend")
    parser.add_argument("--seed", type=int, default=20240821)
    args = parser.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    workloads = build_workloads(args, rng)
    backends = sorted(BACKENDS)

    print(f"available backends: {', '.join(backends)} (active: {ACTIVE_BACKEND})")
    print(
        f"workload: {args.directions} base directions, {args.requests} requests, "
        f"{args.bins} bins, {args.positions} positions, order {args.order}, "
        f"{args.repeats} repeats"
    )
    print()
    print(f"{'kernel':<20}{'backend':<10}{'per call':>12}{'vs numpy':>10}")
    for kernel, call_args in workloads.items():
        timings = {
            backend: time_per_call(BACKENDS[backend][kernel], call_args, args.repeats)
            for backend in backends
        }
        baseline = timings.get("numpy")
        for backend in backends:
            per_call = timings[backend]
            speedup = f"{baseline / per_call:.2f}x" if baseline else "n/a"
            print(f"{kernel:<20}{backend:<10}{per_call * 1e3:>9.3f} ms{speedup:>10}")


if __name__ == "__main__":
    main()
