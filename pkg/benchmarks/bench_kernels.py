#!/usr/bin/env python3
"""Benchmark the pure-Python kernel fallback against the compiled extension.

Covers the two hot paths: the per-frame rotation/Euler chain (run once per
joint per frame in the live loop) and a full SVR fit on a dense synthetic
limit table (the startup cost, dominated by SMO sweeps).

Usage: python benchmarks/bench_kernels.py [--frames N] [--knots N]
"""

import argparse
import math
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from headmimic._kernels import available_backends  # noqa: E402


def bench_rotation_chain(impl, pairs) -> float:
    start = time.perf_counter()
    for u, v in pairs:
        angle, ax, ay, az = impl.rotation_between(u[0], u[1], u[2],
                                                  v[0], v[1], v[2], 1e-6, 1e-7)
        impl.rotvec_to_ypr_deg(angle * ax, angle * ay, angle * az, 1e-7, 0.1)
    return time.perf_counter() - start


def bench_svr_fit(impl, xs, ys, sweeps=60) -> tuple[float, int]:
    # fixed sweep count so both backends do identical work
    diff = xs[:, None] - xs[None, :]
    kmat = np.ascontiguousarray(np.exp(-(diff ** 2) / 1800.0))
    beta = np.zeros(len(xs))
    grad = ys.copy()
    start = time.perf_counter()
    for _ in range(sweeps):
        impl.smo_sweep(kmat, ys, beta, grad, 100.0, 0.5)
    return time.perf_counter() - start, sweeps


def bench_rbf_eval(impl, xs, beta, queries) -> float:
    start = time.perf_counter()
    for q in queries:
        impl.rbf_predict(q, xs, beta, 1.0 / 1800.0, 0.0)
    return time.perf_counter() - start


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--frames", type=int, default=200_000,
                        help="rotation/Euler evaluations")
    parser.add_argument("--knots", type=int, default=80,
                        help="synthetic limit-table size for the SVR fit")
    args = parser.parse_args()

    impls = available_backends()
    if "compiled" not in impls:
        print("compiled backend unavailable; build it with "
              "'python setup.py build_ext --inplace'")

    rng = np.random.default_rng(0)
    pairs = []
    for _ in range(args.frames):
        u = rng.normal(size=3)
        v = rng.normal(size=3)
        pairs.append((u / np.linalg.norm(u), v / np.linalg.norm(v)))

    xs = np.sort(rng.uniform(-119.5, 119.5, args.knots))
    ys = -30.0 + 8.0 * np.sin(xs / 40.0) + rng.normal(0.0, 0.3, args.knots)
    queries = rng.uniform(-119.5, 119.5, 50_000)
    beta_eval = rng.normal(size=args.knots)

    results: dict[str, dict[str, float]] = {}
    for name, impl in impls.items():
        rot = bench_rotation_chain(impl, pairs)
        fit, sweeps = bench_svr_fit(impl, xs, ys)
        rbf = bench_rbf_eval(impl, xs, beta_eval, queries)
        results[name] = {"rotation": rot, "fit": fit, "rbf": rbf}
        print(f"{name:>9}: rotation+euler {args.frames / rot:,.0f}/s   "
              f"svr fit ({args.knots} knots, {sweeps} sweeps) {fit * 1e3:.1f} ms   "
              f"rbf eval {len(queries) / rbf:,.0f}/s")

    if "pure" in results and "compiled" in results:
        for key, label in (("rotation", "rotation+euler"), ("fit", "svr fit"),
                           ("rbf", "rbf eval")):
            speedup = results["pure"][key] / results["compiled"][key]
            print(f"compiled speedup on {label}: {speedup:.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
