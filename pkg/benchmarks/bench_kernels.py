#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the three hot stages (signed distance grid, one curvature sample
with its distance transforms, a small profile sweep) on the built-in
2x4 rectangle, then prints a table with speedups.

Usage: python benchmarks/bench_kernels.py [--h 0.01] [--samples 24]
"""

import argparse
import time
import warnings

from isoperim import backend, shapes
from isoperim.field import build_distance_field
from isoperim.profile import compute_sweep, profile_from_legendre
from isoperim.solver import sweep_sample


def run_backend(name, h, n_samples):
    results = {}
    with backend.use(name):
        dom = shapes.make_rectangle(4.0)

        t0 = time.perf_counter()
        f = build_distance_field(dom, h)
        results["distance field"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        s = sweep_sample(f, r=0.5)
        results["one curvature sample"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            sweep = compute_sweep(f, n_samples)
            prof = profile_from_legendre(sweep, f, 128)
        results["sweep + profile"] = time.perf_counter() - t0

        results["_check"] = (s.volume, prof.perimeters[-1])
    return results


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--h", type=float, default=0.01, help="grid spacing")
    ap.add_argument("--samples", type=int, default=24, help="curvature samples")
    args = ap.parse_args()

    names = ["numpy"]
    try:
        import numba  # noqa: F401

        names.insert(0, "numba")
    except ImportError:
        print("numba not installed; timing the numpy fallback only")

    if "numba" in names:
        # compile outside the timed region
        run_backend("numba", 0.1, 16)

    table = {name: run_backend(name, args.h, args.samples) for name in names}

    cells = None
    with backend.use(names[0]):
        f = build_distance_field(shapes.make_rectangle(4.0), args.h)
        cells = f.grid.cells
    print(f"\ngrid spacing {args.h:g} ({cells} cells), {args.samples} curvature samples")
    header = f"{'stage':<24}" + "".join(f"{n:>12}" for n in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for stage in ("distance field", "one curvature sample", "sweep + profile"):
        row = f"{stage:<24}"
        for n in names:
            row += f"{table[n][stage] * 1e3:>10.1f}ms"
        if len(names) == 2:
            row += f"{table['numpy'][stage] / table['numba'][stage]:>9.1f}x"
        print(row)

    if len(names) == 2:
        a, b = table["numba"]["_check"], table["numpy"]["_check"]
        drift = max(abs(x - y) for x, y in zip(a, b))
        print(f"\nbackend agreement: max |difference| = {drift:.2e}")


if __name__ == "__main__":
    main()
