#!/usr/bin/env python3
"""Benchmark the JIT reduction kernel against the pure-numpy fallback.

Usage: python3 benchmarks/bench_reduction.py [--repeats N]

Times the full persistence pairing (both embeddings) on synthetic vortex
fields at several grid resolutions, once per kernel. The same comparison
can be reproduced end to end by setting SPPV_DISABLE_NUMBA=1.
"""

import argparse
import time

import sppv.persistence as persistence
from sppv import _reduce_numpy
from sppv.complexes import build_grid_complex, build_polar_complex
from sppv.field import SynthSpec, synth_field
from sppv.persistence import reduce
from sppv.scores import score_day

SIZES = [(19, 36), (46, 180), (91, 360)]


def field_at(nlat, nlon):
    return synth_field(
        SynthSpec(kind="displaced", nlat=nlat, nlon=nlon, depth=500.0,
                  center_colat=30.0, center_lon=180.0, cone_radius=25.0,
                  noise_amplitude=40.0, seed=3)
    )


def time_reduce(complexes, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for cx in complexes:
            reduce(cx)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    kernels = [("numpy", _reduce_numpy)]
    if persistence._reduce_numba is not None:
        persistence._reduce_numba.warmup()
        kernels.insert(0, ("numba", persistence._reduce_numba))
    else:
        print("numba unavailable; benchmarking the fallback only")

    print(f"{'grid':>10} {'kernel':>8} {'reduce both (s)':>16} {'speedup':>8}")
    for nlat, nlon in SIZES:
        field = field_at(nlat, nlon)
        complexes = [build_grid_complex(field), build_polar_complex(field)]
        times = {}
        for name, kernel in kernels:
            persistence._kernel = kernel
            times[name] = time_reduce(complexes, args.repeats)
        persistence._kernel, _ = persistence._select_backend()
        base = times["numpy"]
        for name in times:
            speedup = base / times[name]
            print(f"{f'{nlat}x{nlon}':>10} {name:>8} {times[name]:>16.4f} {speedup:>7.1f}x")

    field = field_at(91, 360)
    score_day(field)
    t0 = time.perf_counter()
    score_day(field)
    print(f"\nscore_day 91x360 ({persistence.active_backend()} kernel): "
          f"{time.perf_counter() - t0:.3f} s")


if __name__ == "__main__":
    main()
