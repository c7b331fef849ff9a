"""Time the compiled and pure-Python Poynting kernels on the same inputs.

    python benchmarks/bench_kernels.py --points 4000 --beams 4 --steps 256
"""

import argparse
import math
import time

import numpy as np

from leobf import kernels
from leobf.coverage import build_scenario, enhancement_map


def random_inputs(points, beams, seed=0):
    rng = np.random.default_rng(seed)
    k = rng.normal(size=(points, beams, 3))
    k /= np.linalg.norm(k, axis=-1, keepdims=True)
    e = rng.normal(size=(points, beams, 3))
    e -= np.sum(e * k, axis=-1, keepdims=True) * k
    e /= np.linalg.norm(e, axis=-1, keepdims=True)
    h = np.cross(k, e)
    phases = rng.uniform(0.0, 2 * math.pi, size=(points, beams))
    amps = np.full(beams, math.sqrt(2.0))
    return e, h, phases, amps


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=4000)
    ap.add_argument("--beams", type=int, default=4)
    ap.add_argument("--steps", type=int, default=256)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--map-res", type=int, default=241, help="grid side for the map timing")
    args = ap.parse_args(argv)

    e, h, phases, amps = random_inputs(args.points, args.beams)
    omegas = np.full(args.beams, 2 * math.pi * 3.5e9)
    window = 1 / 3.5e9
    tables = kernels.time_tables(omegas, window, args.steps)
    backends = sorted(kernels.BACKENDS)
    print(f"backends: {', '.join(backends)} (default {kernels.BACKEND})")
    print(f"kernel: {args.points} points x {args.beams} beams x {args.steps} steps")

    results = {}
    for name in backends:
        results[name] = kernels.poynting_average(
            e, h, phases, amps, omegas, window, args.steps, backend=name, tables=tables
        )
        t = best_of(lambda: kernels.poynting_average(
            e, h, phases, amps, omegas, window, args.steps, backend=name, tables=tables
        ), args.repeat)
        print(f"  {name:<9} {t * 1e3:9.2f} ms  {args.points / t / 1e6:7.3f} Mpoint/s")
    if len(results) == 2:
        a, b = results["python"], results["compiled"]
        print(f"  max relative difference {np.max(np.abs(a - b)) / np.max(np.abs(a)):.2e}")

    cfg = build_scenario("four_perpendicular", grid_resolution=args.map_res)
    print(f"map: four_perpendicular {args.map_res}x{args.map_res}")
    for name in backends:
        t = best_of(lambda: enhancement_map(cfg, backend=name), max(1, args.repeat // 2))
        print(f"  {name:<9} {t:9.3f} s")


if __name__ == "__main__":
    main()
