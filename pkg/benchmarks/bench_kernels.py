"""Compare the compiled and numpy element-summation kernels.

    python benchmarks/bench_kernels.py [--repeat 5] [--quick]
"""

import argparse
import time

import numpy as np

from rislink import coverage as cv
from rislink import fieldsum as fs
from rislink import kernels


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def workloads(quick):
    lam = 0.01
    big = 32 if quick else 100
    panel = fs.set_profile(fs.RisPanel(big, big, lam), fs.FlatGradient((0, 0, 1), (0, 0, 1)))
    src = np.array([0.0, 0.0, 10 * fs.fraunhofer_distance_m(panel)])
    z = np.linspace(20, 2000, 50 if quick else 400) * lam
    dests = np.column_stack([np.zeros_like(z), np.zeros_like(z), z])
    th = np.linspace(-1.2, 1.2, 200 if quick else 2000)
    dirs = np.column_stack([np.sin(th), np.zeros_like(th), np.cos(th)])
    grid = cv.Grid(0, 78, -80, 80, 8.0 if quick else 4.0)
    sweep = cv.Scenario.default(15e9, node_model=cv.AdaptiveRis(), grid=grid)
    return {
        f"near-field gain, {big}x{big} panel, {len(z)} distances":
            lambda: fs.field_sum_gain(panel, src, dests),
        f"radiation pattern, {big}x{big} panel, {len(th)} directions":
            lambda: fs.radiation_pattern(panel, src, dirs),
        f"adaptive RIS coverage sweep, {grid.shape[0] * grid.shape[1]} cells":
            lambda: cv.sweep_grid(sweep),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="small problem sizes")
    args = ap.parse_args()

    backends = kernels.available_backends()
    original = kernels.backend()
    print(f"{'workload':<58}" + "".join(f"{b:>12}" for b in backends) + f"{'speed-up':>10}")
    try:
        for name, fn in workloads(args.quick).items():
            t = {}
            for b in backends:
                kernels.use_backend(b)
                fn()  # warm-up
                t[b] = _best(fn, args.repeat)
            ratio = t["python"] / t["compiled"] if "compiled" in t else float("nan")
            print(f"{name:<58}" + "".join(f"{t[b] * 1e3:>10.1f}ms" for b in backends) + f"{ratio:>9.1f}x")
    finally:
        kernels.use_backend(original)


if __name__ == "__main__":
    main()
