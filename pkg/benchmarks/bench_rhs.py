"""Benchmark the split-form RHS and derivative kernels: compiled vs numpy.

Usage: python3 benchmarks/bench_rhs.py [--sizes 64,128,256] [--repeat 20]
"""

import argparse
import time

import numpy as np

from skeweuler import GasModel, Grid2D
from skeweuler import kernels
from skeweuler.sbp import operators_for_grid, TensorApplicator


def random_field(rng, grid):
    data = np.empty((4, grid.nx, grid.ny))
    data[0] = rng.uniform(0.5, 2.0, (grid.nx, grid.ny))
    data[1] = rng.uniform(-1.0, 1.0, (grid.nx, grid.ny))
    data[2] = rng.uniform(-1.0, 1.0, (grid.nx, grid.ny))
    data[3] = rng.uniform(0.5, 2.0, (grid.nx, grid.ny))
    return data


def time_call(fn, repeat):
    fn()  # warm up (also builds the dense operator for the numpy path)
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="64,128,256")
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--topology", default="periodic", choices=["periodic", "bounded"])
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    gas = GasModel(1.4)
    rng = np.random.default_rng(0)
    backends = ["numpy"] + (["compiled"] if kernels.HAVE_COMPILED else [])
    if not kernels.HAVE_COMPILED:
        print("note: compiled extension not available, timing numpy only")

    print(f"{'n':>6} {'kernel':>10} " + " ".join(f"{b:>12}" for b in backends)
          + ("   speedup" if len(backends) == 2 else ""))
    for n in sizes:
        grid = Grid2D(n, n, topology_x=args.topology, topology_y=args.topology)
        opx, opy = operators_for_grid(grid, 4)
        app = TensorApplicator(grid, opx, opy)
        phi = random_field(rng, grid)
        comp = phi[0]

        rows = {
            "rhs": lambda b: kernels.rhs_core(
                phi, app.kx, app.ky, gas.gamma, gas.alpha2, (0, 0, 0, 0), backend=b
            ),
            "d_dx": lambda b: kernels.apply_d(comp, app.kx, 0, backend=b),
        }
        for name, fn in rows.items():
            times = [time_call(lambda b=b: fn(b), args.repeat) for b in backends]
            line = f"{n:>6} {name:>10} " + " ".join(f"{t * 1e3:>10.3f}ms" for t in times)
            if len(times) == 2:
                line += f"   {times[0] / times[1]:>6.1f}x"
            print(line)


if __name__ == "__main__":
    main()
