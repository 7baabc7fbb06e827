#!/usr/bin/env python3
"""Time the Numerov sweep kernels: numba-compiled vs plain-Python fallback.

The sweeps are the oracle solver's hot loop.  This script times both code
paths on the same workload in one process, independent of the PSLET_NUMBA
selection, and also times a full eigenvalue solve under the active path.

Usage: python benchmarks/bench_numerov.py [--points N] [--repeats K]
"""

import argparse
import time

import numpy as np

from pslet import PotentialModel, RadialGrid, oracle_eigenvalue
from pslet._numerov import NUMBA_ENABLED, sweep_in_py, sweep_out_py


def _workload(points: int):
    grid = RadialGrid(count=points)
    x, r = grid.points()
    v = PotentialModel.yukawa(1, "0.2").value_floats(r)
    w = 2.0 * r * r * (-0.3268 - v) - 0.25
    h = float(x[1] - x[0])
    return w, h


def _time(fn, *args, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--points", type=int, default=20000)
    parser.add_argument("--repeats", type=int, default=20)
    args = parser.parse_args()

    w, h = _workload(args.points)
    rows = [("python fallback", sweep_out_py, sweep_in_py)]
    if NUMBA_ENABLED:
        from pslet._numerov import sweep_in, sweep_out

        sweep_out(w, h, 1e-20, 1.1e-20)  # trigger compilation outside timing
        sweep_in(w, h, 1e-20, 1.1e-20)
        rows.append(("numba njit", sweep_out, sweep_in))
    else:
        print("numba path inactive (PSLET_NUMBA=0 or numba missing); "
              "timing fallback only")

    print(f"grid points: {args.points}, repeats: {args.repeats} (best shown)")
    print(f"{'kernel path':<18} {'sweep_out':>12} {'sweep_in':>12}")
    base_out = base_in = None
    for name, f_out, f_in in rows:
        t_out = _time(f_out, w, h, 1e-20, 1.1e-20, repeats=args.repeats)
        t_in = _time(f_in, w, h, 1e-20, 1.1e-20, repeats=args.repeats)
        if base_out is None:
            base_out, base_in = t_out, t_in
            speed = ""
        else:
            speed = f"   ({base_out / t_out:.0f}x / {base_in / t_in:.0f}x)"
        print(f"{name:<18} {t_out * 1e3:>10.3f}ms {t_in * 1e3:>10.3f}ms{speed}")

    pot = PotentialModel.yukawa(1, "0.2")
    t0 = time.perf_counter()
    result = oracle_eigenvalue(pot, 0, 0, e_guess=-0.327)
    dt = time.perf_counter() - t0
    path = "numba" if NUMBA_ENABLED else "fallback"
    print(f"\nfull eigenvalue solve ({path} path): {dt * 1e3:.1f} ms, "
          f"E = {result.energy:.9f}, {result.iterations} sweeps")


if __name__ == "__main__":
    main()
