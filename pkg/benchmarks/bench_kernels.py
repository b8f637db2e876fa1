"""Compare the numba and numpy RK4 kernels on one geodesic per family.

Usage: python3 benchmarks/bench_kernels.py [--steps N] [--repeat R]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from siflow import _kernels
from siflow.families import GlobalExampleSpec, to_model_spec
from siflow.geodesic import PhaseState, profile_table

CASES = [
    (GlobalExampleSpec("even-h2", mu=(1, 2), simple=((-4, 1, 1),)), 0.5),
    (GlobalExampleSpec("even-r2", mu=(1, 1), nu=(2,), a1=1, a2=4), 2.0),
    (GlobalExampleSpec("odd-plus", mu=(1, 2)), 1.0),
    (GlobalExampleSpec("odd-exterior", mu=(1, 1)), 2.0),
]


def run_kernel(kernel, table, s0, h, steps):
    return kernel(
        s0.as_array(), h, steps, 10,
        table.coef, table.root, table.sign, table.expo, table.lin,
        table.broot, table.bsign, table.lo, table.hi,
    )


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--steps", type=int, default=10_000)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    h = 1e-3

    t0 = time.perf_counter()
    numba_kernel = _kernels.get_kernel("numba")
    g, a0 = CASES[0]
    spec = to_model_spec(g)
    run_kernel(numba_kernel, profile_table(spec), PhaseState.from_pi(spec, a0, 0.3, 0.1, 0.1), h, 10)
    print(f"numba warm-up (compile or cache load): {time.perf_counter() - t0:.2f}s")
    numpy_kernel = _kernels.get_kernel("numpy")

    print(f"{'family':<14}{'steps':>8}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>10}{'max |diff|':>13}")
    for g, a0 in CASES:
        spec = to_model_spec(g)
        table = profile_table(spec)
        s0 = PhaseState.from_pi(spec, a0, 0.3, 0.1, 0.1)
        t_np, (out_np, _, _) = best_of(lambda: run_kernel(numpy_kernel, table, s0, h, args.steps), args.repeat)
        t_nb, (out_nb, _, _) = best_of(lambda: run_kernel(numba_kernel, table, s0, h, args.steps), args.repeat)
        diff = float(np.max(np.abs(out_np - out_nb)))
        print(f"{g.family:<14}{args.steps:>8}{t_np:>12.4f}{t_nb:>12.4f}{t_np / t_nb:>10.1f}{diff:>13.2e}")


if __name__ == "__main__":
    main()
