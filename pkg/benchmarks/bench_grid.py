"""Benchmark the compiled grid kernel against the numpy fallback.

Runs the reference panel-2a sweep geometry at a configurable resolution and
reports per-backend wall time plus the speedup.

    python3 benchmarks/bench_grid.py [--points 1001] [--repeat 3]
"""

import argparse
import time

import numpy as np

from spinclock._kernels import (
    HAVE_COMPILED,
    transmission_grid_compiled,
    transmission_grid_python,
)
from spinclock.figures import figure_setup
from spinclock.params import class_frequencies
from spinclock.units import from_hz


def build_inputs(points):
    setup = figure_setup("2a", points=points)
    spins, env = setup.spins, setup.env
    v1 = setup.axis1.grid()
    v2 = setup.axis2.grid()
    cav_off = np.repeat(v1, v2.size)
    probe_off = np.tile(v2, v1.size)

    omega_probe = spins.omega_zfs + probe_off
    omega_c = spins.omega_zfs + cav_off
    omega_cls, g_cls = class_frequencies(spins, env)
    class_omegas = np.broadcast_to(
        omega_cls, (omega_probe.size, omega_cls.size)
    ).copy()
    return (omega_probe, omega_c, class_omegas, g_cls ** 2,
            spins.halfwidth, setup.cavity.kappa_out, setup.cavity.kappa_loss)


def time_backend(kernel, inputs, repeat):
    out = np.empty(inputs[0].size, dtype=np.complex128)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        kernel(*inputs, out)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=1001)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    inputs = build_inputs(args.points)
    n = inputs[0].size
    print(f"grid: {args.points} x {args.points} = {n} points, "
          f"{inputs[2].shape[1]} spin classes")

    t_py, out_py = time_backend(transmission_grid_python, inputs, args.repeat)
    print(f"python   {t_py * 1e3:9.2f} ms   {n / t_py / 1e6:7.1f} Mpts/s")

    if not HAVE_COMPILED:
        print("compiled kernel not built (python3 setup.py build_ext --inplace)")
        return

    t_c, out_c = time_backend(transmission_grid_compiled, inputs, args.repeat)
    print(f"compiled {t_c * 1e3:9.2f} ms   {n / t_c / 1e6:7.1f} Mpts/s")
    print(f"speedup  {t_py / t_c:9.2f}x")
    err = np.abs(out_c - out_py).max()
    print(f"max |compiled - python| = {err:.3e}")


if __name__ == "__main__":
    main()
