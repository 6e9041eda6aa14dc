"""Time the compiled and pure-Python TCL kernels on the same workloads.

    python benchmarks/bench_kernels.py [--repeat N]

Also checks that both backends return the same exponents.
"""
import argparse
import math
import time

import numpy as np

from tclpulse import _core
from tclpulse.pulse import NoControl, PulseTrain, rate_segments

PI = math.pi
CASES = {
    "no control, 600 pts": (NoControl(), 1.0),
    "T=0.1 D=0.05 L=pi, 600 pts": (PulseTrain(0.1, 0.05, PI), 1.0),
    "T=0.02 D=0.005 L=2pi, 600 pts": (PulseTrain(0.02, 0.005, 2 * PI), 1.0),
    "T=0.1 D=0.05 L=pi, Gamma=10": (PulseTrain(0.1, 0.05, PI), 10.0),
}


def workload(control, gamma):
    grid = np.linspace(0.0, 3.0, 600)
    knots, rates = rate_segments(control, 3.0)
    edges = np.union1d(knots, grid)
    return knots, rates, gamma, edges, 1e-10


def best_time(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times), np.asarray(out)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    found = _core.backends()
    names = sorted(found)
    print(f"backends: {', '.join(names)} (default {_core.BACKEND})")
    print(f"{'case':34s}" + "".join(f"{n:>12s}" for n in names) + "     speedup   max diff")
    for label, (control, gamma) in CASES.items():
        args_ = workload(control, gamma)
        res = {n: best_time(found[n].cumulative_exponent, args_, args.repeat) for n in names}
        row = f"{label:34s}" + "".join(f"{res[n][0] * 1e3:10.2f}ms" for n in names)
        if len(names) == 2:
            speed = res["python"][0] / res["cython"][0]
            diff = float(np.max(np.abs(res["python"][1] - res["cython"][1])))
            row += f"  {speed:9.1f}x  {diff:9.1e}"
        print(row)


if __name__ == "__main__":
    main()
