"""Compare the compiled and numpy kernel backends.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

Prints the best-of-N wall time per kernel and backend, the speed-up, and the
largest relative difference between the backends' outputs.
"""
import argparse
import math
import os
import subprocess
import sys
import timeit

import numpy as np

from swdecay import _kernels


def workloads():
    x = np.linspace(0.0, 60.0, 20001)
    u = np.linspace(0.0, 100.0, 200001)
    c = np.cos(np.linspace(0.0, math.pi, 200001))
    return {
        "jn_table(40, 2e4 pts)": lambda k: k.jn_table(40, x),
        "i0_i1x_scaled(2e5 pts)": lambda k: k.i0_i1x_scaled(u),
        "adiabatic_fields(2e5 pts)": lambda k: k.adiabatic_fields(c, 7.5, 5.0, 1.0),
    }


def max_rel_diff(a, b):
    a, b = np.atleast_2d(np.asarray(a)), np.atleast_2d(np.asarray(b))
    scale = np.maximum(np.abs(b), 1e-300)
    return float(np.max(np.abs(a - b) / np.maximum(scale, np.abs(b).max() * 1e-12)))


def end_to_end(repeat):
    """Time a full mode-sum evaluation in a fresh process per backend."""
    code = ("import timeit; from swdecay.model import ModelParams; "
            "from swdecay.diffraction import totals_from_sum; p = ModelParams(5.0); "
            f"print(min(timeit.repeat(lambda: totals_from_sum(p, 6.0), number=1, repeat={repeat})))")
    out = {}
    for name, env in (("cython", {}), ("python", {"SWDECAY_PURE_PYTHON": "1"})):
        if name not in _kernels.BACKENDS:
            continue
        res = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True,
                             env={**os.environ, **env}, check=True)
        out[name] = float(res.stdout)
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = _kernels.BACKENDS
    print(f"backends available: {', '.join(sorted(backends))} (active: {_kernels.BACKEND})")
    header = f"{'kernel':<28}{'python [ms]':>12}{'cython [ms]':>13}{'speed-up':>10}{'max rel diff':>14}"
    print(header)
    print("-" * len(header))
    for name, fn in workloads().items():
        times, outs = {}, {}
        for bname, impl in backends.items():
            outs[bname] = fn(impl)
            times[bname] = min(timeit.repeat(lambda: fn(impl), number=1, repeat=args.repeat))
        py = times["python"] * 1e3
        if "cython" in times:
            cy = times["cython"] * 1e3
            diffs = [max_rel_diff(a, b) for a, b in zip(outs["cython"], outs["python"])]
            print(f"{name:<28}{py:>12.2f}{cy:>13.2f}{py / cy:>9.1f}x{max(diffs):>14.1e}")
        else:
            print(f"{name:<28}{py:>12.2f}{'n/a':>13}{'':>10}{'':>14}")
    e2e = end_to_end(args.repeat)
    line = "  ".join(f"{k} {1e3 * v:.1f} ms" for k, v in sorted(e2e.items()))
    print(f"\nend to end, totals_from_sum(|Omega|=5, t=6): {line}")


if __name__ == "__main__":
    main()
