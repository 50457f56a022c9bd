"""Time the numba kernels against their numpy counterparts.

Both implementations are imported directly from ``profquad._kernels`` so one
run compares them side by side, independent of PROFQUAD_DISABLE_NUMBA. A
second section times a full single-rule sweep in a subprocess per backend,
since the backend of the public entry points is fixed at import time.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from profquad import _kernels
from profquad._accel import njit
from profquad.rule import GK21, Interval, map_knots

KERNELS = ("rule_sums", "extrema", "crossings", "divided_differences")


def _inputs():
    iv = Interval(-1.0, 1.0)
    x = map_knots(GK21, iv)
    v = np.exp(x + 1.0) * np.cos(1612 * np.pi / 60 * x)
    return {
        "rule_sums": (v[1:-1], GK21.fine_weights, GK21.coarse_weights),
        "extrema": (v,),
        "crossings": (v, float(v.mean())),
        "divided_differences": (x, v),
    }


def bench_kernels(repeat):
    args = _inputs()
    print(f"{'kernel':<22}{'numpy us':>12}{'numba us':>12}{'speedup':>10}")
    for name in KERNELS:
        np_fn = getattr(_kernels, f"_np_{name}")
        nb_fn = njit(getattr(_kernels, f"_loop_{name}"))
        a = args[name]
        nb_fn(*a)  # compile outside the timed region
        t_np = min(timeit.repeat(lambda: np_fn(*a), number=repeat, repeat=5)) / repeat
        t_nb = min(timeit.repeat(lambda: nb_fn(*a), number=repeat, repeat=5)) / repeat
        print(f"{name:<22}{t_np * 1e6:>12.2f}{t_nb * 1e6:>12.2f}{t_np / t_nb:>10.1f}")


_SWEEP = (
    "import time; from profquad import run_sweep, BACKEND; "
    "run_sweep('C1', params=range(0, 50)); t = time.perf_counter(); "
    "run_sweep('C1', params=range(0, 1081)); "
    "print(BACKEND, round(time.perf_counter() - t, 3))"
)


def bench_sweep():
    print("\nC1 single-rule sweep, n = 0..1080 (seconds)")
    for disable in ("0", "1"):
        env = dict(os.environ, PROFQUAD_DISABLE_NUMBA=disable)
        out = subprocess.run([sys.executable, "-c", _SWEEP], env=env,
                             capture_output=True, text=True, check=True)
        print("  " + out.stdout.strip())


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=20000)
    p.add_argument("--no-sweep", action="store_true")
    args = p.parse_args()
    bench_kernels(args.repeat)
    if not args.no_sweep:
        bench_sweep()


if __name__ == "__main__":
    main()
