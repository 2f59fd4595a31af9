"""Compare the compiled and numpy kernels on a best-response power scan.

A best response evaluates the rival's switch power at every grid effort,
each on a product experiment of both players' outputs.  This script times
that scan for each backend and checks that the two agree.

    python benchmarks/bench_kernels.py [--points 401] [--repeat 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from htgame import _kernels_py
from htgame.views import AdditiveNoise, DiscreteBandit, UniformLinear

try:
    from htgame import _kernels as _compiled
except ImportError:
    _compiled = None


def scan_inputs(pair, points, rival_effort):
    x, ph, pl = pair.grid_masses(np.linspace(0.0, pair.b, points))
    other_null = pair.probs("L", rival_effort)
    other_alt = pair.probs("H", rival_effort)
    return (np.ascontiguousarray(pl), np.ascontiguousarray(ph),
            np.ascontiguousarray(other_null), np.ascontiguousarray(other_alt))


def best_time(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), np.asarray(out)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=401, help="effort grid points per scan")
    ap.add_argument("--repeat", type=int, default=5, help="timed repetitions (best is reported)")
    ap.add_argument("--alpha", type=float, default=0.05)
    args = ap.parse_args(argv)

    cases = [
        ("DiscreteBandit r=0.5", DiscreteBandit(r=0.5), 0.2),
        ("UniformLinear 201 atoms", UniformLinear(b=4.0), 1.0),
        ("AdditiveNoise 101 atoms", AdditiveNoise(b=2.0, output_atoms=101), 0.5),
    ]
    backends = [("numpy", _kernels_py)]
    if _compiled is not None:
        backends.append(("cython", _compiled))
    else:
        print("compiled kernels unavailable; timing the numpy backend only")

    header = f"{'family':26s} {'signals':>9s}" + "".join(f" {name + ' (ms)':>13s}" for name, _ in backends)
    if len(backends) == 2:
        header += f" {'speedup':>8s} {'max diff':>9s}"
    print(header)
    for label, pair, rival in cases:
        rn, ra, on, oa = scan_inputs(pair, args.points, rival)
        results = []
        for _, impl in backends:
            results.append(best_time(lambda: impl.np_power_product_rows(rn, ra, on, oa, args.alpha), args.repeat))
        row = f"{label:26s} {rn.shape[1] * on.size:9d}" + "".join(f" {t * 1e3:13.2f}" for t, _ in results)
        if len(results) == 2:
            row += f" {results[0][0] / results[1][0]:7.1f}x {np.max(np.abs(results[0][1] - results[1][1])):9.1e}"
        print(row)


if __name__ == "__main__":
    main()
