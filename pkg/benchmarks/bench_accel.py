"""Benchmark the accelerated kernels against the pure-numpy fallback.

Runs the same workloads in two subprocesses, one with LAMPERC_NO_NUMBA=1,
and prints a timing table.  Workloads: Monte Carlo cluster sampling on the
integer line, and eigendecompositions over the square-lattice animals.

Usage: python benchmarks/bench_accel.py
"""

import json
import os
import subprocess
import sys

WORKER = r"""
import json, time
import numpy as np
import lamperc as lp
from lamperc import _accel

g = lp.make_group("Z")
h = lp.cyclic_lamp_group(2)

# warm up any jit compilation outside the timed region
lp.annealed_moments_mc(g, 4, h.p, 100, seed=7)
g2 = lp.make_group("Z2-square")
for a in lp.enumerate_site_animals(g2, 4):
    if not a.is_empty:
        lp.eigensolve(lp.build_PA(a, g2))

t0 = time.perf_counter()
lp.annealed_moments_mc(g, 8, h.p, 100_000, seed=7)
t_mc = time.perf_counter() - t0

animals = [a for a in lp.enumerate_site_animals(g2, 7) if not a.is_empty]
t0 = time.perf_counter()
for a in animals:
    lp.eigensolve(lp.build_PA(a, g2))
t_eig = time.perf_counter() - t0

print(json.dumps({"backend": _accel.backend_name(),
                  "mc_seconds": t_mc, "eig_seconds": t_eig,
                  "eig_count": len(animals)}))
"""


def run(no_numba: bool) -> dict:
    env = dict(os.environ)
    if no_numba:
        env["LAMPERC_NO_NUMBA"] = "1"
    else:
        env.pop("LAMPERC_NO_NUMBA", None)
    out = subprocess.run([sys.executable, "-c", WORKER], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    rows = [run(no_numba=False), run(no_numba=True)]
    print(f"{'backend':8s} {'mc 1e5 samples':>16s} {'eigs':>12s}")
    for r in rows:
        print(f"{r['backend']:8s} {r['mc_seconds']:14.3f}s "
              f"{r['eig_seconds']:10.3f}s  ({r['eig_count']} matrices)")
    if rows[0]["backend"] == rows[1]["backend"]:
        print("note: numba unavailable, both runs used the fallback")


if __name__ == "__main__":
    main()
