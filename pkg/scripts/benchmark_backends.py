#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs the same workloads in two subprocesses, one per QTD_BACKEND setting,
and reports wall times and the worst relative deviation between the two
result sets.  The workloads are the two hot paths: the moment-difference
quadrature corpus and an emission line-shape grid.

Usage: python scripts/benchmark_backends.py [--quick]
"""

import argparse
import json
import os
import subprocess
import sys
import tempfile

WORKLOAD = r"""
import json, sys, time
import numpy as np
from qtd import _kernels
from qtd.emission import AtomSpec, line_shape_grid
from qtd.wavepackets import (Mixture, PacketPairSpec, Superposition,
                             moment_diff_quadrature)

n_specs, n_omega = int(sys.argv[1]), int(sys.argv[2])
out = sys.argv[3]

rng = np.random.default_rng(1234)
specs = [PacketPairSpec(rng.uniform(0, np.pi/2 - 0.01), rng.uniform(0, np.pi),
                        rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1),
                        rng.uniform(1e-3, 0.05)) for _ in range(n_specs)]
pair = PacketPairSpec(np.pi/4, 0.0, 2e-8, 4e-8, 8e-9)
atom = AtomSpec(0.0, 1.5e17)
nus = np.linspace(-9e-16, 1e-16, n_omega)

# warm-up (jit compilation on the numba path)
moment_diff_quadrature(Superposition(specs[0]), Mixture(specs[0]), 2)
line_shape_grid(nus[:2], Superposition(pair), atom, "perpendicular")

t0 = time.perf_counter()
moments = [moment_diff_quadrature(Superposition(s), Mixture(s), j)
           for s in specs for j in (1, 2)]
t_mom = time.perf_counter() - t0

t0 = time.perf_counter()
line = line_shape_grid(nus, Superposition(pair), atom, "perpendicular")
t_line = time.perf_counter() - t0

json.dump({"backend": _kernels.active_backend(),
           "t_moments": t_mom, "t_line": t_line,
           "moments": moments, "line": list(line)}, open(out, "w"))
"""


def run_backend(backend: str, n_specs: int, n_omega: int) -> dict:
    env = dict(os.environ, QTD_BACKEND=backend)
    with tempfile.NamedTemporaryFile(suffix=".json", delete=False) as fh:
        out = fh.name
    try:
        subprocess.run([sys.executable, "-c", WORKLOAD, str(n_specs),
                        str(n_omega), out], env=env, check=True)
        with open(out) as fh:
            return json.load(fh)
    finally:
        os.unlink(out)


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true",
                    help="smaller workload (for CI smoke runs)")
    args = ap.parse_args()
    n_specs, n_omega = (50, 128) if args.quick else (400, 1024)

    results = {b: run_backend(b, n_specs, n_omega) for b in ("numba", "numpy")}
    # agreement measured against the shared quadrature contract
    # (abs_tol 1e-13, rel_tol 1e-11): each engine may miss by one tolerance
    dev = 0.0
    for key in ("moments", "line"):
        a = results["numba"][key]
        b = results["numpy"][key]
        for x, y in zip(a, b):
            budget = max(1e-13, 1e-11 * max(abs(x), abs(y)))
            dev = max(dev, abs(x - y) / (2.0 * budget))

    print(f"workload: {n_specs} moment pairs x2 orders, "
          f"{n_omega}-point ultranarrow line grid")
    for b in ("numba", "numpy"):
        r = results[b]
        assert r["backend"] == b
        print(f"  {b:>5}: moments {r['t_moments']:8.3f} s   "
              f"line {r['t_line']:8.3f} s")
    for key in ("t_moments", "t_line"):
        speed = results["numpy"][key] / results["numba"][key]
        print(f"  speedup ({key[2:]}): {speed:.1f}x")
    print(f"  worst deviation in units of the shared tolerance budget: {dev:.3e}")
    return 0 if dev <= 1.0 else 1


if __name__ == "__main__":
    sys.exit(main())
