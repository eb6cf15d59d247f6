#!/usr/bin/env python3
"""Benchmark the series-rollout hot path: numba kernel vs pure-Python fallback.

Two measurements per backend:
  - raw kernel: one long recurrence rollout (2000 terms), kernel cost only
  - G scan: full spectral-determinant evaluations (derivation + two series)

Each variant runs in a subprocess because the kernel backend is selected at
import time via RABI_SPECTRA_PURE_PYTHON.

Usage: python benchmarks/bench_series.py [n_energies]
"""

import os
import subprocess
import sys

WORK = r"""
import time
import numpy as np
import rabi_spectra as rs
from rabi_spectra import _kernels
from rabi_spectra.heun import che_ode, che_params
from rabi_spectra.series import ode_to_recurrence

backend = 'numba' if _kernels.NUMBA_ENABLED else 'python'
p = rs.validate_params(1.0, 0.4, 0.15, 0.6, 0.0)
n = {n}

# raw kernel rollout: fixed recurrence, full 2000 terms each call
rec = ode_to_recurrence(che_ode(che_params(p, 0.3), 0.0))
w = np.ascontiguousarray(rec.weights)
seeds = np.array([1.0])
_kernels.roll(w, rec.j_lead, rec.order, seeds, 0.5, 2000, 0.0)  # warm-up
reps = 200
t0 = time.perf_counter()
for _ in range(reps):
    _kernels.roll(w, rec.j_lead, rec.order, seeds, 0.5, 2000, 0.0)
dt_kernel = (time.perf_counter() - t0) / reps

# end-to-end G scan
grid = np.linspace(-1.0, 4.0, n)
rs.g_function_heun(p, float(grid[0]))
t0 = time.perf_counter()
acc = 0.0
for e in grid:
    acc += abs(rs.g_function_heun(p, float(e)).g_value)
dt = time.perf_counter() - t0
print(f"backend={{backend:6s}} kernel-2000-terms={{1e3 * dt_kernel:7.3f}}ms "
      f"g-eval={{1e3 * dt / n:6.2f}}ms checksum={{acc:.6f}}", flush=True)
"""


def run(pure_python: bool, n: int) -> None:
    env = dict(os.environ)
    if pure_python:
        env["RABI_SPECTRA_PURE_PYTHON"] = "1"
    else:
        env.pop("RABI_SPECTRA_PURE_PYTHON", None)
    subprocess.run([sys.executable, "-c", WORK.format(n=n)], env=env, check=True)


if __name__ == "__main__":
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 200
    print(f"series kernel benchmark ({n} energies, identical work)", flush=True)
    run(False, n)
    run(True, n)
