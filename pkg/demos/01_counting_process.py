#!/usr/bin/env python3
"""Simulate the prime-count process and watch the classical asymptotics appear.

The process lives on [2, inf) with intensity alpha*li + beta*f.  Three ratios
are tracked against their limiting value 1:

  * N([2, x]) / (x / log x)        -- the counting law
  * Z_n / (n log n)                -- the n-th event location
  * N((x, x+x^t]) log x / x^t      -- short-window counts, t > 1/2
"""

import math

import numpy as np

from prime_oracle import IntensityParams, RH_SQRT, simulate
from prime_oracle.nhpp import gap_window_check, nth_event_check, pnt_ratio_check

params = IntensityParams(alpha=1.0, beta=0.01)
horizon = 2e6
print(f"simulating one realization to {horizon:.0e} "
      f"(alpha={params.alpha}, beta={params.beta}, rh-sqrt error bound)...")
stream = simulate(RH_SQRT, params, horizon, seed=20240801)
print(f"{len(stream.times)} events; first few: {np.round(stream.times[:8], 2)}")

print("\ncounting ratio N / (x / log x):")
for x, ratio in pnt_ratio_check(stream, [1e4, 1e5, 1e6]):
    print(f"  x = {x:>9.0e}   ratio = {ratio:.4f}")

print("\nn-th event ratio Z_n / (n log n):")
for n, ratio in nth_event_check(stream, [100, 1000, 10_000, 100_000]):
    print(f"  n = {n:>7}   ratio = {ratio:.4f}")

print("\nshort-window ratio at theta = 0.75, averaged over 50 replications:")
vals = []
for rep in range(50):
    s = simulate(RH_SQRT, params, 1e6 + 1e6**0.75 + 1, seed=rep)
    vals.append(gap_window_check(s, 0.75, [1e6])[0][1])
mean = float(np.mean(vals))
se = float(np.std(vals, ddof=1) / math.sqrt(len(vals)))
print(f"  mean = {mean:.4f} +- {se:.4f}  (limit: 1)")
