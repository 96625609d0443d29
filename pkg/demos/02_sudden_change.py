"""
Sudden change at half population
================================

For ``|1...1>`` in a memoryless reservoir the ratio is exactly 1 while the
final population stays above 1/2, and rises below it. The maximum speedup
approached as the population empties is ``(2^n - 1) / 2^(n-1)``.
"""

import numpy as np

from multiqsl import AllOnes, MemorylessExponential, max_speedup, qsl_compute
from multiqsl.qsl import grid_for_population

model = MemorylessExponential(1.0)

##############################################################################
# Ratio versus final population for two and three qubits

print(" P_tau   n=2        n=3")
for p in (0.9, 0.6, 0.51, 0.5, 0.49, 0.4, 0.25, 0.1, 0.01):
    grid = grid_for_population(model, p)
    r2 = qsl_compute(model, AllOnes(2), grid).ratio
    r3 = qsl_compute(model, AllOnes(3), grid).ratio
    print(f" {p:5.2f}  {r2:.6f}  {r3:.6f}")

##############################################################################
# The left branch joins 1 with zero slope, so just below 1/2 the excess is
# tiny and grows quadratically.

for delta in (0.01, 0.02, 0.04):
    r = qsl_compute(model, AllOnes(2), grid_for_population(model, 0.5 - delta)).ratio
    print(f" 0.5 - {delta:.2f}: excess {r - 1:.3e}, excess / delta^2 = {(r - 1) / delta**2:.4f}")

##############################################################################
# Maximal speedup as the population empties

for n in range(1, 6):
    r = qsl_compute(model, AllOnes(n), grid_for_population(model, 1e-4, steps=400)).ratio
    print(f" n={n}: ratio at P=1e-4 {r:.5f}, limit {max_speedup(n):.5f}")
