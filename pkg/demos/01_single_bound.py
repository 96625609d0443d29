"""
One speed-limit evaluation, step by step
========================================

Evolve two excited qubits under a memoryless reservoir, take the Bures angle
to the final state and the averaged norms of the state derivative, and form
the ratio ``tau / tau_QSL``.
"""

import numpy as np

from multiqsl import (AllOnes, MemorylessExponential, analytic_ratio, apply_channel, bures_angle,
                      liouvillian_from_derivative, qsl_compute, schatten_norm)
from multiqsl.qsl import grid_for_population

##############################################################################
# The reservoir and the target population
# ----------------------------------------
# With a memoryless reservoir only the final population matters, so we pick
# the driving time at which each qubit has kept a quarter of its excitation.

model = MemorylessExponential(rate=1.0)
grid = grid_for_population(model, 0.25)
phi = AllOnes(2).state()
print(f"tau = {grid.tau:.6f}  (ln 4 = {np.log(4):.6f})")

##############################################################################
# The ingredients by hand
# -----------------------
# The state at tau, and the operator norm of d rho/dt at a few times.

rho_tau = apply_channel(model, phi.projector(), grid.tau, 2)
print("Bures angle:", bures_angle(phi, rho_tau), " arccos(P) =", np.arccos(0.25))
for t in np.linspace(0, grid.tau, 5):
    drho = liouvillian_from_derivative(model, phi.projector(), t, 2)
    print(f"t = {t:.3f}  ||drho||_inf = {schatten_norm(drho, np.inf):.6f}  ||drho||_1 = {schatten_norm(drho, 1):.6f}")

##############################################################################
# The packaged evaluation
# -----------------------
# ``qsl_compute`` integrates the three norms adaptively and takes the
# smallest. Here the closed form gives 17/15.

res = qsl_compute(model, AllOnes(2), grid)
print(f"ratio = {res.ratio:.12f}, closed form = {analytic_ratio(AllOnes(2), 0.25):.12f}")
print(f"E_1 = {res.e1:.6f}, E_2 = {res.e2:.6f}, E_inf = {res.einf:.6f}, quadrature error {res.grid_error:.1e}")
