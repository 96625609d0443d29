"""
Speed limit versus entanglement
===============================

Draw random real two-qubit pure states, evaluate the ratio at final
population 0.1 and compare the per-concurrence maxima with the two
one-parameter families ``Psi1`` (flat at 1) and ``Psi2`` (the upper envelope).
"""

import numpy as np

from multiqsl.entangle import McConfig, family_envelope, mc_scan

config = McConfig(n_samples=4000, seed=1, p_tau=0.1)
records = mc_scan(config)
conc = np.array([r.concurrence for r in records])
ratio = np.array([r.ratio for r in records])
print(f"{len(records)} samples, min ratio {ratio.min():.6f}, max ratio {ratio.max():.4f}")

psi1 = family_envelope("psi1", config)
psi2 = family_envelope("psi2", config)
print(f"Psi1 family: ratio in [{psi1.ratio.min():.9f}, {psi1.ratio.max():.9f}]")

##############################################################################
# Per-bin maxima against the Psi2 envelope

edges = np.linspace(0, 1, 11)
print(" concurrence   random max   Psi2 envelope")
for lo, hi in zip(edges[:-1], edges[1:]):
    sel = (conc >= lo) & (conc <= hi)
    env = psi2.ratio[(psi2.concurrence >= lo) & (psi2.concurrence <= hi)]
    print(f" [{lo:.1f}, {hi:.1f}]    {ratio[sel].max():.5f}      {env.max():.5f}")

##############################################################################
# The Psi2 ratio keeps growing as alpha shrinks, so the strongest speedup
# capacity sits at weak, nonzero entanglement.

i = np.argmax(psi2.ratio)
print(f"Psi2 maximum at alpha = {psi2.alpha[i]:.4f}, concurrence {psi2.concurrence[i]:.4f}")
