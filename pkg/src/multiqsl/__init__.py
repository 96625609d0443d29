"""Quantum speed limits of multi-qubit registers under local amplitude damping."""

from .dynamics import (Lorentzian, MemorylessExponential, Regime, Tabulated, apply_channel, coherence,
                       liouvillian_from_derivative, liouvillian_superop, memory_regime, population,
                       population_rate)
from .entangle import McConfig, concurrence, mc_scan, sample_pure_state, wootters_concurrence
from .matcore import DensityMatrix, PureState, schatten_norm, tensor_product, validate_density
from .qsl import (GHZ3, W3, AllOnes, Custom, Psi1, Psi2, QslResult, SingleExcitation, TimeGrid,
                  analytic_ratio, averaged_norm_rate, bures_angle, max_speedup, qsl_compute,
                  target_time_for_population)

__version__ = "0.1.0"
