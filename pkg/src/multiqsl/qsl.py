"""Quantum speed limit of the locally damped N-qubit register.

The bound is evaluated directly:

    tau_QSL = sin^2 B(phi, rho_tau) / min(E_1, E_2, E_inf),
    E_p     = (1 / tau) * integral_0^tau || d rho_t / dt ||_p dt,

with ``B`` the Bures angle between the pure initial state and the state at
``tau``. The closed-form ratios for special initial states are kept as
independent oracles (:func:`analytic_ratio`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy.optimize import brentq

from . import dynamics as dyn
from .errors import AmbiguityError, DegenerateEvolutionError, DomainError, UnsupportedFamilyError
from .matcore import MAX_QUBITS, NORM_ATOL, DensityMatrix, PureState, basis_index
from .quadrature import DEFAULT_RTOL, simpson_batched

DEFAULT_STEPS = 2000
_CHUNK_ENTRIES = 1 << 16


@dataclass(frozen=True)
class TimeGrid:
    tau: float
    steps: int = DEFAULT_STEPS

    def __post_init__(self):
        if not self.tau > 0:
            raise DomainError(f"driving time must be positive, got {self.tau}")
        if self.steps < 8 or self.steps % 2:
            raise ValueError(f"steps must be an even integer >= 8, got {self.steps}")

    @property
    def h(self) -> float:
        return self.tau / self.steps

    def refined(self) -> "TimeGrid":
        return TimeGrid(self.tau, 2 * self.steps)


@dataclass(frozen=True)
class QslResult:
    tau: float
    tau_qsl: float
    ratio: float
    e1: float
    e2: float
    einf: float
    bures: float
    grid_error: float

    @property
    def min_rate(self) -> float:
        return min(self.e1, self.e2, self.einf)

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in
                ("tau", "tau_qsl", "ratio", "e1", "e2", "einf", "bures", "grid_error")}


# -- initial-state families ----------------------------------------------------

def _ket(amps: dict, n: int) -> np.ndarray:
    v = np.zeros(2**n, dtype=complex)
    for label, a in amps.items():
        v[basis_index(label)] += a
    return v


def _unit_interval(alpha: float) -> float:
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    return float(alpha)


def _complement(*amps: float) -> float:
    rest = 1.0 - sum(a * a for a in amps)
    if rest < -NORM_ATOL:
        raise ValueError(f"amplitudes {amps} exceed unit norm")
    return float(np.sqrt(max(rest, 0.0)))


@dataclass(frozen=True)
class Psi1:
    """``alpha|01> + sqrt(1 - alpha^2)|10>``."""

    alpha: float
    n_qubits = 2

    def state(self) -> PureState:
        a = _unit_interval(self.alpha)
        return PureState(2, _ket({"01": a, "10": _complement(a)}, 2))


@dataclass(frozen=True)
class Psi2:
    """``alpha|11> + sqrt(1 - alpha^2)|00>``."""

    alpha: float
    n_qubits = 2

    def state(self) -> PureState:
        a = _unit_interval(self.alpha)
        return PureState(2, _ket({"11": a, "00": _complement(a)}, 2))


@dataclass(frozen=True)
class W3:
    """``alpha|001> + beta|010> + sqrt(1 - alpha^2 - beta^2)|100>``."""

    alpha: float
    beta: float
    n_qubits = 3

    def state(self) -> PureState:
        a, b = _unit_interval(self.alpha), _unit_interval(self.beta)
        return PureState(3, _ket({"001": a, "010": b, "100": _complement(a, b)}, 3))


@dataclass(frozen=True)
class GHZ3:
    """``alpha|111> + sqrt(1 - alpha^2)|000>``."""

    alpha: float
    n_qubits = 3

    def state(self) -> PureState:
        a = _unit_interval(self.alpha)
        return PureState(3, _ket({"111": a, "000": _complement(a)}, 3))


@dataclass(frozen=True)
class AllOnes:
    """Product state ``|11...1>`` of ``n`` qubits."""

    n: int

    @property
    def n_qubits(self) -> int:
        return self.n

    def state(self) -> PureState:
        if not 1 <= self.n <= MAX_QUBITS:
            raise ValueError(f"n must lie in [1, {MAX_QUBITS}], got {self.n}")
        return PureState.basis("1" * self.n)


@dataclass(frozen=True)
class SingleExcitation:
    """``sum_j w_j |0..1_j..0>`` with the excitation on qubit ``j`` (left to right).

    Weights may be complex and are normalized on use.
    """

    weights: tuple

    @property
    def n_qubits(self) -> int:
        return len(self.weights)

    def state(self) -> PureState:
        n = len(self.weights)
        labels = ["0" * j + "1" + "0" * (n - j - 1) for j in range(n)]
        return PureState.from_amplitudes(_ket(dict(zip(labels, self.weights)), n), normalize=True)


@dataclass(frozen=True)
class Custom:
    pure: PureState

    @property
    def n_qubits(self) -> int:
        return self.pure.n_qubits

    def state(self) -> PureState:
        return self.pure


StateFamily = Union[Psi1, Psi2, W3, GHZ3, AllOnes, SingleExcitation, Custom]


# -- the bound -------------------------------------------------------------------

def bures_angle(phi: PureState, rho_tau: Union[DensityMatrix, np.ndarray]) -> float:
    """``arccos(sqrt(<phi|rho_tau|phi>))`` with the overlap clamped to [0, 1]."""
    rho = np.asarray(rho_tau, dtype=complex)
    v = phi.amplitudes
    if rho.shape != (v.size, v.size):
        raise ValueError(f"state of dimension {v.size} does not match matrix {rho.shape}")
    overlap = float(np.real(v.conj() @ rho @ v))
    return float(np.arccos(np.sqrt(min(max(overlap, 0.0), 1.0))))


def _rate_integrand(model, rho0s: np.ndarray, n_qubits: int):
    dim = 2**n_qubits
    chunk = max(1, _CHUNK_ENTRIES // (dim * dim))

    def func(t: np.ndarray, k: np.ndarray) -> np.ndarray:
        out = np.empty((t.size, 3))
        for lo in range(0, t.size, chunk):
            sl = slice(lo, lo + chunk)
            _, drho = dyn.evolve_batch(model, rho0s[k[sl]], t[sl], n_qubits, derivative=True)
            lam = np.abs(np.linalg.eigvalsh(drho))
            out[sl, 0] = lam.sum(axis=1)
            out[sl, 1] = np.sqrt((lam * lam).sum(axis=1))
            out[sl, 2] = lam.max(axis=1)
        return out

    return func


def qsl_batch(model, amplitudes: np.ndarray, grid: TimeGrid, rtol: float = DEFAULT_RTOL) -> dict:
    """Evaluate the bound for a stack of pure states sharing one model and grid.

    Args:
        amplitudes: ``(K, 2**n)`` normalized amplitude vectors.
        rtol: relative accuracy target of the norm-rate quadrature.

    Returns:
        dict of ``(K,)`` arrays: ``ratio``, ``tau_qsl``, ``e1``, ``e2``,
        ``einf``, ``bures``, ``grid_error``.
    """
    amps = np.atleast_2d(np.asarray(amplitudes, dtype=complex))
    n = int(round(np.log2(amps.shape[1])))
    k = amps.shape[0]
    rho0s = amps[:, :, None] * amps[:, None, :].conj()

    rho_tau = dyn.evolve_batch(model, rho0s, np.full(k, grid.tau), n)
    overlap = np.einsum("ki,kij,kj->k", amps.conj(), rho_tau, amps).real
    bures = np.arccos(np.sqrt(np.clip(overlap, 0.0, 1.0)))
    sin2 = np.sin(bures) ** 2

    quad = simpson_batched(_rate_integrand(model, rho0s, n), np.full(k, grid.tau), grid.steps, rtol=rtol)
    rates = quad.value / grid.tau
    e_min = rates.min(axis=1)
    frozen = e_min <= 0.0
    if np.any(frozen & (sin2 <= 0.0)):
        raise DegenerateEvolutionError("state does not evolve: Bures angle and norm rates vanish")
    with np.errstate(divide="ignore"):
        tau_qsl = np.where(frozen, np.inf, sin2 / np.where(frozen, 1.0, e_min))
        ratio = grid.tau / tau_qsl
    imin = rates.argmin(axis=1)
    rel_err = quad.error[np.arange(k), imin] / np.maximum(quad.value[np.arange(k), imin], np.finfo(float).tiny)
    return {
        "ratio": ratio,
        "tau_qsl": tau_qsl,
        "e1": rates[:, 0],
        "e2": rates[:, 1],
        "einf": rates[:, 2],
        "bures": bures,
        "grid_error": rel_err,
    }


def _state_of(family_or_state) -> PureState:
    if isinstance(family_or_state, PureState):
        return family_or_state
    return family_or_state.state()


def averaged_norm_rate(model, phi, grid: TimeGrid, p) -> float:
    """``(1/tau) integral ||d rho_t/dt||_p dt`` for ``p`` in ``{1, 2, inf}``."""
    idx = {1: 0, 2: 1, np.inf: 2, "inf": 2}.get(p)
    if idx is None:
        raise ValueError(f"unsupported Schatten index {p!r}")
    state = _state_of(phi)
    rho0 = state.projector()[None]
    quad = simpson_batched(_rate_integrand(model, rho0, state.n_qubits), np.array([grid.tau]), grid.steps)
    return float(quad.value[0, idx] / grid.tau)


def qsl_compute(model, family, grid: TimeGrid) -> QslResult:
    """Evaluate the speed-limit bound for one initial state."""
    state = _state_of(family)
    res = qsl_batch(model, state.amplitudes[None], grid)
    return QslResult(grid.tau, *(float(res[key][0]) for key in
                                 ("tau_qsl", "ratio", "e1", "e2", "einf", "bures", "grid_error")))


# -- closed forms (memoryless reservoirs) ----------------------------------------

def max_speedup(n: int) -> float:
    """Limit of the ``|1...1>`` ratio as the final population goes to zero."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return (2.0**n - 1.0) / 2.0 ** (n - 1)


def all_ones_ratio(n: int, p_tau: float) -> float:
    if p_tau >= 0.5:
        return 1.0
    return ((1.0 - p_tau) ** n + 1.0 - 0.5 ** (n - 1)) / (1.0 - p_tau**n)


def psi2_closed_form(alpha: float, p_tau: float) -> float:
    """Two-branch ratio for ``alpha|11> + sqrt(1-alpha^2)|00>`` in a memoryless bath.

    Valid for every ``alpha`` in ``(0, 1]``: the operator norm of the state
    derivative and ``sin^2`` of the Bures angle both carry one factor of
    ``alpha``, which cancels.
    """
    if p_tau >= 0.5:
        return (1.0 + alpha * p_tau) / (alpha * (1.0 + p_tau))
    return (2.0 * (1.0 - p_tau) * (1.0 - alpha * p_tau) + alpha) / (2.0 * alpha * (1.0 - p_tau**2))


def analytic_ratio(family, p_tau: float) -> float:
    """Closed-form ``tau / tau_QSL`` for a monotonically decaying population.

    Raises:
        UnsupportedFamilyError: for states without a closed form; use
            :func:`qsl_compute` instead.
    """
    if not 0.0 < p_tau <= 1.0:
        raise DomainError(f"p_tau must lie in (0, 1], got {p_tau}")
    if isinstance(family, (Psi1, W3, SingleExcitation)):
        family.state()
        return 1.0
    if isinstance(family, Psi2) and family.alpha > 0:
        return psi2_closed_form(_unit_interval(family.alpha), p_tau)
    if isinstance(family, GHZ3) and family.alpha == 1.0:
        return all_ones_ratio(3, p_tau)
    if isinstance(family, AllOnes):
        return all_ones_ratio(family.n, p_tau)
    raise UnsupportedFamilyError(f"no closed form for {family!r}; use qsl_compute")


def _scalar_integral(func, tau: float, steps: int) -> float:
    def wrapped(t, k):
        return func(t)[:, None]

    return float(simpson_batched(wrapped, np.array([tau]), steps).value[0, 0])


def literal_psi2_ratio(model, alpha: float, grid: TimeGrid) -> float:
    """Reference integral expression for the ``alpha|11> + ...|00>`` ratio.

    Integrand ``max |P'(2 alpha P - alpha +- 1)|`` over denominator
    ``alpha (1 - P_tau^2)``, evaluated literally for any model. It agrees with
    :func:`qsl_compute` because both terms carry the same extra factor ``1/alpha``.
    """
    a = _unit_interval(alpha)

    def integrand(t):
        p = dyn.population(model, t)
        dp = np.abs(dyn.population_rate(model, t))
        return dp * np.maximum(np.abs(2 * a * p - a + 1), np.abs(2 * a * p - a - 1))

    p_tau = float(dyn.population(model, grid.tau))
    return _scalar_integral(integrand, grid.tau, grid.steps) / (a * (1.0 - p_tau**2))


def literal_ghz3_ratio(model, alpha: float, grid: TimeGrid) -> float:
    """Reference integral expression for ``alpha|111> + ...|000>``, evaluated literally.

    At ``alpha = 1`` its denominator is ``1 + P_tau^3`` where ``sin^2 B`` is
    ``1 - P_tau^3``, so it is a comparator only and disagrees with the bound.
    """
    a = _unit_interval(alpha)

    def integrand(t):
        p = dyn.population(model, t)
        dp = np.abs(dyn.population_rate(model, t))
        x = np.sqrt(np.maximum(
            4 * a**2 * p**4 - 8 * a**2 * p**3 + 8 * a**2 * p**2 - 5 * a**2 * p + p + a**2, 0.0))
        base = 3 * a * p - 1.5 * a
        return dp * np.maximum(np.abs(base + 1.5 * x), np.abs(base - 1.5 * x))

    p_tau = float(dyn.population(model, grid.tau))
    denom = a + a * (1 - a**2) * p_tau * (3 - 2 * np.sqrt(p_tau) - 3 * p_tau) + a * (2 * a**2 - 1) * p_tau**3
    return _scalar_integral(integrand, grid.tau, grid.steps) / denom


# -- driving time for a target population -----------------------------------------

def target_time_for_population(model, p_tau: float) -> float:
    """Driving time at which a monotonically decaying population reaches ``p_tau``.

    Raises:
        AmbiguityError: if the model has population backflow, where the time
            is not unique.
    """
    if not 0.0 < p_tau <= 1.0:
        raise DomainError(f"p_tau must lie in (0, 1], got {p_tau}")
    if dyn.memory_regime(model) is dyn.Regime.MEMORY:
        raise AmbiguityError("population is not monotone under this model; supply tau directly")
    if p_tau == 1.0:
        return 0.0

    def f(t):
        return float(dyn.population(model, t)) - p_tau

    if isinstance(model, dyn.Tabulated):
        hi = float(model.times[-1])
        if f(hi) > 0:
            raise DomainError(f"population stays above {p_tau} over the tabulated range")
    else:
        hi = 1.0
        while f(hi) > 0:
            hi *= 2.0
            if hi > 1e12:
                raise DomainError(f"population never reaches {p_tau}")
    return float(brentq(f, 0.0, hi, xtol=1e-300, rtol=1e-14, maxiter=500))


def grid_for_population(model, p_tau: float, steps: int = DEFAULT_STEPS) -> TimeGrid:
    return TimeGrid(target_time_for_population(model, p_tau), steps)

