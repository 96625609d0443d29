"""Decoherence models and the N-qubit local amplitude-damping evolution.

Every qubit couples to its own reservoir, so the N-qubit channel is the tensor
power of the single-qubit map

    rho -> [[P rho_11,        c rho_10],
            [c* rho_01,  1 - P rho_11]]      (excited state first)

where ``c`` is the decoherence function of the reservoir and ``P = |c|^2``.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass, field
from math import factorial
from pathlib import Path
from typing import NamedTuple, Optional, Union

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from .errors import DomainError, RangeError, SingularityError
from .matcore import DensityMatrix, MAX_QUBITS, tensor_all, validate_density

SINGULAR_COHERENCE = 1e-12
_MEMORY_RATE_THRESHOLD = 1e-10


def _check_times(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or not np.all(np.isfinite(t)):
        raise DomainError(f"time must be finite and non-negative, got {t}")
    return t


@dataclass(frozen=True)
class MemorylessExponential:
    """Exponential population decay ``P_t = exp(-rate t)``."""

    rate: float = 1.0

    def __post_init__(self):
        if not self.rate > 0:
            raise DomainError(f"decay rate must be positive, got {self.rate}")

    def coherence(self, t):
        t = _check_times(t)
        return np.exp(-0.5 * self.rate * t) + 0j

    def coherence_rate(self, t):
        return -0.5 * self.rate * self.coherence(t)


def _lorentz_kernels(d2: float, x: np.ndarray, lam: float):
    """Return ``exp(-lam x) cosh(d x)`` and ``exp(-lam x) sinh(d x) / d``.

    ``d2 = d**2`` may be negative, in which case the hyperbolic functions turn
    into their trigonometric counterparts. Small ``|d2| x^2`` uses the power
    series in ``d2`` so the ``d -> 0`` limit is continuous.
    """
    z = d2 * x * x
    small = np.abs(z) < 1.0
    decay = np.exp(-lam * x)
    ch = np.empty_like(x)
    sh = np.empty_like(x)
    if np.any(small):
        zs, xs = z[small], x[small]
        c_ser = np.zeros_like(zs)
        s_ser = np.zeros_like(zs)
        for k in range(14, -1, -1):
            c_ser = c_ser * zs + 1.0 / factorial(2 * k)
            s_ser = s_ser * zs + 1.0 / factorial(2 * k + 1)
        ch[small] = decay[small] * c_ser
        sh[small] = decay[small] * xs * s_ser
    big = ~small
    if np.any(big):
        xb = x[big]
        if d2 > 0:
            d = np.sqrt(d2)
            lo = np.exp(-(lam - d) * xb)
            hi = np.exp(-(lam + d) * xb)
            ch[big] = 0.5 * (lo + hi)
            sh[big] = 0.5 * (lo - hi) / d
        else:
            w = np.sqrt(-d2)
            ch[big] = decay[big] * np.cos(w * xb)
            sh[big] = decay[big] * np.sin(w * xb) / w
    return ch, sh


@dataclass(frozen=True)
class Lorentzian:
    """Resonant damped Jaynes-Cummings reservoir with a Lorentzian spectrum.

    Args:
        gamma0: Markovian decay rate (coupling strength).
        lam: spectral width.
    """

    gamma0: float
    lam: float

    def __post_init__(self):
        if not (self.gamma0 > 0 and self.lam > 0):
            raise DomainError(f"gamma0 and lam must be positive, got {self.gamma0}, {self.lam}")

    @property
    def d_squared(self) -> float:
        return self.lam**2 - 2.0 * self.gamma0 * self.lam

    def coherence(self, t):
        t = _check_times(t)
        x = np.atleast_1d(0.5 * t)
        ch, sh = _lorentz_kernels(self.d_squared, x, self.lam)
        return (ch + self.lam * sh).reshape(t.shape) + 0j

    def coherence_rate(self, t):
        t = _check_times(t)
        x = np.atleast_1d(0.5 * t)
        _, sh = _lorentz_kernels(self.d_squared, x, self.lam)
        return (-self.gamma0 * self.lam * sh).reshape(t.shape) + 0j


@dataclass(frozen=True)
class Tabulated:
    """Sampled decoherence function, interpolated with monotone cubics.

    The real and imaginary parts are interpolated independently with
    :class:`scipy.interpolate.PchipInterpolator`, which never overshoots the
    samples and therefore cannot fake population backflow.
    """

    times: np.ndarray
    c_values: np.ndarray
    _re: PchipInterpolator = field(init=False, repr=False, compare=False)
    _im: PchipInterpolator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        c = np.asarray(self.c_values, dtype=complex)
        if times.ndim != 1 or times.size < 2 or times.shape != c.shape:
            raise ValueError("need at least two (t, c) samples of matching length")
        if times[0] != 0.0 or np.any(np.diff(times) <= 0):
            raise ValueError("tabulated times must start at 0 and increase strictly")
        if abs(c[0] - 1.0) > 1e-12:
            raise ValueError(f"c(0) must equal 1, got {c[0]}")
        if np.any(np.abs(c) > 1.0 + 1e-12):
            raise ValueError("|c(t)| must not exceed 1")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "c_values", c)
        object.__setattr__(self, "_re", PchipInterpolator(times, c.real, extrapolate=False))
        object.__setattr__(self, "_im", PchipInterpolator(times, c.imag, extrapolate=False))

    def _check_range(self, t):
        t = _check_times(t)
        if np.any(t > self.times[-1]):
            raise RangeError(f"t beyond tabulated range [0, {self.times[-1]}]")
        return t

    def coherence(self, t):
        t = self._check_range(t)
        return self._re(t) + 1j * self._im(t)

    def coherence_rate(self, t):
        t = self._check_range(t)
        return self._re(t, 1) + 1j * self._im(t, 1)

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> "Tabulated":
        """Load ``t, c_real[, c_imag]`` rows; a non-numeric header row is skipped."""
        rows = []
        with open(path, newline="", encoding="utf-8") as fh:
            for rec in csv.reader(fh):
                if not rec or not "".join(rec).strip():
                    continue
                try:
                    vals = [float(v) for v in rec]
                except ValueError:
                    if rows:
                        raise
                    continue
                if len(vals) not in (2, 3):
                    raise ValueError(f"expected 2 or 3 columns, got {len(vals)}")
                rows.append(vals + [0.0] * (3 - len(vals)))
        if not rows:
            raise ValueError(f"{path}: no numeric rows")
        arr = np.array(rows, dtype=float)
        return cls(arr[:, 0], arr[:, 1] + 1j * arr[:, 2])


DecoherenceModel = Union[MemorylessExponential, Lorentzian, Tabulated]


class Regime(str, enum.Enum):
    MEMORYLESS = "memoryless"
    MEMORY = "memory"


class DecayRates(NamedTuple):
    delta: float
    gamma: float


def coherence(model: DecoherenceModel, t):
    return model.coherence(t)


def coherence_rate(model: DecoherenceModel, t):
    return model.coherence_rate(t)


def population(model: DecoherenceModel, t):
    """Excited-state population ``P_t = |c_t|^2``."""
    c = model.coherence(t)
    return (c.real**2 + c.imag**2)


def population_rate(model: DecoherenceModel, t):
    c = model.coherence(t)
    dc = model.coherence_rate(t)
    return 2.0 * (c.conj() * dc).real


def decay_rates(model: DecoherenceModel, t: float) -> DecayRates:
    """Lamb shift ``Im(c'/c)`` and decay rate ``Re(c'/c)`` at time ``t``."""
    c = complex(model.coherence(t))
    if abs(c) <= SINGULAR_COHERENCE:
        raise SingularityError(f"decoherence function vanishes at t = {t!r}; rates diverge")
    ratio = complex(model.coherence_rate(t)) / c
    return DecayRates(ratio.imag, ratio.real)


def memory_regime(model: DecoherenceModel) -> Regime:
    if isinstance(model, MemorylessExponential):
        return Regime.MEMORYLESS
    if isinstance(model, Lorentzian):
        return Regime.MEMORY if model.gamma0 > model.lam / 2 else Regime.MEMORYLESS
    if isinstance(model, Tabulated):
        rates = population_rate(model, model.times)
        return Regime.MEMORY if np.any(rates > _MEMORY_RATE_THRESHOLD) else Regime.MEMORYLESS
    raise TypeError(f"unknown decoherence model {model!r}")


def first_coherence_zero(model: DecoherenceModel) -> Optional[float]:
    """Earliest time at which ``c_t`` vanishes, or ``None`` if it never does.

    Tabulated models are checked for sign changes of a purely real ``c``
    between knots.
    """
    if isinstance(model, MemorylessExponential):
        return None
    if isinstance(model, Lorentzian):
        d2 = model.d_squared
        if d2 >= 0:
            return None
        w = np.sqrt(-d2)
        # cos(w t/2) + (lam/w) sin(w t/2) = 0
        return float(2.0 * (np.pi - np.arctan2(w, model.lam)) / w)
    if isinstance(model, Tabulated):
        c = model.c_values
        if np.any(np.abs(c) <= SINGULAR_COHERENCE):
            return float(model.times[np.argmax(np.abs(c) <= SINGULAR_COHERENCE)])
        if np.all(c.imag == 0.0):
            flips = np.nonzero(np.sign(c.real[:-1]) != np.sign(c.real[1:]))[0]
            if flips.size:
                i = flips[0]
                return float(brentq(lambda t: float(model.coherence(t).real), model.times[i], model.times[i + 1]))
        return None
    raise TypeError(f"unknown decoherence model {model!r}")


def kraus_pair(model: DecoherenceModel, t: float):
    """Single-qubit Kraus operators ``(M0, M1)`` at time ``t``."""
    c = complex(model.coherence(t))
    m0 = np.array([[c, 0.0], [0.0, 1.0]], dtype=complex)
    m1 = np.array([[0.0, 0.0], [np.sqrt(max(0.0, 1.0 - abs(c) ** 2)), 0.0]], dtype=complex)
    return m0, m1


# -- batched channel machinery ----------------------------------------------
#
# A single-qubit map is stored by its four couplings (p, c, e, q):
#   out_00 = p x_00,  out_01 = c x_01,  out_10 = c* x_10,  out_11 = e x_11 + q x_00
# (index 0 is the excited state). The channel has (P, c, 1, 1 - P) and its
# time derivative (P', c', 0, -P').

def _local_maps(c: np.ndarray, p: np.ndarray):
    return p, c, 1.0, 1.0 - p


def _local_map_rates(dc: np.ndarray, dp: np.ndarray):
    return dp, dc, 0.0, -dp


def _apply_local(m, rho: np.ndarray, k: int, n: int) -> np.ndarray:
    """Apply the batched single-qubit map ``m`` to qubit ``k`` of ``rho``.

    ``rho`` has shape ``(B, D, D)`` with ``B`` broadcastable against the length
    of the coefficient arrays in ``m``.
    """
    p, c, e, q = m
    left, right = 2**k, 2 ** (n - k - 1)
    x = rho.reshape(rho.shape[0], left, 2, right, left, 2, right)
    p, c, q = (np.reshape(v, (-1, 1, 1, 1, 1)) for v in (p, c, q))
    batch = max(rho.shape[0], p.shape[0])
    out = np.empty((batch,) + x.shape[1:], dtype=complex)
    x00 = x[:, :, 0, :, :, 0]
    out[:, :, 0, :, :, 0] = p * x00
    out[:, :, 0, :, :, 1] = c * x[:, :, 0, :, :, 1]
    out[:, :, 1, :, :, 0] = c.conj() * x[:, :, 1, :, :, 0]
    if e == 0.0:
        out[:, :, 1, :, :, 1] = q * x00
    else:
        out[:, :, 1, :, :, 1] = e * x[:, :, 1, :, :, 1] + q * x00
    return out.reshape(batch, rho.shape[1], rho.shape[2])


def _as_batch(rho: np.ndarray, n: int) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim == 2:
        rho = rho[None]
    if rho.shape[-1] != 2**n or rho.shape[-2] != 2**n:
        raise ValueError(f"state of dimension {rho.shape[-1]} does not match {n} qubits")
    return rho


def evolve_batch(model: DecoherenceModel, rho0, times, n_qubits: int, derivative: bool = False):
    """Evolve ``rho0`` to every time in ``times`` (vectorized).

    Args:
        rho0: a single ``(D, D)`` matrix or a batch ``(T, D, D)`` aligned with
            ``times``.
        times: 1-d array of evaluation times.
        derivative: also return the exact time derivative, obtained by the
            product rule over the qubit factors.

    Returns:
        ``rho_t`` with shape ``(T, D, D)``, or ``(rho_t, drho_t)``.
    """
    times = np.atleast_1d(_check_times(times))
    n = n_qubits
    dim = 2**n
    c = np.asarray(model.coherence(times), dtype=complex)
    p = (c.real**2 + c.imag**2)
    s = _local_maps(c, p)
    rho = _as_batch(rho0, n)
    if derivative:
        dc = np.asarray(model.coherence_rate(times), dtype=complex)
        ds = _local_map_rates(dc, 2.0 * (c.conj() * dc).real)
        drho = np.zeros_like(rho)
        for k in range(n):
            drho = _apply_local(s, drho, k, n) + _apply_local(ds, rho, k, n)
            rho = _apply_local(s, rho, k, n)
    else:
        for k in range(n):
            rho = _apply_local(s, rho, k, n)
    rho = np.broadcast_to(rho, (times.size, dim, dim))
    if derivative:
        return rho, np.broadcast_to(drho, (times.size, dim, dim))
    return rho


def _check_state(rho0, n_qubits: int) -> np.ndarray:
    if n_qubits < 1 or n_qubits > MAX_QUBITS:
        raise ValueError(f"n_qubits must lie in [1, {MAX_QUBITS}], got {n_qubits}")
    m = np.asarray(rho0, dtype=complex)
    if m.shape != (2**n_qubits, 2**n_qubits):
        raise ValueError(f"state shape {m.shape} does not match {n_qubits} qubits")
    return m


def apply_channel(model: DecoherenceModel, rho0, t: float, n_qubits: int) -> DensityMatrix:
    """State at time ``t`` under independent amplitude damping of every qubit."""
    m = _check_state(rho0, n_qubits)
    return validate_density(evolve_batch(model, m, [t], n_qubits)[0])


def apply_channel_kraus(model: DecoherenceModel, rho0, t: float, n_qubits: int) -> np.ndarray:
    """Reference route: explicit sum over all ``2**n`` Kraus tuples."""
    m = _check_state(rho0, n_qubits)
    pair = kraus_pair(model, t)
    out = np.zeros_like(m)
    for idx in np.ndindex(*(2,) * n_qubits):
        k = tensor_all([pair[i] for i in idx])
        out += k @ m @ k.conj().T
    return out


def liouvillian_from_derivative(model: DecoherenceModel, rho0, t: float, n_qubits: int) -> np.ndarray:
    """Exact ``d rho_t / dt`` from the analytic ``c'`` and ``P'``."""
    m = _check_state(rho0, n_qubits)
    return evolve_batch(model, m, [t], n_qubits, derivative=True)[1][0]


_RAISE_LOWER = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)  # sigma_+ sigma_-
_LOWER = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)  # sigma_-


def liouvillian_superop(model: DecoherenceModel, rho_t, t: float, n_qubits: int) -> np.ndarray:
    """Time-local generator applied to ``rho_t``, summed over all qubits.

    Uses the rate form with ``gamma_t = Re(c'/c)`` (negative while decaying)
    and ``delta_t = Im(c'/c)``; undefined where ``c_t`` vanishes.
    """
    rho = _check_state(rho_t, n_qubits)
    delta, gamma = decay_rates(model, t)
    eye = np.eye(2, dtype=complex)
    out = np.zeros_like(rho)
    for k in range(n_qubits):
        ops = [eye] * n_qubits
        ops[k] = _RAISE_LOWER
        a = tensor_all(ops)
        ops[k] = _LOWER
        lower = tensor_all(ops)
        out += 1j * delta * (a @ rho - rho @ a)
        out += gamma * (a @ rho + rho @ a - 2.0 * lower @ rho @ lower.conj().T)
    return out
