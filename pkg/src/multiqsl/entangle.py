"""Two-qubit concurrence and the concurrence-versus-ratio Monte Carlo scan."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Literal

import numpy as np

from . import dynamics as dyn
from .matcore import PureState
from .qsl import Psi1, Psi2, TimeGrid, qsl_batch, target_time_for_population

MC_DEFAULT_STEPS = 64
MC_RTOL = 1e-9
_BATCH = 2000

_SIGMA_Y2 = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


@dataclass(frozen=True)
class McConfig:
    """Monte Carlo scan settings.

    ``grid_steps`` is the base Simpson grid for each sample; adaptive
    refinement takes care of the kinks, so a coarse base grid suffices.
    """

    n_samples: int = 20000
    seed: int = 0
    amplitudes: Literal["real", "complex"] = "real"
    model: dyn.DecoherenceModel = field(default_factory=lambda: dyn.MemorylessExponential(1.0))
    p_tau: float = 0.1
    grid_steps: int = MC_DEFAULT_STEPS

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be positive")
        if not 0.0 < self.p_tau < 1.0:
            raise ValueError(f"p_tau must lie in (0, 1), got {self.p_tau}")
        if self.amplitudes not in ("real", "complex"):
            raise ValueError(f"amplitudes must be 'real' or 'complex', got {self.amplitudes!r}")


@dataclass(frozen=True)
class ScanRecord:
    sample_index: int
    concurrence: float
    ratio: float
    amplitudes: tuple


def _draw(seed: int, index: int, mode: str) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))
    if mode == "real":
        v = rng.standard_normal(4).astype(complex)
    else:
        g = rng.standard_normal(8)
        v = g[:4] + 1j * g[4:]
    return v / np.linalg.norm(v)


def sample_pure_state(config: McConfig, index: int) -> PureState:
    """Uniformly distributed two-qubit pure state number ``index``.

    Each index has its own random substream derived from ``config.seed``, so a
    sample does not depend on which other samples are drawn or in what order.
    """
    if not 0 <= index < config.n_samples:
        raise IndexError(f"sample index {index} outside [0, {config.n_samples})")
    return PureState(2, _draw(config.seed, index, config.amplitudes))


def concurrence(state: PureState) -> float:
    """Pure-state concurrence ``2 |a_11 a_00 - a_10 a_01|``."""
    if state.n_qubits != 2:
        raise ValueError(f"concurrence needs two qubits, got {state.n_qubits}")
    a = state.amplitudes
    return float(min(1.0, 2.0 * abs(a[0] * a[3] - a[1] * a[2])))


def wootters_concurrence(rho) -> float:
    """Wootters concurrence of a (possibly mixed) two-qubit density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 density matrix, got {rho.shape}")
    flipped = _SIGMA_Y2 @ rho.conj() @ _SIGMA_Y2
    ev = np.linalg.eigvals(rho @ flipped)
    lam = np.sort(np.sqrt(np.clip(ev.real, 0.0, None)))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def _scan_grid(config: McConfig) -> TimeGrid:
    return TimeGrid(target_time_for_population(config.model, config.p_tau), config.grid_steps)


def mc_scan(config: McConfig) -> List[ScanRecord]:
    """Concurrence and speed-limit ratio for every random initial state."""
    grid = _scan_grid(config)
    records = []
    for lo in range(0, config.n_samples, _BATCH):
        idx = range(lo, min(lo + _BATCH, config.n_samples))
        amps = np.stack([_draw(config.seed, i, config.amplitudes) for i in idx])
        ratios = qsl_batch(config.model, amps, grid, rtol=MC_RTOL)["ratio"]
        conc = np.minimum(1.0, 2.0 * np.abs(amps[:, 0] * amps[:, 3] - amps[:, 1] * amps[:, 2]))
        for j, i in enumerate(idx):
            a = amps[j]
            coeffs = tuple(float(x.real) for x in a) if config.amplitudes == "real" else tuple(complex(x) for x in a)
            records.append(ScanRecord(i, float(conc[j]), float(ratios[j]), coeffs))
    return records


@dataclass(frozen=True)
class Envelope:
    family: str
    alpha: np.ndarray
    concurrence: np.ndarray
    ratio: np.ndarray
    amplitudes: np.ndarray


def family_envelope(family: str, config: McConfig, n_alpha: int = 201) -> Envelope:
    """Sweep ``alpha`` in ``(0, 1)`` for the ``psi1`` or ``psi2`` family."""
    ctor = {"psi1": Psi1, "psi2": Psi2}[family]
    alphas = np.linspace(0.0, 1.0, n_alpha + 2)[1:-1]
    amps = np.stack([ctor(float(a)).state().amplitudes for a in alphas])
    ratios = qsl_batch(config.model, amps, _scan_grid(config), rtol=MC_RTOL)["ratio"]
    conc = 2.0 * alphas * np.sqrt(1.0 - alphas**2)
    return Envelope(family, alphas, conc, ratios, amps)
