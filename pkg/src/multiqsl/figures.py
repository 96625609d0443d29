"""Tabular data behind the three figures, plus generic parameter sweeps.

Every builder returns ``(header, rows)``; :func:`write_csv` renders them with
12 significant digits.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import dynamics as dyn
from .entangle import McConfig, family_envelope, mc_scan
from .qsl import (AllOnes, Psi1, Psi2, TimeGrid, DEFAULT_STEPS, grid_for_population,
                  literal_psi2_ratio, qsl_compute)

Table = Tuple[List[str], List[list]]

FIG1_HEADER = ["p_tau", "ratio_psi1", "ratio_ones2", "ratio_bell", "ratio_bell_paperEq6"]
FIG2_HEADER = ["gamma0", "ratio_psi1", "ratio_ones2", "ratio_bell", "ratio_bell_paperEq6", "c_zero_crossing"]
FIG3_HEADER = ["index", "a1", "a2", "a3", "a4", "concurrence", "ratio", "family"]

BELL_ALPHA = 1.0 / np.sqrt(2.0)


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.12g}"
    if isinstance(x, (complex, np.complexfloating)):
        return f"{x.real:.12g}{x.imag:+.12g}j"
    return str(x)


def write_csv(table: Table, out: Union[str, Path, io.TextIOBase]) -> None:
    header, rows = table
    if isinstance(out, (str, Path)):
        with open(out, "w", newline="", encoding="utf-8") as fh:
            _write(fh, header, rows)
    else:
        _write(out, header, rows)


def _write(fh, header, rows):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])


def _two_qubit_ratios(model, grid: TimeGrid, psi1_alpha: float) -> list:
    return [
        qsl_compute(model, Psi1(psi1_alpha), grid).ratio,
        qsl_compute(model, AllOnes(2), grid).ratio,
        qsl_compute(model, Psi2(BELL_ALPHA), grid).ratio,
        literal_psi2_ratio(model, BELL_ALPHA, grid),
    ]


def fig1_table(
    p_values: Optional[Sequence[float]] = None,
    model: Optional[dyn.DecoherenceModel] = None,
    steps: int = DEFAULT_STEPS,
    psi1_alpha: float = BELL_ALPHA,
) -> Table:
    """Ratios versus final population under a memoryless reservoir."""
    if p_values is None:
        p_values = np.round(np.arange(1, 100) * 0.01, 2)
    model = model or dyn.MemorylessExponential(1.0)
    rows = []
    for p in p_values:
        grid = grid_for_population(model, float(p), steps)
        rows.append([float(p)] + _two_qubit_ratios(model, grid, psi1_alpha))
    return FIG1_HEADER, rows


def fig2_table(
    gamma0_min: float = 1.0,
    gamma0_max: float = 100.0,
    points: int = 100,
    lam: float = 50.0,
    tau: float = 1.0,
    steps: int = DEFAULT_STEPS,
    psi1_alpha: float = BELL_ALPHA,
) -> Table:
    """Ratios versus coupling strength for the Lorentzian reservoir at fixed ``tau``.

    ``c_zero_crossing`` marks rows where the decoherence function vanishes
    inside ``[0, tau]``; the rate form of the generator is singular there but
    the ratios, built from the exact state derivative, remain valid.
    """
    if not 0 < gamma0_min < gamma0_max:
        raise ValueError("need 0 < gamma0_min < gamma0_max")
    if points < 2:
        raise ValueError("need at least two points")
    grid = TimeGrid(tau, steps)
    rows = []
    for g0 in np.linspace(gamma0_min, gamma0_max, points):
        model = dyn.Lorentzian(float(g0), lam)
        t0 = dyn.first_coherence_zero(model)
        rows.append([float(g0)] + _two_qubit_ratios(model, grid, psi1_alpha) + [t0 is not None and t0 <= tau])
    return FIG2_HEADER, rows


def fig3_table(config: McConfig, n_alpha: int = 201) -> Table:
    """Monte Carlo scan followed by the ``psi1`` and ``psi2`` alpha sweeps."""
    rows = []
    for rec in mc_scan(config):
        rows.append([rec.sample_index, *rec.amplitudes, rec.concurrence, rec.ratio, "random"])
    for fam in ("psi1", "psi2"):
        env = family_envelope(fam, config, n_alpha)
        for i in range(env.alpha.size):
            amps = [float(a.real) for a in env.amplitudes[i]]
            rows.append([i, *amps, float(env.concurrence[i]), float(env.ratio[i]), fam])
    return FIG3_HEADER, rows


def sweep_table(param: str, values: Iterable[float], make) -> Table:
    """Evaluate ``make(value) -> (model, family, grid)`` for each value."""
    header = [param, "tau", "tau_qsl", "ratio", "e1", "e2", "einf", "bures"]
    rows = []
    for v in values:
        model, family, grid = make(float(v))
        r = qsl_compute(model, family, grid)
        rows.append([float(v), r.tau, r.tau_qsl, r.ratio, r.e1, r.e2, r.einf, r.bures])
    return header, rows
