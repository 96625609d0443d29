"""Command-line front end.

Units: all rates (``--gamma``, ``--gamma0``, ``--lambda``) are in units of the
atomic transition frequency, and times in its inverse.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import dynamics as dyn
from .entangle import McConfig
from .errors import QslError, UnsupportedFamilyError
from .figures import fig1_table, fig2_table, fig3_table, sweep_table, write_csv
from .matcore import PureState
from .qsl import (GHZ3, W3, AllOnes, Custom, DEFAULT_STEPS, Psi1, Psi2, TimeGrid, analytic_ratio,
                  qsl_compute, target_time_for_population)

EXIT_USAGE = 2
EXIT_IO = 5

_UNITS = "Rates are in units of omega_0 = 1 and times in units of 1/omega_0."


def _common(p: argparse.ArgumentParser, defaults: dict) -> None:
    p.add_argument("--model", choices=["exp", "lorentzian", "table"], default=defaults.get("model", "exp"),
                   help="reservoir: memoryless exponential, Lorentzian, or tabulated c(t)")
    p.add_argument("--gamma", type=float, default=1.0, help="decay rate of the exponential model")
    p.add_argument("--gamma0", type=float, default=1.0, help="Lorentzian coupling strength")
    p.add_argument("--lambda", dest="lam", type=float, default=50.0, help="Lorentzian spectral width")
    p.add_argument("--table", type=Path, help="CSV with columns t, c_real[, c_imag] for --model table")
    p.add_argument("--tau", type=float, help="driving time")
    p.add_argument("--p-tau", dest="p_tau", type=float, help="final excited-state population")
    p.add_argument("--family", choices=["psi1", "psi2", "w3", "ghz3", "ones", "custom"], default="psi1")
    p.add_argument("--alpha", type=float, help="family amplitude (default 1/sqrt(2) for psi1/psi2, 1 for ghz3)")
    p.add_argument("--beta", type=float, help="second amplitude of the w3 family")
    p.add_argument("--n", type=int, default=2, help="qubit count of the ones family")
    p.add_argument("--amplitudes", help="comma-separated real/complex amplitudes for --family custom")
    p.add_argument("--grid-steps", dest="grid_steps", type=int, default=DEFAULT_STEPS)
    p.add_argument("--samples", type=int, default=20000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, help="output CSV path (default: stdout)")
    p.add_argument("--json", action="store_true", help="machine-readable output for qsl")
    p.add_argument("--config", type=Path, default=argparse.SUPPRESS, help="flat key=value file mirroring the flags")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multiqsl",
        description="Quantum speed limit of locally damped multi-qubit registers. " + _UNITS,
    )
    parser.add_argument("--config", type=Path, help="flat key=value file mirroring the flags")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fig1", help="ratio versus P_tau, memoryless reservoir", description=_UNITS)
    _common(p, {})

    p = sub.add_parser("fig2", help="ratio versus gamma0, Lorentzian reservoir at tau = 1", description=_UNITS)
    _common(p, {"model": "lorentzian"})
    p.add_argument("--gamma0-min", dest="gamma0_min", type=float, default=1.0)
    p.add_argument("--gamma0-max", dest="gamma0_max", type=float, default=100.0)
    p.add_argument("--points", type=int, default=100)

    p = sub.add_parser("fig3", help="Monte Carlo concurrence scan", description=_UNITS)
    _common(p, {})
    p.add_argument("--complex", action="store_true", help="draw complex instead of real amplitudes")

    p = sub.add_parser("qsl", help="single speed-limit evaluation", description=_UNITS)
    _common(p, {})

    p = sub.add_parser("sweep", help="sweep one parameter and tabulate the bound", description=_UNITS)
    _common(p, {})
    p.add_argument("--param", choices=["p_tau", "tau", "alpha", "gamma", "gamma0", "lambda"], required=True)
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--num", type=int, default=11)
    return parser


def read_config(path: Path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment, dashes map to underscores."""
    out = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        out["lam" if key == "lambda" else key] = value
    return out


# -- argument translation -------------------------------------------------------

def make_model(args) -> dyn.DecoherenceModel:
    if args.model == "exp":
        return dyn.MemorylessExponential(args.gamma)
    if args.model == "lorentzian":
        return dyn.Lorentzian(args.gamma0, args.lam)
    if args.table is None:
        raise ValueError("--model table requires --table PATH")
    return dyn.Tabulated.from_csv(args.table)


def make_family(args):
    fam, a = args.family, args.alpha
    if fam == "psi1":
        return Psi1(1 / np.sqrt(2) if a is None else a)
    if fam == "psi2":
        return Psi2(1 / np.sqrt(2) if a is None else a)
    if fam == "ghz3":
        return GHZ3(1.0 if a is None else a)
    if fam == "w3":
        third = 1 / np.sqrt(3)
        return W3(third if a is None else a, third if args.beta is None else args.beta)
    if fam == "ones":
        return AllOnes(args.n)
    if not args.amplitudes:
        raise ValueError("--family custom requires --amplitudes")
    amps = [complex(s.strip().replace(" ", "")) for s in args.amplitudes.split(",")]
    return Custom(PureState.from_amplitudes(amps, normalize=True))


def make_grid(args, model) -> TimeGrid:
    if (args.tau is None) == (args.p_tau is None):
        raise ValueError("supply exactly one of --tau and --p-tau")
    tau = args.tau if args.tau is not None else target_time_for_population(model, args.p_tau)
    return TimeGrid(tau, args.grid_steps)


def _out(args):
    return args.out if args.out is not None else sys.stdout


# -- commands ---------------------------------------------------------------------

def cmd_fig1(args) -> None:
    model = make_model(args) if args.model != "exp" or args.gamma != 1.0 else None
    write_csv(fig1_table(model=model, steps=args.grid_steps), _out(args))


def cmd_fig2(args) -> None:
    tau = 1.0 if args.tau is None else args.tau
    write_csv(fig2_table(args.gamma0_min, args.gamma0_max, args.points, lam=args.lam, tau=tau,
                         steps=args.grid_steps), _out(args))


def cmd_fig3(args) -> None:
    config = McConfig(
        n_samples=args.samples,
        seed=args.seed,
        amplitudes="complex" if args.complex else "real",
        model=make_model(args),
        p_tau=0.1 if args.p_tau is None else args.p_tau,
    )
    write_csv(fig3_table(config), _out(args))


def qsl_report(args) -> dict:
    model = make_model(args)
    family = make_family(args)
    grid = make_grid(args, model)
    res = qsl_compute(model, family, grid)
    report = res.as_dict()
    report["regime"] = dyn.memory_regime(model).value
    report["p_tau"] = float(dyn.population(model, grid.tau))
    if report["regime"] == dyn.Regime.MEMORYLESS.value:
        try:
            oracle = analytic_ratio(family, report["p_tau"])
        except UnsupportedFamilyError:
            oracle = None
        if oracle is not None:
            report["analytic_ratio"] = oracle
            report["residual"] = res.ratio - oracle
    return report


def cmd_qsl(args) -> None:
    report = qsl_report(args)
    if args.json:
        print(json.dumps(report, indent=2))
        return
    labels = {"tau": "tau", "tau_qsl": "tau_QSL", "ratio": "tau/tau_QSL", "e1": "E_1", "e2": "E_2",
              "einf": "E_inf", "bures": "Bures angle", "grid_error": "quadrature rel. error",
              "p_tau": "P_tau", "regime": "reservoir", "analytic_ratio": "closed form",
              "residual": "numeric - closed form"}
    for key, label in labels.items():
        if key in report:
            v = report[key]
            print(f"{label:>24}: {v:.12g}" if isinstance(v, float) else f"{label:>24}: {v}")


def cmd_sweep(args) -> None:
    values = np.linspace(args.start, args.stop, args.num)

    def make(v):
        ns = argparse.Namespace(**vars(args))
        setattr(ns, "lam" if args.param == "lambda" else args.param, v)
        if args.param == "p_tau":
            ns.tau = None
        elif args.param == "tau":
            ns.p_tau = None
        model = make_model(ns)
        return model, make_family(ns), make_grid(ns, model)

    write_csv(sweep_table(args.param, values, make), _out(args))


COMMANDS = {"fig1": cmd_fig1, "fig2": cmd_fig2, "fig3": cmd_fig3, "qsl": cmd_qsl, "sweep": cmd_sweep}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    pre, _ = parser.parse_known_args(argv)
    if pre.config is not None:
        try:
            file_values = read_config(pre.config)
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        sub = parser._subparsers._group_actions[0].choices[pre.command]
        known = {a.dest: a for a in sub._actions}
        converted = {}
        for key, raw in file_values.items():
            action = known.get(key)
            if action is None:
                print(f"error: unknown config key {key!r}", file=sys.stderr)
                return EXIT_USAGE
            if action.const is True and action.nargs == 0:
                converted[key] = raw.lower() in ("1", "true", "yes", "on")
            else:
                converted[key] = action.type(raw) if action.type else raw
        sub.set_defaults(**converted)
    args = parser.parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except QslError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
