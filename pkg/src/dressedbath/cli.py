"""Command-line front end.

Verbs: spectrum, evolve, steady, figure, compare, sweep, selftest.
Exit codes: 0 success, 1 configuration problem, 2 numerical-invariant
violation.
"""

from __future__ import annotations

import argparse
import pathlib
import sys
import time
from dataclasses import replace

import numpy as np

from . import metrics, microscopic, phenomenological, scenarios
from ._version import __version__
from .integrate import StepTooLarge
from .linalg import StateValidationError
from .metrics import AssumptionViolated
from .microscopic import DegenerateRates
from .model import (dressed_frame, fairness_check, rate_set,
                    spectral_density, thermal_occupancy)
from .scenarios import (ConfigError, compare_report, figure_preset,
                        parse_config, run_scenario, sweep, sweep_csv,
                        write_trajectory)

CONFIG_ERRORS = (ConfigError, ValueError)
NUMERIC_ERRORS = (StateValidationError, StepTooLarge, AssumptionViolated,
                  DegenerateRates)


def _add_common(sub):
    sub.add_argument("--config", type=pathlib.Path, help="key = value file")
    sub.add_argument("--figure", type=int, help="start from a figure preset")
    sub.add_argument("--out", type=pathlib.Path, default=pathlib.Path("."),
                     help="output directory for CSV files")
    sub.add_argument("--model", choices=("micro", "phenom", "both"))
    sub.add_argument("--tmax", help="time span in seconds, or 'auto'")
    sub.add_argument("--points", type=int, help="number of output samples")
    sub.add_argument("--temp", type=float, help="bath temperature in K")


def _configs_from_args(args) -> list:
    """Resolve precedence: figure preset < config file < explicit flags."""
    cfgs = None
    if args.figure is not None:
        preset = figure_preset(args.figure)
        cfgs = preset if isinstance(preset, list) else [preset]
    if args.config is not None:
        base = cfgs[0] if cfgs else None
        cfgs = [parse_config(args.config.read_text(encoding="utf-8"), base=base)]
    if cfgs is None:
        raise ConfigError("give --figure N or --config PATH")

    if args.temp is not None:
        cfgs = [replace(c, params=replace(c.params, temperature=args.temp),
                        label=f"{c.label.split('_T')[0]}_T{args.temp:g}")
                for c in cfgs[:1]]
    out = []
    for cfg in cfgs:
        if args.tmax is not None:
            cfg = replace(cfg, t_max="auto" if args.tmax == "auto" else float(args.tmax))
        if args.points is not None:
            cfg = replace(cfg, n_points=args.points)
        if args.model is not None:
            models = ("micro", "phenom") if args.model == "both" else (args.model,)
            cfg = replace(cfg, models=models)
        out.append(cfg)
    return out


def cmd_spectrum(args):
    cfg = _configs_from_args(args)[0]
    p = cfg.params
    frame = dressed_frame(p)
    rates = rate_set(p, frame)
    print(f"parameters: omega={p.omega:g} coupling={p.coupling:g} "
          f"gamma0={p.gamma0:g} bath_width={p.bath_width:g} "
          f"bath_center={p.bath_center:g} temperature={p.temperature:g}")
    names = ("ground", "antisym", "sym", "top")
    for name, e in zip(names, frame.energies):
        print(f"energy {name}: {e:.10g}")
    print(f"bohr frequencies: low {frame.bohr_low:.10g}, high {frame.bohr_high:.10g}")
    for label, freq in (("low", frame.bohr_low), ("high", frame.bohr_high),
                        ("bare", p.omega)):
        print(f"J({label}) = {spectral_density(p, freq):.10g}, "
              f"nbar({label}) = {thermal_occupancy(freq, p.temperature):.10g}")
    print(f"decay low/high: {rates.decay_low:.10g} / {rates.decay_high:.10g}")
    print(f"excitation low/high: {rates.excitation_low:.10g} / {rates.excitation_high:.10g}")
    print(f"bare emission/absorption: {rates.emission_bare:.10g} / {rates.absorption_bare:.10g}")
    for line in fairness_check(p).lines():
        print(line)
    return 0


def cmd_evolve(args):
    for cfg in _configs_from_args(args):
        traj = run_scenario(cfg)
        for path in write_trajectory(traj, args.out):
            print(f"wrote {path}")
    return 0


def cmd_steady(args):
    cfg = _configs_from_args(args)[0]
    frame = dressed_frame(cfg.params)
    rates = rate_set(cfg.params, frame)
    ss_m = microscopic.steady_state(rates)
    pops = [ss_m[i, i].real for i in range(4)]
    print("micro stationary dressed populations "
          "(ground, antisym, sym, top): "
          + " ".join(f"{v:.10g}" for v in pops))
    ss_p = phenomenological.steady_state(cfg.params, rates)
    print("phenom stationary computational diagonal: "
          + " ".join(f"{ss_p[i, i].real:.10g}" for i in range(4)))
    print(f"phenom inner coherence: {ss_p[1, 2]:.10g}")
    print(f"phenom outer coherence: {ss_p[0, 3]:.10g}")
    ss_pd = phenomenological.steady_state_dressed(cfg.params, rates, frame).matrix
    print("phenom stationary in dressed basis, surviving coherences: "
          f"ground-top {abs(ss_pd[0, 3]):.6g}, antisym-sym {abs(ss_pd[1, 2]):.6g}")
    u = frame.unitary
    for tag, dressed_state in (("micro", ss_m), ("phenom", ss_pd)):
        x = metrics.x_elements_from_matrix(u @ dressed_state @ u.conj().T)
        print(f"{tag} stationary concurrence {metrics.concurrence_x(x):.10g}, "
              f"discord {metrics.discord_approx_q2(x):.10g}, "
              f"linear entropy {metrics.linear_entropy_q1(x):.10g}")
    return 0


def cmd_figure(args):
    preset = figure_preset(args.number)
    cfgs = preset if isinstance(preset, list) else [preset]
    for cfg in cfgs:
        if args.points is not None:
            cfg = replace(cfg, n_points=args.points)
        traj = run_scenario(cfg)
        for path in write_trajectory(traj, args.out):
            print(f"wrote {path}")
    return 0


def cmd_compare(args):
    for cfg in _configs_from_args(args):
        report = compare_report(cfg)
        print(report.text(), end="")
        args.out.mkdir(parents=True, exist_ok=True)
        path = args.out / f"{cfg.label}_compare.csv"
        path.write_text(report.csv(), encoding="utf-8")
        print(f"wrote {path}")
    return 0


def cmd_sweep(args):
    cfg = _configs_from_args(args)[0]
    values = [float(v) for v in args.values.split(",") if v.strip()]
    reports = sweep(cfg, args.axis, values)
    text = sweep_csv(cfg, args.axis, values, reports)
    args.out.mkdir(parents=True, exist_ok=True)
    path = args.out / f"{cfg.label}_sweep_{args.axis}.csv"
    path.write_text(text, encoding="utf-8")
    for rep in reports:
        print(rep.text(), end="")
    print(f"wrote {path}")
    return 0


def cmd_selftest(args):
    """Cross-validate the closed forms against the assembled generators."""
    failures = 0

    def check(name, ok, detail=""):
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'} {name}" + (f" ({detail})" if detail else ""))
        failures += 0 if ok else 1

    rho10 = np.zeros((4, 4), dtype=complex)
    rho10[2, 2] = 1.0
    for n in range(1, 8):
        cfg = figure_preset(n)
        frame = dressed_frame(cfg.params)
        rates = rate_set(cfg.params, frame)
        start = time.perf_counter()
        span = scenarios.resolve_t_max(cfg, rates)
        times = np.linspace(0.0, span, 400)
        rho0 = frame.unitary.conj().T @ rho10 @ frame.unitary
        analytic = microscopic.propagate_analytic(rho0, rates, frame, times)
        numeric = microscopic.propagate_numeric(
            rho0, microscopic.liouvillian(rates, frame), times,
            microscopic.step_bound(rates, frame))
        err = np.abs(analytic - numeric).max()
        elapsed = time.perf_counter() - start
        check(f"figure {n} closed form vs integrated generator",
              err <= 1e-7, f"max dev {err:.2e}, {elapsed:.2f}s")

        gen_rows = phenomenological.liouvillian(cfg.params, rates)
        gen_ops = phenomenological.liouvillian_from_ops(cfg.params, rates)
        scale = max(np.abs(gen_ops).max(), 1.0)
        dev = np.abs(gen_rows - gen_ops).max() / scale
        check(f"figure {n} phenom element equations vs operator form",
              dev <= 1e-12, f"rel dev {dev:.2e}")

        ss = microscopic.steady_state(rates)
        resid = np.abs(microscopic.liouvillian(rates, frame) @ ss.reshape(-1)).max()
        check(f"figure {n} micro stationarity",
              resid <= 1e-9 * max(cfg.params.gamma0, 1.0), f"residual {resid:.2e}")

        ssp = phenomenological.steady_state(cfg.params, rates)
        dp = np.abs(phenomenological.phenom_rhs(ssp, cfg.params, rates)).max()
        bound = 1e-12 * (rates.emission_bare + rates.absorption_bare)
        check(f"figure {n} phenom stationarity", dp <= bound, f"residual {dp:.2e}")

        # observed population-equation coefficients, read off the generator
        gen = microscopic.liouvillian(rates, frame)
        row = np.zeros(4)
        for j in range(4):
            basis = np.zeros((4, 4), dtype=complex)
            basis[j, j] = 1.0
            row[j] = (gen @ basis.reshape(-1)).reshape(4, 4)[0, 0].real
        expected = np.array([-(rates.excitation_low + rates.excitation_high),
                             rates.decay_low, rates.decay_high, 0.0])
        dev = np.abs(row - expected).max() / max(cfg.params.gamma0, 1.0)
        check(f"figure {n} ground-population equation coefficients",
              dev <= 1e-12, f"rel dev {dev:.2e}")
    return 0 if failures == 0 else 2


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dressedbath",
        description="Two coupled qubits with a thermal bath on one of them: "
                    "dressed-basis vs phenomenological master equations.")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    for name, fn, doc in (
            ("spectrum", cmd_spectrum, "print energies, rates and bath diagnostics"),
            ("evolve", cmd_evolve, "run a scenario and write trajectory CSV files"),
            ("steady", cmd_steady, "print both stationary states and their metrics"),
            ("compare", cmd_compare, "stationary-value comparison of the two models"),
            ("sweep", cmd_sweep, "comparison across a parameter axis")):
        sub = subs.add_parser(name, help=doc)
        _add_common(sub)
        sub.set_defaults(func=fn)

    fig = subs.add_parser("figure", help="reproduce a preset plot as CSV")
    fig.add_argument("number", type=int)
    fig.add_argument("--out", type=pathlib.Path, default=pathlib.Path("."))
    fig.add_argument("--points", type=int)
    fig.set_defaults(func=cmd_figure)

    sweep_sub = subs.choices["sweep"]
    sweep_sub.add_argument("--axis", required=True,
                           choices=("temperature", "lambda", "coupling", "gamma0"))
    sweep_sub.add_argument("--values", required=True,
                           help="comma-separated axis values")

    self_sub = subs.add_parser("selftest",
                               help="run the solver cross-validation suite")
    self_sub.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CONFIG_ERRORS as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except NUMERIC_ERRORS as exc:
        print(f"numerical invariant violated: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
