"""Scenario presets, trajectory runs, CSV emission and model comparison.

A scenario bundles physical parameters, an initial state, a time grid and
the requested metrics/models.  Output is plain CSV with '#' metadata lines
(parameters, bath-fairness diagnostics, tool version); identical
configurations produce byte-identical files.
"""

from __future__ import annotations

import math
import pathlib
from dataclasses import dataclass, replace

import numpy as np

from . import metrics, microscopic, phenomenological
from ._version import __version__
from .linalg import (COMPUTATIONAL, EVOLVED_HERM_TOL, EVOLVED_PSD_TOL,
                     EVOLVED_TRACE_TOL, DensityMatrix, validate_density)
from .metrics import AssumptionViolated, XStateElements
from .model import SystemParams, dressed_frame, fairness_check, rate_set

MODELS = ("micro", "phenom")
METRICS = ("concurrence", "discord", "linear_entropy", "populations")
INITIAL_STATES = ("ket10", "ket01", "dressed_ground")

DEATH_THRESHOLD = 1e-12
DEATH_RUN = 5
STATIONARY_FRACTION = 0.05


class ConfigError(Exception):
    pass


class OutOfRange(ConfigError):
    pass


@dataclass(frozen=True)
class ScenarioConfig:
    params: SystemParams
    initial_state: object = "ket10"   # name or custom 4x4 computational matrix
    t_max: object = "auto"            # seconds, or "auto"
    n_points: int = 2000
    metrics: tuple = METRICS
    models: tuple = MODELS
    label: str = "scenario"

    def __post_init__(self):
        if self.n_points < 2:
            raise ConfigError("n_points must be at least 2")
        if self.t_max != "auto":
            try:
                positive = float(self.t_max) > 0
            except (TypeError, ValueError):
                positive = False
            if not positive:
                raise ConfigError("t_max must be positive or 'auto'")
        for m in self.metrics:
            if m not in METRICS:
                raise ConfigError(f"unknown metric {m!r}; choose from {METRICS}")
        if not self.models:
            raise ConfigError("at least one model must be enabled")
        for m in self.models:
            if m not in MODELS:
                raise ConfigError(f"unknown model {m!r}; choose from {MODELS}")
        if isinstance(self.initial_state, str):
            if self.initial_state not in INITIAL_STATES:
                raise ConfigError(
                    f"unknown initial_state {self.initial_state!r}; "
                    f"choose from {INITIAL_STATES} or give 16 entries")
        else:
            object.__setattr__(
                self, "initial_state",
                validate_density(self.initial_state, COMPUTATIONAL).matrix)


@dataclass
class Trajectory:
    label: str
    times: np.ndarray
    states: dict            # model -> (n, 4, 4) computational snapshots
    series: dict            # model -> column name -> np.ndarray
    config: ScenarioConfig
    fairness_lines: list


def initial_state_matrix(cfg: ScenarioConfig, frame) -> np.ndarray:
    """The configured start state as a computational-basis matrix."""
    if not isinstance(cfg.initial_state, str):
        return np.asarray(cfg.initial_state, dtype=complex)
    m = np.zeros((4, 4), dtype=complex)
    if cfg.initial_state == "ket10":
        m[2, 2] = 1.0
    elif cfg.initial_state == "ket01":
        m[1, 1] = 1.0
    else:  # dressed_ground
        ground = frame.unitary[:, 0]
        m = np.outer(ground, ground.conj())
    return m


def resolve_t_max(cfg: ScenarioConfig, rates, stationary: bool = False) -> float:
    """Time span: explicit value, or the default transient window.

    The default covers ten lifetimes of the low dressed channel (or of the
    bare damping if only the ad hoc model runs).  Comparison runs need the
    true plateau, so they stretch to fifty lifetimes of the slowest mode.
    """
    if cfg.t_max != "auto":
        return float(cfg.t_max)
    s_low = rates.decay_low + rates.excitation_low
    s_high = rates.decay_high + rates.excitation_high
    s_bare = rates.emission_bare + rates.absorption_bare
    if stationary:
        candidates = [s for s in (s_low, s_high, s_bare) if s > 0]
        if not candidates:
            raise ConfigError("cannot choose a time span: all rates vanish")
        return 50.0 / min(candidates)
    anchor = s_low if "micro" in cfg.models else s_bare
    if anchor <= 0:
        raise ConfigError("cannot choose a time span automatically: "
                          "the relaxation rate vanishes; set t_max")
    return 10.0 / anchor


def _metrics_from_x(x: XStateElements, wanted):
    out = {}
    if "concurrence" in wanted:
        out["concurrence"] = metrics.concurrence_x(x)
    if "discord" in wanted:
        out["discord"] = metrics.discord_approx_q2(x)
    if "linear_entropy" in wanted:
        out["linear_entropy"] = metrics.linear_entropy_q1(x)
    return out


def _metrics_general(comp: np.ndarray, wanted):
    out = {}
    if "concurrence" in wanted:
        out["concurrence"] = metrics.concurrence_general(comp)
    if "discord" in wanted:
        raise AssumptionViolated(
            "the discord approximation needs an X-shaped state; "
            "this trajectory left the X family")
    if "linear_entropy" in wanted:
        out["linear_entropy"] = metrics.linear_entropy_q1(
            DensityMatrix(comp, COMPUTATIONAL))
    return out


def _snapshot_metrics(model, dressed, comp, frame, wanted):
    """One row of metric values; dressed-channel states use the dressed-basis
    short forms, the ad hoc model reads computational entries directly."""
    scalar = {}
    if model == "micro":
        try:
            scalar = _metrics_from_x(metrics.x_elements_from_dressed(dressed, frame),
                                     wanted)
        except AssumptionViolated:
            scalar = None
    if not scalar:
        try:
            scalar = _metrics_from_x(
                metrics.x_elements_from_matrix(comp, trace_tol=EVOLVED_TRACE_TOL),
                wanted)
        except AssumptionViolated:
            scalar = _metrics_general(comp, wanted)
    if "populations" in wanted:
        for idx, name in enumerate(("pop_00", "pop_01", "pop_10", "pop_11")):
            scalar[name] = comp[idx, idx].real
    return scalar


def _columns_for(wanted):
    cols = [m for m in wanted if m != "populations"]
    if "populations" in wanted:
        cols += ["pop_00", "pop_01", "pop_10", "pop_11"]
    return cols


def run_scenario(cfg: ScenarioConfig, stationary_span: bool = False) -> Trajectory:
    """Propagate every enabled model and evaluate the requested metrics.

    Each emitted snapshot is validated (hermiticity, trace, positivity) at
    the evolved-state tolerances before any metric touches it.
    """
    frame = dressed_frame(cfg.params)
    rates = rate_set(cfg.params, frame)
    t_max = resolve_t_max(cfg, rates, stationary=stationary_span)
    times = np.linspace(0.0, t_max, cfg.n_points)
    rho0_comp = initial_state_matrix(cfg, frame)

    states, series = {}, {}
    for model in cfg.models:
        if model == "micro":
            rho0_dressed = frame.unitary.conj().T @ rho0_comp @ frame.unitary
            dressed_traj = microscopic.propagate_analytic(rho0_dressed, rates,
                                                          frame, times)
            u = frame.unitary
            comp_traj = np.einsum('ij,tjk,lk->til', u, dressed_traj, u.conj())
        else:
            comp_traj = phenomenological.propagate(rho0_comp, cfg.params,
                                                   rates, times)
            dressed_traj = None

        cols = _columns_for(cfg.metrics)
        rows = {c: np.empty(len(times)) for c in cols}
        for i in range(len(times)):
            validate_density(comp_traj[i], COMPUTATIONAL,
                             herm_tol=EVOLVED_HERM_TOL,
                             trace_tol=EVOLVED_TRACE_TOL,
                             psd_tol=EVOLVED_PSD_TOL)
            dressed_i = dressed_traj[i] if dressed_traj is not None else None
            for name, value in _snapshot_metrics(model, dressed_i, comp_traj[i],
                                                 frame, cfg.metrics).items():
                rows[name][i] = value
        states[model] = comp_traj
        series[model] = rows

    return Trajectory(label=cfg.label, times=times, states=states,
                      series=series, config=cfg,
                      fairness_lines=fairness_check(cfg.params).lines())


# -- presets ----------------------------------------------------------------

_STRONG = dict(bath_width=5e10, gamma0=0.001 * 5e10)
_WEAK = dict(omega=5e6, coupling=4e4, bath_width=5e5, bath_center=1e7)
_WEAK_TEMPS = (0.005, 0.05, 0.15)

_FIGURE_METRIC = {1: "concurrence", 2: "concurrence", 3: "concurrence",
                  4: "discord", 5: "discord",
                  6: "linear_entropy", 7: "linear_entropy",
                  8: "concurrence", 9: "discord", 10: "linear_entropy"}


def _preset_params(n: int, temperature: float) -> SystemParams:
    if n == 1:
        return SystemParams(omega=4e8, coupling=10 * 4e8, gamma0=0.01 * 5e10,
                            bath_width=5e10, bath_center=2 * 4e8,
                            temperature=temperature)
    if 2 <= n <= 7:
        return SystemParams(omega=4e9, coupling=4e9, gamma0=_STRONG["gamma0"],
                            bath_width=_STRONG["bath_width"], bath_center=2 * 4e9,
                            temperature=temperature)
    gamma0 = 0.01 * 5e5 if n == 10 else 0.001 * 5e5
    return SystemParams(gamma0=gamma0, temperature=temperature, **_WEAK)


def figure_preset(n: int):
    """Scenario(s) reproducing one of the ten reference plots.

    Plots 1-7 return a single config; the weak-coupling plots 8-10 return
    three (one per bath temperature) sharing the coldest run's time span so
    the curves live on a common axis.
    """
    if not 1 <= n <= 10:
        raise OutOfRange(f"figure number must be 1..10, got {n}")
    metric = (_FIGURE_METRIC[n],)
    if n == 1:
        return ScenarioConfig(params=_preset_params(1, 0.0), metrics=metric,
                              label="figure1")
    if 2 <= n <= 7:
        temperature = 5e-4 if n in (2, 4, 6) else 1.5e-2
        return ScenarioConfig(params=_preset_params(n, temperature),
                              metrics=metric, label=f"figure{n}")
    cold = _preset_params(n, _WEAK_TEMPS[0])
    rates = rate_set(cold)
    span = 10.0 / (rates.decay_low + rates.excitation_low)
    return [ScenarioConfig(params=_preset_params(n, t), metrics=metric,
                           t_max=span, label=f"figure{n}_T{t:g}")
            for t in _WEAK_TEMPS]


# -- config files -----------------------------------------------------------

_FLOAT_KEYS = ("omega", "coupling", "gamma0", "bath_width", "bath_center",
               "temperature")


def parse_config(text: str, base: ScenarioConfig | None = None) -> ScenarioConfig:
    """Flat ``key = value`` configuration, '#' comments, scientific notation.

    Parameter keys default from ``base`` (or the figure-2 preset values must
    be given explicitly); any parse problem reports its line number.
    """
    params = dict(zip(_FLOAT_KEYS, (None,) * len(_FLOAT_KEYS)))
    if base is not None:
        for k in _FLOAT_KEYS:
            params[k] = getattr(base.params, k)
    fields, custom_state = {}, None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        try:
            if key in _FLOAT_KEYS:
                params[key] = float(value)
            elif key == "n_points":
                fields["n_points"] = int(value)
            elif key == "t_max":
                fields["t_max"] = "auto" if value == "auto" else float(value)
            elif key == "metrics":
                fields["metrics"] = tuple(v.strip() for v in value.split(","))
            elif key == "models":
                fields["models"] = tuple(v.strip() for v in value.split(","))
            elif key == "label":
                fields["label"] = value
            elif key == "initial_state":
                if value.startswith("custom"):
                    inner = value[len("custom"):].strip().strip("()")
                    entries = [complex(v.replace(" ", "")) for v in inner.split(",")]
                    if len(entries) != 16:
                        raise ValueError(f"custom state needs 16 entries, got {len(entries)}")
                    custom_state = np.array(entries, dtype=complex).reshape(4, 4)
                else:
                    fields["initial_state"] = value
            else:
                raise ValueError(f"unknown key {key!r}")
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from exc

    missing = [k for k, v in params.items() if v is None]
    if missing:
        raise ConfigError(f"missing parameter keys: {', '.join(missing)}")
    if custom_state is not None:
        fields["initial_state"] = custom_state
    try:
        return ScenarioConfig(params=SystemParams(**params), **fields)
    except (ValueError, ConfigError) as exc:
        raise ConfigError(str(exc)) from exc


# -- CSV --------------------------------------------------------------------

def _fmt(x) -> str:
    return f"{x:.17g}"


def _meta_lines(cfg: ScenarioConfig, fairness_lines, extra=()):
    out = [f"# dressedbath {__version__}", f"# label = {cfg.label}"]
    for k in _FLOAT_KEYS:
        out.append(f"# {k} = {_fmt(getattr(cfg.params, k))}")
    state = cfg.initial_state if isinstance(cfg.initial_state, str) else "custom"
    out.append(f"# initial_state = {state}")
    out += [f"# {line}" for line in fairness_lines]
    out += [f"# {line}" for line in extra]
    return out


def trajectory_csv(traj: Trajectory, model: str) -> str:
    cols = _columns_for(traj.config.metrics)
    lines = _meta_lines(traj.config, traj.fairness_lines, (f"model = {model}",))
    lines.append(",".join(["t"] + cols))
    rows = traj.series[model]
    for i, t in enumerate(traj.times):
        lines.append(",".join([_fmt(t)] + [_fmt(rows[c][i]) for c in cols]))
    return "\n".join(lines) + "\n"


def write_trajectory(traj: Trajectory, out_dir) -> list:
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for model in traj.config.models:
        path = out / f"{traj.label}_{model}.csv"
        path.write_text(trajectory_csv(traj, model), encoding="utf-8")
        written.append(path)
    return written


# -- model comparison -------------------------------------------------------

def sudden_death_time(times, series, threshold=DEATH_THRESHOLD, run=DEATH_RUN):
    """First time the series stays at (numerical) zero for ``run`` points."""
    count = 0
    for i, v in enumerate(series):
        count = count + 1 if v <= threshold else 0
        if count >= run:
            return float(times[i - run + 1])
    return None


@dataclass
class CompareReport:
    label: str
    config: ScenarioConfig
    stationary: dict         # model -> metric -> value
    relative_diff: dict      # metric -> (phenom - micro) / micro
    death_time: dict         # model -> time or None
    micro_thermal: bool
    phenom_thermal: bool
    fairness_lines: list

    def text(self) -> str:
        rows = [f"comparison: {self.label}"]
        rows += self.fairness_lines
        for metric in self.relative_diff:
            mv = self.stationary["micro"][metric]
            pv = self.stationary["phenom"][metric]
            rd = self.relative_diff[metric]
            pct = "n/a" if math.isnan(rd) else f"{100 * rd:+.2f}%"
            rows.append(f"stationary {metric}: micro {mv:.6g}, "
                        f"phenom {pv:.6g}, relative difference {pct}")
        for model in MODELS:
            t = self.death_time.get(model)
            rows.append(f"{model} concurrence sudden death: "
                        + ("none detected" if t is None else f"t = {t:.6g} s"))
        rows.append("micro steady state: "
                    + ("thermal (detailed balance verified)"
                       if self.micro_thermal else "NOT thermal"))
        rows.append("phenom steady state: "
                    + ("thermal" if self.phenom_thermal
                       else "not thermal (dressed-basis coherences survive)"))
        return "\n".join(rows) + "\n"

    def csv(self) -> str:
        lines = _meta_lines(self.config, self.fairness_lines)
        lines.append("metric,micro_stationary,phenom_stationary,relative_diff")
        for metric, rd in self.relative_diff.items():
            lines.append(",".join([metric,
                                   _fmt(self.stationary["micro"][metric]),
                                   _fmt(self.stationary["phenom"][metric]),
                                   _fmt(rd)]))
        for model in MODELS:
            t = self.death_time.get(model)
            lines.append(f"{model}_sudden_death_time,"
                         + ("nan" if t is None else _fmt(t)) + ",,")
        lines.append(f"micro_thermal,{int(self.micro_thermal)},,")
        lines.append(f"phenom_thermal,{int(self.phenom_thermal)},,")
        return "\n".join(lines) + "\n"


def compare_report(cfg: ScenarioConfig) -> CompareReport:
    """Stationary metric values of both models and their relative gap.

    Stationary value = mean over the final 5% of a grid long enough for the
    slowest relaxation mode to die out completely.
    """
    if set(cfg.models) != set(MODELS):
        cfg = replace(cfg, models=MODELS)
    traj = run_scenario(cfg, stationary_span=True)
    tail = max(1, int(round(STATIONARY_FRACTION * len(traj.times))))

    wanted = [m for m in cfg.metrics if m != "populations"]
    stationary = {model: {m: float(np.mean(traj.series[model][m][-tail:]))
                          for m in wanted}
                  for model in MODELS}
    relative = {}
    for m in wanted:
        mv, pv = stationary["micro"][m], stationary["phenom"][m]
        relative[m] = (pv - mv) / mv if abs(mv) > 1e-300 else float("nan")

    death = {}
    if "concurrence" in cfg.metrics:
        for model in MODELS:
            death[model] = sudden_death_time(traj.times,
                                             traj.series[model]["concurrence"])

    frame = dressed_frame(cfg.params)
    rates = rate_set(cfg.params, frame)
    ss = microscopic.steady_state(rates)
    gibbs = microscopic.gibbs_state(frame, cfg.params.temperature)
    residual = microscopic.liouvillian(rates, frame) @ ss.reshape(-1)
    micro_thermal = (np.abs(ss - gibbs).max() <= 1e-10
                     and np.abs(residual).max() <= 1e-9 * max(cfg.params.gamma0, 1e-300))
    ss_p = phenomenological.steady_state_dressed(cfg.params, rates, frame).matrix
    coherence = max(abs(ss_p[0, 3]), abs(ss_p[1, 2]), abs(ss_p[0, 1]),
                    abs(ss_p[0, 2]), abs(ss_p[1, 3]), abs(ss_p[2, 3]))
    phenom_thermal = coherence <= 1e-10

    return CompareReport(label=cfg.label, config=cfg, stationary=stationary,
                         relative_diff=relative, death_time=death,
                         micro_thermal=micro_thermal,
                         phenom_thermal=phenom_thermal,
                         fairness_lines=traj.fairness_lines)


_SWEEP_AXES = {"temperature": "temperature", "lambda": "coupling",
               "coupling": "coupling", "gamma0": "gamma0"}


def sweep(cfg: ScenarioConfig, axis: str, values) -> list:
    """One comparison report per axis value."""
    if axis not in _SWEEP_AXES:
        raise ConfigError(f"unknown sweep axis {axis!r}; "
                          f"choose from {sorted(_SWEEP_AXES)}")
    values = list(values)
    if not values:
        raise ConfigError("sweep needs at least one value")
    field_name = _SWEEP_AXES[axis]
    reports = []
    for v in values:
        params = replace(cfg.params, **{field_name: float(v)})
        reports.append(compare_report(replace(
            cfg, params=params, label=f"{cfg.label}_{axis}{v:g}")))
    return reports


def sweep_csv(cfg: ScenarioConfig, axis: str, values, reports) -> str:
    wanted = [m for m in cfg.metrics if m != "populations"]
    cols = [axis]
    for m in wanted:
        cols += [f"micro_{m}", f"phenom_{m}", f"reldiff_{m}"]
    cols += ["micro_death_time", "phenom_death_time"]
    lines = _meta_lines(cfg, [], (f"sweep axis = {axis}",))
    lines.append(",".join(cols))
    for v, rep in zip(values, reports):
        row = [_fmt(float(v))]
        for m in wanted:
            row += [_fmt(rep.stationary["micro"][m]),
                    _fmt(rep.stationary["phenom"][m]),
                    _fmt(rep.relative_diff[m])]
        for model in MODELS:
            t = rep.death_time.get(model)
            row.append("nan" if t is None else _fmt(t))
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"
