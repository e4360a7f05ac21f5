import numpy as np
import pytest

from dressedbath.model import SystemParams
from dressedbath.scenarios import (CompareReport, ConfigError, OutOfRange,
                                   ScenarioConfig, compare_report,
                                   figure_preset, parse_config, run_scenario,
                                   sudden_death_time, sweep, sweep_csv,
                                   trajectory_csv, write_trajectory)

FAST = SystemParams(omega=1e3, coupling=1e3, gamma0=20.0, bath_width=1e4,
                    bath_center=2e3, temperature=0.0)


def fast_config(**overrides):
    fields = dict(params=FAST, n_points=60, label="fast")
    fields.update(overrides)
    return ScenarioConfig(**fields)


class TestConfig:
    def test_rejects_too_few_points(self):
        with pytest.raises(ConfigError):
            fast_config(n_points=1)

    def test_rejects_unknown_metric(self):
        with pytest.raises(ConfigError) as err:
            fast_config(metrics=("concurrence", "purity"))
        assert "purity" in str(err.value)

    def test_rejects_unknown_model(self):
        with pytest.raises(ConfigError):
            fast_config(models=("exact",))

    def test_rejects_bad_tmax(self):
        with pytest.raises(ConfigError):
            fast_config(t_max=-1.0)

    def test_custom_initial_state_validated(self):
        with pytest.raises(Exception):
            fast_config(initial_state=np.diag([2.0, 0, 0, -1.0]))


class TestParseConfig:
    GOOD = """
    # weakly damped pair
    omega = 1e3
    coupling = 1e3
    gamma0 = 20
    bath_width = 1e4
    bath_center = 2e3
    temperature = 0
    n_points = 60
    metrics = concurrence, linear_entropy
    models = micro, phenom
    t_max = auto
    label = parsed
    """

    def test_round_trip(self):
        cfg = parse_config(self.GOOD)
        assert cfg.params.omega == 1e3
        assert cfg.params.bath_width == 1e4
        assert cfg.n_points == 60
        assert cfg.metrics == ("concurrence", "linear_entropy")
        assert cfg.label == "parsed"

    def test_error_carries_line_number(self):
        text = self.GOOD.replace("gamma0 = 20", "gamma0 = twenty")
        with pytest.raises(ConfigError) as err:
            parse_config(text)
        assert "line 5" in str(err.value)

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError) as err:
            parse_config(self.GOOD + "\nwidth = 3\n")
        assert "width" in str(err.value)

    def test_missing_parameter_reported(self):
        text = "\n".join(line for line in self.GOOD.splitlines()
                         if "omega" not in line or "bath" in line)
        with pytest.raises(ConfigError) as err:
            parse_config(text)
        assert "omega" in str(err.value)

    def test_base_provides_defaults(self):
        cfg = parse_config("temperature = 0.5\n", base=figure_preset(2))
        assert cfg.params.temperature == 0.5
        assert cfg.params.omega == 4e9

    def test_custom_state(self):
        entries = ["0"] * 16
        entries[0] = "0.5"
        entries[5] = "0.5"
        text = self.GOOD + f"\ninitial_state = custom({', '.join(entries)})\n"
        cfg = parse_config(text)
        assert not isinstance(cfg.initial_state, str)
        assert cfg.initial_state[0, 0] == 0.5


class TestPresets:
    def test_caption_values_frozen(self):
        expected = {
            1: dict(omega=4e8, coupling=4e9, gamma0=5e8, bath_width=5e10,
                    bath_center=8e8, temperature=0.0),
            2: dict(omega=4e9, coupling=4e9, gamma0=5e7, bath_width=5e10,
                    bath_center=8e9, temperature=5e-4),
            3: dict(omega=4e9, coupling=4e9, gamma0=5e7, bath_width=5e10,
                    bath_center=8e9, temperature=1.5e-2),
        }
        expected[4] = dict(expected[2])
        expected[5] = dict(expected[3])
        expected[6] = dict(expected[2])
        expected[7] = dict(expected[3])
        for n, fields in expected.items():
            cfg = figure_preset(n)
            for key, value in fields.items():
                assert getattr(cfg.params, key) == value, (n, key)

    def test_weak_coupling_presets(self):
        for n, gamma0 in ((8, 500.0), (9, 500.0), (10, 5000.0)):
            cfgs = figure_preset(n)
            assert len(cfgs) == 3
            temps = [c.params.temperature for c in cfgs]
            assert temps == [0.005, 0.05, 0.15]
            spans = {c.t_max for c in cfgs}
            assert len(spans) == 1  # common axis across temperatures
            for c in cfgs:
                assert c.params.omega == 5e6
                assert c.params.coupling == 4e4
                assert c.params.gamma0 == gamma0
                assert c.params.bath_width == 5e5
                assert c.params.bath_center == 1e7

    def test_metric_assignment(self):
        assert figure_preset(1).metrics == ("concurrence",)
        assert figure_preset(4).metrics == ("discord",)
        assert figure_preset(10)[0].metrics == ("linear_entropy",)

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            figure_preset(0)
        with pytest.raises(OutOfRange):
            figure_preset(11)


class TestRunScenario:
    def test_two_point_grid_starts_at_initial_metrics(self):
        cfg = fast_config(n_points=2, metrics=("concurrence", "populations"))
        traj = run_scenario(cfg)
        for model in ("micro", "phenom"):
            assert traj.series[model]["concurrence"][0] == pytest.approx(0.0,
                                                                         abs=1e-12)
            assert traj.series[model]["pop_10"][0] == pytest.approx(1.0)

    def test_series_lengths_and_grid(self):
        traj = run_scenario(fast_config())
        assert len(traj.times) == 60
        assert np.all(np.diff(traj.times) > 0)
        for model in ("micro", "phenom"):
            for column in traj.series[model].values():
                assert len(column) == 60

    def test_initial_state_names(self):
        for name in ("ket10", "ket01", "dressed_ground"):
            traj = run_scenario(fast_config(initial_state=name, n_points=2,
                                            metrics=("populations",)))
            assert traj.series["phenom"]["pop_00"][0] >= 0.0

    def test_dressed_ground_is_stationary_for_micro(self):
        cfg = fast_config(initial_state="dressed_ground", n_points=40,
                          metrics=("concurrence",))
        traj = run_scenario(cfg)
        c = traj.series["micro"]["concurrence"]
        assert np.abs(c - c[0]).max() < 1e-9

    def test_models_subset(self):
        traj = run_scenario(fast_config(models=("phenom",)))
        assert set(traj.states) == {"phenom"}

    def test_undamped_run_needs_explicit_span(self):
        params = SystemParams(omega=1e3, coupling=1e3, gamma0=0.0,
                              bath_width=1e4, bath_center=2e3, temperature=0.0)
        with pytest.raises(ConfigError):
            run_scenario(fast_config(params=params))
        traj = run_scenario(fast_config(params=params, t_max=1e-2,
                                        metrics=("concurrence",)))
        # pure exchange oscillations: entanglement comes and goes undamped
        c = traj.series["micro"]["concurrence"]
        assert c.max() > 0.5
        assert abs(traj.series["micro"]["concurrence"][0]) < 1e-12


class TestCsv:
    def test_deterministic_bytes(self, tmp_path):
        cfg = fast_config()
        a = trajectory_csv(run_scenario(cfg), "micro")
        b = trajectory_csv(run_scenario(cfg), "micro")
        assert a == b

    def test_file_layout(self, tmp_path):
        cfg = fast_config(metrics=("concurrence",))
        paths = write_trajectory(run_scenario(cfg), tmp_path)
        assert sorted(p.name for p in paths) == ["fast_micro.csv",
                                                 "fast_phenom.csv"]
        lines = paths[0].read_text().splitlines()
        header = [line for line in lines if not line.startswith("#")][0]
        assert header == "t,concurrence"
        data = [line for line in lines if not line.startswith("#")][1:]
        assert len(data) == 60
        assert any("fairness" not in line and line.startswith("#")
                   for line in lines)

    def test_metadata_records_parameters(self):
        text = trajectory_csv(run_scenario(fast_config()), "phenom")
        assert "# omega = 1000" in text
        assert "# model = phenom" in text


class TestCompare:
    def test_report_structure(self):
        rep = compare_report(fast_config(metrics=("concurrence",
                                                  "linear_entropy")))
        assert isinstance(rep, CompareReport)
        assert set(rep.relative_diff) == {"concurrence", "linear_entropy"}
        assert rep.micro_thermal
        assert not rep.phenom_thermal
        text = rep.text()
        assert "stationary concurrence" in text
        assert "not thermal" in text

    def test_stationary_value_matches_closed_forms(self):
        from dressedbath import microscopic as mic
        from dressedbath import metrics as mx
        from dressedbath.model import dressed_frame, rate_set

        cfg = fast_config(metrics=("concurrence",))
        rep = compare_report(cfg)
        frame = dressed_frame(FAST)
        ss = mic.steady_state(rate_set(FAST, frame))
        expected = mx.concurrence_x(mx.x_elements_from_dressed(ss, frame))
        assert rep.stationary["micro"]["concurrence"] == pytest.approx(
            expected, abs=1e-9)

    def test_sudden_death_detector(self):
        times = np.linspace(0.0, 1.0, 11)
        series = np.array([0.5, 0.4, 0.0, 0.3, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])
        assert sudden_death_time(times, series) == pytest.approx(times[4])
        alive = np.full(11, 0.2)
        assert sudden_death_time(times, alive) is None


class TestSweep:
    def test_empty_values_rejected(self):
        with pytest.raises(ConfigError):
            sweep(fast_config(), "temperature", [])

    def test_unknown_axis_rejected(self):
        with pytest.raises(ConfigError):
            sweep(fast_config(), "detuning", [1.0])

    def test_single_value_equals_compare(self):
        cfg = fast_config(metrics=("concurrence",))
        reports = sweep(cfg, "temperature", [0.0])
        single = compare_report(cfg)
        assert reports[0].stationary == single.stationary

    def test_uncoupled_sweep_kills_entanglement(self):
        cfg = fast_config(metrics=("concurrence",))
        reports = sweep(cfg, "lambda", [0.0])
        assert reports[0].stationary["micro"]["concurrence"] <= 1e-12
        assert reports[0].stationary["phenom"]["concurrence"] <= 1e-12

    def test_csv_rows(self):
        cfg = fast_config(metrics=("concurrence",))
        values = [0.0, 0.01]
        reports = sweep(cfg, "temperature", values)
        text = sweep_csv(cfg, "temperature", values, reports)
        rows = [line for line in text.splitlines() if not line.startswith("#")]
        assert rows[0].startswith("temperature,micro_concurrence")
        assert len(rows) == 3
