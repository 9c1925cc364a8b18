"""End-to-end runs of the commands on a synthetic dataset, and the CLI exit codes."""

import json
import warnings

import pandas as pd
import pytest

import main
from models import ConfigError, ConvergenceError, DataError, DroppedEventsWarning
from pipeline import (
    Config,
    Workspace,
    cmd_eventstudy,
    cmd_features,
    cmd_garch,
    cmd_ingest,
    cmd_report,
    cmd_select,
    cmd_simulate,
)
from readers import write_event_csv

SIMULATE_CONFIG = "[simulate]\nmonths = 600\ndaily_days = 400\n"


@pytest.fixture(scope="module")
def synthetic(tmp_path_factory):
    """A simulated input directory; the run config asks for two-step Heckman only."""
    out = tmp_path_factory.mktemp("synthetic")
    cmd_simulate(Config.from_string(SIMULATE_CONFIG), 7, out)
    run = out / "run.ini"
    run.write_text(run.read_text(encoding="utf-8").replace("[select]\n", "[select]\nmethods = two_step\n"),
                   encoding="utf-8")
    return out


@pytest.fixture
def config(synthetic):
    return Config.load(synthetic / "run.ini")


@pytest.fixture
def workspace(tmp_path, config):
    workspace = Workspace(tmp_path / "ws")
    cmd_ingest(config, workspace)
    return workspace


class TestIngest:
    def test_copies_inputs_and_reports(self, workspace, synthetic):
        report = json.loads(workspace.path("ingest_report.json").read_text(encoding="utf-8"))
        manifest = json.loads((synthetic / "manifest.json").read_text(encoding="utf-8"))
        assert report["monthly"]["months"] == 600
        assert report["events"]["records"] == manifest["events"]
        assert report["events"]["located_records"] == manifest["located_months"]
        assert report["daily"]["days"] == 400
        assert workspace.has_daily()

    def test_relative_paths_resolve_against_config(self, config, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        cmd_ingest(config, Workspace(tmp_path / "other"))
        assert (tmp_path / "other" / "data" / "monthly.csv").exists()

    def test_event_outside_monthly_span(self, tmp_path, monthly_csv, catalog):
        write_event_csv(tmp_path / "events.csv", catalog)
        config = Config.from_string(f"[ingest]\nmonthly = {monthly_csv}\nevents = {tmp_path / 'events.csv'}\n")
        with pytest.raises(DataError, match="e1"):
            cmd_ingest(config, Workspace(tmp_path / "ws"))

    def test_missing_file(self, tmp_path):
        config = Config.from_string(f"[ingest]\nmonthly = {tmp_path / 'none.csv'}\nevents = x.csv\n")
        with pytest.raises(DataError, match="not found"):
            cmd_ingest(config, Workspace(tmp_path / "ws"))


class TestFeatures:
    def test_builds_every_configured_column(self, config, workspace):
        built = {s.name for s in cmd_features(config, workspace)}
        expected = {"yield_return", "yield_return_rv", "spread", "multiple_events", "selected", "distance",
                    "oblast_size_km2", "density_per_km2", "unrest_imperial", "unrest_imperial_count",
                    "unrest_imperial_interaction", "unrest_imperial_lag1", "interior_bk"}
        assert expected <= built
        assert set(workspace.features()) == built
        assert workspace.path("reports/liquidity.csv").exists()

    def test_selected_marks_located_months(self, config, workspace):
        cmd_features(config, workspace)
        selected = workspace.column("selected").to_array()
        distance = workspace.column("distance").to_array()
        assert ((selected == 1) == ~pd.isna(distance)).all()

    def test_explicit_missing_benchmark(self, workspace):
        config = Config.from_string("[features]\nbenchmark = bund\n")
        with pytest.raises(DataError, match="bund"):
            cmd_features(config, workspace)

    def test_interaction_must_name_a_filter_row(self, workspace):
        config = Config.from_string("[features]\ninteractions = riots\n")
        with pytest.raises(ConfigError, match="riots"):
            cmd_features(config, workspace)


class TestEventStudy:
    def test_monthly_and_daily_tables(self, config, workspace):
        cmd_features(config, workspace)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DroppedEventsWarning)
            tables = cmd_eventstudy(config, workspace)
        assert [t.name for t in tables] == ["eventstudy_raw_returns", "eventstudy_constant_mean", "eventstudy_daily"]
        assert len(tables[0].records) == 12
        for name in ("eventstudy_raw_returns", "eventstudy_constant_mean", "eventstudy_daily"):
            assert workspace.path(f"reports/{name}.csv").exists()

    def test_constant_mean_drops_early_events(self, config, workspace):
        cmd_features(config, workspace)
        config = Config.from_string(
            "[eventstudy]\nmodels = constant_mean\n[eventstudy.filters]\nlocated = location=homeland,imperial\n")
        with pytest.warns(DroppedEventsWarning, match="located"):
            cmd_eventstudy(config, workspace)

    def test_filter_matching_nothing(self, config, workspace):
        cmd_features(config, workspace)
        config = Config.from_string("[eventstudy]\nmodels = raw_returns\n[eventstudy.filters]\n"
                                    "nothing = kind=external; tag=ukraine\n")
        with pytest.raises(DataError, match="matches no events"):
            cmd_eventstudy(config, workspace)

    def test_bad_model_name(self, config, workspace):
        cmd_features(config, workspace)
        config = Config.from_string("[eventstudy]\nmodels = market_model\n")
        with pytest.raises(ConfigError, match="models"):
            cmd_eventstudy(config, workspace)

    def test_daily_needs_event_date(self, workspace):
        with pytest.raises(ConfigError, match="event_date"):
            cmd_eventstudy(Config.from_string("[eventstudy]\nmode = daily\n"), workspace)


class TestSelect:
    def test_heckman_and_iv_gmm(self, config, workspace):
        cmd_features(config, workspace)
        table = cmd_select(config, workspace)
        models = {r["model"] for r in table.records}
        assert models == {"two_step", "iv_gmm"}
        rows = {r["row"] for r in table.records if r["model"] == "iv_gmm"}
        assert {"distance", "inverse_mills", "Under-Identification (Kleibergen-Paap) LM",
                "Instrument Exogeneity (Hansen J)"} <= rows
        text = workspace.path("reports/select.txt").read_text(encoding="utf-8")
        assert "Inverse Mills Ratio" in text

    def test_stage_membership_required(self, workspace):
        with pytest.raises(ConfigError, match="stage membership"):
            cmd_select(Config.from_string("[select]\nselection = drought\n"), workspace)

    def test_endogenous_needs_instruments(self, workspace):
        config = Config.from_string("[select]\nselection = drought\noutcome = gold\nendogenous = gold\n")
        with pytest.raises(ConfigError, match="instruments"):
            cmd_select(config, workspace)


class TestGarch:
    def test_needs_a_section(self, workspace):
        with pytest.raises(ConfigError, match="garch"):
            cmd_garch(Config.empty(), workspace)

    def test_bad_spec_is_a_config_error(self, workspace):
        config = Config.from_string("[garch]\ndependent = yield\ncontrols = yield\n")
        with pytest.raises(ConfigError, match=r"\[garch\]"):
            cmd_garch(config, workspace)

    def test_failed_fit_becomes_flagged_column(self, workspace, monkeypatch):
        def failing(spec, design, options):
            raise ConvergenceError("no start converged", {"restarts": 2})

        monkeypatch.setattr("pipeline.commands.fit", failing)
        config = Config.from_string("[garch.a]\ndependent = yield\ncontrols = gold\n")
        table = cmd_garch(config, workspace)
        assert table.records[0]["note"] == "FAILED: no start converged"
        runlog = workspace.load_json("reports/garch_runlog.json", "garch")
        assert runlog["a"]["failure"]["report"] == {"restarts": 2}

    @pytest.mark.slow
    def test_fits_the_run_config(self, config, workspace):
        cmd_features(config, workspace)
        table = cmd_garch(config, workspace, seed=1)
        estimates = {r["parameter"]: r["estimate"] for r in table.records if r["fit"] == "controls_yield"}
        assert "beta[unrest_imperial]" in estimates
        assert "theta2[drought]" in estimates
        assert estimates["n"] == 599
        runlog = workspace.load_json("reports/garch_runlog.json", "garch")
        assert runlog["controls_yield"]["options"]["seed"] == 1


class TestReport:
    def test_concatenates_reports(self, config, workspace):
        cmd_features(config, workspace)
        target = cmd_report(workspace)
        text = target.read_text(encoding="utf-8")
        assert target.name == "report.txt"
        assert "Annual liquidity of yield" in text
        # A second run does not include the previous report in itself.
        assert cmd_report(workspace).read_text(encoding="utf-8") == text

    @pytest.mark.slow
    def test_same_seed_gives_byte_identical_outputs(self, tmp_path):
        def run(root):
            written = cmd_simulate(Config.from_string(SIMULATE_CONFIG), 11, root / "synthetic")
            config = Config.load(root / "synthetic" / "run.ini")
            workspace = Workspace(root / "ws")
            cmd_ingest(config, workspace)
            cmd_features(config, workspace)
            cmd_eventstudy(config, workspace)
            cmd_select(config, workspace)
            cmd_garch(config, workspace, seed=11)
            return {p.name: p.read_bytes() for p in written}, cmd_report(workspace).read_bytes()

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            first_inputs, first_report = run(tmp_path / "a")
            second_inputs, second_report = run(tmp_path / "b")
        assert first_inputs == second_inputs
        assert first_report == second_report

    def test_empty_workspace(self, tmp_path):
        with pytest.raises(DataError, match="no reports"):
            cmd_report(Workspace(tmp_path))


class TestMain:
    @pytest.fixture(autouse=True)
    def keep_warning_hook(self, monkeypatch):
        monkeypatch.setattr(warnings, "showwarning", warnings.showwarning)

    def test_success(self, tmp_path, capsys):
        config = tmp_path / "sim.ini"
        config.write_text(SIMULATE_CONFIG, encoding="utf-8")
        code = main.main(["simulate", "--config", str(config), "--seed", "3", "--out", str(tmp_path / "syn")])
        assert code == main.EXIT_OK
        assert "[simulate] seed 3" in capsys.readouterr().out
        assert (tmp_path / "syn" / "run.ini").exists()

    def test_user_error_exit_code(self, tmp_path, capsys):
        code = main.main(["report", "--workspace", str(tmp_path)])
        assert code == main.EXIT_USER_ERROR
        assert capsys.readouterr().err.startswith("[report] Error:")

    def test_config_error_exit_code(self, tmp_path):
        config = tmp_path / "bad.ini"
        config.write_text("[nonsense]\n", encoding="utf-8")
        assert main.main(["ingest", "--config", str(config), "--workspace", str(tmp_path)]) == main.EXIT_USER_ERROR

    def test_numerical_error_exit_code(self, tmp_path, monkeypatch, capsys):
        def boom(config, workspace, seed):
            raise ConvergenceError("diverged")

        monkeypatch.setattr(main, "cmd_garch", boom)
        assert main.main(["garch", "--workspace", str(tmp_path)]) == main.EXIT_NUMERICAL_ERROR
        assert "[garch] Numerical error: diverged" in capsys.readouterr().err

    def test_warnings_go_to_stderr_with_command_prefix(self, tmp_path, monkeypatch, capsys):
        def noisy(workspace, out):
            warnings.warn("careful", DroppedEventsWarning)
            return tmp_path

        monkeypatch.setattr(main, "cmd_report", noisy)
        assert main.main(["report", "--workspace", str(tmp_path)]) == main.EXIT_OK
        assert "[report] DroppedEventsWarning: careful" in capsys.readouterr().err

    def test_simulate_requires_out(self):
        with pytest.raises(SystemExit):
            main.main(["simulate", "--seed", "1"])
