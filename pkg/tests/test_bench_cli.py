import json
import math

import pytest

from minmaxgap import bench, cli
from minmaxgap.bench import ExperimentConfig, emit_report, run_experiment


def test_rates_scsc_example():
    (row,) = run_experiment(ExperimentConfig("rates_scsc", kappa=2, T_list=[4]))
    assert row["slingshot_rate"] == pytest.approx(0.21951, abs=1e-5)
    assert row["symmetric_lower_rate"] == pytest.approx(0.0625, rel=1e-12)
    assert row["ratio"] == pytest.approx(3.5122, abs=1e-4)
    assert row["symmetric_constant"] == pytest.approx(4 / (3 * math.sqrt(3)))
    assert row["lower_source"] == "closed_form"


def test_rates_cc_example():
    (row,) = run_experiment(ExperimentConfig("rates_cc", L=1.0, T_list=[16], resolution=1500))
    assert row["slingshot_value"] == 1 / 17
    assert row["scaled_value"] > 1.5 and row["target"] == pytest.approx(2.59808, abs=1e-5)
    assert row["lower_source"] == "solver" and not row["flagged"]


def test_conformal_validate_rows():
    rows = run_experiment(ExperimentConfig("conformal_validate"))
    by_name = {r["check"]: r for r in rows}
    assert by_name["boundary_modulus_deviation"]["value"] <= 1e-8
    assert by_name["normal_derivative"]["value"] == pytest.approx(0.76980, abs=1e-4)
    assert all(r["passed"] for r in rows)


def test_extremal_sweep_rows_carry_provenance():
    rows = run_experiment(ExperimentConfig("extremal_sweep", set_kind="intervals", mu=1, L=2,
                                           T_list=[2, 4]))
    assert [r["T"] for r in rows] == [2, 4]
    assert rows[0]["value"] == pytest.approx(0.6, rel=1e-3)
    assert rows[0]["witness_source"] == "bernstein_walsh"
    assert all("gap" in r and r["lower_witness"] <= r["value"] for r in rows)


@pytest.mark.parametrize("config", [
    ExperimentConfig("nope"),
    ExperimentConfig("rates_scsc", kappa=1.0, T_list=[2]),
    ExperimentConfig("rates_scsc", kappa=2.0),
    ExperimentConfig("extremal_sweep", set_kind="disc", T_list=[2]),
    ExperimentConfig("hard_instance_run", kappa=10, T_list=[2], methods=("momentum",)),
])
def test_invalid_configs(config):
    with pytest.raises(ValueError):
        run_experiment(config)


def test_emit_report_contract(tmp_path):
    with pytest.raises(ValueError):
        emit_report([], "csv")
    row = {"T": 2, "value": 1 / 3, "ok": True, "name": "x"}
    text = emit_report([row], "csv")
    assert text.splitlines() == ["T,value,ok,name", "2,0.333333333333,true,x"]
    assert emit_report([row], "csv") == text
    path = tmp_path / "r.json"
    emit_report([row, {"T": 4, "value": 0.1, "ok": False, "name": "y", "extra": 1}], "json", path)
    data = json.loads(path.read_text())
    assert data[0]["value"] == 0.333333333333 and data[1]["extra"] == 1
    with pytest.raises(OSError):
        emit_report([row], "csv", tmp_path / "missing" / "r.csv")


def test_cli_rates_scsc(capsys):
    assert cli.main(["rates-scsc", "--kappa", "2", "--T-list", "2,4"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 3 and lines[0].startswith("T,kappa,slingshot_rate")


def test_cli_outputs_are_deterministic(tmp_path):
    paths = [tmp_path / f"run{i}.json" for i in range(2)]
    for p in paths:
        code = cli.main(["extremal", "--set", "intervals", "--mu", "1", "--L", "2",
                         "--T-list", "2", "4", "--format", "json", "--out", str(p)])
        assert code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_cli_error_exit_code(capsys):
    assert cli.main(["rates-scsc", "--kappa", "0.5", "--T-list", "2"]) == 1
    assert "kappa" in capsys.readouterr().err


def test_cli_flagged_exit_code(monkeypatch, capsys):
    monkeypatch.setattr(cli, "run_experiment", lambda cfg: [{"T": 2, "flagged": True}])
    assert cli.main(["conformal-validate"]) == 2
    monkeypatch.setattr(cli, "run_experiment", lambda cfg: [{"T": 2, "flagged": False}])
    assert cli.main(["conformal-validate"]) == 0


def test_cli_parses_every_subcommand():
    parser = cli.build_parser()
    cases = {
        "rates-cc": ["rates-cc", "--L", "2", "--T-list", "8,16"],
        "extremal": ["extremal", "--set", "halfdisc", "--class", "Q", "--T-list", "8", "--tol", "1e-7"],
        "hard-instance": ["hard-instance", "--kappa", "10", "--T", "8", "--methods", "ogda"],
        "conformal-validate": ["conformal-validate", "--seed", "3", "--format", "json"],
    }
    expected = {"rates-cc": "rates_cc", "extremal": "extremal_sweep",
                "hard-instance": "hard_instance_run", "conformal-validate": "conformal_validate"}
    for name, argv in cases.items():
        cfg = cli.config_from_args(parser.parse_args(argv))
        assert cfg.experiment == expected[name]
        cfg.validate()
    cfg = cli.config_from_args(parser.parse_args(cases["extremal"]))
    assert cfg.normalization == "Q" and cfg.T_list == (8,) and cfg.tol == 1e-7


@pytest.mark.slow
def test_hard_instance_run_rows():
    rows = run_experiment(ExperimentConfig("hard_instance_run", kappa=10, T_list=[4], resolution=1500))
    assert [r["method"] for r in rows] == list(bench.BASELINES)
    assert rows[1]["iterations"] == 2
    for r in rows:
        assert r["above_floor"] and r["gap"] <= 0.05 and not r["flagged"]
