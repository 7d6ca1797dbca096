import json

import pytest

from radialwave.cli import EXIT_CONFIG, EXIT_FAIL, EXIT_OK, main
from radialwave.csvio import read_csv, read_initial_data


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


@pytest.mark.parametrize("args,expected", [
    (["catalog", "--n", "3", "--q", "3"], ["U1", "U2", "U6", "U7", "U8", "U9", "IV6"]),
    (["catalog", "--power", "conformal"], ["U6", "U7", "U8", "U9", "IV6"]),
    (["catalog", "--q", "-3"], ["U5"]),
])
def test_catalog_examples(args, expected, capsys):
    code, report, _ = run_cli(args, capsys)
    assert code == EXIT_OK and report["families"] == expected


def test_catalog_bad_power(capsys):
    code, _, err = run_cli(["catalog", "--power", "bogus"], capsys)
    assert code == EXIT_CONFIG and "power" in err


def test_verify_as_printed_alias_fails_with_note(capsys):
    code, report, err = run_cli(["verify", "--scope", "pde", "--family", "invervinvdilsol-as-printed"], capsys)
    assert code == EXIT_FAIL
    assert report["pass"] is False
    assert "erratum" in report["notes"][0] and "erratum" in err


def test_verify_algebra(capsys):
    code, report, _ = run_cli(["verify", "--scope", "algebra", "--n", "3"], capsys)
    assert code == EXIT_OK
    names = [r["check"] for r in report["suites"]["algebra"]["reports"] if "check" in r]
    assert "bracket/conformal/[X_trans,X_inver]=2X_scal" in names


def test_verify_all_n3(capsys):
    code, report, _ = run_cli(["verify", "--scope", "all", "--n", "3"], capsys)
    assert code == EXIT_OK
    assert set(report["suites"]) == {"pde", "foliation", "algebra", "potentials", "reductions"}


def test_verify_seed_changes_samples(capsys):
    a = run_cli(["verify", "--scope", "pde", "--family", "U1", "--seed", "1"], capsys)[1]
    b = run_cli(["verify", "--scope", "pde", "--family", "U1", "--seed", "2"], capsys)[1]
    c = run_cli(["verify", "--scope", "pde", "--family", "U1", "--seed", "1"], capsys)[1]
    assert a == c and a != b


def test_simulate_example_with_csv(tmp_path, capsys):
    out = tmp_path / "report.json"
    code, _, _ = run_cli(["simulate", "--family", "U8", "--branch", "-", "--n", "3", "--k", "1", "--c", "1",
                          "--t0", "1", "--tend", "3", "--N", "400", "--csv-dir", str(tmp_path), "--out", str(out)],
                         capsys)
    assert code == EXIT_OK
    report = json.loads(out.read_text())
    assert report["status"] == "completed" and report["energy_drift"] < 1e-4
    init = read_initial_data(tmp_path / "initial.csv")
    assert init.t0 == 1.0 and init.r.size == 401
    assert read_csv(tmp_path / "energy.csv").kind == "energy"
    assert read_csv(tmp_path / "snapshots.csv").kind == "snapshots"
    code, report, _ = run_cli(["simulate", "--init", str(tmp_path / "initial.csv"), "--boundary", "sommerfeld",
                               "--tend", "1.5", "--max-drift", "1"], capsys)
    assert code == EXIT_OK and report["source"].startswith("csv:")


def test_blowup_example(tmp_path, capsys):
    code, report, err = run_cli(["blowup", "--family", "U6", "--n", "3", "--k", "1", "--c", "-1", "--N", "800",
                                 "--csv-dir", str(tmp_path)], capsys)
    assert code == EXIT_OK
    assert abs(report["exponent"] + 1) < 0.05
    assert "fitted exponent" in err
    assert read_csv(tmp_path / "axis.csv").kind == "snapshots"


def test_convergence_example(tmp_path, capsys):
    code, report, _ = run_cli(["convergence", "--family", "U1", "--n", "3", "--N", "100,200,400",
                               "--csv-dir", str(tmp_path)], capsys)
    assert code == EXIT_OK and abs(report["order"] - 2) < 0.2
    table = read_csv(tmp_path / "convergence.csv")
    assert table.kind == "convergence" and list(table.rows[:, 0]) == [100, 200, 400]


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"schema": 1, "N": 200, "t_end": 2.0, "max_drift": 1.0}))
    code, report, _ = run_cli(["simulate", "--config", str(cfg), "--N", "100"], capsys)
    assert code == EXIT_OK
    assert report["config"]["N"] == 100 and report["config"]["t_end"] == 2.0


@pytest.mark.parametrize("content", [{"schema": 1, "bogus": 1}, {"N": 100}, {"schema": 2}])
def test_bad_config_rejected(tmp_path, capsys, content):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps(content))
    assert run_cli(["simulate", "--config", str(cfg)], capsys)[0] == EXIT_CONFIG


def test_bad_flags_exit_two(capsys):
    assert run_cli(["simulate", "--cfl", "2"], capsys)[0] == EXIT_CONFIG
    assert run_cli(["verify", "--scope", "nope"], capsys)[0] == EXIT_CONFIG
    assert run_cli(["simulate", "--family", "nope"], capsys)[0] == EXIT_CONFIG


def test_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("RADIALWAVE_THREADS", "0")
    assert run_cli(["verify", "--scope", "reductions"], capsys)[0] == EXIT_CONFIG
    monkeypatch.setenv("RADIALWAVE_THREADS", "2")
    assert run_cli(["verify", "--scope", "reductions"], capsys)[0] == EXIT_OK


def test_simulate_drift_gate(capsys):
    code, report, _ = run_cli(["simulate", "--N", "100"], capsys)
    assert code == EXIT_FAIL and report["energy_drift"] > 1e-4
