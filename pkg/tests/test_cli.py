import json
import math
import subprocess
import sys

import numpy as np
import pytest

from wernerdecay.cli import main
from wernerdecay.dynamics import ChannelFactors, analytic_evolve
from wernerdecay.states import WernerSpec, from_json_dict, to_json_dict, werner


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_measure_json_values(capsys):
    code, out, _ = _run(capsys, "measure", "--state", "Z", "--p", "0.8", "--t", "0")
    assert code == 0
    obj = json.loads(out)
    assert obj["b"] == pytest.approx(0.5291503, abs=1e-6)
    assert obj["c"] == pytest.approx(0.7, abs=1e-12)
    assert obj["n"] == pytest.approx(0.7, abs=1e-12)
    assert obj["route"] == "analytic"
    assert obj["config"]["command"] == "measure"


def test_measure_csv_row(capsys):
    code, out, _ = _run(capsys, "measure", "--state", "X", "--p", "1", "--t", "0",
                        "--format", "csv")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "t,m,b,c,ef,n,logn"
    fields = [float(x) for x in lines[1].split(",")]
    assert fields == pytest.approx([0.0, 2.0, 1.0, 1.0, 1.0, 1.0, 1.0], abs=1e-12)


def test_evolve_roundtrip(capsys):
    code, out, _ = _run(capsys, "evolve", "--state", "Y", "--p", "0.8",
                        "--gamma1", "0.1", "--gamma2", "0.05", "--t", "3.0")
    assert code == 0
    obj = json.loads(out)
    got = from_json_dict(obj["state"])
    expected = analytic_evolve(
        werner(WernerSpec("Y", 0.8)),
        ChannelFactors(math.exp(-0.3), math.exp(-0.15)),
    )
    assert np.abs(got - expected).max() < 1e-15


def test_state_file_input(tmp_path, capsys):
    path = tmp_path / "state.json"
    path.write_text(json.dumps(to_json_dict(werner(WernerSpec("X", 0.8)))))
    code, out, _ = _run(capsys, "measure", "--state-file", str(path), "--t", "0")
    assert code == 0
    obj = json.loads(out)
    assert obj["label"] == "file"
    assert obj["c"] == pytest.approx(0.7, abs=1e-12)


def test_oracle_route_matches_analytic(capsys):
    code, out, _ = _run(capsys, "measure", "--state", "Y", "--p", "0.8", "--t", "2.0")
    analytic = json.loads(out)["n"]
    code, out, _ = _run(capsys, "measure", "--state", "Y", "--p", "0.8", "--t", "2.0",
                        "--oracle")
    assert code == 0
    obj = json.loads(out)
    assert obj["route"] == "rk4"
    assert obj["n"] == pytest.approx(analytic, abs=1e-8)


def test_both_reports_deviation(capsys):
    code, out, _ = _run(capsys, "measure", "--state", "X", "--p", "1", "--t", "1.0",
                        "--both")
    assert code == 0
    obj = json.loads(out)
    assert obj["oracle_dev"] < 1e-8


def test_scan_csv_negativity_column(capsys):
    code, out, _ = _run(capsys, "scan", "--state", "X", "--p", "1",
                        "--gamma1", "0.1", "--gamma2", "0.1",
                        "--tmax", "20", "--steps", "400")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0].startswith("# ")
    assert lines[1] == "t,family,p,m,b,c,ef,n,logn"
    rows = [line.split(",") for line in lines[2:]]
    assert len(rows) == 400
    for fields in rows:
        t, n = float(fields[0]), float(fields[7])
        assert abs(n - math.exp(-0.2 * t)) < 1e-10


def test_scan_json_format(capsys):
    code, out, _ = _run(capsys, "scan", "--state", "Z", "--p", "0.8",
                        "--tmax", "2", "--steps", "5", "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["labels"] == ["Z"]
    assert len(obj["times"]) == 5
    assert obj["rows"]["Z"][0]["n"] == pytest.approx(0.7, abs=1e-12)


def test_ordering_reproduces_crossing_structure(capsys):
    code, out, _ = _run(capsys, "ordering", "--p", "0.8",
                        "--gamma1", "0.1", "--gamma2", "0.1", "--tmax", "100")
    assert code == 0
    obj = json.loads(out)
    times = sorted(event["time"] for event in obj["crossings"])
    assert len(times) == 3
    # exact values implied by the model (the X-Y crossing is 10 ln 5/2)
    assert times[0] == pytest.approx(7.474788, abs=1e-5)
    assert times[1] == pytest.approx(10 * math.log(2.5), abs=1e-8)
    assert times[2] == pytest.approx(9.520800, abs=1e-5)
    labels = [row["label"] for row in obj["rows"]]
    assert labels == [
        "N_X > N_Z > N_Y",
        "N_X > N_Y = N_Z",
        "N_X > N_Y > N_Z",
        "N_X = N_Y > N_Z",
        "N_Y > N_X > N_Z",
        "N_Y > N_X = N_Z",
        "N_Y > N_Z > N_X",
    ]


def test_crossings_command(capsys):
    code, out, _ = _run(capsys, "crossings", "--p", "1",
                        "--gamma1", "0.1", "--gamma2", "0.1", "--tmax", "10")
    assert code == 0
    obj = json.loads(out)
    assert all(event["kind"] == "cross" for event in obj["crossings"])
    vanish_kinds = {tuple(event["lhs"]) for event in obj["vanish"]}
    # the p = 1 negativities never die on this window for any family
    assert vanish_kinds == set()


def test_crossings_includes_vanish_events(capsys):
    code, out, _ = _run(capsys, "crossings", "--p", "0.8",
                        "--gamma1", "0.1", "--gamma2", "0.1", "--tmax", "20")
    assert code == 0
    obj = json.loads(out)
    families = {event["lhs"][0] for event in obj["vanish"]}
    assert families == {"X"}  # only the X-family negativity dies by t = 20


def test_config_error_conflicting_state_sources(tmp_path, capsys):
    path = tmp_path / "s.json"
    path.write_text(json.dumps(to_json_dict(np.eye(4) / 4)))
    code, _, err = _run(capsys, "measure", "--state", "X", "--p", "1",
                        "--state-file", str(path))
    assert code == 1
    assert "config error" in err


def test_config_error_missing_state(capsys):
    code, _, err = _run(capsys, "measure", "--state", "X")
    assert code == 1
    assert "config error" in err


def test_config_error_dt_without_oracle(capsys):
    code, _, err = _run(capsys, "measure", "--state", "X", "--p", "1",
                        "--t", "1", "--dt", "0.01")
    assert code == 1
    assert "config error" in err


def test_config_error_oracle_and_both(capsys):
    code, _, err = _run(capsys, "measure", "--state", "X", "--p", "1",
                        "--t", "1", "--oracle", "--both")
    assert code == 1


def test_config_error_unknown_flag(capsys):
    code, _, err = _run(capsys, "measure", "--state", "X", "--p", "1", "--bogus")
    assert code == 1


def test_config_error_bad_p(capsys):
    code, _, err = _run(capsys, "measure", "--state", "X", "--p", "1.5")
    assert code == 1


def test_io_error_missing_state_file(capsys):
    code, _, err = _run(capsys, "measure", "--state-file", "/nonexistent/state.json")
    assert code == 3
    assert "i/o error" in err


def test_io_error_unwritable_output(capsys):
    code, _, err = _run(capsys, "measure", "--state", "X", "--p", "1",
                        "--output", "/nonexistent-dir/out.json")
    assert code == 3


def test_validation_error_bad_state_file(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(to_json_dict(np.diag([1.2, -0.2, 0.0, 0.0]))))
    code, _, err = _run(capsys, "measure", "--state-file", str(path))
    assert code == 2
    assert "validation failure" in err


def test_werner_tol_env_override(tmp_path, capsys, monkeypatch):
    # a state with a 2e-9 hermiticity defect fails at the default tolerance
    # but passes when WERNER_TOL loosens it
    rho = np.eye(4, dtype=complex) / 4
    rho[0, 1] = 1e-9j
    rho[1, 0] = 1e-9j
    path = tmp_path / "near.json"
    path.write_text(json.dumps(to_json_dict(rho)))
    code, _, _ = _run(capsys, "measure", "--state-file", str(path))
    assert code == 2
    monkeypatch.setenv("WERNER_TOL", "1e-6")
    code, out, _ = _run(capsys, "measure", "--state-file", str(path))
    assert code == 0


def test_byte_identical_outputs(tmp_path, capsys):
    argv = ["scan", "--state", "Y", "--p", "0.8", "--tmax", "5", "--steps", "20"]
    code1, out1, _ = _run(capsys, *argv)
    code2, out2, _ = _run(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(argv + ["--output", str(first)]) == 0
    assert main(argv + ["--output", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_output_file_writing(tmp_path, capsys):
    out_path = tmp_path / "m.json"
    code, out, _ = _run(capsys, "measure", "--state", "X", "--p", "0.8",
                        "--t", "0", "--output", str(out_path))
    assert code == 0
    assert out == ""
    obj = json.loads(out_path.read_text())
    assert obj["n"] == pytest.approx(0.7, abs=1e-12)


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "wernerdecay.cli", "measure", "--state", "X",
         "--p", "0.8", "--t", "0"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["c"] == pytest.approx(0.7, abs=1e-12)


def test_validate_command_passes(capsys):
    code, out, _ = _run(capsys, "validate")
    assert code == 0
    lines = out.strip().split("\n")
    assert all(line.startswith("PASS") for line in lines[:-1])
    assert lines[-1].startswith("OK")
