import json

import pytest

from chancap.cli import main

CHI_HALF = 0.18872187554086717
PERIODIC_09_05 = 0.45116245921245546


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_capacity_depolarizing(capsys):
    code, out, _ = run(capsys, ["capacity", "depolarizing", "--d", "2", "--lambda", "0.5"])
    assert code == 0
    payload = json.loads(out)
    assert payload["command"] == "capacity depolarizing"
    assert payload["results"]["closed_form"] == pytest.approx(CHI_HALF, abs=1e-9)
    assert set(payload) == {"command", "inputs", "results", "checks", "timing_ms", "seed"}
    assert payload["timing_ms"] is None


def test_capacity_periodic(capsys):
    code, out, _ = run(capsys, ["capacity", "periodic", "--d", "2", "--lambdas", "0.9,0.5"])
    assert code == 0
    payload = json.loads(out)
    assert payload["results"]["closed_form"] == pytest.approx(PERIODIC_09_05, abs=1e-9)


def test_capacity_convex(capsys):
    code, out, _ = run(
        capsys,
        ["capacity", "convex", "--d", "2", "--lambdas", "0.9,0.5", "--gammas", "0.3,0.7"],
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["results"]["closed_form"] == pytest.approx(CHI_HALF, abs=1e-9)


def test_capacity_cp_violation_exit_code(capsys):
    code, out, err = run(capsys, ["capacity", "depolarizing", "--d", "2", "--lambda", "-0.4"])
    assert code == 2
    assert out == ""
    assert "[-0.333333, 1]" in err


def test_byte_identical_output(capsys):
    argv = ["capacity", "depolarizing", "--d", "2", "--lambda", "0.5", "--seed", "7"]
    _, first, _ = run(capsys, argv)
    _, second, _ = run(capsys, argv)
    assert first == second


def test_verify_byte_identical_output(capsys):
    argv = [
        "verify", "additivity", "--d", "2", "--lambda", "0.5",
        "--restarts", "2", "--iters", "60", "--m", "4", "--seed", "7",
    ]
    code, first, _ = run(capsys, argv)
    assert code == 0
    _, second, _ = run(capsys, argv)
    assert first == second
    payload = json.loads(first)
    assert payload["seed"] == 7
    assert all(check["pass"] for check in payload["checks"])


def test_verify_generates_and_reports_seed(capsys):
    argv = [
        "verify", "additivity", "--d", "2", "--lambda", "1.0",
        "--restarts", "1", "--iters", "30", "--m", "4",
    ]
    code, out, _ = run(capsys, argv)
    assert code == 0
    assert isinstance(json.loads(out)["seed"], int)


def test_verify_theorem1(capsys):
    argv = [
        "verify", "theorem1", "--d", "2", "--lambdas", "0.9,0.5",
        "--restarts", "2", "--iters", "150", "--seed", "3",
    ]
    code, out, _ = run(capsys, argv)
    payload = json.loads(out)
    assert code == 0
    assert payload["results"]["closed_form"] == pytest.approx(PERIODIC_09_05, abs=1e-9)
    assert payload["results"]["optimizer_value"] == pytest.approx(PERIODIC_09_05, abs=1e-3)


def test_verify_theorem2(capsys):
    argv = [
        "verify", "theorem2", "--d", "2", "--lambdas", "0.9,0.5",
        "--gammas", "0.3,0.7", "--restarts", "2", "--iters", "150", "--seed", "3",
    ]
    code, out, _ = run(capsys, argv)
    payload = json.loads(out)
    assert code == 0
    assert payload["results"]["closed_form"] == pytest.approx(CHI_HALF, abs=1e-9)


def test_sweep_endpoints(capsys):
    code, out, _ = run(
        capsys,
        ["sweep", "--d", "2", "--lambda-from", "0", "--lambda-to", "1", "--step", "0.25"],
    )
    assert code == 0
    rows = json.loads(out)["results"]["rows"]
    assert len(rows) == 5
    assert rows[0]["lambda"] == 0.0 and rows[0]["chi_star"] == pytest.approx(0.0, abs=1e-12)
    assert rows[-1] == {"lambda": 1.0, "s_min": 0.0, "chi_star": 1.0}
    assert rows[2]["s_min"] == pytest.approx(0.8112781244591328, abs=1e-9)
    assert rows[2]["chi_star"] == pytest.approx(CHI_HALF, abs=1e-9)
    chis = [r["chi_star"] for r in rows]
    assert all(b >= a for a, b in zip(chis, chis[1:]))


def test_sweep_qutrit_endpoint(capsys):
    code, out, _ = run(
        capsys,
        ["sweep", "--d", "3", "--lambda-from", "0", "--lambda-to", "1", "--step", "0.5"],
    )
    rows = json.loads(out)["results"]["rows"]
    assert code == 0
    assert rows[-1]["chi_star"] == pytest.approx(1.584962500721156, abs=1e-9)


def test_sweep_csv_format(capsys):
    code, out, _ = run(
        capsys,
        ["sweep", "--d", "2", "--lambda-from", "0", "--lambda-to", "1", "--step", "0.5",
         "--format", "csv"],
    )
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "lambda,s_min,chi_star"
    assert len(lines) == 4
    assert lines[-1] == "1.0,0.0,1.0"


def test_sweep_rejects_bad_grid(capsys):
    code, _, err = run(
        capsys,
        ["sweep", "--d", "2", "--lambda-from", "0", "--lambda-to", "1", "--step", "-0.5"],
    )
    assert code == 2 and "step" in err
    code, _, err = run(
        capsys,
        ["sweep", "--d", "2", "--lambda-from", "-0.9", "--lambda-to", "1", "--step", "0.5"],
    )
    assert code == 2 and "completely positive" in err


def test_missing_dimension_is_usage_error(capsys):
    code, _, err = run(capsys, ["capacity", "depolarizing", "--lambda", "0.5"])
    assert code == 2
    assert "--d" in err


def test_config_file_provides_defaults(tmp_path, capsys):
    cfg = {
        "command": "capacity depolarizing",
        "channel": {"type": "depolarizing", "d": 2, "lambda": 0.5},
    }
    path = tmp_path / "run.json"
    path.write_text(json.dumps(cfg))
    code, out, _ = run(capsys, ["capacity", "depolarizing", "--config", str(path)])
    assert code == 0
    assert json.loads(out)["results"]["closed_form"] == pytest.approx(CHI_HALF, abs=1e-9)


def test_flags_override_config(tmp_path, capsys):
    cfg = {"channel": {"type": "depolarizing", "d": 2, "lambda": 0.5}}
    path = tmp_path / "run.json"
    path.write_text(json.dumps(cfg))
    code, out, _ = run(
        capsys, ["capacity", "depolarizing", "--config", str(path), "--lambda", "1.0"]
    )
    assert code == 0
    assert json.loads(out)["results"]["closed_form"] == pytest.approx(1.0, abs=1e-12)


def test_config_command_mismatch(tmp_path, capsys):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"command": "sweep"}))
    code, _, err = run(capsys, ["capacity", "depolarizing", "--config", str(path),
                                "--d", "2", "--lambda", "0.5"])
    assert code == 2 and "sweep" in err


def test_config_optimizer_settings(tmp_path, capsys):
    cfg = {
        "channel": {"type": "depolarizing", "d": 2, "lambda": 0.5},
        "optimizer": {"restarts": 2, "iters": 60, "seed": 7, "m": 4, "tol": 1e-6},
    }
    path = tmp_path / "run.json"
    path.write_text(json.dumps(cfg))
    code, out, _ = run(capsys, ["verify", "additivity", "--config", str(path)])
    assert code == 0
    payload = json.loads(out)
    assert payload["inputs"]["restarts"] == 2
    assert payload["inputs"]["m"] == 4
    assert payload["seed"] == 7


def test_out_writes_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run(
        capsys,
        ["capacity", "depolarizing", "--d", "2", "--lambda", "0.5", "--out", str(target)],
    )
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["results"]["closed_form"] == pytest.approx(
        CHI_HALF, abs=1e-9
    )


def test_timings_flag_adds_measurement(capsys):
    code, out, _ = run(
        capsys,
        ["capacity", "depolarizing", "--d", "2", "--lambda", "0.5", "--timings"],
    )
    assert code == 0
    assert json.loads(out)["timing_ms"] > 0


def test_report_csv_flattening(capsys):
    code, out, _ = run(
        capsys,
        ["capacity", "depolarizing", "--d", "2", "--lambda", "0.5", "--format", "csv"],
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "key,value"
    keys = {line.split(",", 1)[0] for line in lines[1:]}
    assert "results.closed_form" in keys
