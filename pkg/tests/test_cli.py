import csv
import json
import math
import subprocess
import sys

import pytest

from annihilate.cli import CSV_HEADER, ExperimentSpec, run_cli


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def test_exact_k1_output(capsys):
    assert run_cli(["exact", "--law", "k1", "--n", "2"]) == 0
    out = capsys.readouterr().out
    assert "probs 0.25,0.75" in out
    assert "mean 5.333333333333333" in out


def test_exact_with_samples(capsys):
    assert run_cli(["exact", "--law", "sp1", "--n", "1", "--samples", "2000",
                    "--seed", "3"]) == 0
    out = capsys.readouterr().out
    assert "mean 4.0" in out  # exact mean of 2*X(1/2)
    assert "samples 2000" in out


def test_simulate_star_p1_mean(capsys, tmp_path):
    out_csv = tmp_path / "sim.csv"
    code = run_cli([
        "simulate", "--system", "two", "--graph", "star", "--n", "1",
        "--p", "1", "--trials", "100000", "--seed", "7",
        "--csv", str(out_csv),
    ])
    assert code == 0
    rows = read_csv(out_csv)
    assert len(rows) == 1
    row = rows[0]
    assert list(row.keys()) == CSV_HEADER
    mean = float(row["mean_T"])
    stderr = float(row["stderr_T"])
    assert abs(mean - 4.0) <= 3 * stderr
    assert "fail" not in row["verdicts"]


def _sweep_config(tmp_path, csv_name="sweep.csv"):
    cfg = {
        "system": "two",
        "topology": "star",
        "n_grid": [10, 20],
        "p_grid": [0.5, 0.8],
        "trials": 300,
        "base_seed": 424242,
        "outputs": {"csv": str(tmp_path / csv_name)},
        "record_series": True,
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg), encoding="utf-8")
    return path, cfg


def test_sweep_schema_and_determinism(tmp_path, capsys):
    config, cfg = _sweep_config(tmp_path)
    assert run_cli(["sweep", "--config", str(config), "--fresh"]) == 0
    rows1 = read_csv(cfg["outputs"]["csv"])
    assert [list(r.keys()) for r in rows1] == [CSV_HEADER] * 4
    assert [(r["n"], r["p"]) for r in rows1] == [
        ("10", "0.5"), ("10", "0.8"), ("20", "0.5"), ("20", "0.8")]
    assert all("master_identity=pass" in r["verdicts"] for r in rows1)
    assert all("t_ge_2n=pass" in r["verdicts"] for r in rows1)
    # identical re-run: same bytes except wall_ms
    assert run_cli(["sweep", "--config", str(config), "--fresh"]) == 0
    rows2 = read_csv(cfg["outputs"]["csv"])
    strip = lambda r: {k: v for k, v in r.items() if k != "wall_ms"}
    assert [strip(r) for r in rows1] == [strip(r) for r in rows2]


def test_sweep_append_and_flag_overrides(tmp_path, capsys):
    config, cfg = _sweep_config(tmp_path)
    other = tmp_path / "other.csv"
    assert run_cli(["sweep", "--config", str(config), "--csv", str(other),
                    "--trials", "50"]) == 0
    rows = read_csv(other)
    assert len(rows) == 4 and rows[0]["trials"] == "50"
    assert run_cli(["sweep", "--config", str(config), "--csv", str(other),
                    "--trials", "50"]) == 0
    assert len(read_csv(other)) == 8  # appended


def test_sweep_jobs_do_not_change_results(tmp_path):
    config, cfg = _sweep_config(tmp_path)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run_cli(["sweep", "--config", str(config), "--csv", str(a), "--jobs", "1"])
    run_cli(["sweep", "--config", str(config), "--csv", str(b), "--jobs", "4"])
    strip = lambda r: {k: v for k, v in r.items() if k != "wall_ms"}
    assert [strip(r) for r in read_csv(a)] == [strip(r) for r in read_csv(b)]


def test_experiment_spec_validation(tmp_path):
    bad = {"system": "one", "topology": "star", "n_grid": [4],
           "p_grid": [0.7], "trials": 10, "base_seed": 1,
           "outputs": {"csv": "x.csv"}}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad), encoding="utf-8")
    with pytest.raises(ValueError):
        ExperimentSpec.from_json(str(path))


def test_fit_subcommand(tmp_path, capsys):
    # synthetic star sweep rows with means = 2n + 3 sqrt(n) log(n)
    path = tmp_path / "fit.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_HEADER)
        writer.writeheader()
        for n in (100, 400, 1600, 6400):
            mean = 2 * n + 3.0 * math.sqrt(n) * math.log(n)
            writer.writerow({
                "system": "two", "topology": "star", "n": n, "p": "0.5",
                "trials": 100, "mean_T": repr(mean), "stderr_T": "1.0",
                "mean_M": "0", "mean_maxocc": "1", "verdicts": "",
                "seed": 1, "wall_ms": 0})
    assert run_cli(["fit", "--csv", str(path)]) == 0
    out = capsys.readouterr().out
    assert "sqrt_n_log_n: coefficient=3" in out


def test_fit_needs_enough_rows(tmp_path, capsys):
    path = tmp_path / "short.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_HEADER)
        writer.writeheader()
    assert run_cli(["fit", "--csv", str(path)]) == 1


def test_verify_quick_exit_zero():
    assert run_cli(["verify", "--quick"]) == 0


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        run_cli(["simulate", "--system", "bogus", "--graph", "star", "--n", "1"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run_cli([])
    assert exc.value.code == 2


def test_env_jobs_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv("ANNIHILATE_JOBS", "2")
    config, cfg = _sweep_config(tmp_path, "env.csv")
    assert run_cli(["sweep", "--config", str(config)]) == 0
    assert len(read_csv(cfg["outputs"]["csv"])) == 4


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "annihilate.cli", "exact", "--law", "s1", "--n", "1"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "probs 0.75" in proc.stdout
