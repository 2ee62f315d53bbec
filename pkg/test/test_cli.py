"""Command line: outputs, exit codes and byte-level determinism."""

import pytest

from kennedytes import cli, io
from kennedytes.errors import NumericalError


def test_bounds(tmp_path, capsys):
    out = tmp_path / "bounds.csv"
    assert cli.main(["bounds", "--alpha-sq-grid", "0,1,4.8", "--out", str(out)]) == 0
    rows = io.read_rows(out)
    assert [r["alpha_sq"] for r in rows] == ["0", "1", "4.8"]
    assert rows[0]["p_sql"] == "0.5"
    assert float(rows[1]["p_sql"]) == pytest.approx(0.0227501319, rel=1e-8)
    assert "Saved 3 rows" in capsys.readouterr().out


def test_curve(tmp_path):
    out = tmp_path / "curve.json"
    assert cli.main(["curve", "--grid", "1,4.8", "--format", "json", "--out", str(out)]) == 0
    points = io.read_json(out)
    assert [p["alpha_sq"] for p in points] == [1.0, 4.8]
    assert points[1]["improvement_db"] > 6


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bounds", "--out", "x.csv"],
        ["bounds", "--alpha-sq-grid", "a,b", "--out", "x.csv"],
        ["sweep-alpha", "--grid", "1", "--optimize", "--beta-sq", "1", "--seed", "1", "--out", "x"],
        ["sweep-alpha", "--grid", "1", "--out", "x"],
    ],
)
def test_usage_errors_exit_1(argv):
    assert cli.main(argv) == 1


def test_invalid_values_exit_1(tmp_path):
    out = str(tmp_path / "r.csv")
    assert cli.main(["bounds", "--alpha-sq-grid", "-1", "--out", out]) == 1
    assert cli.main(["sweep-alpha", "--grid", "1", "--seed", "1", "--noise-rms", "1", "--out", out]) == 1


def _sweep(tmp_path, name, *extra):
    out = tmp_path / name
    argv = ["sweep-alpha", "--grid", "0.5,1.5,3", "--optimize", "--trials", "100000"]
    argv += ["--chunk-trials", "20000", "--seed", "11", "--out", str(out), *extra]
    assert cli.main(argv) == 0
    return out.read_bytes()


def test_sweep_alpha_is_byte_identical_across_runs_and_workers(tmp_path):
    first = _sweep(tmp_path, "a.csv")
    assert _sweep(tmp_path, "b.csv") == first
    assert _sweep(tmp_path, "c.csv", "--workers", "4") == first
    assert first.decode().splitlines()[0] == ",".join(io.RESULT_FIELDS)


def test_sweep_alpha_fixed_beta(tmp_path):
    out = tmp_path / "fixed.csv"
    argv = ["sweep-alpha", "--grid", "1,2", "--beta-sq", "1.2", "--trials", "1000"]
    assert cli.main(argv + ["--seed", "3", "--out", str(out)]) == 0
    assert {r["beta_sq"] for r in io.read_rows(out)} == {"1.2"}


def test_sweep_beta(tmp_path):
    out = tmp_path / "beta.csv"
    argv = ["sweep-beta", "--alpha-sq", "1.5", "--grid", "0.8,1,1.2", "--trials", "10000"]
    assert cli.main(argv + ["--seed", "5", "--out", str(out)]) == 0
    assert len(io.read_rows(out)) == 3


def test_simulate_from_config(tmp_path):
    config = tmp_path / "run.env"
    config.write_text("SEED=4\nALPHA_SQ=1.5\nEVALUATION_TRIALS=20000\nFORMAT=json\nOUT=res.json\n")
    assert cli.main(["simulate", "--config", str(config)]) == 0
    (record,) = io.read_json(tmp_path / "res.json")
    assert record["seed"] == 4
    assert record["trials"] == 20000


def test_simulate_needs_an_output(tmp_path):
    config = tmp_path / "run.env"
    config.write_text("SEED=4\n")
    assert cli.main(["simulate", "--config", str(config)]) == 1


def test_simulate_unknown_key_exits_1(tmp_path):
    config = tmp_path / "run.env"
    config.write_text("SEED=4\nBOGUS=1\n")
    assert cli.main(["simulate", "--config", str(config), "--out", str(tmp_path / "r.csv")]) == 1


def test_runtime_errors_exit_2(tmp_path, monkeypatch):
    def fail(*_a, **_k):
        raise NumericalError("objective is nan")

    monkeypatch.setattr(cli, "sweep_alpha", fail)
    assert cli.main(["sweep-alpha", "--grid", "1", "--seed", "1", "--out", str(tmp_path / "r")]) == 2


def test_unwritable_output_exits_2(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert cli.main(["bounds", "--alpha-sq-grid", "1", "--out", str(blocker / "b.csv")]) == 2


def test_traces(tmp_path, capsys):
    out = tmp_path / "traces.bin"
    argv = ["traces", "--photons", "0,1,3", "--count", "50", "--filter-traces", "500"]
    assert cli.main(argv + ["--seed", "2", "--out", str(out)]) == 0
    samples, dt = io.read_trace_dump(out)
    assert samples.shape == (150, 256)
    assert dt == pytest.approx(1 / 256)
    assert "Per-photon score spacing" in capsys.readouterr().out


def test_check_exit_code_follows_thresholds(monkeypatch, capsys):
    good = {
        "beta_opt_sq": 1.5,
        "large_signal_ratio": 1.0,
        "improvement_db": 7.7,
        "sql_crossover": 7.5,
        "plateau_slope_ratio": 0.01,
        "monotone_violations": 0,
    }
    monkeypatch.setattr(cli, "compute_report", lambda: good)
    assert cli.main(["check"]) == 0
    assert "PASS" in capsys.readouterr().out
    monkeypatch.setattr(cli, "compute_report", lambda: {**good, "sql_crossover": 9.9})
    assert cli.main(["check"]) == 1
