import json
import os
import subprocess
from pathlib import Path

import numpy as np
import pytest

import polya_urns as pu

SOURCE = Path(os.environ.get("POLYA_SOURCE_DIR", Path(__file__).resolve().parents[2]))
CLI = os.environ.get("POLYA_CLI", "")


def test_params_and_step():
    p = pu.ModelParams(2, 1, 1, 0.5)
    assert p.m == 2
    s = pu.UrnSystemState(1, [2, 1])
    probs = pu.reinforcement_probabilities(s, p)
    assert probs == pytest.approx([7 / 12, 5 / 12], abs=1e-15)
    nxt = pu.step(s, p, 42)
    assert nxt.t == 2
    assert all(a <= b <= a + 1 for a, b in zip(s.red, nxt.red))
    with pytest.raises(ValueError):
        pu.ModelParams(1, 1, 1, 0.5)
    for name in ("ArgumentError", "PreconditionError", "ResourceBoundError", "ConfigError", "IoError"):
        assert issubclass(getattr(pu, name), pu.PolyaError)
    with pytest.raises(pu.InvariantViolation):
        pu.step(pu.UrnSystemState(1, [3, 1]), p, 1)


def test_simulate_arrays():
    p = pu.ModelParams(3, 1, 2, 0.6)
    traj = pu.simulate(p, 100, [0, 10, 100], 7)
    assert traj.Z.shape == (3, 3)
    assert np.allclose(traj.Z[0], 1 / 3)
    assert np.all(traj.L[0] == 0)
    assert np.allclose(traj.D.sum(axis=1), 0, atol=1e-12)
    assert np.allclose(traj.Zbar, traj.Z.mean(axis=1), atol=1e-12)


def test_ensemble_determinism():
    p = pu.ModelParams(2, 1, 1, 0.8)
    grid = pu.geometric_grid(500, 10)
    a = pu.simulate_ensemble(p, 30, 500, grid, 11, threads=1)
    b = pu.simulate_ensemble(p, 30, 500, grid, 11, threads=4)
    assert np.array_equal(a.snapshot(500, "Z"), b.snapshot(500, "Z"))
    single = pu.simulate(p, 500, grid, pu.derive_seed(11, 0))
    assert single == a.trajectories[0]


def test_oracle():
    rows = pu.enumerate_exact(pu.ModelParams(2, 1, 1, 0.0), 2)
    assert rows[2]["E_D2"] == pytest.approx(1 / 48, abs=1e-15)
    assert all(abs(r["E_Z"] - 0.5) < 1e-12 for r in rows)
    res = pu.conditional_drift_check(pu.ModelParams(2, 1, 1, 0.5), pu.UrnSystemState(1, [2, 1]))
    assert max(abs(r) for r in res) <= 1e-14
    with pytest.raises(pu.ResourceBoundError):
        pu.enumerate_exact(pu.ModelParams(5, 1, 1, 0.5), 5)


def test_statistics():
    assert pu.normal_cdf(0.0) == 0.5
    assert pu.normal_quantile(0.975) == pytest.approx(1.959963984540054, abs=1e-9)
    xs = [pu.normal_quantile((i - 0.5) / 100) for i in range(1, 101)]
    stat, p = pu.ks_test(xs)
    assert stat == pytest.approx(0.005, abs=1e-9)
    assert 0.0 <= p <= 1.0
    slope, _, se = pu.ols_loglog([1, 10, 100, 1000], [1, 0.1, 0.01, 0.001])
    assert slope == pytest.approx(-1.0, abs=1e-12)


def test_pivots_and_alpha():
    p = pu.ModelParams(2, 1, 1, 0.8)
    e = pu.simulate_ensemble(p, 600, 1000, [1000], 3)
    s2 = np.array(pu.clt_sample(e, "S2", 1000))
    assert s2.shape == (600,)
    assert abs(s2.var() - 1.0) < 0.3
    alpha_hat, se = pu.estimate_alpha(e, 1000)
    assert abs(alpha_hat - 0.8) < 0.1
    with pytest.raises(ValueError):
        pu.clt_sample(e, "S3", 1000)


def test_numerics():
    c = pu.coefficients(0.7, 2, 1000)
    assert c[-1] == 1.0
    assert c[-2] == pytest.approx(1 - 0.7 / 1003, rel=1e-15)
    assert np.all(np.diff(c) >= 0)
    assert pu.dyadic_ratio_deviation(0.7, 2, 10**6) < 1e-3
    f = lambda k: 1 - 0.6 / (k + 3)
    g = lambda k: (k + 1) ** -2.0
    closed = pu.solve_linear_recursion(f, g, 2000)
    direct = pu.iterate_linear_recursion(f, g, 2000)
    assert abs(closed - direct) <= 1e-10 * abs(direct)


def test_config_roundtrip():
    text = "N = 3\nalpha = 0.8\nM = 10\nT_max = 100\n"
    canonical = pu.parse_config(text)
    assert pu.parse_config(canonical) == canonical
    assert pu.config_hash(text) == pu.config_hash(canonical)
    with pytest.raises(pu.ConfigError):
        pu.parse_config("alpha = 0.4\nM = 2000\nT_max = 2000\ngates = clt-s2\n")


needs_cli = pytest.mark.skipif(not CLI or not Path(CLI).exists(), reason="polya executable not available")


def run(*args, cwd=None):
    return subprocess.run([CLI, *args], capture_output=True, text=True, cwd=cwd)


@needs_cli
def test_cli_exit_codes(tmp_path):
    assert run().returncode == 2
    assert run("simulate").returncode == 2
    assert run("simulate", "--config", str(tmp_path / "missing.cfg")).returncode == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("alpha = 0.4\nM = 2000\nT_max = 2000\ngates = clt-s2\n")
    r = run("analyze", "--config", str(bad))
    assert r.returncode == 2
    assert "clt-s2" in r.stderr
    r = run("oracle", "--N", "5", "--t-max", "5")
    assert r.returncode == 2
    assert "24" in r.stderr


@needs_cli
def test_cli_oracle_table():
    r = run("oracle", "--N", "2", "--a", "1", "--b", "1", "--alpha", "0", "--t-max", "2")
    assert r.returncode == 0
    table = json.loads(r.stdout)
    assert table["moments"]["2"]["E_D2"] == pytest.approx(1 / 48, abs=1e-15)
    r = run("oracle", "--t-max", "0")
    assert list(json.loads(r.stdout)["moments"]) == ["0"]


@needs_cli
def test_cli_pipeline_and_schema(tmp_path):
    jsonschema = pytest.importorskip("jsonschema")
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "N = 2\na = 1\nb = 1\nalpha = 0.8\nM = 200\nmaster_seed = 5\nT_max = 2000\n"
        "grid_per_decade = 10\nmartingale_t_max = 2000\nclt_t = 1000\n"
        "gates = martingale, clt-s2, coefficients, recursion\ncoef_t = 10000\n"
    )
    out = tmp_path / "out"
    r = run("simulate", "--config", str(cfg), "--out", str(out), "--threads", "2")
    assert r.returncode == 0, r.stderr
    csvs = sorted(out.glob("traj_*_r*.csv"))
    assert len(csvs) == 200
    assert csvs[0].read_text().startswith("t,urn,Z,Zbar,D,L\n")
    first = csvs[0].read_bytes()
    r = run("simulate", "--config", str(cfg), "--out", str(out), "--threads", "1")
    assert r.returncode == 0
    assert csvs[0].read_bytes() == first

    r = run("analyze", "--config", str(cfg), "--out", str(out))
    assert r.returncode in (0, 1), r.stderr
    reports = sorted(out.glob("report_*.json"))
    assert len(reports) == 1
    report = json.loads(reports[0].read_text())
    schema = json.loads((SOURCE / "docs" / "report.schema.json").read_text())
    jsonschema.validate(report, schema)
    assert r.returncode == (0 if report["all_pass"] else 1)
    assert all(g["command"].endswith(f"--out {out}") for g in report["gates"])

    r = run("analyze", "--config", str(cfg), "--out", str(out))
    assert len(sorted(out.glob("report_*.json"))) == 2

    r = run("report", str(reports[0]))
    assert r.returncode == 0
    assert "martingale" in r.stdout
    dat = reports[0].with_suffix(".dat")
    assert dat.read_text().startswith("#")


@needs_cli
def test_cli_empty_gate_report(tmp_path):
    jsonschema = pytest.importorskip("jsonschema")
    cfg = tmp_path / "min.cfg"
    cfg.write_text("N = 2\na = 1\nb = 1\nalpha = 0.5\nM = 1\nT_max = 10\n")
    out = tmp_path / "o"
    assert run("simulate", "--config", str(cfg), "--out", str(out)).returncode == 0
    r = run("analyze", "--config", str(cfg), "--out", str(out))
    assert r.returncode == 0
    report = json.loads(next(out.glob("report_*.json")).read_text())
    assert report["gates"] == []
    jsonschema.validate(report, json.loads((SOURCE / "docs" / "report.schema.json").read_text()))


@needs_cli
def test_cli_missing_trajectories(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("alpha = 0.5\nM = 3\nT_max = 50\ngates = martingale\n")
    r = run("analyze", "--config", str(cfg), "--out", str(tmp_path / "nothing"))
    assert r.returncode == 2
    assert "missing" in r.stderr
