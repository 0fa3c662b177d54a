import json
import math
import os
import subprocess

import jsonschema
import numpy as np
import pytest

import dbq

SCHEMA = os.environ.get("DBQ_SCHEMA")
CLI = os.environ.get("DBQ_CLI")
if CLI:
    CLI = os.path.abspath(CLI)

RADIAL_LINEAR = {
    "experiment": "linear_rates",
    "model": {"f_kind": "none", "g_kind": "none"},
    "data": {"kind": "gaussian"},
    "analysis": {"k_list": [0, 1, 2], "samples": 21, "mode": "radial"},
}


def test_roots_satisfy_vieta():
    for xi2 in (1e-4, 0.3, 1.0, 7.0, 50.0):
        lp, lm = dbq.roots(xi2)
        b = xi2 * xi2 + xi2
        c = xi2 + xi2 * xi2
        assert abs(lp + lm + b) <= 1e-10 * max(1.0, b)
        assert abs(lp * lm - c) <= 1e-10 * max(1.0, c)


def test_propagator_single_mode():
    # b = c = 2 at xi2 = 1: G = e^{-t} sin t.
    s = dbq.propagator(1.0, 1.0)
    assert s["G"].real == pytest.approx(math.exp(-1) * math.sin(1), rel=1e-13)
    assert s["H"].real == pytest.approx(math.exp(-1) * (math.cos(1) + math.sin(1)), rel=1e-13)


def test_eta_and_fit():
    assert dbq.eta(100.0, 2) == pytest.approx(0.46020199529279698112, rel=1e-14)
    t = np.array(dbq.log_grid(10.0, 1e4, 20))
    fit = dbq.fit_rate(list(t), list(2.0 * (1 + t) ** -0.75), 10.0, 1e4)
    assert fit["slope"] == pytest.approx(-0.75, abs=1e-12)


def test_radial_norm_slope():
    times = dbq.log_grid(100.0, 1e4, 21)
    norms = dbq.radial_norms("gaussian", 1, times, [0])[0]
    slope = np.polyfit(np.log1p(times), np.log(norms), 1)[0]
    assert slope == pytest.approx(-0.25, abs=0.01)


def test_certify_energy_bound():
    cert = dbq.certify_bound("G_energy", dbq.log_grid(1e-3, 1e2, 60), dbq.time_grid(1e3, 60), [1.0, 0.5, 0.1])
    assert cert["passed"]
    assert cert["c"] >= 0.1


def test_list_strings():
    text = dbq.list_experiments()
    assert "linear_rates → Theorem 3.1 (Eq. 43)" in text
    assert "profile_gap → §4 Theorem (Eq. 61)" in text
    assert "oracle_crosscheck → solver consistency" in text


def test_run_report_validates():
    report = dbq.run(RADIAL_LINEAR)
    if SCHEMA:
        with open(SCHEMA) as f:
            jsonschema.validate(report, json.load(f))
    (exp,) = report["experiments"]
    assert [s["theory_slope"] for s in exp["series"]] == pytest.approx([-0.25, -0.75, -1.25])
    assert all(v["criterion"].startswith("AC") for v in exp["verdicts"])
    assert report["passed"]


def test_config_error():
    with pytest.raises(dbq.ConfigError, match="model.alpha"):
        dbq.run({"model": {"alpha": 0.5}})


@pytest.mark.skipif(not CLI, reason="DBQ_CLI not set")
def test_cli_round_trip(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(RADIAL_LINEAR))
    out = tmp_path / "out"
    r = subprocess.run([CLI, "run", str(cfg), "--out", str(out)], capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    header = (out / "series.csv").read_text().splitlines()[0]
    assert header == "experiment_id,t,k,norm_kind,value"
    rates = (out / "rates.csv").read_text().splitlines()
    assert rates[0] == "k,slope,stderr,theory_slope,verdict"
    assert len(rates) == 4
    assert len(list(out.glob("*.svg"))) == 3

    first = (out / "series.csv").read_bytes()
    subprocess.run([CLI, "run", str(cfg), "--out", str(out)], check=True, capture_output=True)
    assert (out / "series.csv").read_bytes() == first

    for svg in out.glob("*.svg"):
        svg.unlink()
    r = subprocess.run([CLI, "replot", str(out / "series.csv")], capture_output=True, text=True)
    assert r.returncode == 0
    assert len(list(out.glob("*.svg"))) == 3


@pytest.mark.skipif(not CLI, reason="DBQ_CLI not set")
def test_cli_bad_config(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text('{\n  "analysis": {\n    "smaples": 3\n  }\n}\n')
    r = subprocess.run([CLI, "run", str(cfg)], capture_output=True, text=True, cwd=tmp_path)
    assert r.returncode == 2
    assert "line 3" in r.stderr and "analysis.smaples" in r.stderr
