from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest

from siflow.cli import run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), stdout=out)
    return code, out.getvalue()


def report(text):
    return [tuple(line.split(": ", 1)) for line in text.splitlines()]


def test_verify_n1_even(configs):
    code, text = call("verify", str(configs / "even_n1.cfg"))
    assert code == 0
    brackets = [v for k, v in report(text) if k.startswith("bracket[")]
    assert brackets == ["exact-zero"] * 5
    assert "seed: 0" in text and text.endswith("exit: 0\n")


def test_verify_numeric_mode_and_precision(configs, monkeypatch):
    monkeypatch.setenv("SIFLOW_PRECISION", "30")
    code, text = call("verify", str(configs / "even_n5_numeric.cfg"), "--seed", "2")
    assert code == 0
    assert "brackets.mode: numeric (30 digits, 20 points, tolerance 1e-15)" in text
    code, _ = call("verify", str(configs / "odd_double_root.cfg"), "--symbolic-max-n", "2")
    assert code == 0


def test_bad_precision_env(configs, monkeypatch):
    monkeypatch.setenv("SIFLOW_PRECISION", "lots")
    code, text = call("verify", str(configs / "even_n5_numeric.cfg"))
    assert code == 2 and "SIFLOW_PRECISION" in text


def test_appendix_suite_c_deterministic(tmp_path):
    args = ("appendix", "--suite", "C", "--cases", "100", "--seed", "7")
    code, first = call(*args, "--out", str(tmp_path / "r.txt"), "--json", str(tmp_path / "r.json"))
    code2, second = call(*args)
    assert code == code2 == 0
    assert first == second == (tmp_path / "r.txt").read_text()
    tallies = {k: v for k, v in report(first)}
    for name in ("u-integral", "pochhammer-sum", "partner", "hypergeometric", "hypergeometric-reduces"):
        assert tallies[name] == "100/100"
    assert tallies["seed"] == "7"
    doc = json.loads((tmp_path / "r.json").read_text())
    assert {"key": "seed", "value": "7"} in doc["report"]


def test_malformed_root_triple(configs):
    code, text = call("verify", str(configs / "bad_root.cfg"))
    assert code == 2
    assert "line 3" in text


def test_integrate_writes_csv(configs, tmp_path):
    path = tmp_path / "t.csv"
    code, text = call("integrate", str(configs / "integrate_odd_plus.cfg"), "--csv", str(path))
    assert code == 0
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["t", "a", "y", "Pa", "Py", "H", "Py_int", "S1", "S2"]
    assert len(rows) == 1002
    assert "drift.Py: 0.000e+00" in text


def test_integrate_domain_error(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("[model]\nroots = -1:1:+1\nxi = -1: 1\n[integrate]\ns0 = -0.5, 0, 0.1, 0.1\nT = 1\n")
    code, text = call("integrate", str(cfg), "--csv", str(tmp_path / "x.csv"))
    assert code == 3 and "status: domain-error" in text


def test_integrate_drift_failure(configs, tmp_path):
    code, text = call(
        "integrate", str(configs / "integrate_odd_plus.cfg"), "--csv", str(tmp_path / "t.csv"), "--drift-tol", "1e-16"
    )
    assert code == 1 and "status: fail" in text


def test_classify(configs):
    assert call("classify", str(configs / "classify_odd_minus.cfg"))[0] == 0
    code, text = call("classify", str(configs / "classify_odd_minus_rejected.cfg"))
    assert code == 1 and "result: rejected" in text


def test_build(configs):
    code, text = call("build", str(configs / "odd_double_root.cfg"))
    assert code == 0 and "S2.monomials" in text


def test_novichkov():
    code, text = call("novichkov", "--cases", "10", "--seed", "4")
    assert code == 0
    kv = dict(report(text))
    assert kv["reference.B5"] == "3/2" and kv["reference.B6"] == "-1/2"
    assert kv["distinct"] == "10/10" and kv["multiple"] == "10/10"


@pytest.mark.parametrize(
    "argv",
    [("verify",), ("frobnicate",), ("appendix", "--cases", "0"), ("verify", "/nonexistent.cfg"), ("classify", "--seed", "x")],
)
def test_usage_errors(argv):
    assert call(*argv)[0] == 2


def test_missing_section(configs):
    code, text = call("integrate", str(configs / "even_n1.cfg"))
    assert code == 2 and "[integrate]" in text


def test_console_script(configs):
    proc = subprocess.run(
        [sys.executable, "-m", "siflow.cli", "verify", str(configs / "even_n1.cfg")], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert proc.stdout.count("exact-zero") >= 5
