import json
import subprocess
import sys

import jsonschema
import pytest

from qgf import cli
from qgf.checks import CheckResult, FAIL


def _run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture(scope="module")
def schema():
    with open(cli.schema_path()) as fh:
        return json.load(fh)


def test_list(capsys):
    code, out, _ = _run(["list"], capsys)
    assert code == 0
    assert len(out.strip().splitlines()) == 18
    code, out, _ = _run(["list", "--tag", "poisson"], capsys)
    assert [line.split()[0] for line in out.strip().splitlines()] == ["sklyanin", "weyl-correspondence", "poisson-hopf"]


def test_verify_single_suite(capsys):
    code, out, _ = _run(["verify", "hopf-axioms", "--order", "1"], capsys)
    assert code == 0
    assert out.startswith("PASS  hopf-axioms")
    assert out.rstrip().endswith("overall: pass")


def test_usage_errors(capsys):
    assert _run(["verify", "no-such-suite"], capsys)[0] == 2
    assert _run(["verify", "casimir", "--order", "-1"], capsys)[0] == 2
    assert _run(["verify", "--s", "2"], capsys)[0] == 2
    assert _run([], capsys)[0] == 2
    assert _run(["dump-tensor", "--cutoff", "-3"], capsys)[0] == 2


def test_failing_suite_exit_code_and_witness(capsys, monkeypatch, schema):
    bad = cli.Suite("broken", "always fails", lambda cfg: [CheckResult("x", FAIL, witness={"why": "test"})])
    crash = cli.Suite("crash", "raises", lambda cfg: 1 / 0)
    monkeypatch.setitem(cli.REGISTRY, "broken", bad)
    monkeypatch.setitem(cli.REGISTRY, "crash", crash)
    code, out, _ = _run(["verify", "broken", "crash", "casimir", "--format", "json"], capsys)
    assert code == 1
    report = json.loads(out)
    jsonschema.validate(report, schema)
    by = {r["suite"]: r for r in report["suites"]}
    assert by["broken"]["checks"][0]["witness"] == {"why": "test"}
    assert "ZeroDivisionError" in by["crash"]["checks"][0]["witness"]["error"]
    assert by["casimir"]["status"] == "pass"


def test_fail_fast_stops(monkeypatch):
    bad = cli.Suite("broken", "always fails", lambda cfg: [CheckResult("x", FAIL, witness={})])
    monkeypatch.setitem(cli.REGISTRY, "broken", bad)
    rep = cli.run_suites(["broken", "casimir"], cli.Config(), fail_fast=True)
    assert [r["suite"] for r in rep["suites"]] == ["broken"]


def test_s_restriction(capsys):
    code, out, _ = _run(["verify", "coaction", "--s", "0", "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["config"]["s"] == [0]


def test_full_report_is_deterministic_and_valid(schema):
    cmd = [sys.executable, "-m", "qgf.cli", "verify", "--format", "json"]
    a = subprocess.run(cmd, capture_output=True, check=False)
    b = subprocess.run(cmd, capture_output=True, check=False)
    assert a.returncode == 0, a.stdout.decode()[-2000:]
    assert a.stdout == b.stdout
    report = json.loads(a.stdout)
    jsonschema.validate(report, schema)
    assert len(report["suites"]) == 18
    assert all(r["millis"] is None for r in report["suites"])


def test_timing_fills_millis(capsys):
    code, out, _ = _run(["verify", "casimir", "--timing", "--format", "json"], capsys)
    assert isinstance(json.loads(out)["suites"][0]["millis"], int)


def test_dump_tensor(capsys):
    code, out, _ = _run(["dump-tensor", "--cutoff", "2"], capsys)
    assert code == 0 and out
    again = _run(["dump-tensor", "--cutoff", "2"], capsys)[1]
    assert out == again
