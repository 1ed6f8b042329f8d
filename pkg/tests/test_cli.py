import contextlib
import csv
import io
import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramellin import cli
from ramellin import identities as ids


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_basic(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "basic", "--no-timestamp")
    doc = json.loads(out)
    assert code == 0
    assert len(doc["cases"]) == 12
    assert doc["summary"]["pass"] == 12


def test_eval_zeta_quarter(capsys):
    code, out, _ = run(capsys, "eval", "--identity", "ZETA_SINE_2_5", "--s", "0.25", "--no-timestamp")
    doc = json.loads(out)
    assert code == 0
    (case,) = doc["cases"]
    assert case["status"] == "PASS"
    assert {"lhs", "rhs", "rel_err"} <= set(case)
    assert case["params"] == {"s": 0.25}


def test_zeta_suite_at_half_is_config_error(capsys):
    code, out, err = run(capsys, "verify", "--suite", "zeta", "--s", "0.5")
    assert code == 2
    assert out == ""
    assert "usage" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--suite", "nope"],
        ["eval", "--identity", "NOPE"],
        ["eval", "--identity", "SIN_2_3", "--s", "1,5"],
        ["eval", "--identity", "SIN_2_3", "--s", "nan"],
        ["table", "--x-max", "1"],
        ["table", "--x-min", "2", "--x-max", "1", "--step", "0.1"],
        ["kernel", "--x", "-1"],
        ["kernel", "--phi", "power", "--c", "0", "--x", "1"],
        ["primes", "--op", "count"],
        ["primes", "--op", "count", "--x", "1e9", "--primes-limit", "100"],
        ["primes", "--op", "mobius", "--s", "1"],
        ["primes", "--op", "direct", "--s", "2", "--up-to", "1000", "--primes-limit", "100"],
        ["verify", "--quad-abs-tol", "-1"],
        [],
        ["frobnicate"],
    ],
)
def test_configuration_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_tight_tolerance_fails(capsys):
    code, out, _ = run(capsys, "eval", "--identity", "SIN_2_3", "--tol", "1e-30", "--no-timestamp")
    assert code == 1
    assert json.loads(out)["cases"][0]["status"] == "FAIL"


def test_determinism(capsys):
    argv = ["verify", "--suite", "hurwitz", "--no-timestamp"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert "timestamp" not in json.loads(first)


def test_timestamp_header(capsys):
    _, out, _ = run(capsys, "verify", "--suite", "hurwitz")
    assert list(json.loads(out))[0] == "timestamp"


def test_table_zeta_even(capsys):
    code, out, _ = run(capsys, "table", "--phi", "zeta", "--parity", "EVEN", "--x-max", "50", "--step", "0.5")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert len(rows) == 101
    assert float(rows[0]["x"]) == 0.0
    assert float(rows[0]["value"]) == pytest.approx(math.pi**2 / 6, rel=1e-15)


def test_table_sine_endpoints(capsys):
    _, out, _ = run(capsys, "table", "--parity", "ODD", "--x-max", repr(2 * math.pi), "--num", "9")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert abs(float(rows[0]["value"])) <= 1e-12
    assert abs(float(rows[-1]["value"])) <= 1e-12


def test_table_binomial_decreasing(capsys):
    _, out, _ = run(capsys, "table", "--phi", "binomial", "--a", "1", "--v", "2", "--x-max", "3", "--num", "31")
    values = [float(r["value"]) for r in csv.DictReader(io.StringIO(out))]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_out_file(tmp_path, capsys):
    target = tmp_path / "report.csv"
    code, out, _ = run(capsys, "verify", "--suite", "basic", "--format", "csv", "--out", str(target))
    assert code == 0 and out == ""
    lines = target.read_text().splitlines()
    assert lines[0] == ",".join(ids.CSV_COLUMNS)
    assert len(lines) == 13


def test_kernel_cancellation_flag(capsys):
    _, out, _ = run(capsys, "kernel", "--phi", "zeta", "--parity", "EVEN", "--strategy", "MACLAURIN", "--x", "30")
    assert "CANCELLATION" in json.loads(out)["flags"]


def test_strict_report(capsys):
    code, _, err = run(capsys, "verify", "--suite", "zeta", "--strict-report", "--no-timestamp")
    assert code == 0
    assert "COR22_II_2_9" in err
    assert "DIVERGENT" in err


@pytest.mark.parametrize(
    "op, extra, status",
    [
        ("count", ["--x", "100"], "REPORT_ONLY"),
        ("an", ["--n", "0"], "DIVERGENT"),
        ("an", ["--n", "1"], "REPORT_ONLY"),
        ("divergence", ["--n", "1", "--up-to", "10000"], "DIVERGENT"),
        ("lhs", ["--up-to", "1000"], "DIVERGENT"),
        ("cn", ["--n", "1"], "REPORT_ONLY"),
        ("mobius", ["--s", "3"], "REPORT_ONLY"),
        ("f", ["--s", "3"], "REPORT_ONLY"),
        ("direct", ["--s", "2", "--up-to", "10"], "REPORT_ONLY"),
    ],
)
def test_primes_ops(capsys, op, extra, status):
    code, out, _ = run(capsys, "primes", "--op", op, "--primes-limit", "100000", "--no-timestamp", *extra)
    assert code == 0
    assert json.loads(out)["cases"][0]["status"] == status


def test_primes_count_value(capsys):
    _, out, _ = run(capsys, "primes", "--op", "count", "--x", "100", "--primes-limit", "1000")
    assert json.loads(out)["cases"][0]["lhs"] == 25


def test_threads_env_same_output(monkeypatch, capsys):
    argv = ["verify", "--suite", "pk", "--no-timestamp"]
    _, single, _ = run(capsys, *argv)
    monkeypatch.setenv("RAMELLIN_MAX_THREADS", "4")
    _, threaded, _ = run(capsys, *argv)
    assert single == threaded


def test_decimal_parser():
    assert cli.decimal("1e-3") == 1e-3
    assert cli.integer("1e6") == 10**6
    for bad in ("1,5", "inf", "0x10", ""):
        with pytest.raises(Exception):
            cli.decimal(bad)


def _report(status):
    case = ids.IdentityCase("SIN_2_3", {"a": 1.0, "s": 0.5})
    return ids.IdentityReport(case, 1.0, 1.0, 0.0, 0.0, status)


class _Args:
    format = "json"
    no_timestamp = True
    out = None
    strict_report = False


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from(list(ids.Status)), max_size=8))
def test_exit_code_contract(statuses):
    reports = [_report(s) for s in statuses]
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli._report_output("synthetic", reports, _Args())
    assert code == (1 if ids.Status.FAIL in statuses else 0)
