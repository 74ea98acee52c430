"""
Test script for the vp-calc command-line interface.
"""

import csv
import io
import math

import pytest

from vp_calculus.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, build_parser, parse_params, run
from vp_calculus.core.errors import SpecError
from vp_calculus.core.scenarios import simplex_route_b


def _run(*argv):
    out, err = io.StringIO(), io.StringIO()
    status = run(build_parser().parse_args(list(argv)), out=out, err=err)
    return status, out.getvalue(), err.getvalue()


def _value(text):
    for line in text.splitlines():
        if line.startswith("value = "):
            return float(line.split("=", 1)[1])
    raise AssertionError(f"no value line in {text!r}")


def test_parse_params():
    """Test NAME=VALUE parsing and its errors."""
    assert parse_params(["y=0.5", " z = -2 "]) == {"y": 0.5, "z": -2.0}
    for bad in (["y"], ["y=abc"], ["y=inf"], ["1y=2"]):
        with pytest.raises(SpecError):
            parse_params(bad)


def test_quad_dilog():
    """Test the dilog quadrature command."""
    status, out, _ = _run("quad", "dilog", "--z", "2")
    assert status == EXIT_OK
    assert _value(out) == pytest.approx(-math.pi**2 / 12.0, abs=1e-12)


def test_quad_dilog_domain_error():
    """Test that a domain error exits with status 1."""
    status, out, err = _run("quad", "dilog", "--z", "-1")
    assert status == EXIT_FAILED
    assert out == ""
    assert "DomainError" in err


def test_unexpected_numeric_error_exits_with_failure(monkeypatch):
    """Test that a ValueError from a computation is reported instead of escaping."""
    def broken(z):
        raise ValueError("math domain error")

    monkeypatch.setattr("vp_calculus.cli.dilog", broken)
    status, out, err = _run("quad", "dilog", "--z", "2")
    assert status == EXIT_FAILED
    assert out == ""
    assert err.startswith("error: ValueError")


def test_quad_pv_and_log():
    """Test the principal-value and log-weighted quadrature commands."""
    status, out, _ = _run("quad", "pv", "--pole", "0.5", "--degree", "2")
    assert status == EXIT_OK
    assert _value(out) == pytest.approx(-4.0, abs=1e-9)
    assert "evaluations = " in out

    status, out, _ = _run("quad", "log", "--center", "0", "--fn", "x")
    assert status == EXIT_OK
    assert _value(out) == pytest.approx(-0.25, abs=1e-10)


def test_quad_csv():
    """Test the CSV output of a quadrature."""
    status, out, _ = _run("--format", "csv", "quad", "pv", "--pole", "0.3", "--fn", "x")
    assert status == EXIT_OK
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["value", "error_estimate", "evaluations"]
    assert float(rows[1][0]) == pytest.approx(1.0 + 0.3 * math.log(0.7 / 0.3), abs=1e-9)


def test_quad_bad_polynomial():
    """Test that a malformed polynomial is a usage error."""
    status, _, err = _run("quad", "pv", "--pole", "0.5", "--fn", "x + q")
    assert status == EXIT_USAGE
    assert err.startswith("error: ")


def test_reduce():
    """Test that a pole pair reduces to terms with one pole each."""
    status, out, _ = _run("reduce", "VP[1/(x-z1)]*VP[1/(x-z2)]", "--var", "x")
    assert status == EXIT_OK
    assert "VP" in out and "delta" in out
    assert out.endswith("\n")


def test_reduce_parse_error():
    """Test that a syntax error reports its column and exits with status 2."""
    status, out, err = _run("reduce", "VP[1/(x-")
    assert status == EXIT_USAGE
    assert out == ""
    assert "column 8" in err


def test_integrate_delta():
    """Test a delta integration with a bound parameter."""
    status, out, _ = _run("integrate", "delta(x-y)", "x=0..1", "--param", "y=0.25")
    assert status == EXIT_OK
    assert _value(out) == pytest.approx(1.0)


def test_integrate_with_function():
    """Test a weighted principal value with a polynomial test function."""
    status, out, _ = _run(
        "integrate", "VP[1/(x-y)]*u(x)", "x=0..1", "--fn", "u(x) = x", "--param", "y=0.3"
    )
    assert status == EXIT_OK
    assert _value(out) == pytest.approx(1.0 + 0.3 * math.log(0.7 / 0.3), abs=1e-8)


def test_integrate_symbolic():
    """Test that --symbolic prints the expression instead of a value."""
    status, out, _ = _run("integrate", "VP[1/(x-y)]", "x=0..1", "--symbolic")
    assert status == EXIT_OK
    assert "log" in out
    assert "value" not in out


def test_integrate_unbound_parameter():
    """Test that a parameter left unbound is a usage error."""
    status, _, err = _run("integrate", "VP[1/(x-y)]", "x=0..1")
    assert status == EXIT_USAGE
    assert "Unbound variables: y" in err


def test_integrate_bad_spec():
    """Test that a malformed spec is a usage error."""
    status, _, _ = _run("integrate", "1", "x=0..")
    assert status == EXIT_USAGE


def test_iz_scan_skips_threshold():
    """Test the scan table and the comment written for the threshold point."""
    status, out, _ = _run("--format", "csv", "iz-scan", "--min", "-0.5", "--max", "0.5", "--steps", "3")
    assert status == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "z,route_a,route_b,oracle,abs_disagreement"
    assert lines[2].startswith("# z=0 skipped")
    below = lines[1].split(",")
    above = lines[3].split(",")
    assert below[1] == ""
    assert float(below[4]) < 1e-6
    assert float(above[4]) < 1e-6
    assert float(above[2]) == pytest.approx(simplex_route_b(0.5), rel=1e-12)


def test_verify_only_dilog():
    """Test that the dilog checks pass and the exit status reflects it."""
    status, out, _ = _run("verify", "--only", "dilog")
    assert status == EXIT_OK
    assert "3/3 passed" in out


def test_verify_nothing_selected():
    """Test that running no checks is a failure."""
    status, out, _ = _run("verify", "--only", "no-such-check")
    assert status == EXIT_FAILED
    assert out == "no checks run\n"


def test_verify_tiers_parse():
    """Test the slow and long flags of verify."""
    args = build_parser().parse_args(["verify", "--slow", "--long"])
    assert args.slow and args.long
    assert not build_parser().parse_args(["verify"]).long


def test_global_flags():
    """Test that the global numeric flags reach the settings."""
    status, out, _ = _run("--tol", "1e-9", "--eps0", "0.05", "--seed", "7", "quad", "pv", "--pole", "0.5")
    assert status == EXIT_OK
    assert _value(out) == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(SystemExit):
        build_parser().parse_args(["--tol", "-1", "quad", "dilog", "--z", "1"])
