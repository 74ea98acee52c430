"""
Test script for the verification scenarios and report rendering.
"""

import csv
import io
import math

import pytest

from vp_calculus.core.errors import DomainError, ThresholdUndefined
from vp_calculus.core.scenarios import (
    CSV_COLUMNS,
    ScenarioReport,
    build_suite,
    cube_c2_determination,
    render_csv,
    render_text,
    simplex_I,
    simplex_one_sided_limits,
    simplex_route_a,
    simplex_route_b,
    simplex_symbolic,
    verify_suite,
)

PI2 = math.pi**2


def _report(name, computed, expected, passed=True, tolerance=1e-6):
    return ScenarioReport(
        name=name,
        computed=computed,
        expected=expected,
        abs_error=abs(computed - expected),
        passed=passed,
        runtime_ms=1.5,
        tolerance=tolerance,
    )


def test_routes_agree_at_one():
    """Test that both closed forms give -pi^2/3 at z = 1."""
    assert simplex_route_a(1.0) == pytest.approx(-PI2 / 3.0, abs=1e-12)
    assert simplex_route_b(1.0) == pytest.approx(-PI2 / 3.0, abs=1e-12)


def test_routes_agree_above_threshold():
    """Test route A against route B on a spread of positive z."""
    for z in (1e-3, 0.1, 0.7, 3.0, 50.0):
        assert simplex_route_a(z) == pytest.approx(simplex_route_b(z), abs=1e-10)


def test_route_domains():
    """Test the domain checks of both routes."""
    with pytest.raises(DomainError):
        simplex_route_a(-0.5)
    with pytest.raises(DomainError):
        simplex_route_b(-1.0)
    with pytest.raises(ThresholdUndefined):
        simplex_route_b(0.0)


def test_route_b_below_threshold():
    """Test route B for -1 < z < 0, where the step term is absent."""
    expected = -2.0 * (PI2 / 12.0 - math.log(2.0) ** 2 / 2.0) + PI2 / 2.0
    assert simplex_route_b(-0.5) == pytest.approx(expected, abs=1e-12)


def test_threshold_limits():
    """Test the one-sided limits and the jump of -pi^2."""
    limits = simplex_one_sided_limits()
    assert limits["minus"] == pytest.approx(PI2 / 2.0)
    assert limits["plus"] == pytest.approx(-PI2 / 2.0)
    assert limits["jump"] == pytest.approx(-PI2)


def test_simplex_at_threshold(settings):
    """Test that z = 0 raises unless one-sided limits are requested."""
    with pytest.raises(ThresholdUndefined):
        simplex_I(0.0, settings=settings)
    report = simplex_I(0.0, one_sided=True, settings=settings)
    assert report.name == "simplex.threshold"
    assert report.passed
    assert report.details["limit_minus"] - report.details["limit_plus"] == pytest.approx(PI2)


def test_simplex_route_a_report(settings):
    """Test a route A report above threshold."""
    report = simplex_I(2.0, "A", settings=settings)
    assert report.name == "simplex.A"
    assert report.passed
    assert report.reference == "route B"
    assert report.computed == pytest.approx(simplex_route_b(2.0), abs=1e-10)


def test_simplex_below_threshold_uses_oracle(settings):
    """Test route B below threshold, checked against the quadrature oracle."""
    report = simplex_I(-0.5, "B", settings=settings)
    assert report.reference == "oracle"
    assert "oracle" in report.details
    assert report.passed, report.abs_error


def test_simplex_unknown_route(settings):
    """Test that an unknown route is rejected."""
    with pytest.raises(ValueError):
        simplex_I(1.0, "C", settings=settings)
    with pytest.raises(DomainError):
        simplex_I(-0.5, "A", settings=settings)


def test_simplex_all_routes(settings):
    """Test that the closed forms, the symbolic pipeline and the oracle agree."""
    report = simplex_I(1.0, "both", settings=settings)
    assert set(report.details) >= {"route_a", "route_b", "oracle", "symbolic"}
    assert report.details["symbolic"] == pytest.approx(-PI2 / 3.0, abs=1e-6)
    assert report.passed, report.details


@pytest.mark.slow
def test_cube_c2(settings):
    """Test the unit-cube determination of C2 = pi^2."""
    regular, bracket, c2 = cube_c2_determination(settings)
    assert [r.name for r in (regular, bracket, c2)] == ["cube.regular_order", "cube.bracket_term", "cube.c2"]
    assert regular.passed and bracket.passed
    assert c2.computed == pytest.approx(PI2, abs=1e-5)
    assert c2.passed


@pytest.mark.parametrize("z", [0.5, 1.0, 2.0])
def test_simplex_symbolic_matches_route_b(z, settings):
    """Test the reduction and integration pipeline on the simplex against route B."""
    assert simplex_symbolic(z, settings).value == pytest.approx(simplex_route_b(z), abs=1e-6)


def test_crashing_check_is_reported(settings, monkeypatch):
    """Test that an unexpected exception becomes a failed report."""
    def broken(z):
        raise ValueError("math domain error")

    monkeypatch.setattr("vp_calculus.core.scenarios.dilog", broken)
    reports = verify_suite(settings, only=["dilog.at"])
    assert [r.name for r in reports] == ["dilog.at_1", "dilog.at_2"]
    assert not any(r.passed for r in reports)
    assert all(r.message.startswith("ValueError") for r in reports)


def test_crashing_group_is_reported(settings, monkeypatch):
    """Test that a whole group that raises is reported under its group name."""
    def broken(*args, **kwargs):
        raise ValueError("math domain error")

    monkeypatch.setattr("vp_calculus.core.scenarios.cube_c2_determination", broken)
    reports = verify_suite(settings, only=["cube"])
    assert [r.name for r in reports] == ["cube"]
    assert not reports[0].passed
    assert "math domain error" in reports[0].message


def test_suite_tiers(settings):
    """Test which checks the slow and long tiers add."""
    default = [name for name, _ in build_suite(settings)]
    slow = [name for name, _ in build_suite(settings, include_slow=True)]
    long = [name for name, _ in build_suite(settings, include_slow=True, include_long=True)]
    assert "three_pole.cube" not in default
    assert "three_pole.cube" in slow and "four_pole.cube" not in slow
    assert {"four_pole.cube", "four_pole.closed_form_cube"} <= set(long)
    assert [f"order_independence.n{n}" for n in (1, 2, 3)] == [n for n in default if n.startswith("order_")]


@pytest.mark.slow
def test_order_independence_uses_twenty_weights(settings):
    """Test that the order-independence check draws 20 random weights."""
    reports = verify_suite(settings, only=["order_independence.n1"])
    assert len(reports) == 1
    assert reports[0].details["cases"] == 20
    assert reports[0].passed, reports[0].abs_error


@pytest.mark.slow
def test_pair_general_checks(settings):
    """Test the reduced higher-pole pairs against the oracle on the unit cube."""
    reports = verify_suite(settings, include_slow=True, only=["pair_general"])
    assert [r.name for r in reports] == ["pair_general.n2_1", "pair_general.n1_2", "pair_general.n2_2"]
    assert all(r.passed for r in reports), [(r.name, r.abs_error) for r in reports]


@pytest.mark.slow
def test_three_pole_cube(settings):
    """Test the reduced three-pole product against the oracle with a non-symmetric weight."""
    reports = verify_suite(settings, include_slow=True, only=["three_pole.cube"])
    assert len(reports) == 1
    assert abs(reports[0].expected) > 1.0
    assert reports[0].passed, reports[0].abs_error


@pytest.mark.slow
@pytest.mark.long
def test_four_pole_cubes(settings):
    """Test the reduced and closed-form four-pole products against the oracle."""
    reports = verify_suite(settings, include_long=True, only=["four_pole"])
    assert [r.name for r in reports] == ["four_pole.cube", "four_pole.closed_form_cube"]
    assert all(r.passed for r in reports), [(r.name, r.abs_error) for r in reports]


def test_verify_only_dilog(settings):
    """Test that a name prefix selects the dilogarithm checks, in suite order."""
    reports = verify_suite(settings, only=["dilog"])
    assert [r.name for r in reports] == ["dilog.identity", "dilog.at_1", "dilog.at_2"]
    assert all(r.passed for r in reports)


def test_verify_fast_path(settings):
    """Test the closed-form checks of the oracle's polynomial fast path."""
    reports = verify_suite(settings, only=["fast_path"])
    assert [r.name for r in reports] == ["fast_path.n1", "fast_path.n2", "fast_path.n3"]
    assert all(r.passed for r in reports), [r.abs_error for r in reports]


def test_verify_with_threads(settings):
    """Test that a thread pool returns the reports in suite order."""
    threaded = settings.model_copy(update={"max_workers": 2})
    names = [r.name for r in verify_suite(threaded, only=["dilog", "simplex.routes"])]
    assert names[:5] == [f"simplex.routes.z={z:g}" for z in (0.25, 0.5, 1.0, 2.0, 5.0)]
    assert names[5:] == ["dilog.identity", "dilog.at_1", "dilog.at_2"]


def test_verify_nothing_selected(settings):
    """Test that an unmatched prefix runs no checks."""
    assert verify_suite(settings, only=["no-such-check"]) == []


def test_render_csv():
    """Test the CSV header, number formatting and boolean spelling."""
    text = render_csv([_report("a", 1.0, 1.0), _report("b", 2.0, 1.0, passed=False)])
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert rows[1][0] == "a" and rows[1][4] == "true"
    assert rows[2][4] == "false"
    assert float(rows[2][3]) == 1.0
    assert len(rows) == 3


def test_render_text():
    """Test the text summary line and the empty case."""
    assert render_text([]) == "no checks run\n"
    text = render_text([_report("alpha", 1.0, 1.0), _report("beta", 2.0, 1.0, passed=False)])
    lines = text.splitlines()
    assert lines[0].startswith("PASS  alpha")
    assert lines[1].startswith("FAIL  beta")
    assert "1/2 passed" in lines
    assert lines[-1].startswith("tightest margins: beta")


def test_report_margin():
    """Test the margin of a report against its tolerance."""
    assert _report("a", 1.0, 1.0).margin == 1.0
    assert _report("a", 1.0, 1.0, tolerance=0.0).margin == float("-inf")
    assert _report("a", 1.0, 1.0).to_dict()["name"] == "a"
