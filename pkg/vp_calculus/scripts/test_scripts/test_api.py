"""
Test script for the VP calculus API endpoints.

Requests go through FastAPI's TestClient, so the middleware that turns
library errors into JSON responses is exercised as well.
"""

import math

import pytest
from fastapi.testclient import TestClient

from vp_calculus.main import app


@pytest.fixture
def client():
    """Client for the application with its middleware installed."""
    return TestClient(app)


def test_root_endpoint(client):
    """Test the root endpoint."""
    response = client.get("/")
    assert response.status_code == 200
    assert response.json() == {"message": "VP calculus API is running"}
    assert float(response.headers["X-Process-Time"]) >= 0.0


def test_reduce(client):
    """Test the reduce endpoint on a pole pair."""
    response = client.post("/api/reduce", json={"expr": "VP[1/(x-z1)]*VP[1/(x-z2)]", "var": "x"})
    assert response.status_code == 200
    body = response.json()
    assert body["input"].count("VP") == 2
    assert body["terms"] >= 2
    assert "delta" in body["result"]


def test_reduce_parse_error(client):
    """Test that a syntax error becomes a 400 with its position."""
    response = client.post("/api/reduce", json={"expr": "VP[1/(x-"})
    assert response.status_code == 400
    body = response.json()
    assert body["error"] == "ParseError"
    assert body["line"] == 1
    assert body["column"] == 8
    assert "variable" in body["expected"]


def test_reduce_validation(client):
    """Test that an empty expression is rejected by request validation."""
    response = client.post("/api/reduce", json={"expr": ""})
    assert response.status_code == 422
    assert "detail" in response.json()


def test_integrate_delta(client):
    """Test the integrate endpoint with a bound parameter."""
    response = client.post("/api/integrate", json={"expr": "delta(x-y)", "spec": "x=0..1", "params": {"y": 0.25}})
    assert response.status_code == 200
    assert response.json()["value"] == pytest.approx(1.0)


def test_integrate_with_function(client):
    """Test the integrate endpoint with a polynomial test function."""
    response = client.post(
        "/api/integrate",
        json={"expr": "VP[1/(x-y)]*u(x)", "spec": "x=0..1", "params": {"y": 0.3}, "functions": ["u(x) = x"]},
    )
    assert response.status_code == 200
    assert response.json()["value"] == pytest.approx(1.0 + 0.3 * math.log(0.7 / 0.3), abs=1e-8)


def test_integrate_pole_at_endpoint(client):
    """Test that an endpoint pole becomes a 422 naming the step."""
    response = client.post("/api/integrate", json={"expr": "VP[1/(x)]", "spec": "x=0..1"})
    assert response.status_code == 422
    body = response.json()
    assert body["error"] == "PoleAtEndpoint"
    assert body["step"] == 0


def test_quad_dilog(client):
    """Test the dilog quadrature kind."""
    response = client.post("/api/quad", json={"kind": "dilog", "z": 2.0})
    assert response.status_code == 200
    assert response.json()["value"] == pytest.approx(-math.pi**2 / 12.0, abs=1e-12)


def test_quad_pv(client):
    """Test a principal value with a polynomial integrand."""
    response = client.post("/api/quad", json={"kind": "pv", "pole": 0.3, "fn": "x"})
    assert response.status_code == 200
    body = response.json()
    assert body["value"] == pytest.approx(1.0 + 0.3 * math.log(0.7 / 0.3), abs=1e-9)
    assert body["evaluations"] > 0


def test_quad_missing_argument(client):
    """Test that a principal value without a pole is a 400."""
    response = client.post("/api/quad", json={"kind": "pv"})
    assert response.status_code == 400
    assert response.json()["error"] == "SpecError"


def test_quad_domain_error(client):
    """Test that a dilog outside its domain is a 422."""
    response = client.post("/api/quad", json={"kind": "dilog", "z": -1.0})
    assert response.status_code == 422
    assert response.json()["error"] == "DomainError"


def test_simplex(client):
    """Test the simplex endpoint above threshold."""
    response = client.post("/api/simplex", json={"z": 1.0, "route": "A"})
    assert response.status_code == 200
    body = response.json()
    assert body["computed"] == pytest.approx(-math.pi**2 / 3.0, abs=1e-10)
    assert body["passed"] is True


def test_simplex_threshold(client):
    """Test z = 0 with and without one-sided limits."""
    response = client.post("/api/simplex", json={"z": 0.0})
    assert response.status_code == 422
    assert response.json()["error"] == "ThresholdUndefined"

    response = client.post("/api/simplex", json={"z": 0.0, "one_sided": True})
    assert response.status_code == 200
    body = response.json()
    assert body["name"] == "simplex.threshold"
    assert body["computed"] == pytest.approx(-math.pi**2)


def test_verify_only_dilog(client):
    """Test the verify endpoint on the dilog checks."""
    response = client.post("/api/verify", json={"only": ["dilog"]})
    assert response.status_code == 200
    body = response.json()
    assert body["passed"] is True
    assert body["total"] == 3
    assert body["failed"] == []
    assert [report["name"] for report in body["reports"]] == ["dilog.identity", "dilog.at_1", "dilog.at_2"]
