import pytest
from fastapi.testclient import TestClient

from sievelab.service import app

client = TestClient(app, raise_server_exceptions=False)


def test_health():
    r = client.get("/health")
    assert r.status_code == 200 and r.json() == {"status": "ok"}


def test_enumerate_endpoint():
    r = client.post("/enumerate", json={"k": 2, "qmin": 2, "qmax": 4})
    assert r.status_code == 200
    body = r.json()
    assert body["size"] == 16 and len(body["points"]) == 16
    assert body["points"][0].keys() == {"k", "q", "a", "value"}


def test_mnq_endpoint_known_value():
    r = client.post("/mnq", json={"k": 2, "qmin": 2, "qmax": 4, "n": 50})
    assert r.status_code == 200
    body = r.json()
    assert body["m_value"] == 2
    assert body["min_gap"] == "1/144"
    assert set(body["argmax"]) == {"k", "q", "a"}


def test_boxcount_endpoint_full_window():
    r = client.post(
        "/boxcount",
        json={"coefficients": [1, 2, 3], "modulus": 11, "H": 5, "R": 11},
    )
    assert r.status_code == 200
    body = r.json()
    assert body["count"] == 5 and body["k"] == 2 and body["m"] == 11


def test_delta_star_endpoint_schema():
    r = client.post("/delta-star", json={"k": 2, "qmin": 2, "qmax": 2, "n": 5})
    assert r.status_code == 200
    body = r.json()
    assert set(body) == {
        "k", "q_min", "q_max", "N", "M", "family_size",
        "delta_star", "residual", "iterations", "min_spacing",
    }
    assert body["delta_star"] == pytest.approx(6.0, rel=1e-9)
    assert body["residual"] <= 1e-8


def test_bounds_endpoint_with_exponent():
    r = client.post(
        "/bounds", json={"k": 3, "Q": 10.0, "N": 1000.0, "theta": "3"}
    )
    assert r.status_code == 200
    rows = {row["id"]: row for row in r.json()}
    assert len(rows) == 8
    assert rows["munsch-new"]["in_range"] is True
    assert rows["zhao-conjecture"]["exponent"] == "4/1"


def test_crossover_endpoint():
    r = client.post("/crossover", json={"a": "munsch-new", "b": "baier-zhao", "k": 3})
    assert r.status_code == 200
    assert "21/5" in r.json()["crossings"]


def test_regime_map_endpoint():
    r = client.post("/regime-map", json={"k": 3})
    assert r.status_code == 200
    rows = r.json()
    assert rows[0].keys() == {"k", "theta_lo", "theta_hi", "winner_id", "exponent_expression"}
    assert rows[0]["theta_lo"] == "3/1" and rows[-1]["theta_hi"] == "6/1"


def test_partition_endpoint():
    r = client.post("/partition", json={"k": 2, "Q": 4, "n": 16})
    assert r.status_code == 200
    body = r.json()
    assert set(body) == {"n", "blocks", "covering_bound"}
    assert body["covering_bound"] > 0


def test_survey_endpoint_small_grid():
    req = {"grid": [["2", "2", "5/2"], ["2", "3", "3"]]}
    r = client.post("/survey", json=req)
    assert r.status_code == 200
    body = r.json()
    assert len(body["rows"]) == 2
    assert all(row["status"] == "ok" for row in body["rows"])
    assert body["csv"].startswith("k,Q,q_min,q_max,theta,n,")


def test_invalid_argument_maps_to_422():
    r = client.post("/mnq", json={"k": 0, "qmin": 2, "qmax": 4, "n": 5})
    assert r.status_code == 422
    assert r.json()["detail"]["kind"] == "invalid-argument"


def test_resource_limit_maps_to_413():
    r = client.post(
        "/enumerate",
        json={"k": 3, "qmin": 2, "qmax": 500, "budgets": {"max_family": 100}},
    )
    assert r.status_code == 413
    assert r.json()["detail"]["kind"] == "resource-limit"


def test_convergence_maps_to_500():
    r = client.post(
        "/delta-star",
        json={"k": 2, "qmin": 2, "qmax": 6, "n": 100, "max_iters": 1, "tol": 1e-14},
    )
    assert r.status_code == 500
    assert r.json()["detail"]["kind"] == "convergence"


def test_verify_endpoint_quick():
    r = client.post("/verify", json={"quick": True})
    assert r.status_code == 200
    body = r.json()
    assert body["passed"] is True
    assert all(c["ok"] for c in body["checks"])
