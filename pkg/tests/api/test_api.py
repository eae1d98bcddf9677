import numpy as np
import pytest
from fastapi.routing import APIRoute
from fastapi.testclient import TestClient

from ttspin.main import app
from ttspin.schemas import TOMOGRAPHY


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_root_redirects_to_docs(client):
    response = client.get("/", follow_redirects=False)

    assert response.status_code == 307
    assert response.headers["location"] == "/docs"


def test_singlet_concurrence(client):
    response = client.get("/states/concurrence", params={"c": "-1,-1,-1"})

    assert response.status_code == 200
    assert response.json()["concurrence"] == pytest.approx(1.0)


@pytest.mark.parametrize("c", ["1,2", "a,b,c"])
def test_malformed_correlations(client, c):
    assert client.get("/states/concurrence", params={"c": c}).status_code == 422


def test_unphysical_concurrence_is_rejected(client):
    response = client.get("/states/concurrence", params={"c": "1,1,1"})

    assert response.status_code == 422
    assert "eigenvalue" in response.json()["detail"]


def test_markers_of_mixed_state(client):
    result = client.get("/states/markers", params={"c": "0,0,0"}).json()

    assert result["physical"]
    assert result["minEigenvalue"] == pytest.approx(0.25)
    assert result["concurrence"] == 0.0
    assert not result["entangled"]


def test_markers_of_unphysical_state(client):
    result = client.get("/states/markers", params={"c": "1,1,1"}).json()

    assert not result["physical"]
    assert "concurrence" not in result


def test_gg_threshold_state(client):
    response = client.get("/production/gg/state", params={"beta": 0.0, "theta": 1.0})

    assert response.status_code == 200
    result = response.json()
    assert result["basis"] == "helicity"
    assert np.allclose(result["c"], -np.eye(3))
    assert result["markers"]["concurrence"] == pytest.approx(1.0)


def test_state_query_bounds(client):
    assert client.get("/production/gg/state", params={"beta": 1.5, "theta": 1.0}).status_code == 422
    assert client.get("/production/tt/state", params={"beta": 0.5, "theta": 1.0}).status_code == 422


def test_qqbar_criticals(client):
    result = client.get("/production/qqbar/criticals", params={"theta": 1.2}).json()

    assert result["betaPh1"] == 0.0
    assert result["betaPh2"] is None


def test_criticals_reject_collinear_angle(client):
    response = client.get("/production/gg/criticals", params={"theta": 0.0})

    assert response.status_code == 422
    assert "theta" in response.json()["detail"]


def test_gg_angular_average_at_threshold(client):
    result = client.get("/phase-space/gg/angular", params={"beta": 0.0}).json()

    assert result["aTilde"] == pytest.approx(7 / 192)
    assert result["deltaAxial"] == pytest.approx(1.0)
    assert result["chshAngular"] == pytest.approx(2.0 * np.sqrt(2.0))


def test_gg_angular_average_diverges_at_light_speed(client):
    assert client.get("/phase-space/gg/angular", params={"beta": 1.0}).status_code == 422


def test_gg_phase_space_criticals(client):
    result = client.get("/phase-space/criticals").json()

    assert result["betaPh"] == pytest.approx(0.632, abs=1e-3)
    assert result["massCh"] == pytest.approx(374.0, abs=1.0)


def test_luminosity(client):
    response = client.get("/luminosity", params={"m_tt": 400.0, "pdf": "toy-gluon-only", "sqrt_s": 2000.0})

    assert response.status_code == 200
    result = response.json()
    assert result["lQq"] == 0.0
    assert result["lGg"] > 0.0
    assert result["wGg"] == pytest.approx(1.0)


@pytest.mark.parametrize(
    "params",
    [
        {"m_tt": 400.0, "pdf": "/etc/hosts"},
        {"m_tt": 400.0, "q_scale": "fixed"},
        {"m_tt": 400.0, "sqrt_s": 300.0},
        {"m_tt": 300.0},
    ],
)
def test_luminosity_rejects_bad_queries(client, params):
    assert client.get("/luminosity", params=params).status_code == 422


def test_tomography_report(client):
    params = {"lo": 346.0, "hi": 350.0, "n": 500, "seed": 3, "pdf": "toy-gluon-only"}
    response = client.get("/tomography/report", params=params)

    assert response.status_code == 200
    assert TOMOGRAPHY.validate(response.json())


@pytest.mark.parametrize(
    "params",
    [
        {"lo": 350.0, "hi": 346.0},
        {"lo": 346.0, "hi": 350.0, "n": 50},
        {"lo": 300.0, "hi": 350.0},
    ],
)
def test_tomography_rejects_bad_queries(client, params):
    assert client.get("/tomography/report", params=params).status_code == 422


def test_every_route_is_documented():
    routes = [route for route in app.routes if isinstance(route, APIRoute)]

    assert len(routes) >= 9
    for route in routes:
        assert route.endpoint.__doc__, route.path


def test_openapi_descriptions(client):
    paths = client.get("/openapi.json").json()["paths"]

    assert paths["/states/markers"]["get"]["description"]
    assert paths["/tomography/report"]["get"]["description"]
