import pytest
from fastapi.testclient import TestClient

from src.controllers.MeshController import MeshController
from src.core.app import create_app
from src.core.middleware import cors_origins
from src.utils.config import Config
from src.utils.helpers import get_settings


@pytest.fixture
def app():
    return create_app()


@pytest.fixture
def client(app):
    with TestClient(app) as client:
        yield client


def test_welcome_and_health(client):
    response = client.get("/api/v1/")
    assert response.status_code == 200
    body = response.json()
    assert body["app_name"] == "DualFlux"
    assert body["schemes"] == ["mixed", "tpfa", "petrov"]
    assert client.get("/api/v1/health").json() == {"status": "healthy"}


def test_solve(client):
    response = client.post("/api/v1/schemes/solve", json={"scheme": "mixed", "n": 4})
    assert response.status_code == 200
    body = response.json()
    assert body["message"] == "solve_completed"
    assert body["summary"]["num_cells"] == 32
    assert body["summary"]["e_V"] > 0


def test_solve_with_closure(client):
    response = client.post("/api/v1/schemes/solve",
                           json={"scheme": "petrov", "n": 6, "closure": "minouter", "case": "bubble"})
    assert response.status_code == 200
    assert response.json()["summary"]["closure"] == "minouter"


@pytest.mark.parametrize("payload", [
    {"scheme": "fem", "n": 4},
    {"scheme": "mixed", "n": 0},
    {"scheme": "mixed", "n": 4, "case": "cosine"},
    {"scheme": "petrov", "n": 4, "closure": "bogus"},
    {"scheme": "mixed", "n": 4, "split": "zigzag"},
])
def test_solve_rejects_bad_requests(client, payload):
    assert client.post("/api/v1/schemes/solve", json=payload).status_code == 422


def test_converge(client):
    response = client.post("/api/v1/schemes/converge", json={"scheme": "tpfa", "levels": [2, 4, 8]})
    assert response.status_code == 200
    report = response.json()["report"]
    assert [level["n"] for level in report["levels"]] == [2, 4, 8]
    assert set(report["rates"]) == {"e_u", "e_p", "e_div", "e_V", "e_cell"}


@pytest.mark.parametrize("levels", [[2, 4], [8, 4, 16], [64, 128, 512]])
def test_converge_rejects_bad_levels(client, levels):
    response = client.post("/api/v1/schemes/converge", json={"scheme": "mixed", "levels": levels})
    assert response.status_code == 422


def test_infsup(client):
    response = client.get("/api/v1/schemes/infsup/2")
    assert response.status_code == 200
    assert 0 < response.json()["infsup"] <= 1
    assert client.get("/api/v1/schemes/infsup/40").status_code == 422
    assert client.get("/api/v1/schemes/infsup/0").status_code == 422


def test_numerical_failure_is_a_server_error(app):
    app.dependency_overrides[get_settings] = lambda: Config(saddle_solver="schur", iterative_maxiter=1)
    with TestClient(app) as client:
        response = client.post("/api/v1/schemes/solve", json={"scheme": "mixed", "n": 4})
    assert response.status_code == 500
    assert "did not converge" in response.json()["detail"]


def test_metrics_endpoint(client):
    client.post("/api/v1/schemes/solve", json={"scheme": "tpfa", "n": 2})
    response = client.get("/metrics")
    assert response.status_code == 200
    assert "dualflux_solves_total" in response.text


@pytest.mark.parametrize("raw, expected", [
    ("*", ["*"]),
    ("http://a.test, http://b.test", ["http://a.test", "http://b.test"]),
    ("http://a.test,,", ["http://a.test"]),
])
def test_cors_origins(raw, expected):
    assert cors_origins(raw) == expected


def test_numerical_settings():
    numerical = {name for name in Config.model_fields if "tolerance" in name or "quadrature" in name}
    assert numerical == {
        "degeneracy_tolerance", "rank_tolerance", "admissibility_tolerance",
        "rhs_quadrature_degree", "error_quadrature_degree",
    }


def test_settings_read_the_environment(monkeypatch):
    monkeypatch.setenv("RANK_TOLERANCE", "1e-8")
    monkeypatch.setenv("INFSUP_MAX_SIZE", "500")
    settings = Config()
    assert settings.rank_tolerance == 1e-8
    assert settings.infsup_max_size == 500


@pytest.mark.parametrize("n", [200, 600])
def test_oversized_infsup_fails_fast(client, monkeypatch, n):
    def refuse(*args, **kwargs):
        raise AssertionError("mesh built for an oversized inf-sup request")

    monkeypatch.setattr(MeshController, "build_structured", refuse)
    assert client.get(f"/api/v1/schemes/infsup/{n}").status_code == 422
