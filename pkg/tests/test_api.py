import pytest
from fastapi.testclient import TestClient

from app.main import app
from app.services.fusion_service import dump_model
from app.services.library_service import triplet


@pytest.fixture
def client():
    return TestClient(app)


def test_root(client):
    assert client.get("/").status_code == 200


def test_list_and_get_models(client):
    listing = client.get("/models").json()
    assert "triplet" in listing["models"]
    assert listing["families"]["family_C"] == {"p": 2}

    response = client.get("/models/triplet", params={"p": 3})
    assert response.status_code == 200
    assert response.json()["name"] == "triplet(3)"


def test_unknown_model_is_unprocessable(client):
    response = client.get("/models/nope")
    assert response.status_code == 422
    assert "available" in response.json()["detail"]


def test_validate_document(client):
    response = client.post("/validate", json=dump_model(triplet(2)))
    assert response.status_code == 200
    assert response.json()["ok"] is True


def test_validate_rejects_schema_errors(client):
    response = client.post("/validate", json={"labels": []})
    assert response.status_code == 422


def test_extend_builtin_and_document(client):
    response = client.post("/extend", json={"model": "triplet", "parameters": {"p": 2}})
    assert response.status_code == 200
    assert response.json()["parity"] == "IntegerGradedSVOA_WrongStatistics"

    response = client.post("/extend", json={"document": dump_model(triplet(2)), "current": "X1-"})
    assert response.json()["route"] == "spin-statistics"


def test_strict_extend_conflicts(client):
    response = client.post("/extend", json={"model": "virasoro", "strict": True})
    assert response.status_code == 409


def test_lift(client):
    response = client.post("/lift", json={"model": "triplet", "module": "X2+"})
    assert response.status_code == 200
    assert response.json()[0]["lifts"] is False
    sweep = client.post("/lift", json={"model": "triplet"}).json()
    assert len(sweep) == 6


def test_family(client):
    payload = client.get("/families/C", params={"p": 2}).json()
    assert payload["parity_matches"] is True
    report = client.get("/families/n4", params={"compare": False}).json()
    assert report["parity"] == "VOSA"
    assert client.get("/families/B", params={"p": 6}).status_code == 422


def test_cocycles(client):
    payload = client.get("/cocycles/Z2/4").json()
    assert payload["count"] == 4
    assert len(payload["classes"]) == 4
    assert client.get("/cocycles/Z5/2").status_code == 422
