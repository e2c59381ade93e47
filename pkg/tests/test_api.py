"""
API endpoint tests: every route answers with the documented status and body.
"""

import pytest
from fastapi.testclient import TestClient

from corals.main import app
from corals.schemas import CoralModel, MorseTreeModel

DEGREE = {"positive": [[6, 3], [-6, 2]], "negative": [[0, -5]]}
CONSTRAINT = {"entries": [{"direction": [2, 1], "value": "4"}]}


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


@pytest.fixture
def coral_body(simple_coral):
    return CoralModel.from_coral(simple_coral).model_dump(mode="json")


@pytest.fixture
def tree_body(simple_tree):
    return MorseTreeModel.from_tree(simple_tree).model_dump(mode="json")


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "healthy"


@pytest.mark.parametrize("endpoint,body,key,expected", [
    ("/api/v1/moduli/enumerate", DEGREE, "degree", DEGREE),
    ("/api/v1/counting/count", {"degree": DEGREE, "constraint": CONSTRAINT}, "total", "1"),
    ("/api/v1/counting/stable-range", {"degree": DEGREE, "constraint": CONSTRAINT}, "stable", True),
])
def test_degree_endpoints(client, endpoint, body, key, expected):
    response = client.post(endpoint, json=body)
    assert response.status_code == 200
    assert response.json()[key] == expected


def test_sample_is_deterministic(client):
    first = client.post("/api/v1/counting/sample?seed=9", json=DEGREE).json()
    second = client.post("/api/v1/counting/sample?seed=9", json=DEGREE).json()
    assert first == second
    assert first["entries"][0]["direction"] == [2, 1]


def test_coral_endpoints(client, coral_body):
    assert client.post("/api/v1/corals/validate", json=coral_body).json()["valid"] is True
    assert len(client.post("/api/v1/corals/extend", json=coral_body).json()["rays"]) == 3


def test_morse_endpoints(client, tree_body, coral_body):
    report = client.post("/api/v1/morse/validate", json=tree_body).json()
    assert report["valid"] is True
    assert report["accelerations"] == {"0": 5, "1": 3, "2": 2}
    assert report["contracted"] == [0]

    lifted = client.post("/api/v1/morse/lift", json={"tree": tree_body, "heights": ["2"]})
    assert lifted.status_code == 200
    assert lifted.json()["positions"]["1"] == ["0", "2"]

    projected = client.post("/api/v1/morse/project", json={"coral": coral_body})
    assert projected.json()["decoration"] == [0, 3, 5]


def test_quotient_endpoints(client, coral_body):
    body = client.post("/api/v1/quotient/area", json={"coral": coral_body, "b": 1}).json()
    assert body["area"] == 15
    assert body["intersections"]["1"] == 3
    assert body["perturbations_agree"] is True

    job = {
        "degree": {"positive": [[1, 4], [1, 2]], "negative": [[-2, -6]]},
        "constraint": {"entries": [{"direction": [1, 4], "value": "-20"}]},
        "b": 1,
        "a_max": 0,
    }
    assert client.post("/api/v1/quotient/series", json=job).json()["coefficients"] == {"0": "1"}


def test_library_errors_map_to_status_codes(client, tree_body):
    bad = {"degree": DEGREE, "constraint": {"entries": [{"direction": [2, 1], "value": "-4"}]}}
    response = client.post("/api/v1/counting/count", json=bad)
    assert response.status_code == 422
    assert response.json()["error"] == "BadConstraint"

    response = client.post("/api/v1/morse/lift", json={"tree": tree_body, "heights": ["1"]})
    assert response.status_code == 422
    assert response.json()["error"] == "HeightsInfeasible"

    response = client.post("/api/v1/quotient/series", json={"degree": DEGREE})
    assert response.status_code == 400
    assert response.json()["error"] == "ParseError"


def test_schema_errors_are_rejected(client):
    response = client.post("/api/v1/moduli/enumerate", json={"positive": "nope"})
    assert response.status_code == 422
