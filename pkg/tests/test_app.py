import pytest

import app as app_module
from hyperseq.store import ResultStore

EXAMPLE = "n!*mfoldInd(n,4,2)+2^n*mfoldInd(n,2,1)"


@pytest.fixture
def client(tmp_path, monkeypatch):
    monkeypatch.setattr(app_module, "db", ResultStore(str(tmp_path / "api.db")))
    app_module.app.config["TESTING"] = True
    with app_module.app.test_client() as client:
        yield client


def post(client, path, **body):
    response = client.post(path, json=body)
    return response.status_code, response.get_json()


def test_health(client):
    data = client.get("/health").get_json()
    assert data["status"] == "healthy"
    assert data["version"]


class TestEval:
    def test_at(self, client):
        status, body = post(client, "/api/eval", expr=EXAMPLE, at=6)
        assert status == 200
        assert body["success"] is True
        assert body["data"] == {"at": 6, "value": "720"}

    def test_range(self, client):
        status, body = post(client, "/api/eval", expr=EXAMPLE, range="0..3")
        assert status == 200
        assert body["data"]["values"] == ["0", "2", "2", "8"]

    @pytest.mark.parametrize(
        "body",
        [
            {"expr": "n"},
            {"at": 3},
            {"expr": "n", "at": -1},
            {"expr": "n", "range": "3..1"},
            {"expr": "n", "range": "0..20000"},
            {"expr": "n^", "at": 1},
            {"expr": "n", "at": 1, "format": "html"},
        ],
    )
    def test_bad_requests(self, client, body):
        status, data = post(client, "/api/eval", **body)
        assert status == 400
        assert data["success"] is False

    def test_lowering_error_kind(self, client):
        status, body = post(client, "/api/eval", expr="factorial(n/2)", at=2)
        assert status == 400
        assert body["kind"] == "support"

    def test_pole(self, client):
        status, body = post(client, "/api/eval", expr="1/pochhammer(-2,n)", at=5)
        assert status == 422
        assert body["success"] is False


def test_rec(client):
    status, body = post(client, "/api/rec", expr="pochhammer(2,n)")
    assert status == 200
    assert body["data"] == {"order": 1, "recurrence": "-(n+2)*a(n) + a(n+1) = 0"}

    _, body = post(client, "/api/rec", expr="2^n", format="json")
    assert body["data"]["recurrence"] == {"order": 1, "coeffs": [["-2"], ["1"]]}


def test_rec_max_order(client):
    status, body = post(client, "/api/rec", expr="n!*mfoldInd(n, 4, 3) + pochhammer(2, n)", max_order=5)
    assert status == 200
    assert body["data"]["order"] == 5

    status, body = post(client, "/api/rec", expr="n!*mfoldInd(n, 4, 3) + pochhammer(2, n)", max_order=4)
    assert status == 422
    assert "exceeds the bound 4" in body["error"]

    for bad in (0, "5", True):
        status, _ = post(client, "/api/rec", expr="n!", max_order=bad)
        assert status == 400


def test_product(client):
    _, body = post(client, "/api/product", left="mfoldInd(n,3,1)", right="mfoldInd(n,2,0)")
    assert body["data"]["result"] == "mfoldInd(n,6,4)"


def test_normalize(client):
    _, body = post(client, "/api/normalize", expr="mfoldInd(n,2,0)+mfoldInd(n,2,1)")
    assert body["data"] == {"result": "1", "components": 1}


def test_verify_rec(client):
    status, body = post(client, "/api/verify-rec", rec="a(n+1) = (n+1)*a(n)", expr="n!", range="0..40")
    assert status == 200
    assert body["data"] == {"valid": True, "range": [0, 40]}


def test_equal_is_journaled(client):
    assert post(client, "/api/equal", left="(n+1)!", right="(n+1)*n!")[1]["data"]["equal"] is True
    assert post(client, "/api/equal", left="n!", right="n^2")[1]["data"]["equal"] is False

    stats = client.get("/api/stats").get_json()["data"]
    assert (stats["equal"], stats["true"], stats["false"]) == (2, 1, 1)

    history = client.get("/api/history?kind=equal&limit=1").get_json()["data"]
    assert len(history["results"]) == 1
    assert history["has_more"] is True
    assert history["results"][0]["verdict"] is False
