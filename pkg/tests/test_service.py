import pytest
from fastapi.testclient import TestClient

from focusgen.render import CATALOG
from focusgen.service.app import create_app

from conftest import corpus_source


@pytest.fixture(scope="module")
def client():
    with TestClient(create_app()) as c:
        yield c


def _model_payload(name: str, **extra):
    payload = {
        "source": corpus_source(name),
        "syntax": "json" if name.endswith(".json") else "dsl",
        "filename": name,
    }
    payload.update(extra)
    return payload


class TestHealth:
    def test_health(self, client):
        resp = client.get("/api/health")
        assert resp.status_code == 200
        assert resp.json()["status"] == "ok"


class TestGenerate:
    def test_generates_both_formats(self, client):
        resp = client.post("/api/generate", json=_model_payload("echo.afm"))
        body = resp.json()
        assert resp.status_code == 200 and body["ok"]
        assert [d["filename"] for d in body["documents"]] == ["Echo.spec.tex", "Echo.spec.txt"]

    def test_single_format(self, client):
        resp = client.post("/api/generate", json=_model_payload("chain.afm", format="text"))
        body = resp.json()
        assert [d["filename"] for d in body["documents"]] == ["Pass.spec.txt", "Chain.spec.txt"]

    def test_interchange_source(self, client):
        resp = client.post("/api/generate", json=_model_payload("echo.json"))
        assert resp.json()["ok"]

    def test_model_errors_block_documents(self, client):
        resp = client.post("/api/generate", json={"source": "model M {", "syntax": "dsl"})
        body = resp.json()
        assert not body["ok"]
        assert body["documents"] == []
        assert body["diagnostics"]

    def test_bad_format_is_a_422(self, client):
        resp = client.post("/api/generate", json=_model_payload("echo.afm", format="pdf"))
        assert resp.status_code == 422


class TestCheck:
    def test_model_check(self, client):
        resp = client.post("/api/check/model", json=_model_payload("vending.afm"))
        assert resp.json()["ok"]

    def test_spec_check(self, client):
        resp = client.post("/api/check/spec", json={"source": "spec S\n  in  x : Bool\n  gar\n    (1) x(t) = true\nend\n"})
        assert resp.json()["ok"]

    def test_spec_check_reports_errors(self, client):
        resp = client.post("/api/check/spec", json={"source": "spec S\n  gar\n    (1) ghost(t) ⊕ 1\nend\n"})
        body = resp.json()
        assert not body["ok"]
        codes = {d["code"] for d in body["diagnostics"]}
        assert "unknown-operator" in codes and "undeclared-stream" in codes


class TestSimulate:
    def test_trace_round(self, client):
        payload = _model_payload("echo.afm", inputs="0; x=on\n1; x=off\n2; x=on\n")
        resp = client.post("/api/simulate", json=payload)
        body = resp.json()
        assert body["ok"]
        lines = body["trace"].splitlines()
        assert lines[0] == "trace EchoM Echo horizon 3"
        assert lines[2].startswith("0; x=on; y=on")

    def test_horizon_mismatch(self, client):
        payload = _model_payload("echo.afm", inputs="0; x=on\n", horizon=3)
        resp = client.post("/api/simulate", json=payload)
        assert not resp.json()["ok"]

    def test_nondeterminism_needs_tie_break(self, client):
        source = """
        model M {
          component C (weak) {
            in x: Bool
            out y: Bool
            automaton {
              initial state A
              when A (x = *) emit y = true -> A
              when A (x = true) emit y = false -> A
            }
          }
        }
        """
        resp = client.post("/api/simulate", json={"source": source, "inputs": "0; x=true\n"})
        body = resp.json()
        assert not body["ok"]
        assert any(d["code"] == "nondeterministic" for d in body["diagnostics"])
        resp = client.post("/api/simulate", json={"source": source, "inputs": "0; x=true\n", "tie_break": "order"})
        body = resp.json()
        assert body["ok"]
        assert "y=true" in body["trace"]  # first declared transition wins


class TestOracle:
    def test_echo_is_faithful(self, client):
        resp = client.post("/api/oracle", json=_model_payload("echo.afm"))
        body = resp.json()
        assert body["status"] == "satisfied"
        assert body["components"][0]["sequences"] == 81

    def test_budget(self, client):
        resp = client.post("/api/oracle", json=_model_payload("echo.afm", budget=10))
        assert resp.json()["status"] == "budget-exceeded"

    def test_nondeterministic_model_is_refused(self, client):
        source = """
        model M {
          component C (weak) {
            in x: Bool
            out y: Bool
            automaton {
              initial state A
              when A (x = *) emit y = true -> A
              when A (x = true) emit y = false -> A
            }
          }
        }
        """
        resp = client.post("/api/oracle", json={"source": source})
        body = resp.json()
        assert body["status"] == "error"
        assert any(d["code"] == "nondeterministic" for d in body["diagnostics"])


class TestDrift:
    def test_unchanged(self, client):
        gen = client.post("/api/generate", json=_model_payload("echo.afm")).json()
        existing = {d["filename"]: d["body"] for d in gen["documents"]}
        resp = client.post("/api/diff", json=_model_payload("echo.afm", existing=existing))
        body = resp.json()
        assert body["clean"]
        assert body["entries"] == [{"component": "Echo", "status": "unchanged", "diff": ""}]

    def test_changed_and_orphaned(self, client):
        gen = client.post("/api/generate", json=_model_payload("echo.afm")).json()
        existing = {d["filename"]: d["body"] for d in gen["documents"]}
        renamed = corpus_source("echo.afm").replace("Idle", "Ready")
        resp = client.post("/api/diff", json={"source": renamed, "existing": existing})
        body = resp.json()
        assert not body["clean"]
        entry = body["entries"][0]
        assert entry["status"] == "changed"
        assert "Ready" in entry["diff"]

        other = corpus_source("passthru.afm")
        resp = client.post("/api/diff", json={"source": other, "existing": existing})
        body = resp.json()
        statuses = {e["component"]: e["status"] for e in body["entries"]}
        assert statuses == {"Pass": "new", "Echo": "orphaned"}


class TestTemplatesAndOperators:
    def test_template_skeleton(self, client):
        resp = client.get("/api/template/component-frame")
        assert resp.status_code == 200
        assert resp.json()["body"].lstrip("/ \n").startswith("Component frame skeleton")

    def test_unknown_template_is_404(self, client):
        assert client.get("/api/template/nope").status_code == 404

    def test_operators_match_the_catalog(self, client):
        resp = client.get("/api/operators")
        entries = resp.json()["entries"]
        assert len(entries) == len(CATALOG)
        assert {e["kind"] for e in entries} == {e.kind for e in CATALOG}
