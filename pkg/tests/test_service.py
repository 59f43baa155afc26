"""HTTP API surface against a simulated store."""

import json
from datetime import timedelta

import pytest
from fastapi.testclient import TestClient

from prepmark.questionbank import load_bank, seed_bank_text, synthesize_correct_response
from prepmark.service import ServiceConfig, create_app
from prepmark.service.views import followup_body, status_body
from prepmark.session import EventStore
from prepmark.session.engine import response_to_json
from prepmark.simulate import DEFAULT_DEADLINE, cohort_from_bank, simulate_cohort


@pytest.fixture(scope="module")
def small_store(tmp_path_factory):
    root = tmp_path_factory.mktemp("svc") / "store"
    bank_text = seed_bank_text()
    store = EventStore.init(root, bank_text,
                            cohort_from_bank(load_bank(bank_text), DEFAULT_DEADLINE))
    simulate_cohort(store, 12, seed=5)
    return store


@pytest.fixture()
def client_pre_deadline(small_store):
    config = ServiceConfig(store=small_store.root,
                           fake_now=DEFAULT_DEADLINE - timedelta(days=2))
    return TestClient(create_app(small_store, config), raise_server_exceptions=False)


@pytest.fixture()
def client_post_deadline(small_store):
    config = ServiceConfig(store=small_store.root,
                           fake_now=DEFAULT_DEADLINE + timedelta(days=1))
    return TestClient(create_app(small_store, config), raise_server_exceptions=False)


def token_for(store, student_id):
    return store.engine.roster[student_id]


class TestTests:
    def test_lists_six_subtests(self, client_pre_deadline):
        doc = client_pre_deadline.get("/api/v1/tests").json()
        assert [s["topic"] for s in doc["subtests"]] == [
            "Algebra", "Numbers", "Geometry", "Functions", "Calculus", "LogicAndSets",
        ]
        assert doc["pass_mark"] == 0.75

    def test_status_included_with_token(self, small_store, client_pre_deadline):
        token = token_for(small_store, "s000")
        doc = client_pre_deadline.get(
            "/api/v1/tests", headers={"Authorization": f"Bearer {token}"}
        ).json()
        assert all("status" in s for s in doc["subtests"])

    def test_unknown_topic_404(self, client_pre_deadline):
        response = client_pre_deadline.get("/api/v1/tests/Knitting")
        assert response.status_code == 404
        assert response.json()["error"]["code"] == "unknown_topic"


class TestAttemptEndpoints:
    def test_full_attempt_cycle(self, small_store, client_pre_deadline):
        client = client_pre_deadline
        store = small_store
        store.register_student("web1")
        token = token_for(store, "web1")
        headers = {"Authorization": f"Bearer {token}"}

        started = client.post("/api/v1/tests/Numbers/attempts", headers=headers)
        assert started.status_code == 200
        view = started.json()
        assert view["index"] >= 1 and view["open_parts"]

        responses = {}
        record = store.engine.records[("web1", "Numbers")]
        for pid in view["open_parts"]:
            state = record.parts[pid]
            part = store.engine.instance(state.template_id, state.seed).parts[state.part_index]
            responses[pid] = response_to_json(synthesize_correct_response(part))
        submitted = client.post(
            f"/api/v1/attempts/{view['attempt_id']}/submit",
            headers=headers,
            json={"responses": responses},
        )
        assert submitted.status_code == 200
        result = submitted.json()
        assert result["attempt"]["score"] == 1.0
        assert all(item["correct"] for item in result["feedback"])

    def test_malformed_expression_is_part_feedback_not_transport_error(
        self, small_store, client_pre_deadline
    ):
        store = small_store
        store.register_student("web2")
        headers = {"Authorization": f"Bearer {token_for(store, 'web2')}"}
        view = client_pre_deadline.post(
            "/api/v1/tests/Algebra/attempts", headers=headers
        ).json()
        target = next(p for p in view["open_parts"] if "expand" in p)
        submitted = client_pre_deadline.post(
            f"/api/v1/attempts/{view['attempt_id']}/submit",
            headers=headers,
            json={"responses": {target: "a^4-4a^3+"}},
        )
        assert submitted.status_code == 200
        feedback = {item["part_id"]: item for item in submitted.json()["feedback"]}
        assert not feedback[target]["correct"]

    def test_requires_token(self, client_pre_deadline):
        assert (
            client_pre_deadline.post("/api/v1/tests/Algebra/attempts").status_code == 401
        )

    def test_cannot_submit_another_students_attempt(self, small_store, client_pre_deadline):
        store = small_store
        store.register_student("web3")
        store.register_student("web4")
        headers3 = {"Authorization": f"Bearer {token_for(store, 'web3')}"}
        headers4 = {"Authorization": f"Bearer {token_for(store, 'web4')}"}
        view = client_pre_deadline.post(
            "/api/v1/tests/Functions/attempts", headers=headers3
        ).json()
        stolen = client_pre_deadline.post(
            f"/api/v1/attempts/{view['attempt_id']}/submit",
            headers=headers4,
            json={"responses": {}},
        )
        assert stolen.status_code == 403


class TestReports:
    def test_followup_not_yet_due(self, client_pre_deadline):
        response = client_pre_deadline.get("/api/v1/reports/followup")
        assert response.status_code == 409
        assert response.json()["error"]["code"] == "not_yet_due"

    def test_followup_after_deadline(self, client_post_deadline):
        response = client_post_deadline.get("/api/v1/reports/followup")
        assert response.status_code == 200
        doc = response.json()
        assert "rows" in doc

    def test_status_endpoint(self, client_pre_deadline):
        doc = client_pre_deadline.get("/api/v1/students/s000/status").json()
        assert doc["student_id"] == "s000"
        assert len(doc["topics"]) == 6

    def test_unknown_student_404(self, client_pre_deadline):
        assert client_pre_deadline.get("/api/v1/students/ghost/status").status_code == 404

    def test_bodies_match_shared_renderers(self, small_store, client_post_deadline):
        endpoint_body = client_post_deadline.get("/api/v1/reports/followup").content
        direct = followup_body(
            small_store.engine, DEFAULT_DEADLINE + timedelta(days=1)
        ).encode()
        assert endpoint_body == direct
        status_endpoint = client_post_deadline.get("/api/v1/students/s001/status").content
        assert status_endpoint == status_body(small_store.engine, "s001").encode()


class TestAnalyticsEndpoints:
    def test_correlations(self, client_post_deadline):
        doc = client_post_deadline.get("/api/v1/analytics/correlations").json()
        names = [row["predictor"] for row in doc["rows"]]
        assert names == ["EPT score", "Total entry tariff", "'Maths-only'"]
        assert doc["combined"] is not None

    def test_scatter_is_csv(self, client_post_deadline):
        response = client_post_deadline.get("/api/v1/analytics/scatter")
        assert response.headers["content-type"].startswith("text/csv")
        header, *rows = response.text.strip().split("\n")
        assert header == "ept_score,exam_avg"
        assert rows

    def test_unconfigured_analytics_409(self, tmp_path):
        bank_text = seed_bank_text()
        store = EventStore.init(
            tmp_path / "bare", bank_text,
            cohort_from_bank(load_bank(bank_text), DEFAULT_DEADLINE),
        )
        client = TestClient(create_app(store), raise_server_exceptions=False)
        response = client.get("/api/v1/analytics/correlations")
        assert response.status_code == 409
        assert response.json()["error"]["code"] == "analytics_not_configured"


class TestDeterminism:
    def test_identical_snapshot_identical_bodies(self, small_store, client_post_deadline):
        first = client_post_deadline.get("/api/v1/tests").content
        second = client_post_deadline.get("/api/v1/tests").content
        assert first == second
