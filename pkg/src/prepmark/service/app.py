"""HTTP facade over the question bank, sessions and analytics.

Every response body is JSON (text/csv for the scatter export); module
errors map to one machine code each.  Student identity for the attempt
endpoints is an opaque bearer token issued at roster import; reporting
and analytics endpoints are operator-side and unauthenticated.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

from fastapi import Depends, FastAPI, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from ..analytics import DegenerateSample
from ..grading.specs import ArmMismatch, UnknownOption
from ..questionbank import FileFormatError
from ..session import (
    EventStore,
    NoOpenAttempt,
    NotYetDue,
    StoreError,
    UnknownStudent,
    UnknownTopic,
)
from .config import ServiceConfig
from .views import (
    AnalyticsNotConfigured,
    correlations_body,
    followup_body,
    scatter_body,
    status_body,
    tests_body,
)

ERROR_MAP: list[tuple[type[Exception], int, str]] = [
    (UnknownStudent, 404, "unknown_student"),
    (UnknownTopic, 404, "unknown_topic"),
    (NoOpenAttempt, 409, "no_open_attempt"),
    (NotYetDue, 409, "not_yet_due"),
    (AnalyticsNotConfigured, 409, "analytics_not_configured"),
    (DegenerateSample, 409, "degenerate_sample"),
    (ArmMismatch, 400, "arm_mismatch"),
    (UnknownOption, 400, "unknown_option"),
    (FileFormatError, 500, "bad_bank_file"),
    (StoreError, 500, "store_error"),
]


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


class SubmitBody(BaseModel):
    responses: dict[str, Any]


class PreviewBody(BaseModel):
    text: str


def json_response(body: str) -> Response:
    return Response(content=body, media_type="application/json")


def create_app(store: EventStore, config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig(store=store.root)
    app = FastAPI(title="prepmark", version="0.1.0", docs_url=None, redoc_url=None)
    tokens = {token: student for student, token in store.engine.roster.items()}

    def refresh_tokens() -> None:
        tokens.clear()
        tokens.update({token: student for student, token in store.engine.roster.items()})

    def student_from_auth(request: Request) -> str:
        header = request.headers.get("authorization", "")
        if not header.lower().startswith("bearer "):
            raise ApiError(401, "unauthorized", "missing bearer token")
        token = header[7:].strip()
        if token not in tokens:
            refresh_tokens()
        if token not in tokens:
            raise ApiError(401, "unauthorized", "unknown token")
        return tokens[token]

    def optional_student(request: Request) -> str | None:
        if "authorization" not in request.headers:
            return None
        return student_from_auth(request)

    @app.exception_handler(ApiError)
    async def handle_api_error(_req, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"error": {"status": exc.status, "code": exc.code,
                               "message": exc.message}},
        )

    @app.exception_handler(Exception)
    async def handle_module_error(_req, exc: Exception):
        for exc_type, status, code in ERROR_MAP:
            if isinstance(exc, exc_type):
                return JSONResponse(
                    status_code=status,
                    content={"error": {"status": status, "code": code,
                                       "message": str(exc)}},
                )
        return JSONResponse(
            status_code=500,
            content={"error": {"status": 500, "code": "internal", "message": str(exc)}},
        )

    @app.get("/api/v1/tests")
    def list_tests(student: str | None = Depends(optional_student)):
        return json_response(tests_body(store.engine, student))

    @app.get("/api/v1/tests/{topic}")
    def test_detail(topic: str, student: str | None = Depends(optional_student)):
        store.engine.cohort.subtest(topic)  # 404 on unknown topic
        overview = tests_body(store.engine, student)
        import json as _json

        doc = _json.loads(overview)
        entry = next(s for s in doc["subtests"] if s["topic"] == topic)
        from ..session import canonical_json

        return json_response(canonical_json(entry))

    @app.post("/api/v1/tests/{topic}/attempts")
    def start_attempt(topic: str, student: str = Depends(student_from_auth)):
        view = store.start_attempt(student, topic, now=config.now())
        from ..session import canonical_json

        return json_response(canonical_json(view))

    @app.post("/api/v1/attempts/{attempt_id}/submit")
    def submit(attempt_id: str, body: SubmitBody,
               student: str = Depends(student_from_auth)):
        try:
            owner, topic, _index = attempt_id.rsplit(":", 2)
        except ValueError:
            raise ApiError(400, "bad_attempt_id", f"malformed attempt id {attempt_id!r}")
        if owner != student:
            raise ApiError(403, "forbidden", "attempt belongs to another student")
        summary, feedback = store.submit(student, topic, body.responses, now=config.now())
        from ..session import canonical_json

        return json_response(
            canonical_json({"attempt": summary, "feedback": feedback.to_json()})
        )

    @app.get("/api/v1/students/{student_id}/status")
    def student_status(student_id: str):
        return json_response(status_body(store.engine, student_id))

    @app.get("/api/v1/reports/followup")
    def followup():
        return json_response(followup_body(store.engine, config.now()))

    @app.get("/api/v1/analytics/correlations")
    def correlations(ept_mode: str = "first_attempt",
                     aggregation: str = "mean_of_subtests"):
        return json_response(correlations_body(store, ept_mode, aggregation))

    @app.get("/api/v1/analytics/scatter")
    def scatter(ept_mode: str = "first_attempt",
                aggregation: str = "mean_of_subtests"):
        return Response(content=scatter_body(store, ept_mode, aggregation),
                        media_type="text/csv")

    @app.post("/api/v1/preview")
    def preview(body: PreviewBody):
        """Parse preview for the expression input field; student typing
        feedback only, no grading."""
        from ..exprcore import ExprSyntaxError, parse, render
        from ..session import canonical_json

        try:
            rendered = render(parse(body.text))
        except ExprSyntaxError as exc:
            return json_response(
                canonical_json(
                    {
                        "ok": False,
                        "offset": exc.offset,
                        "expected": exc.expected,
                        "message": str(exc),
                    }
                )
            )
        return json_response(canonical_json({"ok": True, "rendered": rendered}))

    return app


def serve(config: ServiceConfig) -> None:
    """Open (or initialize) the store and run the service; startup aborts
    with diagnostics on a bad bank or unwritable store."""
    import uvicorn

    store_root = Path(config.store)
    if (store_root / "events.log").exists():
        store = EventStore.open(store_root)
    else:
        if not config.bank or not config.cohort:
            raise SystemExit(
                "store is empty: provide 'bank' and 'cohort' config keys to initialize it"
            )
        from ..session import CohortConfig

        store = EventStore.init(
            store_root,
            Path(config.bank).read_text(),
            CohortConfig.from_yaml(Path(config.cohort).read_text()),
        )
    app = create_app(store, config)
    uvicorn.run(app, host=config.bind_host, port=config.bind_port, log_level="warning")
