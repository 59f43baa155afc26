"""Canonical report bodies shared by the HTTP endpoints and the CLI, so
the two surfaces are byte-identical for the same store."""

from __future__ import annotations

from datetime import datetime
from pathlib import Path

from ..analytics import (
    build_student_outcomes,
    correlation_report,
    read_marks_csv,
    read_quals_csv,
    read_tariff_config,
    scatter_export,
)
from ..session import EventStore, SessionEngine, canonical_json


class AnalyticsNotConfigured(RuntimeError):
    """The store has no marks/quals/tariff ingest files yet."""


def subtests_overview(engine: SessionEngine, student_id: str | None = None) -> dict:
    subtests = []
    for subtest in engine.cohort.subtests:
        part_count = sum(len(engine.templates[tid].parts) for tid in subtest.template_ids)
        entry = {
            "topic": subtest.topic,
            "templates": list(subtest.template_ids),
            "question_count": len(subtest.template_ids),
            "part_count": part_count,
        }
        if student_id is not None:
            record = engine.records.get((student_id, subtest.topic))
            entry["status"] = {
                "passed": bool(record and record.passed),
                "attempts": len(record.attempts) if record else 0,
                "best_score": record.best_mean() if record else 0.0,
            }
        subtests.append(entry)
    return {"pass_mark": engine.cohort.pass_mark, "subtests": subtests}


def tests_body(engine: SessionEngine, student_id: str | None = None) -> str:
    return canonical_json(subtests_overview(engine, student_id))


def status_body(engine: SessionEngine, student_id: str) -> str:
    return canonical_json(engine.status(student_id))


def followup_body(engine: SessionEngine, now: datetime) -> str:
    return canonical_json(engine.follow_up_report(now))


def load_analytics_inputs(root: Path):
    paths = EventStore.paths(root)
    analytics_dir = paths["analytics"]
    marks_path = analytics_dir / "marks.csv"
    quals_path = analytics_dir / "quals.csv"
    tariff_path = analytics_dir / "tariff.yaml"
    missing = [p.name for p in (marks_path, quals_path, tariff_path) if not p.exists()]
    if missing:
        raise AnalyticsNotConfigured(
            f"analytics ingest files missing from {analytics_dir}: {', '.join(missing)}"
        )
    return (
        read_marks_csv(marks_path.read_text()),
        read_quals_csv(quals_path.read_text()),
        read_tariff_config(tariff_path.read_text()),
    )


def analytics_students(store: EventStore, ept_mode: str = "first_attempt",
                       aggregation: str = "mean_of_subtests"):
    marks, quals, table = load_analytics_inputs(store.root)
    ept = store.engine.ept_scores(ept_mode, aggregation)
    return build_student_outcomes(ept, marks, quals), table


def correlations_body(store: EventStore, ept_mode: str = "first_attempt",
                      aggregation: str = "mean_of_subtests") -> str:
    students, table = analytics_students(store, ept_mode, aggregation)
    return canonical_json(correlation_report(students, table).to_json())


def scatter_body(store: EventStore, ept_mode: str = "first_attempt",
                 aggregation: str = "mean_of_subtests") -> str:
    students, _ = analytics_students(store, ept_mode, aggregation)
    return scatter_export(students)
