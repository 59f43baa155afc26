"""Session-side domain types: cohort configuration, per-student sub-test
records with carried-forward parts, attempts, and policy-safe feedback."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Mapping

import yaml


class SessionError(Exception):
    pass


class UnknownStudent(SessionError):
    pass


class UnknownTopic(SessionError):
    pass


class NoOpenAttempt(SessionError):
    pass


class NotYetDue(SessionError):
    """The follow-up report only exists once the deadline has passed."""


def parse_timestamp(text: str) -> datetime:
    ts = datetime.fromisoformat(text)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts


def format_timestamp(ts: datetime) -> str:
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc).isoformat()


@dataclass(frozen=True)
class SubTest:
    topic: str
    template_ids: tuple[str, ...]


@dataclass(frozen=True)
class CohortConfig:
    deadline: datetime
    subtests: tuple[SubTest, ...]
    pass_mark: float = 0.75

    def __post_init__(self) -> None:
        if not 0.0 < self.pass_mark <= 1.0:
            raise ValueError("pass_mark must lie in (0, 1]")
        if not self.subtests:
            raise ValueError("cohort needs at least one sub-test")

    def topics(self) -> list[str]:
        return [s.topic for s in self.subtests]

    def subtest(self, topic: str) -> SubTest:
        for s in self.subtests:
            if s.topic == topic:
                return s
        raise UnknownTopic(topic)

    @classmethod
    def from_yaml(cls, text: str) -> "CohortConfig":
        doc = yaml.safe_load(text)
        return cls(
            deadline=parse_timestamp(str(doc["deadline"])),
            pass_mark=float(doc.get("pass_mark", 0.75)),
            subtests=tuple(
                SubTest(topic=str(s["topic"]), template_ids=tuple(s["templates"]))
                for s in doc["subtests"]
            ),
        )

    def to_yaml(self) -> str:
        return yaml.safe_dump(
            {
                "pass_mark": self.pass_mark,
                "deadline": format_timestamp(self.deadline),
                "subtests": [
                    {"topic": s.topic, "templates": list(s.template_ids)}
                    for s in self.subtests
                ],
            },
            sort_keys=False,
        )


@dataclass
class PartState:
    """Per-part state carried across attempts.  Once locked (answered
    correctly) a part is never regraded and is excluded from later
    attempts' response sets."""

    part_id: str
    template_id: str
    part_index: int
    seed: int
    best_score: float = 0.0
    best_outcome: dict | None = None
    best_response: Any = None
    locked: bool = False

    def to_json(self) -> dict:
        return {
            "part_id": self.part_id,
            "template_id": self.template_id,
            "part_index": self.part_index,
            "seed": self.seed,
            "best_score": self.best_score,
            "best_outcome": self.best_outcome,
            "best_response": self.best_response,
            "locked": self.locked,
        }


@dataclass
class Attempt:
    index: int
    started: str
    submitted: str
    late: bool
    responses: dict[str, Any]
    outcomes: dict[str, dict]
    score: float

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "started": self.started,
            "submitted": self.submitted,
            "late": self.late,
            "responses": self.responses,
            "outcomes": self.outcomes,
            "score": self.score,
        }


@dataclass
class SubTestRecord:
    student_id: str
    topic: str
    parts: dict[str, PartState] = field(default_factory=dict)
    attempts: list[Attempt] = field(default_factory=list)
    passed: bool = False
    passed_at: str | None = None
    passed_attempt_index: int | None = None
    first_attempt_score: float | None = None

    def best_mean(self) -> float:
        if not self.parts:
            return 0.0
        return sum(p.best_score for p in self.parts.values()) / len(self.parts)

    def to_json(self) -> dict:
        return {
            "student_id": self.student_id,
            "topic": self.topic,
            "parts": {pid: p.to_json() for pid, p in sorted(self.parts.items())},
            "attempts": [a.to_json() for a in self.attempts],
            "passed": self.passed,
            "passed_at": self.passed_at,
            "passed_attempt_index": self.passed_attempt_index,
            "first_attempt_score": self.first_attempt_score,
        }


@dataclass(frozen=True)
class FeedbackItem:
    """One part's post-submission feedback.  By construction this type has
    no field that could carry an expected answer: wrong parts get the
    authored hint plus any safe grader detail, and nothing else."""

    part_id: str
    correct: bool
    score: float
    flags: tuple[str, ...]
    message: str
    links: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "part_id": self.part_id,
            "correct": self.correct,
            "score": self.score,
            "flags": list(self.flags),
            "message": self.message,
            "links": list(self.links),
        }


@dataclass(frozen=True)
class FeedbackView:
    items: tuple[FeedbackItem, ...]

    def to_json(self) -> list:
        return [item.to_json() for item in self.items]


@dataclass(frozen=True)
class TopicStatus:
    topic: str
    passed: bool
    attempts: int
    best_score: float
    first_attempt_score: float | None

    def to_json(self) -> dict:
        return {
            "topic": self.topic,
            "passed": self.passed,
            "attempts": self.attempts,
            "best_score": self.best_score,
            "first_attempt_score": self.first_attempt_score,
        }


def iso_now(now: datetime | Mapping | None = None) -> datetime:
    if isinstance(now, datetime):
        return now
    return datetime.now(timezone.utc)
