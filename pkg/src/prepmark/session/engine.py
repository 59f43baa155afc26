"""The retake rubric as an event-sourced state machine.

All state changes flow through events (student_registered,
attempt_started, attempt_submitted) so that a store can persist the log
and rebuild identical state by replaying it.  Events carry grading
outcomes, which keeps replay free of regrading; grading itself happens
once, in prepare_submit, and is deterministic anyway because sampling
seeds live in the specs.

Rubric: unlimited untimed retakes; correctly answered parts lock and are
excluded from later attempts; a sub-test is passed once the mean of
best part scores reaches the pass mark (boundary inclusive); the first
attempt's score is frozen forever; feedback never reveals expected
answers for wrong parts.
"""

from __future__ import annotations

import hashlib
import json
from datetime import datetime
from typing import Any, Iterable, Mapping

from ..grading import GradeOutcome, grade
from ..grading.specs import ChoiceSpec, GraderSpec, LineSketchSpec
from ..questionbank import QuestionInstance, QuestionTemplate, instantiate, render
from .model import (
    Attempt,
    CohortConfig,
    FeedbackItem,
    FeedbackView,
    NoOpenAttempt,
    PartState,
    SubTestRecord,
    TopicStatus,
    UnknownStudent,
    format_timestamp,
    parse_timestamp,
)

PASS_EPSILON = 1e-9

EPT_MODES = ("first_attempt", "best", "attempt_weighted")
EPT_AGGREGATIONS = ("mean_of_subtests", "mean_of_parts")


def derive_seed(student_id: str, template_id: str) -> int:
    """Stable per-(student, question) seed: the same student sees the same
    numbers across retakes, different students need not."""
    digest = hashlib.sha256(f"{student_id}:{template_id}".encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def response_to_json(resp: Any) -> Any:
    if isinstance(resp, (set, frozenset)):
        return sorted(str(r) for r in resp)
    if isinstance(resp, tuple):
        return [response_to_json(r) for r in resp]
    if isinstance(resp, Mapping):
        return {str(k): response_to_json(v) for k, v in resp.items()}
    return resp


def response_from_json(spec: GraderSpec, data: Any) -> Any:
    """Invert response_to_json using the spec arm to pick the shape."""
    if isinstance(spec, ChoiceSpec) and spec.mode == "multi":
        return set(data)
    if isinstance(spec, LineSketchSpec):
        (x1, y1), (x2, y2) = data
        return ((float(x1), float(y1)), (float(x2), float(y2)))
    return data


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


class SessionEngine:
    """Pure in-memory state; I/O belongs to the store wrapping it."""

    def __init__(self, bank: Iterable[QuestionTemplate], cohort: CohortConfig):
        self.templates: dict[str, QuestionTemplate] = {t.id: t for t in bank}
        self.cohort = cohort
        for subtest in cohort.subtests:
            for tid in subtest.template_ids:
                if tid not in self.templates:
                    raise ValueError(f"cohort references unknown template {tid!r}")
        self.roster: dict[str, str] = {}
        self.records: dict[tuple[str, str], SubTestRecord] = {}
        self.open_attempts: dict[tuple[str, str], dict] = {}
        self._instances: dict[tuple[str, int], QuestionInstance] = {}

    # -- instances ----------------------------------------------------------

    def instance(self, template_id: str, seed: int) -> QuestionInstance:
        key = (template_id, seed)
        if key not in self._instances:
            self._instances[key] = instantiate(self.templates[template_id], seed)
        return self._instances[key]

    def _instance_part(self, state: PartState):
        inst = self.instance(state.template_id, state.seed)
        return inst.parts[state.part_index]

    # -- event construction --------------------------------------------------

    def prepare_register(self, student_id: str, token: str | None, now: datetime) -> dict:
        return {
            "type": "student_registered",
            "student_id": student_id,
            "token": token or f"tok-{hashlib.sha256(student_id.encode()).hexdigest()[:16]}",
            "ts": format_timestamp(now),
        }

    def _require_student(self, student_id: str) -> None:
        if student_id not in self.roster:
            raise UnknownStudent(student_id)

    def prepare_start(self, student_id: str, topic: str, now: datetime) -> dict:
        self._require_student(student_id)
        subtest = self.cohort.subtest(topic)
        record = self.records.get((student_id, topic))
        if record is not None:
            parts = [
                {
                    "part_id": p.part_id,
                    "template_id": p.template_id,
                    "part_index": p.part_index,
                    "seed": p.seed,
                }
                for p in record.parts.values()
            ]
            open_parts = [p.part_id for p in record.parts.values() if not p.locked]
            index = len(record.attempts) + 1
        else:
            parts = []
            for tid in subtest.template_ids:
                seed = derive_seed(student_id, tid)
                inst = self.instance(tid, seed)
                for part in inst.parts:
                    parts.append(
                        {
                            "part_id": f"{tid}#{part.index}",
                            "template_id": tid,
                            "part_index": part.index,
                            "seed": seed,
                        }
                    )
            open_parts = [p["part_id"] for p in parts]
            index = 1
        return {
            "type": "attempt_started",
            "student_id": student_id,
            "topic": topic,
            "index": index,
            "ts": format_timestamp(now),
            "parts": parts,
            "open_parts": open_parts,
        }

    def prepare_submit(
        self,
        student_id: str,
        topic: str,
        responses: Mapping[str, Any],
        now: datetime,
    ) -> dict:
        self._require_student(student_id)
        self.cohort.subtest(topic)
        key = (student_id, topic)
        open_attempt = self.open_attempts.get(key)
        if open_attempt is None:
            raise NoOpenAttempt(f"{student_id} has no open attempt on {topic}")
        record = self.records[key]

        outcomes: dict[str, dict] = {}
        kept_responses: dict[str, Any] = {}
        newly_locked: list[str] = []
        best_after: dict[str, float] = {
            pid: state.best_score for pid, state in record.parts.items()
        }
        for pid in open_attempt["open_parts"]:
            state = record.parts[pid]
            part = self._instance_part(state)
            raw = responses.get(pid)
            if raw is None:
                outcome = GradeOutcome(0.0, frozenset(), "no_response")
            else:
                try:
                    outcome = grade(part.spec, response_from_json(part.spec, raw))
                except Exception as exc:
                    outcome = GradeOutcome(
                        0.0, frozenset({"invalid_response"}), "invalid_response", str(exc)
                    )
            outcomes[pid] = outcome.to_json()
            kept_responses[pid] = response_to_json(raw) if raw is not None else None
            best_after[pid] = max(best_after[pid], outcome.score)
            if outcome.correct and not state.locked:
                newly_locked.append(pid)

        score = sum(best_after.values()) / len(best_after) if best_after else 0.0
        passed_now = record.passed or score >= self.cohort.pass_mark - PASS_EPSILON
        return {
            "type": "attempt_submitted",
            "student_id": student_id,
            "topic": topic,
            "index": open_attempt["index"],
            "started": open_attempt["started"],
            "ts": format_timestamp(now),
            "late": now > self.cohort.deadline,
            "responses": kept_responses,
            "outcomes": outcomes,
            "newly_locked": sorted(newly_locked),
            "score": score,
            "passed": passed_now,
        }

    # -- event application ----------------------------------------------------

    def apply(self, event: Mapping[str, Any]) -> None:
        kind = event["type"]
        if kind == "student_registered":
            self.roster[event["student_id"]] = event["token"]
            return
        key = (event["student_id"], event["topic"])
        if kind == "attempt_started":
            if key not in self.records:
                record = SubTestRecord(student_id=event["student_id"], topic=event["topic"])
                for p in event["parts"]:
                    record.parts[p["part_id"]] = PartState(
                        part_id=p["part_id"],
                        template_id=p["template_id"],
                        part_index=p["part_index"],
                        seed=p["seed"],
                    )
                self.records[key] = record
            self.open_attempts[key] = {
                "index": event["index"],
                "started": event["ts"],
                "open_parts": list(event["open_parts"]),
            }
            return
        if kind == "attempt_submitted":
            record = self.records[key]
            attempt = Attempt(
                index=event["index"],
                started=event["started"],
                submitted=event["ts"],
                late=bool(event["late"]),
                responses=dict(event["responses"]),
                outcomes=dict(event["outcomes"]),
                score=float(event["score"]),
            )
            record.attempts.append(attempt)
            for pid, outcome in event["outcomes"].items():
                state = record.parts[pid]
                if outcome["score"] > state.best_score:
                    state.best_score = float(outcome["score"])
                    state.best_outcome = dict(outcome)
                    state.best_response = event["responses"].get(pid)
            for pid in event["newly_locked"]:
                record.parts[pid].locked = True
            if event["passed"] and not record.passed:
                record.passed = True
                record.passed_at = event["ts"]
                record.passed_attempt_index = event["index"]
            if event["index"] == 1 and record.first_attempt_score is None:
                record.first_attempt_score = float(event["score"])
            self.open_attempts.pop(key, None)
            return
        raise ValueError(f"unknown event type {kind!r}")

    # -- views -----------------------------------------------------------------

    def attempt_view(self, student_id: str, topic: str) -> dict:
        key = (student_id, topic)
        open_attempt = self.open_attempts.get(key)
        if open_attempt is None:
            raise NoOpenAttempt(f"{student_id} has no open attempt on {topic}")
        record = self.records[key]
        subtest = self.cohort.subtest(topic)
        questions = []
        for tid in subtest.template_ids:
            states = [p for p in record.parts.values() if p.template_id == tid]
            if not states:
                continue
            inst = self.instance(tid, states[0].seed)
            display = render(inst).to_json()
            for part_json in display["parts"]:
                pid = f"{tid}#{part_json['index']}"
                state = record.parts[pid]
                part_json["part_id"] = pid
                part_json["locked"] = state.locked
                part_json["best_score"] = state.best_score
            questions.append(display)
        return {
            "attempt_id": f"{student_id}:{topic}:{open_attempt['index']}",
            "student_id": student_id,
            "topic": topic,
            "index": open_attempt["index"],
            "open_parts": list(open_attempt["open_parts"]),
            "questions": questions,
        }

    def feedback_view(self, student_id: str, topic: str, event: Mapping[str, Any]) -> FeedbackView:
        """Per-part feedback after a submission, honoring the policy that
        wrong parts receive the authored hint and never the answer."""
        record = self.records[(student_id, topic)]
        items = []
        for pid, state in record.parts.items():
            inst = self.instance(state.template_id, state.seed)
            attempt_outcome = event["outcomes"].get(pid)
            outcome = attempt_outcome or state.best_outcome or {
                "score": 0.0,
                "correct": False,
                "flags": [],
                "feedback_key": "no_response",
                "detail": None,
            }
            correct = state.locked or bool(outcome.get("correct"))
            if correct:
                items.append(
                    FeedbackItem(
                        part_id=pid,
                        correct=True,
                        score=1.0,
                        flags=tuple(outcome.get("flags", ())),
                        message=inst.feedback.on_correct,
                        links=tuple(inst.feedback.links),
                    )
                )
            else:
                message = inst.feedback.on_wrong
                detail = outcome.get("detail")
                if detail:
                    message = f"{message} [{detail}]"
                items.append(
                    FeedbackItem(
                        part_id=pid,
                        correct=False,
                        score=float(outcome.get("score", 0.0)),
                        flags=tuple(outcome.get("flags", ())),
                        message=message,
                        links=(),
                    )
                )
        return FeedbackView(items=tuple(items))

    def status(self, student_id: str) -> dict:
        self._require_student(student_id)
        topics = []
        for topic in self.cohort.topics():
            record = self.records.get((student_id, topic))
            if record is None:
                topics.append(TopicStatus(topic, False, 0, 0.0, None))
            else:
                topics.append(
                    TopicStatus(
                        topic=topic,
                        passed=record.passed,
                        attempts=len(record.attempts),
                        best_score=record.best_mean(),
                        first_attempt_score=record.first_attempt_score,
                    )
                )
        return {
            "student_id": student_id,
            "ept_score": self.ept_score(student_id),
            "topics": [t.to_json() for t in topics],
        }

    def follow_up_report(self, now: datetime) -> dict:
        """Students with unpassed topics at the deadline snapshot, for
        personal tutors arranging topic-specific follow-up."""
        from .model import NotYetDue

        if now < self.cohort.deadline:
            raise NotYetDue(
                f"deadline {format_timestamp(self.cohort.deadline)} has not passed"
            )
        rows = []
        for student_id in sorted(self.roster):
            for topic in self.cohort.topics():
                record = self.records.get((student_id, topic))
                passed_by_deadline = False
                attempts_by_deadline = 0
                if record is not None:
                    passed_by_deadline = bool(
                        record.passed_at
                        and parse_timestamp(record.passed_at) <= self.cohort.deadline
                    )
                    attempts_by_deadline = sum(
                        1
                        for a in record.attempts
                        if parse_timestamp(a.submitted) <= self.cohort.deadline
                    )
                if not passed_by_deadline:
                    rows.append(
                        {
                            "student_id": student_id,
                            "topic": topic,
                            "attempts": attempts_by_deadline,
                        }
                    )
        return {
            "deadline": format_timestamp(self.cohort.deadline),
            "generated_at": format_timestamp(now),
            "rows": rows,
        }

    # -- aggregate scores --------------------------------------------------------

    def _topic_part_count(self, topic: str) -> int:
        return sum(
            len(self.templates[tid].parts) for tid in self.cohort.subtest(topic).template_ids
        )

    def ept_score(
        self,
        student_id: str,
        mode: str = "first_attempt",
        aggregation: str = "mean_of_subtests",
    ) -> float:
        """Aggregate preparatory-test score used by the analytics.

        mode picks the per-topic score (first_attempt, best, or the
        attempt-weighted first score); aggregation either averages the
        per-sub-test fractions or pools every part equally.
        """
        if mode not in EPT_MODES:
            raise ValueError(f"unknown mode {mode!r}")
        if aggregation not in EPT_AGGREGATIONS:
            raise ValueError(f"unknown aggregation {aggregation!r}")
        topics = self.cohort.topics()
        if aggregation == "mean_of_parts":
            total = 0.0
            count = 0
            for topic in topics:
                record = self.records.get((student_id, topic))
                part_count = self._topic_part_count(topic)
                count += part_count
                if record is None or not record.attempts:
                    continue
                if mode == "best":
                    total += sum(p.best_score for p in record.parts.values())
                else:
                    first = record.attempts[0]
                    part_sum = sum(o["score"] for o in first.outcomes.values())
                    if mode == "attempt_weighted":
                        part_sum /= self._attempts_needed(record)
                    total += part_sum
            return total / count if count else 0.0
        total = 0.0
        for topic in topics:
            record = self.records.get((student_id, topic))
            if record is None or not record.attempts:
                continue
            if mode == "best":
                total += record.best_mean()
            elif mode == "first_attempt":
                total += record.first_attempt_score or 0.0
            else:
                total += (record.first_attempt_score or 0.0) / self._attempts_needed(record)
        return total / len(topics) if topics else 0.0

    @staticmethod
    def _attempts_needed(record: SubTestRecord) -> int:
        if record.passed_attempt_index:
            return max(1, int(record.passed_attempt_index))
        return max(1, len(record.attempts))

    def ept_scores(self, mode: str = "first_attempt",
                   aggregation: str = "mean_of_subtests") -> dict[str, float]:
        return {
            student: self.ept_score(student, mode, aggregation) for student in sorted(self.roster)
        }

    # -- integrity ------------------------------------------------------------

    def verify_locks(self) -> list[str]:
        """Replay check: every locked part's stored response must still
        grade correct under its stored spec.  Returns offending part ids."""
        bad = []
        for record in self.records.values():
            for state in record.parts.values():
                if not state.locked:
                    continue
                part = self._instance_part(state)
                resp = response_from_json(part.spec, state.best_response)
                if not grade(part.spec, resp).correct:
                    bad.append(f"{record.student_id}/{state.part_id}")
        return bad

    def snapshot_json(self) -> str:
        """Canonical serialization of the whole state; replaying the event
        log must reproduce these bytes exactly."""
        state = {
            "roster": self.roster,
            "records": [record.to_json() for _, record in sorted(self.records.items())],
            "open_attempts": [
                {"student_id": k[0], "topic": k[1], **v}
                for k, v in sorted(self.open_attempts.items())
            ],
        }
        return canonical_json(state)
