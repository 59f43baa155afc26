"""Synthetic cohort generator.

Drives the real session machinery end to end: registers students, runs
attempts with correct/wrong answers drawn from a latent ability, retakes
failed sub-tests, and writes matching analytics ingest files (exam marks
correlated tightly with ability, entry tariffs correlated loosely).  That
construction makes the preparatory-test score the strongest of the three
predictors in the downstream correlation report, and gives the store a
realistic population for acceptance runs.

Everything is driven by one seeded RNG, so a (bank, n, seed) triple
always produces an identical store.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone

import yaml

from .questionbank import synthesize_correct_response, synthesize_wrong_response
from .session import CohortConfig, EventStore, SubTest
from .session.engine import response_to_json

DEFAULT_DEADLINE = datetime(2026, 1, 9, 17, 0, tzinfo=timezone.utc)

TARIFF_CONFIG = {
    "tariff": {
        "A-level": {"A*": 56, "A": 48, "B": 40, "C": 32, "D": 24, "E": 16},
        "AS-level": {"A": 20, "B": 16, "C": 12, "D": 10, "E": 6},
    }
}

MODULES = ("pure_1", "applied_1", "methods_1")

MAX_ATTEMPTS = 5


@dataclass
class SimulationStats:
    students: int
    attempts: int
    passed_all: int
    late_attempts: int


def cohort_from_bank(bank, deadline: datetime, pass_mark: float = 0.75) -> CohortConfig:
    """Sub-tests in canonical topic order, one per topic present in the bank."""
    order = ("Algebra", "Numbers", "Geometry", "Functions", "Calculus", "LogicAndSets")
    by_topic: dict[str, list[str]] = {}
    for t in bank:
        by_topic.setdefault(t.topic, []).append(t.id)
    subtests = tuple(
        SubTest(topic, tuple(by_topic[topic])) for topic in order if topic in by_topic
    )
    return CohortConfig(deadline=deadline, subtests=subtests, pass_mark=pass_mark)


def _grade_band(x: float) -> str:
    if x > 0.85:
        return "A*"
    if x > 0.70:
        return "A"
    if x > 0.55:
        return "B"
    if x > 0.40:
        return "C"
    if x > 0.25:
        return "D"
    return "E"


def _answer_parts(engine, student_id: str, topic: str, p_correct: float,
                  rng: random.Random) -> dict:
    view = engine.attempt_view(student_id, topic)
    record = engine.records[(student_id, topic)]
    responses = {}
    for pid in view["open_parts"]:
        state = record.parts[pid]
        part = engine.instance(state.template_id, state.seed).parts[state.part_index]
        if rng.random() < p_correct:
            resp = synthesize_correct_response(part)
        else:
            resp = synthesize_wrong_response(part, rng)
        responses[pid] = response_to_json(resp)
    return responses


def simulate_cohort(
    store: EventStore,
    n_students: int,
    seed: int,
    attempt_gap: timedelta = timedelta(seconds=90),
    view_sink=None,
) -> SimulationStats:
    """Populate the store with n students working through every sub-test.

    view_sink, when given, receives (student_id, topic, FeedbackView) for
    every submission; the acceptance leak check scans these live views.
    """
    rng = random.Random(seed)
    engine = store.engine
    deadline = engine.cohort.deadline
    clock = deadline - timedelta(days=4)
    attempts = 0
    late_attempts = 0

    abilities: dict[str, float] = {}
    with store.bulk():
        for i in range(n_students):
            student_id = f"s{i:03d}"
            abilities[student_id] = rng.uniform(0.15, 0.95)
            store.register_student(student_id, now=clock)

        for i in range(n_students):
            student_id = f"s{i:03d}"
            theta = abilities[student_id]
            for topic in engine.cohort.topics():
                for attempt_index in range(1, MAX_ATTEMPTS + 1):
                    clock += attempt_gap
                    p_correct = min(0.97, max(0.05, theta + 0.12 * (attempt_index - 1)))
                    store.start_attempt(student_id, topic, now=clock)
                    responses = _answer_parts(engine, student_id, topic, p_correct, rng)
                    summary, view = store.submit(
                        student_id, topic, responses, now=clock + attempt_gap / 2
                    )
                    attempts += 1
                    if view_sink is not None:
                        view_sink(student_id, topic, view)
                    if summary["passed"]:
                        break

        # one late retake by the first student with an unpassed topic, so the
        # post-deadline path is represented in every simulated store
        for (student_id, topic), record in sorted(store.engine.records.items()):
            if not record.passed:
                when = deadline + timedelta(hours=3)
                store.start_attempt(student_id, topic, now=when)
                responses = _answer_parts(
                    engine, student_id, topic, abilities[student_id], rng
                )
                summary, _ = store.submit(student_id, topic, responses,
                                          now=when + attempt_gap)
                attempts += 1
                late_attempts += 1
                break

    _write_analytics_inputs(store, abilities, rng)
    passed_all = sum(
        1
        for student_id in abilities
        if all(
            store.engine.records.get((student_id, topic)) is not None
            and store.engine.records[(student_id, topic)].passed
            for topic in engine.cohort.topics()
        )
    )
    return SimulationStats(
        students=n_students,
        attempts=attempts,
        passed_all=passed_all,
        late_attempts=late_attempts,
    )


def _write_analytics_inputs(store: EventStore, abilities: dict[str, float],
                            rng: random.Random) -> None:
    analytics_dir = EventStore.paths(store.root)["analytics"]
    analytics_dir.mkdir(exist_ok=True)

    marks_lines = ["student_id,module,mark"]
    quals_lines = ["student_id,kind,subject_tag,grade"]
    students = sorted(abilities)
    # a couple of students miss an exam and get excluded from the study
    incomplete = set(students[::53][1:3])
    for student_id in students:
        theta = abilities[student_id]
        for module in MODULES:
            if student_id in incomplete and module == MODULES[-1]:
                continue
            mark = max(0.0, min(100.0, 100 * (0.18 + 0.68 * theta + rng.gauss(0, 0.06))))
            marks_lines.append(f"{student_id},{module},{mark:.2f}")
        # tariffs track ability only loosely: heavy noise plus band rounding
        noisy = max(0.0, min(1.0, theta + rng.gauss(0, 0.22)))
        quals_lines.append(f"{student_id},A-level,maths,{_grade_band(noisy)}")
        other = max(0.0, min(1.0, theta + rng.gauss(0, 0.25)))
        quals_lines.append(f"{student_id},A-level,other,{_grade_band(other)}")
        if noisy > 0.72:
            quals_lines.append(f"{student_id},A-level,further_maths,{_grade_band(noisy)}")
        if rng.random() < 0.5:
            extra = max(0.0, min(1.0, theta + rng.gauss(0, 0.3)))
            band = _grade_band(extra)
            if band == "A*":
                band = "A"  # AS-levels top out at A in the points table
            quals_lines.append(f"{student_id},AS-level,other,{band}")

    (analytics_dir / "marks.csv").write_text("\n".join(marks_lines) + "\n")
    (analytics_dir / "quals.csv").write_text("\n".join(quals_lines) + "\n")
    (analytics_dir / "tariff.yaml").write_text(yaml.safe_dump(TARIFF_CONFIG))
