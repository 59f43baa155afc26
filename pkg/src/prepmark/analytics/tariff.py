"""Entry tariffs and student outcome records.

Only one tariff anchor is treated as ground truth (A* = 56 points under
the post-2017 system); the full grade-to-points table is configuration
supplied at ingest, never a hardcoded default.
"""

from __future__ import annotations

from dataclasses import dataclass, field

SUBJECT_TAGS = ("maths", "further_maths", "other")
MATHS_TAGS = frozenset({"maths", "further_maths"})


class UnknownGrade(KeyError):
    """A qualification's (kind, grade) is missing from the tariff table."""


@dataclass(frozen=True)
class Qualification:
    kind: str  # e.g. "A-level", "AS-level"
    subject_tag: str  # maths | further_maths | other
    grade: str

    def __post_init__(self) -> None:
        if self.subject_tag not in SUBJECT_TAGS:
            raise ValueError(f"unknown subject tag {self.subject_tag!r}")


@dataclass(frozen=True)
class TariffTable:
    points: dict[tuple[str, str], int]

    def lookup(self, kind: str, grade: str) -> int:
        try:
            return self.points[(kind, grade)]
        except KeyError:
            raise UnknownGrade(f"no tariff entry for {kind!r} grade {grade!r}") from None

    @classmethod
    def from_config(cls, doc: dict) -> "TariffTable":
        points = {}
        for kind, grades in (doc.get("tariff") or doc).items():
            for grade, value in grades.items():
                points[(str(kind), str(grade))] = int(value)
        return cls(points=points)


@dataclass(frozen=True)
class StudentOutcome:
    student_id: str
    ept_score: float
    qualifications: tuple[Qualification, ...] = ()
    exam_marks: dict[str, float] = field(default_factory=dict)
    complete: bool = True


def total_tariff(student: StudentOutcome, table: TariffTable) -> int:
    """Sum of points over every qualification, partial ones included."""
    return sum(table.lookup(q.kind, q.grade) for q in student.qualifications)


def maths_only_tariff(student: StudentOutcome, table: TariffTable) -> int:
    """Tariff restricted to mathematics and further mathematics."""
    return sum(
        table.lookup(q.kind, q.grade)
        for q in student.qualifications
        if q.subject_tag in MATHS_TAGS
    )


def cohort_filter(students: list[StudentOutcome]) -> list[StudentOutcome]:
    """Keep exactly the students who sat every examination."""
    return [s for s in students if s.complete]


def exam_average(student: StudentOutcome) -> float:
    """Unweighted mean of first-attempt module marks."""
    if not student.exam_marks:
        raise ValueError(f"{student.student_id} has no exam marks")
    return sum(student.exam_marks.values()) / len(student.exam_marks)
