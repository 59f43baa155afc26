"""Grade outcomes: a score in [0,1], flags, and a feedback-selection key."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class GradeOutcome:
    """Result of grading one response part.

    correct is derived: exactly the full-score outcomes count as correct.
    detail optionally carries text safe to show the student (e.g. the
    parser's syntax message); it never contains expected answers.
    """

    score: float
    flags: frozenset[str] = field(default_factory=frozenset)
    feedback_key: str = "incorrect"
    detail: str | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score {self.score} outside [0, 1]")
        object.__setattr__(self, "flags", frozenset(self.flags))

    @property
    def correct(self) -> bool:
        return self.score == 1.0

    def to_json(self) -> dict:
        return {
            "score": self.score,
            "correct": self.correct,
            "flags": sorted(self.flags),
            "feedback_key": self.feedback_key,
            "detail": self.detail,
        }

    @classmethod
    def from_json(cls, data: dict) -> "GradeOutcome":
        return cls(
            score=float(data["score"]),
            flags=frozenset(data.get("flags", ())),
            feedback_key=data.get("feedback_key", "incorrect"),
            detail=data.get("detail"),
        )


def full_marks() -> GradeOutcome:
    return GradeOutcome(1.0, frozenset(), "correct")


def no_marks(feedback_key: str = "incorrect", flags: frozenset[str] = frozenset(),
             detail: str | None = None) -> GradeOutcome:
    return GradeOutcome(0.0, flags, feedback_key, detail)
