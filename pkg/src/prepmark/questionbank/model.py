"""Question templates, resolved instances, and display descriptors."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

from ..grading.specs import GraderSpec

TOPICS = ("Algebra", "Numbers", "Geometry", "Functions", "Calculus", "LogicAndSets")
ELEMENTS = ("diagnostic", "self_learning")
PART_KINDS = (
    "structural_poly",
    "equivalence",
    "antiderivative",
    "numeric_multi",
    "choice_single",
    "choice_multi",
    "line_sketch",
    "constraint",
)


@dataclass(frozen=True)
class ParamSpec:
    """One randomized parameter: a single-letter name and its value domain."""

    name: str
    values: tuple[int, ...]
    constraint: str | None = None  # boolean predicate over all params


@dataclass(frozen=True)
class PartTemplate:
    """One response part: prompt, grader kind, and the kind-specific spec
    fields, all still carrying {param} placeholders.  model_answer is an
    authoring aid used for bank validation and cohort simulation; it is
    never rendered to students."""

    prompt: str
    kind: str
    fields: Mapping[str, Any]
    model_answer: Any = None


@dataclass(frozen=True)
class Feedback:
    on_correct: str
    on_wrong: str
    links: tuple[str, ...] = ()


@dataclass(frozen=True)
class QuestionTemplate:
    id: str
    topic: str
    element: str
    body: str
    parts: tuple[PartTemplate, ...]
    feedback: Feedback
    preamble: str | None = None
    params: tuple[ParamSpec, ...] = ()
    module_links: tuple[str, ...] = ()


@dataclass(frozen=True)
class InstancePart:
    index: int
    prompt: str
    kind: str
    spec: GraderSpec
    model_answer: Any = None


@dataclass(frozen=True)
class QuestionInstance:
    """A template with parameters resolved by a seed; re-instantiating with
    the same seed reproduces this value exactly."""

    template_id: str
    seed: int
    params: Mapping[str, int]
    body: str
    preamble: str | None
    parts: tuple[InstancePart, ...]
    feedback: Feedback
    module_links: tuple[str, ...] = ()


@dataclass(frozen=True)
class DisplayPart:
    """Student-facing descriptor of one part: prompt plus the widget the
    client should render.  Carries no expected answers by construction."""

    index: int
    kind: str
    prompt: str
    widget: Mapping[str, Any]

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "kind": self.kind,
            "prompt": self.prompt,
            "widget": dict(self.widget),
        }


@dataclass(frozen=True)
class DisplayQuestion:
    template_id: str
    body: str
    preamble: str | None
    parts: tuple[DisplayPart, ...]

    def to_json(self) -> dict:
        return {
            "template_id": self.template_id,
            "body": self.body,
            "preamble": self.preamble,
            "parts": [p.to_json() for p in self.parts],
        }


@dataclass
class BankIssue:
    template_id: str
    location: str
    message: str
    offset: int | None = None

    def format(self) -> str:
        place = f"{self.template_id}/{self.location}"
        if self.offset is not None:
            return f"{place}: {self.message} (offset {self.offset})"
        return f"{place}: {self.message}"


@dataclass
class ValidationReport:
    errors: list[BankIssue] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    template_count: int = 0

    @property
    def ok(self) -> bool:
        return not self.errors

    def format_text(self) -> str:
        lines = [f"templates: {self.template_count}"]
        for issue in self.errors:
            lines.append(f"error: {issue.format()}")
        for warning in self.warnings:
            lines.append(f"warning: {warning}")
        lines.append("result: " + ("ok" if self.ok else f"{len(self.errors)} error(s)"))
        return "\n".join(lines)


class FileFormatError(ValueError):
    """The bank document is not in the expected format."""


class ConstraintUnsatisfiable(RuntimeError):
    """Rejection sampling could not satisfy the parameter constraints."""
