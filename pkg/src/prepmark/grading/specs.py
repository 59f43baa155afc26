"""Grader specifications, one dataclass per question-part strategy.

A spec is the grader-side half of a question part: everything needed to
mark a submitted response, including the sampling seed, so grading is a
pure function of (spec, response).  Serialization of these lives with the
question bank; here they are plain validated dataclasses.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..exprcore import Expr, SamplingConfig


class ArmMismatch(TypeError):
    """Response shape does not match the grader spec arm."""


class UnknownOption(ValueError):
    """A submitted option id is not among the declared options."""


@dataclass(frozen=True)
class StructuralPolynomialSpec:
    """Fully-expanded-polynomial answer, e.g. 'expand the bracket'."""

    expected: Expr


@dataclass(frozen=True)
class EquivalenceSpec:
    """Any expression equivalent to the expected one is accepted."""

    expected: Expr
    sampling: SamplingConfig = field(default_factory=SamplingConfig)


@dataclass(frozen=True)
class AntiderivativeSpec:
    """Marked by differentiating the response and comparing with the
    integrand; a missing constant of integration costs `penalty`."""

    integrand: Expr
    var: str = "x"
    constant_symbol: str = "C"
    penalty: float = 0.1
    sampling: SamplingConfig = field(default_factory=SamplingConfig)

    def __post_init__(self) -> None:
        if not 0.0 < self.penalty < 1.0:
            raise ValueError("penalty must lie strictly between 0 and 1")


@dataclass(frozen=True)
class NumericMultiSpec:
    """Free numeric response with one or more accepted values."""

    accepted: tuple[float, ...]
    abs_tolerance: float = 1e-9

    def __post_init__(self) -> None:
        object.__setattr__(self, "accepted", tuple(float(a) for a in self.accepted))
        if not self.accepted:
            raise ValueError("accepted values must be non-empty")
        if self.abs_tolerance <= 0:
            raise ValueError("abs_tolerance must be positive")


@dataclass(frozen=True)
class ChoiceSpec:
    """Drop-down (single) or tick-box (multi) selection."""

    options: tuple[str, ...]
    correct: frozenset[str]
    mode: str = "single"  # "single" | "multi"
    labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "options", tuple(self.options))
        object.__setattr__(self, "correct", frozenset(self.correct))
        if self.mode not in ("single", "multi"):
            raise ValueError(f"unknown choice mode {self.mode!r}")
        if not self.correct <= set(self.options):
            raise ValueError("correct ids must be a subset of options")
        if self.labels and len(self.labels) != len(self.options):
            raise ValueError("labels must pair up with options")


@dataclass(frozen=True)
class Line:
    """y = slope*x + intercept"""

    slope: float
    intercept: float

    def __post_init__(self) -> None:
        import math

        if not (math.isfinite(self.slope) and math.isfinite(self.intercept)):
            raise ValueError("line coefficients must be finite")


@dataclass(frozen=True)
class LineSketchSpec:
    """Sketch by placing two points; graded on implied slope/intercept."""

    target: Line
    slope_tol: float = 0.05
    intercept_tol: float = 0.05
    canvas_x: tuple[float, float] = (-3.0, 3.0)
    canvas_y: tuple[float, float] = (-3.0, 3.0)

    def __post_init__(self) -> None:
        if self.slope_tol <= 0 or self.intercept_tol <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class ConstraintSpec:
    """Accepts every binding of the named variables satisfying a boolean
    predicate, so the accepted set may be infinite."""

    predicate: str
    variables: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        if not self.variables:
            raise ValueError("constraint spec needs at least one variable")


GraderSpec = (
    StructuralPolynomialSpec
    | EquivalenceSpec
    | AntiderivativeSpec
    | NumericMultiSpec
    | ChoiceSpec
    | LineSketchSpec
    | ConstraintSpec
)
