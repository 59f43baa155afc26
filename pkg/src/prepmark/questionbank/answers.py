"""Model-answer synthesis for validation and cohort simulation.

A part's correct response comes from its model_answer field when present;
otherwise it is derived from the grader spec (expanded polynomial
rendering, the expected expression, an accepted number, the correct
option set, two points on the target line).  Antiderivative and
constraint parts cannot be derived, which is why validate_bank requires a
model_answer for them.
"""

from __future__ import annotations

import random
from typing import Any

from ..exprcore import render, to_polynomial_nf
from ..grading.specs import (
    AntiderivativeSpec,
    ChoiceSpec,
    ConstraintSpec,
    EquivalenceSpec,
    LineSketchSpec,
    NumericMultiSpec,
    StructuralPolynomialSpec,
)
from .model import InstancePart


def _coerce(kind: str, model: Any) -> Any:
    if kind in ("structural_poly", "equivalence", "antiderivative"):
        return str(model)
    if kind == "numeric_multi":
        return model if isinstance(model, (int, float)) else str(model)
    if kind == "choice_single":
        return str(model)
    if kind == "choice_multi":
        return set(str(m) for m in model)
    if kind == "line_sketch":
        (x1, y1), (x2, y2) = model
        return ((float(x1), float(y1)), (float(x2), float(y2)))
    if kind == "constraint":
        return {str(k): str(v) for k, v in dict(model).items()}
    raise ValueError(f"unknown kind {kind!r}")


def _points_on_line(spec: LineSketchSpec) -> tuple[tuple[float, float], tuple[float, float]]:
    (x_lo, x_hi), (y_lo, y_hi) = spec.canvas_x, spec.canvas_y
    found: list[tuple[float, float]] = []
    steps = 25
    for i in range(steps + 1):
        x = x_lo + (x_hi - x_lo) * i / steps
        y = spec.target.slope * x + spec.target.intercept
        if y_lo <= y <= y_hi:
            found.append((x, y))
            if len(found) == 2 and abs(found[1][0] - found[0][0]) > 0.3:
                return found[0], found[1]
    if len(found) >= 2:
        return found[0], found[-1]
    raise ValueError("target line does not cross the canvas twice")


def synthesize_correct_response(part: InstancePart) -> Any:
    """A response that must earn full marks under part.spec."""
    if part.model_answer is not None:
        return _coerce(part.kind, part.model_answer)
    spec = part.spec
    if isinstance(spec, StructuralPolynomialSpec):
        return render(to_polynomial_nf(spec.expected).to_expr())
    if isinstance(spec, EquivalenceSpec):
        return render(spec.expected)
    if isinstance(spec, NumericMultiSpec):
        return spec.accepted[0]
    if isinstance(spec, ChoiceSpec):
        if spec.mode == "single":
            return min(spec.correct)
        return set(spec.correct)
    if isinstance(spec, LineSketchSpec):
        return _points_on_line(spec)
    raise ValueError(
        f"{type(spec).__name__} parts need an explicit model_answer in the bank"
    )


def synthesize_wrong_response(part: InstancePart, rng: random.Random) -> Any:
    """A plausible incorrect response, covering realistic mistakes (the
    factored bracket, a forgotten constant, over-ticking)."""
    spec = part.spec
    if isinstance(spec, StructuralPolynomialSpec):
        if rng.random() < 0.5:
            return render(spec.expected)  # unexpanded bracket
        return "a+1"
    if isinstance(spec, EquivalenceSpec):
        return render(spec.expected) + " + 1"
    if isinstance(spec, AntiderivativeSpec):
        model = str(part.model_answer) if part.model_answer is not None else "x"
        stripped = model.replace("+ C", "").replace("+C", "").strip()
        if rng.random() < 0.5 and stripped != model:
            return stripped  # right answer, missing constant: partial credit
        return "x^2"
    if isinstance(spec, NumericMultiSpec):
        return spec.accepted[0] + 1.0 + rng.random()
    if isinstance(spec, ChoiceSpec):
        wrong_pool = [o for o in spec.options if o not in spec.correct]
        if spec.mode == "single":
            return rng.choice(wrong_pool) if wrong_pool else min(spec.correct)
        return set(spec.options)  # tick everything
    if isinstance(spec, LineSketchSpec):
        (x_lo, x_hi), (y_lo, y_hi) = spec.canvas_x, spec.canvas_y
        return ((x_lo, y_lo), (x_hi, y_hi))
    assert isinstance(spec, ConstraintSpec)
    return {name: str(rng.randrange(50, 99)) for name in spec.variables}
