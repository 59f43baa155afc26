"""Grading strategies, one pure function per response kind.

Every grader maps (spec, submitted response) to a GradeOutcome and is
deterministic: sampling seeds live inside the spec.  Problems with the
student's input (syntax errors, non-numeric text, degenerate sketch
points) fold into score-0 outcomes carrying a feedback key; exceptions are
reserved for malformed calls (wrong response arm, unknown option ids).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, Union

from ..exprcore import (
    Expr,
    ExprSyntaxError,
    InsufficientSamples,
    differentiate,
    equivalent,
    free_variables,
    is_expanded_sum_form,
    parse,
    to_polynomial_nf,
)
from ..exprcore.ast import Bin, Neg, Num, Var
from ..exprcore.errors import NonFiniteResult, NotAPolynomial, UnboundVariable
from ..exprcore.evaluate import constant_value
from .constraints import evaluate_predicate, parse_predicate, predicate_variables
from .outcome import GradeOutcome, full_marks, no_marks
from .specs import (
    AntiderivativeSpec,
    ArmMismatch,
    ChoiceSpec,
    ConstraintSpec,
    EquivalenceSpec,
    GraderSpec,
    LineSketchSpec,
    NumericMultiSpec,
    StructuralPolynomialSpec,
    UnknownOption,
)

PointPair = tuple[tuple[float, float], tuple[float, float]]
SubmittedResponse = Union[str, float, int, frozenset, set, tuple, Mapping]

_COINCIDENT_EPS = 1e-9


def _parse_student(text: str) -> Expr | GradeOutcome:
    try:
        return parse(text)
    except ExprSyntaxError as exc:
        return no_marks("parse_error", detail=str(exc))


def grade_structural_polynomial(spec: StructuralPolynomialSpec, resp: str) -> GradeOutcome:
    """Full marks only for the fully expanded, collected form; any term
    order is fine.  A value match in the wrong shape (e.g. the original
    factored bracket) is flagged right_value_wrong_form."""
    parsed = _parse_student(resp)
    if isinstance(parsed, GradeOutcome):
        return parsed
    expected_nf = to_polynomial_nf(spec.expected)
    try:
        got_nf = to_polynomial_nf(parsed)
    except NotAPolynomial:
        return no_marks(flags=frozenset({"not_a_polynomial"}))
    if got_nf != expected_nf:
        return no_marks()
    if not is_expanded_sum_form(parsed):
        return no_marks(
            "right_value_wrong_form", flags=frozenset({"right_value_wrong_form"})
        )
    return full_marks()


def _has_constant_term(e: Expr, symbol: str) -> bool:
    """Is `symbol` present as an additive top-level term (allowing a sign
    and a numeric coefficient, e.g. +C, -C, 2C, C/3)?"""
    terms: list[Expr] = []

    def flatten(node: Expr) -> None:
        if isinstance(node, Bin) and node.op in "+-":
            flatten(node.left)
            flatten(node.right)
        elif isinstance(node, Neg):
            flatten(node.child)
        else:
            terms.append(node)

    flatten(e)

    def is_scaled_symbol(node: Expr) -> bool:
        if isinstance(node, Var):
            return node.name == symbol
        if isinstance(node, Neg):
            return is_scaled_symbol(node.child)
        if isinstance(node, Bin) and node.op in "*/":
            left_num = isinstance(node.left, Num)
            right_num = isinstance(node.right, Num)
            if left_num and not right_num:
                return is_scaled_symbol(node.right)
            if right_num and not left_num:
                return is_scaled_symbol(node.left)
        return False

    return any(is_scaled_symbol(t) for t in terms)


def grade_antiderivative(spec: AntiderivativeSpec, resp: str) -> GradeOutcome:
    """Differentiate the response and compare with the integrand; answers
    differing by any constant are accepted, and a response with no
    additive constant symbol loses the configured penalty."""
    parsed = _parse_student(resp)
    if isinstance(parsed, GradeOutcome):
        return parsed
    try:
        derivative = differentiate(parsed, spec.var)
    except Exception:
        return no_marks(flags=frozenset({"not_differentiable"}))
    try:
        if not equivalent(derivative, spec.integrand, spec.sampling):
            return no_marks()
    except InsufficientSamples:
        return no_marks("manual_review", flags=frozenset({"manual_review"}))
    if not _has_constant_term(parsed, spec.constant_symbol):
        return GradeOutcome(
            1.0 - spec.penalty,
            frozenset({"missing_constant"}),
            "missing_constant",
            detail=f"Use {spec.constant_symbol} for the constant of integration.",
        )
    return full_marks()


def grade_equivalence(spec: EquivalenceSpec, resp: str) -> GradeOutcome:
    parsed = _parse_student(resp)
    if isinstance(parsed, GradeOutcome):
        return parsed
    try:
        ok = equivalent(parsed, spec.expected, spec.sampling)
    except InsufficientSamples:
        return no_marks("manual_review", flags=frozenset({"manual_review"}))
    return full_marks() if ok else no_marks()


def grade_numeric_multi(spec: NumericMultiSpec, resp: float | int | str) -> GradeOutcome:
    if isinstance(resp, str):
        try:
            value = float(resp)
        except ValueError:
            # allow simple constant expressions like 2/3 or -sqrt(2)
            try:
                value = float(constant_value(parse(resp)))
            except (ExprSyntaxError, UnboundVariable, NonFiniteResult):
                return no_marks("parse_error", detail="not a number")
    else:
        value = float(resp)
    if not math.isfinite(value):
        return no_marks("parse_error", detail="not a finite number")
    if min(abs(value - a) for a in spec.accepted) <= spec.abs_tolerance:
        return full_marks()
    return no_marks()


def grade_choice(spec: ChoiceSpec, resp) -> GradeOutcome:
    if spec.mode == "single":
        if not isinstance(resp, str):
            raise ArmMismatch("single-choice response must be one option id")
        if resp not in spec.options:
            raise UnknownOption(resp)
        return full_marks() if resp in spec.correct else no_marks()
    if isinstance(resp, str) or not isinstance(resp, (set, frozenset, list, tuple)):
        raise ArmMismatch("multi-choice response must be a set of option ids")
    chosen = frozenset(resp)
    for option in chosen:
        if option not in spec.options:
            raise UnknownOption(option)
    hits = len(chosen & spec.correct)
    misses = len(chosen - spec.correct)
    score = max(0.0, (hits - misses) / len(spec.correct)) if spec.correct else 0.0
    if score == 1.0:
        return full_marks()
    return GradeOutcome(score, frozenset(), "incorrect")


def grade_line_sketch(spec: LineSketchSpec, resp: PointPair) -> GradeOutcome:
    (x1, y1), (x2, y2) = resp
    xs, ys = spec.canvas_x, spec.canvas_y
    for x, y in ((x1, y1), (x2, y2)):
        if not (xs[0] <= x <= xs[1] and ys[0] <= y <= ys[1]):
            return no_marks("out_of_canvas", flags=frozenset({"out_of_canvas"}))
    if math.hypot(x2 - x1, y2 - y1) < _COINCIDENT_EPS:
        return no_marks("degenerate_points", flags=frozenset({"degenerate_points"}))
    if abs(x2 - x1) < _COINCIDENT_EPS:
        return no_marks("vertical_line", flags=frozenset({"vertical_line"}))
    slope = (y2 - y1) / (x2 - x1)
    intercept = y1 - slope * x1
    if (
        abs(slope - spec.target.slope) <= spec.slope_tol
        and abs(intercept - spec.target.intercept) <= spec.intercept_tol
    ):
        return full_marks()
    return no_marks()


def grade_constraint(spec: ConstraintSpec, resp: Mapping[str, str]) -> GradeOutcome:
    predicate = parse_predicate(spec.predicate)
    referenced = predicate_variables(predicate)
    if set(resp.keys()) != set(spec.variables) or not referenced <= set(spec.variables):
        raise ArmMismatch(
            f"expected bindings for {sorted(spec.variables)}, got {sorted(resp.keys())}"
        )
    values = {}
    for name in spec.variables:
        parsed = _parse_student(str(resp[name]))
        if isinstance(parsed, GradeOutcome):
            return parsed
        if free_variables(parsed):
            return no_marks(
                "non_constant_binding", flags=frozenset({"non_constant_binding"}),
                detail=f"the value of {name} must be a constant",
            )
        try:
            values[name] = constant_value(parsed)
        except NonFiniteResult:
            return no_marks("parse_error", detail=f"the value of {name} is undefined")
    return full_marks() if evaluate_predicate(predicate, values) else no_marks()


def grade(spec: GraderSpec, resp: SubmittedResponse) -> GradeOutcome:
    """Dispatch to the arm-specific grader; raises ArmMismatch when the
    response shape does not match the spec arm."""
    if isinstance(spec, StructuralPolynomialSpec):
        _require(isinstance(resp, str), "expression text")
        return grade_structural_polynomial(spec, resp)
    if isinstance(spec, EquivalenceSpec):
        _require(isinstance(resp, str), "expression text")
        return grade_equivalence(spec, resp)
    if isinstance(spec, AntiderivativeSpec):
        _require(isinstance(resp, str), "expression text")
        return grade_antiderivative(spec, resp)
    if isinstance(spec, NumericMultiSpec):
        _require(isinstance(resp, (int, float, str)) and not isinstance(resp, bool), "a number")
        return grade_numeric_multi(spec, resp)
    if isinstance(spec, ChoiceSpec):
        return grade_choice(spec, resp)
    if isinstance(spec, LineSketchSpec):
        resp = _as_point_pair(resp)
        return grade_line_sketch(spec, resp)
    if isinstance(spec, ConstraintSpec):
        _require(isinstance(resp, Mapping), "a variable->value mapping")
        return grade_constraint(spec, resp)
    raise ArmMismatch(f"unknown grader spec {type(spec).__name__}")


def _require(ok: bool, what: str) -> None:
    if not ok:
        raise ArmMismatch(f"response must be {what}")


def _as_point_pair(resp) -> PointPair:
    try:
        (x1, y1), (x2, y2) = resp
        return ((float(x1), float(y1)), (float(x2), float(y2)))
    except (TypeError, ValueError) as exc:
        raise ArmMismatch("response must be two (x, y) points") from exc
