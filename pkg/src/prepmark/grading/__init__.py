"""Grading strategies mapping (grader spec, submitted response) to outcomes."""

from .constraints import NonConstantBinding, evaluate_predicate, parse_predicate
from .graders import (
    grade,
    grade_antiderivative,
    grade_choice,
    grade_constraint,
    grade_equivalence,
    grade_line_sketch,
    grade_numeric_multi,
    grade_structural_polynomial,
)
from .outcome import GradeOutcome, full_marks, no_marks
from .specs import (
    AntiderivativeSpec,
    ArmMismatch,
    ChoiceSpec,
    ConstraintSpec,
    EquivalenceSpec,
    GraderSpec,
    Line,
    LineSketchSpec,
    NumericMultiSpec,
    StructuralPolynomialSpec,
    UnknownOption,
)

__all__ = [
    "AntiderivativeSpec",
    "ArmMismatch",
    "ChoiceSpec",
    "ConstraintSpec",
    "EquivalenceSpec",
    "GradeOutcome",
    "GraderSpec",
    "Line",
    "LineSketchSpec",
    "NonConstantBinding",
    "NumericMultiSpec",
    "StructuralPolynomialSpec",
    "UnknownOption",
    "evaluate_predicate",
    "full_marks",
    "grade",
    "grade_antiderivative",
    "grade_choice",
    "grade_constraint",
    "grade_equivalence",
    "grade_line_sketch",
    "grade_numeric_multi",
    "grade_structural_polynomial",
    "no_marks",
    "parse_predicate",
]
