"""Expression engine: parsing, evaluation, differentiation, polynomial
normal forms and probabilistic equivalence."""

from .ast import Bin, Const, Expr, Func, Neg, Num, Var, free_variables, render
from .calculus import differentiate
from .equivalence import SamplingConfig, equivalent
from .errors import (
    ExprSyntaxError,
    InsufficientSamples,
    NonFiniteResult,
    NotAPolynomial,
    UnboundVariable,
    UnsupportedNode,
)
from .evaluate import constant_value, evaluate
from .parser import parse
from .polynomial import PolynomialNF, is_expanded_sum_form, to_polynomial_nf

__all__ = [
    "Bin",
    "Const",
    "Expr",
    "ExprSyntaxError",
    "Func",
    "InsufficientSamples",
    "Neg",
    "NonFiniteResult",
    "NotAPolynomial",
    "Num",
    "PolynomialNF",
    "SamplingConfig",
    "UnboundVariable",
    "UnsupportedNode",
    "Var",
    "constant_value",
    "differentiate",
    "equivalent",
    "evaluate",
    "free_variables",
    "is_expanded_sum_form",
    "parse",
    "render",
    "to_polynomial_nf",
]
