"""Numeric and exact evaluation of expression trees.

Pure-rational subtrees are computed in exact Fraction arithmetic and only
converted to IEEE doubles at the boundary, so (1/3)*3 evaluates to exactly
1.0.  Anything touching pi, e, a transcendental function or a fractional
power drops to floats.

The sampler-facing entry point takes a pole guard: values whose divisor,
log argument or cos (for tan) falls within the guard radius raise
NonFiniteResult so the caller resamples instead of comparing garbage near
a singularity.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, Union

from .ast import Bin, Const, Expr, Func, Neg, Num, Var
from .errors import NonFiniteResult, UnboundVariable

Number = Union[Fraction, float]

# Exponent size beyond which exact integer powers are not worth the memory.
_MAX_EXACT_POW = 128


def _as_float(v: Number) -> float:
    try:
        f = float(v)
    except OverflowError as exc:
        raise NonFiniteResult("overflow converting exact value") from exc
    if not math.isfinite(f):
        raise NonFiniteResult("non-finite value")
    return f


def _apply_function(name: str, arg: float, guard: float) -> float:
    try:
        if name == "sin":
            return math.sin(arg)
        if name == "cos":
            return math.cos(arg)
        if name == "tan":
            if abs(math.cos(arg)) <= max(guard, 1e-12):
                raise NonFiniteResult("tan pole")
            return math.tan(arg)
        if name == "ln":
            if arg <= guard:
                raise NonFiniteResult("ln of non-positive value")
            return math.log(arg)
        if name == "exp":
            return math.exp(arg)
        if name == "abs":
            return abs(arg)
    except (ValueError, OverflowError) as exc:
        raise NonFiniteResult(f"{name} out of range") from exc
    raise AssertionError(f"unknown function {name}")


def _pow(base: Number, exponent: Number, guard: float) -> Number:
    if (
        isinstance(base, Fraction)
        and isinstance(exponent, Fraction)
        and exponent.denominator == 1
        and abs(exponent.numerator) <= _MAX_EXACT_POW
    ):
        n = exponent.numerator
        if base == 0 and n < 0:
            raise NonFiniteResult("zero to a negative power")
        return base**n
    b, x = _as_float(base), _as_float(exponent)
    try:
        result = math.pow(b, x)
    except (ValueError, OverflowError) as exc:
        raise NonFiniteResult("power out of range") from exc
    if not math.isfinite(result):
        raise NonFiniteResult("power overflow")
    return result


def _eval(e: Expr, bindings: Mapping[str, float], guard: float) -> Number:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        try:
            return bindings[e.name]
        except KeyError:
            raise UnboundVariable(e.name) from None
    if isinstance(e, Const):
        return math.pi if e.name == "pi" else math.e
    if isinstance(e, Neg):
        return -_eval(e.child, bindings, guard)
    if isinstance(e, Func):
        return _apply_function(e.name, _as_float(_eval(e.arg, bindings, guard)), guard)
    assert isinstance(e, Bin)
    if e.op == "^":
        return _pow(_eval(e.left, bindings, guard), _eval(e.right, bindings, guard), guard)
    lhs = _eval(e.left, bindings, guard)
    rhs = _eval(e.right, bindings, guard)
    exact = isinstance(lhs, Fraction) and isinstance(rhs, Fraction)
    if e.op == "+":
        return lhs + rhs if exact else _as_float(lhs) + _as_float(rhs)
    if e.op == "-":
        return lhs - rhs if exact else _as_float(lhs) - _as_float(rhs)
    if e.op == "*":
        try:
            return lhs * rhs if exact else _as_float(lhs) * _as_float(rhs)
        except OverflowError as exc:
            raise NonFiniteResult("multiplication overflow") from exc
    # division
    if exact:
        if rhs == 0:
            raise NonFiniteResult("division by zero")
        return lhs / rhs
    denom = _as_float(rhs)
    if abs(denom) <= guard or denom == 0.0:
        raise NonFiniteResult("division by (near-)zero")
    return _as_float(lhs) / denom


def evaluate(e: Expr, bindings: Mapping[str, float] | None = None) -> float:
    """Evaluate with every free variable bound; returns an IEEE double.

    Raises UnboundVariable for a missing binding and NonFiniteResult for
    division by zero, ln of a non-positive value, or overflow.
    """
    result = _eval(e, bindings or {}, 0.0)
    return _as_float(result)


def evaluate_guarded(e: Expr, bindings: Mapping[str, float], guard: float) -> float:
    """Sampler entry point: additionally rejects points within the guard
    radius of a pole candidate (tiny divisor, log argument, tan pole)."""
    return _as_float(_eval(e, bindings, guard))


class NotExactlyRational(ValueError):
    """The expression's value is not an exact rational."""


def _eval_exact(e: Expr, bindings: Mapping[str, Fraction]) -> Fraction:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        try:
            return bindings[e.name]
        except KeyError:
            raise UnboundVariable(e.name) from None
    if isinstance(e, Const):
        raise NotExactlyRational(e.name)
    if isinstance(e, Neg):
        return -_eval_exact(e.child, bindings)
    if isinstance(e, Func):
        raise NotExactlyRational(e.name)
    assert isinstance(e, Bin)
    if e.op == "^":
        base = _eval_exact(e.left, bindings)
        exponent = _eval_exact(e.right, bindings)
        if exponent.denominator != 1 or abs(exponent.numerator) > _MAX_EXACT_POW:
            raise NotExactlyRational("fractional or huge exponent")
        if base == 0 and exponent < 0:
            raise NonFiniteResult("zero to a negative power")
        return base**exponent.numerator
    lhs = _eval_exact(e.left, bindings)
    rhs = _eval_exact(e.right, bindings)
    if e.op == "+":
        return lhs + rhs
    if e.op == "-":
        return lhs - rhs
    if e.op == "*":
        return lhs * rhs
    if rhs == 0:
        raise NonFiniteResult("division by zero")
    return lhs / rhs


def constant_value(e: Expr) -> Number:
    """Value of a closed expression: exact Fraction when the tree is pure
    rational arithmetic, float otherwise.  Raises UnboundVariable if the
    expression has free variables."""
    try:
        return _eval_exact(e, {})
    except NotExactlyRational:
        return evaluate(e, {})
