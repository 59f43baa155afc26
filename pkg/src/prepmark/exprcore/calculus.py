"""Symbolic differentiation.

Produces a correct but unsimplified derivative tree; downstream users
compare numerically, so no rewriting is attempted beyond the literal
folds shared with the parser.  abs is rejected (its derivative is
undefined at 0) rather than guessed.
"""

from __future__ import annotations

from fractions import Fraction

from .ast import Bin, Const, Expr, Func, Neg, Num, Var, free_variables
from .errors import UnsupportedNode
from .parser import fold_neg

_ZERO = Num(Fraction(0))
_ONE = Num(Fraction(1))


def differentiate(e: Expr, var: str) -> Expr:
    """d(e)/d(var).  Raises UnsupportedNode for abs."""
    if isinstance(e, (Num, Const)):
        return _ZERO
    if isinstance(e, Var):
        return _ONE if e.name == var else _ZERO
    if isinstance(e, Neg):
        return fold_neg(differentiate(e.child, var))
    if isinstance(e, Func):
        du = differentiate(e.arg, var)
        if e.name == "sin":
            outer: Expr = Func("cos", e.arg)
        elif e.name == "cos":
            outer = Neg(Func("sin", e.arg))
        elif e.name == "tan":
            outer = Bin("/", _ONE, Bin("^", Func("cos", e.arg), Num(Fraction(2))))
        elif e.name == "ln":
            return Bin("/", du, e.arg)
        elif e.name == "exp":
            outer = Func("exp", e.arg)
        else:  # abs
            raise UnsupportedNode(f"cannot differentiate {e.name}")
        return Bin("*", outer, du)
    assert isinstance(e, Bin)
    u, v = e.left, e.right
    if e.op == "+":
        return Bin("+", differentiate(u, var), differentiate(v, var))
    if e.op == "-":
        return Bin("-", differentiate(u, var), differentiate(v, var))
    if e.op == "*":
        return Bin(
            "+",
            Bin("*", differentiate(u, var), v),
            Bin("*", u, differentiate(v, var)),
        )
    if e.op == "/":
        numerator = Bin(
            "-",
            Bin("*", differentiate(u, var), v),
            Bin("*", u, differentiate(v, var)),
        )
        return Bin("/", numerator, Bin("^", v, Num(Fraction(2))))
    # power: split on where the differentiation variable lives
    exponent_fixed = var not in free_variables(v)
    base_fixed = var not in free_variables(u)
    if exponent_fixed and base_fixed:
        return _ZERO
    if exponent_fixed:
        # v * u^(v-1) * u'
        return Bin(
            "*",
            Bin("*", v, Bin("^", u, Bin("-", v, _ONE))),
            differentiate(u, var),
        )
    if base_fixed:
        # u^v * ln(u) * v'
        return Bin(
            "*",
            Bin("*", e, Func("ln", u)),
            differentiate(v, var),
        )
    # u^v * (v' ln(u) + v u'/u)
    bracket = Bin(
        "+",
        Bin("*", differentiate(v, var), Func("ln", u)),
        Bin("*", v, Bin("/", differentiate(u, var), u)),
    )
    return Bin("*", e, bracket)
