"""Expression trees and their canonical text rendering.

Nodes are frozen dataclasses, so structural equality and hashing come for
free.  Number literals hold exact rationals; floating point only ever
appears during evaluation.  render() emits text that re-parses to a
structurally identical tree (the round-trip invariant) -- it always writes
explicit '*' and adds parentheses wherever precedence or a negative /
fractional literal would otherwise change the parse.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class Expr:
    """Base class for expression nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Num(Expr):
    value: Fraction

    def __post_init__(self) -> None:
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Const(Expr):
    name: str  # "pi" or "e"


@dataclass(frozen=True)
class Neg(Expr):
    child: Expr


@dataclass(frozen=True)
class Bin(Expr):
    op: str  # one of + - * / ^
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Func(Expr):
    name: str  # sin cos tan ln exp abs (sqrt is normalized away at parse time)
    arg: Expr


def free_variables(e: Expr) -> frozenset[str]:
    if isinstance(e, Var):
        return frozenset((e.name,))
    if isinstance(e, Neg):
        return free_variables(e.child)
    if isinstance(e, Bin):
        return free_variables(e.left) | free_variables(e.right)
    if isinstance(e, Func):
        return free_variables(e.arg)
    return frozenset()


# Rendering precedence levels.  ATOM > POW > MUL > NEG > ADD.
_ADD, _NEG, _MUL, _POW, _ATOM = 1, 2, 3, 4, 5


def _prec(e: Expr) -> int:
    if isinstance(e, Num):
        if e.value < 0:
            return _NEG
        if e.value.denominator != 1:
            return _MUL  # renders as p/q
        return _ATOM
    if isinstance(e, (Var, Const)):
        return _ATOM
    if isinstance(e, Func):
        return _ATOM  # fn(...) carries its own parentheses
    if isinstance(e, Neg):
        return _NEG
    assert isinstance(e, Bin)
    if e.op in "+-":
        return _ADD
    if e.op in "*/":
        return _MUL
    return _POW


def _render(e: Expr, min_prec: int) -> str:
    text: str
    if isinstance(e, Num):
        q = e.value
        text = str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
    elif isinstance(e, (Var, Const)):
        text = e.name
    elif isinstance(e, Func):
        text = f"{e.name}({_render(e.arg, 0)})"
    elif isinstance(e, Neg):
        # child must stay a single factor: Neg itself or power/atom level
        child = _render(e.child, _POW) if not isinstance(e.child, Neg) else _render(e.child, _NEG)
        text = "-" + child
    else:
        assert isinstance(e, Bin)
        if e.op == "^":
            # right associative; the base must be a bare atom
            base = _render(e.left, _ATOM)
            exponent = _render(e.right, _POW)
            text = f"{base}^{exponent}"
        else:
            prec = _prec(e)
            left = _render(e.left, prec)
            right = _render(e.right, prec + 1)
            text = f"{left}{e.op}{right}"
    if _prec(e) < min_prec:
        return f"({text})"
    return text


def render(e: Expr) -> str:
    """Serialize to grammar text; parse(render(e)) == e structurally."""
    return _render(e, 0)
