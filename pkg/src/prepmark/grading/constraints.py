"""Boolean constraint predicates over submitted bindings.

Used by questions whose accepted set is infinite ("give values of C and D
so that the system has no solution").  The vocabulary is arithmetic,
comparisons, AND/OR/NOT, and the built-in predicate
no_solution_2x2(a1,b1,c1,a2,b2,c2), true iff the linear system

    a1 x + b1 y = c1
    a2 x + b2 y = c2

is inconsistent: the coefficient determinant vanishes while at least one
cross-determinant with the constants does not.

Comparisons are exact on rational operands and tolerance-based (1e-9) when
a float is involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Union

from ..exprcore import ExprSyntaxError
from ..exprcore.ast import Expr, free_variables
from ..exprcore.evaluate import Number, _eval_exact, NotExactlyRational, evaluate
from ..exprcore.lexer import tokenize
from ..exprcore.parser import Parser

FLOAT_TOLERANCE = 1e-9


class NonConstantBinding(ValueError):
    """A submitted binding still contains free variables."""


@dataclass(frozen=True)
class Comparison:
    op: str  # = != < <= > >=
    left: Expr
    right: Expr


@dataclass(frozen=True)
class BoolOp:
    op: str  # AND | OR
    left: "PredicateNode"
    right: "PredicateNode"


@dataclass(frozen=True)
class NotOp:
    child: "PredicateNode"


@dataclass(frozen=True)
class PredicateCall:
    name: str
    args: tuple[Expr, ...]


PredicateNode = Union[Comparison, BoolOp, NotOp, PredicateCall]

_ARITY = {"no_solution_2x2": 6}


class _PredicateParser(Parser):
    def parse_predicate(self) -> PredicateNode:
        node = self.parse_or()
        trailing = self.peek()
        if trailing.kind != "END":
            raise ExprSyntaxError(
                f"unexpected {trailing.text!r}", trailing.pos, "end of predicate"
            )
        return node

    def parse_or(self) -> PredicateNode:
        node = self.parse_and()
        while self.peek().kind == "OR":
            self.advance()
            node = BoolOp("OR", node, self.parse_and())
        return node

    def parse_and(self) -> PredicateNode:
        node = self.parse_unary()
        while self.peek().kind == "AND":
            self.advance()
            node = BoolOp("AND", node, self.parse_unary())
        return node

    def parse_unary(self) -> PredicateNode:
        if self.peek().kind == "NOT":
            self.advance()
            return NotOp(self.parse_unary())
        return self.parse_primary()

    def parse_primary(self) -> PredicateNode:
        tok = self.peek()
        if tok.kind == "PREDICATE":
            self.advance()
            self.expect("LPAREN", "'('")
            args = [self.parse_expr()]
            while self.peek().kind == "COMMA":
                self.advance()
                args.append(self.parse_expr())
            self.expect("RPAREN", "')'")
            arity = _ARITY[tok.text]
            if len(args) != arity:
                raise ExprSyntaxError(
                    f"{tok.text} takes {arity} arguments, got {len(args)}", tok.pos, None
                )
            return PredicateCall(tok.text, tuple(args))
        # a comparison, or a parenthesised boolean expression; both can
        # start with '(' so try the comparison and fall back
        mark = self.i
        try:
            return self.parse_comparison()
        except ExprSyntaxError:
            self.i = mark
        self.expect("LPAREN", "'('")
        node = self.parse_or()
        self.expect("RPAREN", "')'")
        return node

    def parse_comparison(self) -> Comparison:
        left = self.parse_expr()
        tok = self.peek()
        if tok.kind != "CMP":
            raise ExprSyntaxError(
                f"unexpected {tok.text!r}" if tok.kind != "END" else "unexpected end of input",
                tok.pos,
                "a comparison operator",
            )
        self.advance()
        right = self.parse_expr()
        return Comparison(tok.text, left, right)


@lru_cache(maxsize=256)
def parse_predicate(text: str) -> PredicateNode:
    """Parse predicate text; raises ExprSyntaxError."""
    return _PredicateParser(tokenize(text)).parse_predicate()


def predicate_variables(node: PredicateNode) -> frozenset[str]:
    if isinstance(node, Comparison):
        return free_variables(node.left) | free_variables(node.right)
    if isinstance(node, BoolOp):
        return predicate_variables(node.left) | predicate_variables(node.right)
    if isinstance(node, NotOp):
        return predicate_variables(node.child)
    out: frozenset[str] = frozenset()
    for arg in node.args:
        out |= free_variables(arg)
    return out


# -- evaluation --------------------------------------------------------------


def _arith(e: Expr, bindings: Mapping[str, Number]) -> Number:
    if all(isinstance(v, Fraction) for v in bindings.values()):
        try:
            return _eval_exact(e, bindings)  # type: ignore[arg-type]
        except NotExactlyRational:
            pass
    return evaluate(e, {k: float(v) for k, v in bindings.items()})


def _numbers_equal(a: Number, b: Number) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(float(a) - float(b)) <= FLOAT_TOLERANCE


def _compare(op: str, a: Number, b: Number) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        if op == "=":
            return a == b
        if op == "!=":
            return a != b
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        return a >= b
    af, bf = float(a), float(b)
    if op == "=":
        return abs(af - bf) <= FLOAT_TOLERANCE
    if op == "!=":
        return abs(af - bf) > FLOAT_TOLERANCE
    if op == "<":
        return bf - af > FLOAT_TOLERANCE
    if op == "<=":
        return af - bf <= FLOAT_TOLERANCE
    if op == ">":
        return af - bf > FLOAT_TOLERANCE
    return bf - af <= FLOAT_TOLERANCE


def _no_solution_2x2(args: tuple[Number, ...]) -> bool:
    a1, b1, c1, a2, b2, c2 = args
    det = _sub(_mul(a1, b2), _mul(a2, b1))
    det_x = _sub(_mul(a1, c2), _mul(a2, c1))
    det_y = _sub(_mul(b1, c2), _mul(b2, c1))
    zero = Fraction(0)
    if not _numbers_equal(det, zero):
        return False
    return not (_numbers_equal(det_x, zero) and _numbers_equal(det_y, zero))


def _mul(a: Number, b: Number) -> Number:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a * b
    return float(a) * float(b)


def _sub(a: Number, b: Number) -> Number:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a - b
    return float(a) - float(b)


def evaluate_predicate(node: PredicateNode, bindings: Mapping[str, Number]) -> bool:
    if isinstance(node, Comparison):
        return _compare(node.op, _arith(node.left, bindings), _arith(node.right, bindings))
    if isinstance(node, BoolOp):
        if node.op == "AND":
            return evaluate_predicate(node.left, bindings) and evaluate_predicate(
                node.right, bindings
            )
        return evaluate_predicate(node.left, bindings) or evaluate_predicate(
            node.right, bindings
        )
    if isinstance(node, NotOp):
        return not evaluate_predicate(node.child, bindings)
    args = tuple(_arith(a, bindings) for a in node.args)
    return _no_solution_2x2(args)
