"""Exact-rational polynomial normal form and the expanded-sum shape check.

The normal form maps monomial signatures (sorted (variable, exponent)
tuples, zero exponents dropped) to nonzero Fraction coefficients; two
expressions denote the same polynomial iff their maps are equal.  Matching
against this form accepts any permutation of the expanded terms, which is
how "expand the bracket" answers get graded: value equality via the map,
shape via is_expanded_sum_form.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator

from .ast import Bin, Const, Expr, Func, Neg, Num, Var
from .errors import NotAPolynomial

Monomial = tuple[tuple[str, int], ...]
_CONST_MONO: Monomial = ()


class PolynomialNF:
    """Canonical expanded form of a polynomial over exact rationals."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Monomial, Fraction]):
        self.terms = {m: c for m, c in terms.items() if c != 0}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolynomialNF):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self) -> str:
        return f"PolynomialNF({self.terms!r})"

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(sorted(self.terms.items(), key=_term_order))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(exp for _, exp in mono) for mono in self.terms)

    def to_expr(self) -> Expr:
        """Render as an expanded sum, highest total degree first.

        The result always satisfies is_expanded_sum_form.
        """
        if not self.terms:
            return Num(Fraction(0))
        node: Expr | None = None
        for mono, coeff in self:
            if node is None:
                node = _term_expr(coeff, mono)
            elif coeff < 0:
                node = Bin("-", node, _term_expr(-coeff, mono))
            else:
                node = Bin("+", node, _term_expr(coeff, mono))
        assert node is not None
        return node


def _term_order(item: tuple[Monomial, Fraction]) -> tuple:
    mono, _ = item
    return (-sum(exp for _, exp in mono), mono)


def _term_expr(coeff: Fraction, mono: Monomial) -> Expr:
    factors: list[Expr] = []
    for name, exp in mono:
        factors.append(Var(name) if exp == 1 else Bin("^", Var(name), Num(Fraction(exp))))
    if not factors:
        return Num(coeff)
    product: Expr | None = None
    if coeff == -1:
        pass  # rendered via Neg below
    elif coeff != 1:
        product = Num(coeff)
    for f in factors:
        product = f if product is None else Bin("*", product, f)
    assert product is not None
    return Neg(product) if coeff == -1 else product


# -- conversion ------------------------------------------------------------


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    exps: dict[str, int] = dict(a)
    for name, exp in b:
        exps[name] = exps.get(name, 0) + exp
    return tuple(sorted(exps.items()))


def _add_into(acc: dict[Monomial, Fraction], mono: Monomial, coeff: Fraction) -> None:
    total = acc.get(mono, Fraction(0)) + coeff
    if total == 0:
        acc.pop(mono, None)
    else:
        acc[mono] = total


def _multiply(a: dict[Monomial, Fraction], b: dict[Monomial, Fraction]) -> dict[Monomial, Fraction]:
    out: dict[Monomial, Fraction] = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            _add_into(out, _mono_mul(ma, mb), ca * cb)
    return out


def _power(base: dict[Monomial, Fraction], n: int) -> dict[Monomial, Fraction]:
    result: dict[Monomial, Fraction] = {_CONST_MONO: Fraction(1)}
    square = base
    while n:
        if n & 1:
            result = _multiply(result, square)
        n >>= 1
        if n:
            square = _multiply(square, square)
    return result


def _to_terms(e: Expr) -> dict[Monomial, Fraction]:
    if isinstance(e, Num):
        return {_CONST_MONO: e.value} if e.value != 0 else {}
    if isinstance(e, Var):
        return {((e.name, 1),): Fraction(1)}
    if isinstance(e, Const):
        raise NotAPolynomial(f"transcendental constant {e.name}")
    if isinstance(e, Func):
        raise NotAPolynomial(f"transcendental function {e.name}")
    if isinstance(e, Neg):
        return {m: -c for m, c in _to_terms(e.child).items()}
    assert isinstance(e, Bin)
    if e.op in "+-":
        acc = dict(_to_terms(e.left))
        sign = Fraction(1) if e.op == "+" else Fraction(-1)
        for mono, coeff in _to_terms(e.right).items():
            _add_into(acc, mono, sign * coeff)
        return acc
    if e.op == "*":
        return _multiply(_to_terms(e.left), _to_terms(e.right))
    if e.op == "/":
        divisor = _to_terms(e.right)
        if not divisor:
            raise NotAPolynomial("division by zero")
        if list(divisor.keys()) != [_CONST_MONO]:
            raise NotAPolynomial("division by a variable expression")
        scale = divisor[_CONST_MONO]
        return {m: c / scale for m, c in _to_terms(e.left).items()}
    # power
    if not isinstance(e.right, Num):
        raise NotAPolynomial("exponent is not a number literal")
    exponent = e.right.value
    if exponent.denominator != 1 or exponent < 0:
        raise NotAPolynomial("non-integer or negative exponent")
    return _power(_to_terms(e.left), int(exponent))


def to_polynomial_nf(e: Expr) -> PolynomialNF:
    """Fully expanded, like-terms-collected canonical form.

    Raises NotAPolynomial for division by a variable expression,
    non-integer or negative exponents, or transcendental parts.
    """
    return PolynomialNF(_to_terms(e))


# -- structural check ------------------------------------------------------


def _flatten_sum(e: Expr, sign: int, out: list[tuple[int, Expr]]) -> None:
    if isinstance(e, Bin) and e.op in "+-":
        _flatten_sum(e.left, sign, out)
        _flatten_sum(e.right, sign if e.op == "+" else -sign, out)
    elif isinstance(e, Neg):
        _flatten_sum(e.child, -sign, out)
    else:
        out.append((sign, e))


def _strip_leading_neg(node: Expr) -> Expr:
    """Drop a sign attached to the leftmost factor of a product ("-x*y"
    parses as (-x)*y; the minus is the term's sign, not part of its shape)."""
    if isinstance(node, Neg):
        return node.child
    if isinstance(node, Bin) and node.op in "*/":
        stripped = _strip_leading_neg(node.left)
        if stripped is not node.left:
            return Bin(node.op, stripped, node.right)
    return node


def _term_signature(term: Expr) -> Monomial | None:
    """Signature of one product term, or None if the term is not in
    expanded shape (at most one numeric literal, each variable at most
    once, only literal non-negative integer exponents, division only by a
    numeric literal)."""
    term = _strip_leading_neg(term)
    numerals = 0
    exps: dict[str, int] = {}

    def visit(node: Expr) -> bool:
        nonlocal numerals
        if isinstance(node, Bin) and node.op == "*":
            return visit(node.left) and visit(node.right)
        if isinstance(node, Bin) and node.op == "/":
            if not isinstance(node.right, Num):
                return False
            numerals += 1
            return visit(node.left)
        if isinstance(node, Num):
            numerals += 1
            return True
        if isinstance(node, Var):
            if node.name in exps:
                return False
            exps[node.name] = 1
            return True
        if isinstance(node, Bin) and node.op == "^":
            if not isinstance(node.left, Var) or not isinstance(node.right, Num):
                return False
            exponent = node.right.value
            if exponent.denominator != 1 or exponent < 0:
                return False
            if node.left.name in exps:
                return False
            exps[node.left.name] = int(exponent)
            return True
        return False

    if not visit(term) or numerals > 1:
        return None
    return tuple(sorted((name, exp) for name, exp in exps.items() if exp > 0))


def is_expanded_sum_form(e: Expr) -> bool:
    """True iff e is a sum of collected monomial terms: no parenthesized
    sums inside products or powers, no repeated monomial signature."""
    terms: list[tuple[int, Expr]] = []
    _flatten_sum(e, 1, terms)
    seen: set[Monomial] = set()
    for _, term in terms:
        signature = _term_signature(term)
        if signature is None or signature in seen:
            return False
        seen.add(signature)
    return True
