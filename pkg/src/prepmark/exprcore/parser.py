"""Recursive-descent parser for the expression grammar.

    expr      := term (('+'|'-') term)*
    term      := adjacent (('*'|'/') adjacent)*
    adjacent  := factor factor*          -- implicit multiplication
    factor    := '-' factor | atom ('^' factor)?
    atom      := NUMBER | VAR | CONST | FUNC '(' expr ')' | '(' expr ')'

Adjacency binds tighter than explicit '*' and '/' (1/2x means 1/(2*x))
and looser than '^' (4a^3 means 4*(a^3)).  '^' is right associative and
unary minus binds looser than it (-x^2 means -(x^2)).  An adjacent factor
never starts with '-', so "x-4" is always subtraction.

Two folds keep literals exact and rendering round-trip safe: a negated
number literal becomes a negative Num, and a division of two number
literals becomes a single rational Num (so "3/2" is the literal 3/2).
sqrt(u) is normalized to u^(1/2) on the spot.
"""

from __future__ import annotations

from fractions import Fraction

from .ast import Bin, Const, Expr, Func, Neg, Num, Var
from .errors import ExprSyntaxError
from .lexer import Token, tokenize

MAX_INPUT_LENGTH = 4096

_ATOM_STARTERS = frozenset(("NUMBER", "VAR", "CONST", "FUNC", "LPAREN"))


def fold_neg(child: Expr) -> Expr:
    if isinstance(child, Num):
        return Num(-child.value)
    return Neg(child)


def fold_div(left: Expr, right: Expr) -> Expr:
    if isinstance(left, Num) and isinstance(right, Num) and right.value != 0:
        return Num(left.value / right.value)
    return Bin("/", left, right)


class Parser:
    """Token cursor over one source string; also used by the constraint
    predicate grammar, which embeds arithmetic sub-expressions."""

    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, expected: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ExprSyntaxError(
                f"unexpected {tok.text!r}" if tok.kind != "END" else "unexpected end of input",
                tok.pos,
                expected,
            )
        return self.advance()

    # -- grammar rules -----------------------------------------------------

    def parse_expr(self) -> Expr:
        node = self.parse_term()
        while self.peek().kind == "OP" and self.peek().text in "+-":
            op = self.advance().text
            node = Bin(op, node, self.parse_term())
        return node

    def parse_term(self) -> Expr:
        node = self.parse_adjacent()
        while self.peek().kind == "OP" and self.peek().text in "*/":
            op = self.advance().text
            rhs = self.parse_adjacent()
            node = fold_div(node, rhs) if op == "/" else Bin("*", node, rhs)
        return node

    def parse_adjacent(self) -> Expr:
        node = self.parse_factor()
        while self.peek().kind in _ATOM_STARTERS:
            node = Bin("*", node, self.parse_factor())
        return node

    def parse_factor(self) -> Expr:
        tok = self.peek()
        if tok.kind == "OP" and tok.text == "-":
            self.advance()
            return fold_neg(self.parse_factor())
        base = self.parse_atom()
        if self.peek().kind == "OP" and self.peek().text == "^":
            self.advance()
            return Bin("^", base, self.parse_factor())
        return base

    def parse_atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "NUMBER":
            self.advance()
            assert tok.value is not None
            return Num(tok.value)
        if tok.kind == "VAR":
            self.advance()
            return Var(tok.text)
        if tok.kind == "CONST":
            self.advance()
            return Const(tok.text)
        if tok.kind == "FUNC":
            self.advance()
            self.expect("LPAREN", "'('")
            arg = self.parse_expr()
            self.expect("RPAREN", "')'")
            if tok.text == "sqrt":
                return Bin("^", arg, Num(Fraction(1, 2)))
            return Func(tok.text, arg)
        if tok.kind == "LPAREN":
            self.advance()
            inner = self.parse_expr()
            self.expect("RPAREN", "')'")
            return inner
        raise ExprSyntaxError(
            f"unexpected {tok.text!r}" if tok.kind != "END" else "unexpected end of input",
            tok.pos,
            "a number, variable, function or '('",
        )


def parse(text: str) -> Expr:
    """Parse expression text into an Expr tree.

    Raises ExprSyntaxError (with offset and expected-token hint) on bad
    input, including empty or oversized text.
    """
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", 0, "an expression")
    if len(text) > MAX_INPUT_LENGTH:
        raise ExprSyntaxError(
            f"expression longer than {MAX_INPUT_LENGTH} characters", MAX_INPUT_LENGTH, None
        )
    parser = Parser(tokenize(text))
    node = parser.parse_expr()
    trailing = parser.peek()
    if trailing.kind != "END":
        raise ExprSyntaxError(f"unexpected {trailing.text!r}", trailing.pos, "end of input")
    return node
