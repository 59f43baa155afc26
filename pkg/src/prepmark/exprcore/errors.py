"""Errors raised by the expression engine.

ExprSyntaxError messages are shown verbatim to students as response
feedback, so they carry a character offset and a hint about what was
expected at that position.
"""

from __future__ import annotations


class ExprSyntaxError(ValueError):
    """Malformed expression text.

    offset is the 0-based character position of the problem; expected is
    a short human-readable hint ("a number, variable or '('", "')'", ...).
    """

    def __init__(self, message: str, offset: int, expected: str | None = None):
        detail = f"{message} at position {offset}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)
        self.offset = offset
        self.expected = expected


class UnboundVariable(ValueError):
    """Evaluation found a free variable with no binding."""

    def __init__(self, name: str):
        super().__init__(f"unbound variable '{name}'")
        self.name = name


class NonFiniteResult(ArithmeticError):
    """Division by zero, log of a non-positive value, overflow, or a value
    too close to a pole to evaluate reliably.  Samplers treat this as
    "pick another point", never as a student error."""


class UnsupportedNode(ValueError):
    """The operation cannot handle this node kind (e.g. differentiating abs)."""


class NotAPolynomial(ValueError):
    """Expression has no polynomial normal form."""


class InsufficientSamples(RuntimeError):
    """Too few usable sample points were found inside the domain; the
    grader escalates this to a manual-review flag."""
