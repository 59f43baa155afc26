"""Tokenizer shared by the expression grammar and the constraint-predicate
grammar.

Word handling follows school-notation conventions: the only multi-letter
names are the function set, the constants pi and e, the boolean keywords
(uppercase AND/OR/NOT) and built-in predicate names.  Any other run of
letters is split into single-character variables, which is what makes
implicit multiplication like "ab" mean a*b.  A function name that is not
followed by '(' is rejected with a hint rather than silently split, so a
student typing "sinx" is told to write "sin(x)".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

FUNCTIONS = ("sqrt", "abs", "sin", "cos", "tan", "ln", "exp")
CONSTANTS = ("pi", "e")
KEYWORDS = ("AND", "OR", "NOT")
PREDICATES = ("no_solution_2x2",)

# Longest match first so "exp" wins over "e", "pi" over single letters.
_RESERVED = sorted(FUNCTIONS + CONSTANTS + KEYWORDS + PREDICATES, key=len, reverse=True)

# Unicode variants students paste in.
_CHAR_ALIASES = {
    "−": "-",  # minus sign
    "≤": "<=",
    "≥": ">=",
    "≠": "!=",
}


@dataclass(frozen=True)
class Token:
    kind: str  # NUMBER VAR CONST FUNC PREDICATE AND OR NOT OP CMP LPAREN RPAREN COMMA END
    text: str
    pos: int
    value: Fraction | None = None


def _scan_number(text: str, i: int) -> tuple[Token, int]:
    j = i
    while j < len(text) and text[j].isdigit():
        j += 1
    if j < len(text) and text[j] == ".":
        j += 1
        while j < len(text) and text[j].isdigit():
            j += 1
    literal = text[i:j]
    return Token("NUMBER", literal, i, Fraction(literal)), j


def tokenize(text: str) -> list[Token]:
    """Lex expression/predicate text into tokens; raises ExprSyntaxError."""
    from .errors import ExprSyntaxError

    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        alias = _CHAR_ALIASES.get(ch)
        if alias is not None:
            if alias == "-":
                tokens.append(Token("OP", "-", i))
            else:
                tokens.append(Token("CMP", alias, i))
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            tok, i = _scan_number(text, i)
            tokens.append(tok)
            continue
        if ch.isalpha() or ch == "_":
            word = None
            for reserved in _RESERVED:
                if text.startswith(reserved, i):
                    word = reserved
                    break
            if word in FUNCTIONS or word in PREDICATES:
                j = i + len(word)
                while j < n and text[j].isspace():
                    j += 1
                if j >= n or text[j] != "(":
                    raise ExprSyntaxError(
                        f"'{word}' must be written as {word}(...)", i, "'('"
                    )
                kind = "FUNC" if word in FUNCTIONS else "PREDICATE"
                tokens.append(Token(kind, word, i))
                i += len(word)
            elif word in CONSTANTS:
                tokens.append(Token("CONST", word, i))
                i += len(word)
            elif word in KEYWORDS:
                tokens.append(Token(word, word, i))
                i += len(word)
            elif ch == "_":
                raise ExprSyntaxError("unexpected character '_'", i, "a letter or digit")
            else:
                tokens.append(Token("VAR", ch, i))
                i += 1
            continue
        if ch in "+-*/^":
            tokens.append(Token("OP", ch, i))
            i += 1
            continue
        if ch == "(":
            tokens.append(Token("LPAREN", ch, i))
            i += 1
            continue
        if ch == ")":
            tokens.append(Token("RPAREN", ch, i))
            i += 1
            continue
        if ch == ",":
            tokens.append(Token("COMMA", ch, i))
            i += 1
            continue
        if ch in "<>=!":
            if text.startswith(("<=", ">=", "!=", "=="), i):
                op = text[i : i + 2]
                tokens.append(Token("CMP", "=" if op == "==" else op, i))
                i += 2
                continue
            if ch == "!":
                raise ExprSyntaxError("unexpected character '!'", i, "'!=' comparison")
            tokens.append(Token("CMP", ch, i))
            i += 1
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", i, None)
    tokens.append(Token("END", "", n))
    return tokens
