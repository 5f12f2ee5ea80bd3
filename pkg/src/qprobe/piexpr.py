"""Arithmetic over pi for flag and scenario-file values.

Angle-valued inputs accept expressions such as ``-pi/2``, ``2*pi``,
``pi/10`` or plain numerals. Grammar: ``+ - * /``, unary sign,
parentheses, the constant ``pi``, and decimal literals (including
exponent form). Nothing else; in particular no names, no ``**``.
"""

from __future__ import annotations

import math
import re

__all__ = ["evaluate", "PiExprError"]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?|(?P<pi>pi)|(?P<op>[-+*/()]))"
)


class PiExprError(ValueError):
    """Raised for a malformed numeric expression."""


def _tokenize(text: str) -> list[str]:
    tokens: list[str] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise PiExprError(f"bad numeric expression {text!r} at position {pos}")
        tokens.append(m.group().strip())
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[str], text: str):
        self.tokens = tokens
        self.text = text
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise PiExprError(f"unexpected end of expression in {self.text!r}")
        self.pos += 1
        return tok

    def expr(self) -> float:
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> float:
        value = self.factor()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.factor()
            if op == "/":
                if rhs == 0.0:
                    raise PiExprError(f"division by zero in {self.text!r}")
                value = value / rhs
            else:
                value = value * rhs
        return value

    def factor(self) -> float:
        tok = self.take()
        if tok == "+":
            return self.factor()
        if tok == "-":
            return -self.factor()
        if tok == "(":
            value = self.expr()
            if self.take() != ")":
                raise PiExprError(f"unbalanced parentheses in {self.text!r}")
            return value
        if tok == "pi":
            return math.pi
        if tok in ("*", "/", ")"):
            raise PiExprError(f"misplaced {tok!r} in {self.text!r}")
        try:
            return float(tok)
        except ValueError:
            raise PiExprError(f"bad token {tok!r} in {self.text!r}") from None


def evaluate(text: str) -> float:
    """Evaluate a pi-arithmetic expression to a float."""
    parser = _Parser(_tokenize(text), text)
    if parser.peek() is None:
        raise PiExprError("empty numeric expression")
    value = parser.expr()
    if parser.peek() is not None:
        raise PiExprError(f"trailing input {parser.peek()!r} in {text!r}")
    return float(value)
