"""Parsing of polynomial text.

Two input forms are accepted:

* expressions such as ``"1 + z1 - 0.5*z1^2"``, ``"z1z2"``, ``"(1+2j)*z2"``,
  ``"(1 - z1/2)^2 * z2"``;
* the JSON record list written by :func:`pickspace.polyring.to_records`.
"""

from __future__ import annotations

import json
import re

from .polyring import Polynomial, from_records


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.column = col


_NUMBER = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?(j)?")
_VAR = re.compile(r"z(\d+)")
_INT = re.compile(r"\d+")


class _Parser:
    def __init__(self, text: str, dim: int):
        self.text = text
        self.pos = 0
        self.dim = dim

    def error(self, msg: str, pos: int | None = None):
        raise ParseError(msg, self.text, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Polynomial:
        if not self.text.strip():
            self.error("empty polynomial")
        p = self.expr()
        if self.peek():
            self.error(f"unexpected character {self.peek()!r}")
        return p

    def expr(self) -> Polynomial:
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        p = self.term().scale(sign)
        while self.peek() in ("+", "-") and self.peek():
            op = self.text[self.pos]
            self.pos += 1
            t = self.term()
            p = p + t if op == "+" else p - t
        return p

    def term(self) -> Polynomial:
        p = self.power()
        while True:
            c = self.peek()
            if c == "*":
                self.pos += 1
                p = p * self.power()
            elif c == "/":
                self.pos += 1
                self.skip()
                start = self.pos
                q = self.power()
                if q.degree > 0 or q.is_zero():
                    self.error("can only divide by a nonzero constant", start)
                p = p / q.coeff((0,) * self.dim)
            elif c and (c == "z" or c == "(" or c.isdigit() or c == "."):
                p = p * self.power()
            else:
                return p

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek() == "^" or self.text.startswith("**", self.pos):
            self.pos += 2 if self.text.startswith("**", self.pos) else 1
            self.skip()
            m = _INT.match(self.text, self.pos)
            if not m:
                self.error("expected a non-negative integer exponent")
            self.pos = m.end()
            base = base ** int(m.group())
        return base

    def atom(self) -> Polynomial:
        c = self.peek()
        if c == "(":
            self.pos += 1
            p = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return p
        if c == "z":
            m = _VAR.match(self.text, self.pos)
            if not m:
                self.error("expected a variable like z1")
            i = int(m.group(1))
            if not 1 <= i <= self.dim:
                self.error(f"variable z{i} out of range for dimension {self.dim}")
            self.pos = m.end()
            return Polynomial.coordinate(self.dim, i - 1)
        m = _NUMBER.match(self.text, self.pos)
        if m:
            self.pos = m.end()
            value = float(m.group(1) + (m.group(2) or ""))
            return Polynomial.constant(self.dim, 1j * value if m.group(3) else value)
        if not c:
            self.error("unexpected end of input")
        self.error(f"unexpected character {c!r}")


def infer_dim(text: str) -> int:
    idx = [int(m.group(1)) for m in _VAR.finditer(text)]
    return max(idx, default=1)


def parse_polynomial(text: str, dim: int | None = None) -> Polynomial:
    """Parse polynomial text; ``dim`` defaults to the largest variable index."""
    stripped = text.strip()
    if stripped.startswith("["):
        try:
            records = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, text, text.index(stripped) + exc.pos) from exc
        return from_records(records, dim)
    if dim is None:
        dim = infer_dim(text)
    return _Parser(text, dim).parse()
