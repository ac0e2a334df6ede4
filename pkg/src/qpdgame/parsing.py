"""Strategy expression language.

Grammar (ASCII, whitespace-insensitive, angles in radians)::

    strategy := "haar" | "mix" "(" entry ("," entry)* ")" | product
    entry    := number ":" product
    product  := atom ("*" atom)*
    atom     := NAME | "U" "(" num "," num ")" | "su2" "(" num "," num "," num "," num ")"
              | "(" product ")"
    NAME     := C | D | Q | sx | sy | sz        (case-insensitive)
    num      := arithmetic over decimal literals and ``pi`` with + - * / and parentheses

``su2(a, b, c, d)`` gives the top row ``(a + ib, c + id)``.  Products compose
left to right as matrix products.
"""
from __future__ import annotations

import math
import re

import numpy as np

from .qmath import SU2Error, mat_mul, su2_from_row
from .strategies import (
    HaarRandom,
    Mixed,
    NamedStrategy,
    Pure,
    Strategy,
    StrategyError,
    ewl_unitary,
)

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[*/+\-(),:]))"
)


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.message = message
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[start]!r}", start, text)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def error(self, message: str, pos: int | None = None):
        raise ParseError(message, self.tok[2] if pos is None else pos, self.text)

    def accept(self, value: str) -> bool:
        if self.tok[1] == value and self.tok[0] in ("op", "name"):
            self.i += 1
            return True
        return False

    def expect(self, value: str):
        if not self.accept(value):
            found = self.tok[1] or "end of input"
            self.error(f"expected {value!r}, found {found!r}")

    def finish(self):
        if self.tok[0] != "end":
            self.error(f"unexpected {self.tok[1]!r}")

    # strategy level
    def strategy(self) -> Strategy:
        kind, value, _ = self.tok
        if kind == "name" and value.lower() == "haar":
            self.i += 1
            return HaarRandom()
        if kind == "name" and value.lower() == "mix":
            return self.mixture()
        return Pure(self.product())

    def mixture(self) -> Mixed:
        start = self.tok[2]
        self.i += 1
        self.expect("(")
        comps = []
        while True:
            w = self.number()
            self.expect(":")
            comps.append((w, self.product()))
            if self.accept(")"):
                break
            self.expect(",")
        try:
            return Mixed(tuple(comps))
        except StrategyError as exc:
            raise ParseError(str(exc), start, self.text) from None

    def product(self) -> np.ndarray:
        u = self.atom()
        while self.accept("*"):
            u = mat_mul(u, self.atom())
        return u

    def atom(self) -> np.ndarray:
        kind, value, pos = self.tok
        if kind == "op" and value == "(":
            self.i += 1
            u = self.product()
            self.expect(")")
            return u
        if kind != "name":
            self.error(f"expected a move, found {value or 'end of input'!r}")
        self.i += 1
        low = value.lower()
        if low == "u" and self.tok[1] == "(":
            self.expect("(")
            theta = self.number()
            self.expect(",")
            phi = self.number()
            self.expect(")")
            try:
                return ewl_unitary(theta, phi)
            except StrategyError as exc:
                raise ParseError(str(exc), pos, self.text) from None
        if low == "su2":
            self.expect("(")
            vals = [self.number()]
            for _ in range(3):
                self.expect(",")
                vals.append(self.number())
            self.expect(")")
            try:
                return su2_from_row(complex(vals[0], vals[1]), complex(vals[2], vals[3]))
            except SU2Error as exc:
                raise SU2Error(f"{exc} at position {pos}") from None
        try:
            return NamedStrategy(value.upper()).matrix
        except ValueError:
            self.error(f"unknown move {value!r}", pos)

    # numeric level
    def number(self) -> float:
        value = self.sum()
        if not math.isfinite(value):
            self.error("non-finite number")
        return value

    def sum(self) -> float:
        value = self.term()
        while self.tok[1] in ("+", "-") and self.tok[0] == "op":
            op = self.tok[1]
            self.i += 1
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> float:
        value = self.factor()
        while self.tok[1] in ("*", "/") and self.tok[0] == "op":
            op, pos = self.tok[1], self.tok[2]
            self.i += 1
            rhs = self.factor()
            if op == "/":
                if rhs == 0:
                    self.error("division by zero", pos)
                value /= rhs
            else:
                value *= rhs
        return value

    def factor(self) -> float:
        kind, value, pos = self.tok
        if kind == "op" and value in "+-":
            self.i += 1
            v = self.factor()
            return -v if value == "-" else v
        if kind == "op" and value == "(":
            self.i += 1
            v = self.sum()
            self.expect(")")
            return v
        if kind == "num":
            self.i += 1
            return float(value)
        if kind == "name" and value.lower() == "pi":
            self.i += 1
            return math.pi
        self.error(f"expected a number, found {value or 'end of input'!r}")


def parse_strategy(expr: str) -> Strategy:
    """Parse a strategy expression such as ``"Q*D"`` or ``"mix(0.5:C, 0.5:D)"``."""
    p = _Parser(expr)
    if p.tok[0] == "end":
        p.error("empty expression")
    out = p.strategy()
    p.finish()
    return out


def parse_move(expr: str) -> np.ndarray:
    """Parse an expression that must denote a single pure move."""
    s = parse_strategy(expr)
    if not isinstance(s, Pure):
        raise ParseError("expected a pure move", 0, expr)
    return s.move


def parse_number(expr: str) -> float:
    """Parse an angle or weight such as ``"pi/2"`` or ``"0.25"``."""
    p = _Parser(expr)
    value = p.number()
    p.finish()
    return value
