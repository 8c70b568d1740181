"""Parser for sparse multivariate polynomials such as ``3*x1^2*x2 - 0.5*x4``.

Grammar (whitespace ignored, variable indices 1-based)::

    expression  := ['+' | '-'] term (('+' | '-') term)*
    term        := coefficient | [coefficient '*'] factor ('*' factor)*
    factor      := 'x' index ['^' exponent]

A coefficient is a decimal literal (``2``, ``0.25``, ``1e-3``).  Repeated
factors multiply (``x1*x1`` is ``x1^2``), and like terms are combined left
to right.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np

_TOKEN = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<var>x(?P<index>\d+))|(?P<op>[-+*^])|(?P<bad>\S))"
)


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        detail = f"{message} (at position {position})"
        if text:
            detail += f"\n  {text}\n  {' ' * position}^"
        super().__init__(detail)
        self.message = message


@dataclass(frozen=True)
class Polynomial:
    """Map from exponent tuples (trailing zeros trimmed) to nonzero coefficients."""

    terms: Mapping[tuple[int, ...], float]

    def __post_init__(self):
        clean = {}
        for key, coeff in self.terms.items():
            key = tuple(int(e) for e in key)
            if any(e < 0 for e in key):
                raise ValueError(f"negative exponent in {key}")
            while key and key[-1] == 0:
                key = key[:-1]
            coeff = float(coeff) + clean.get(key, 0.0)
            clean[key] = coeff
        object.__setattr__(self, "terms", {k: c for k, c in clean.items() if c != 0.0})

    @classmethod
    def monomial(cls, alpha, coeff: float = 1.0) -> Polynomial:
        return cls({tuple(alpha): coeff})

    @property
    def inferred_dimension(self) -> int:
        return max((len(k) for k in self.terms), default=0)

    @property
    def degree(self) -> int:
        return max((sum(k) for k in self.terms), default=0)

    def __iter__(self) -> Iterator[tuple[tuple[int, ...], float]]:
        return iter(self.terms.items())

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def evaluate(self, points) -> np.ndarray:
        """Values at an (m, n) array of points."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if self.inferred_dimension > points.shape[1]:
            raise ValueError(
                f"polynomial uses x{self.inferred_dimension} but points have dimension {points.shape[1]}"
            )
        out = np.zeros(points.shape[0])
        for key, coeff in self.terms.items():
            term = np.full(points.shape[0], coeff)
            for j, e in enumerate(key):
                # repeated products keep f(-x) = -f(x) bit-exact for odd terms; ``**`` does not
                for _ in range(e):
                    term = term * points[:, j]
            out = out + term
        return out

    def format(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for i, (key, coeff) in enumerate(self.terms.items()):
            factors = [f"x{j + 1}" + (f"^{e}" if e > 1 else "") for j, e in enumerate(key) if e]
            sign = "-" if coeff < 0 else "+"
            mag = abs(coeff)
            body = "*".join(([repr(mag)] if mag != 1.0 or not factors else []) + factors)
            if i == 0:
                parts.append(("-" if sign == "-" else "") + body)
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    __str__ = format


def _tokens(text: str):
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        start = m.start(m.lastgroup) if m.lastgroup else m.end()
        if m.group("bad") is not None:
            raise ParseError(f"unexpected character {m.group('bad')!r}", start, text)
        if m.group("number") is not None:
            yield "number", m.group("number"), start
        elif m.group("var") is not None:
            yield "var", m.group("index"), start
        else:
            yield m.group("op"), m.group("op"), start
        pos = m.end()
    yield "end", "", len(text)


class _Parser:
    def __init__(self, text: str, dimension: int | None):
        self.text = text
        self.dimension = dimension
        self.tokens = list(_tokens(text))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok):
        raise ParseError(message, tok[2], self.text)

    def expression(self) -> dict[tuple[int, ...], float]:
        terms: dict[tuple[int, ...], float] = {}
        if self.peek()[0] == "end":
            self.error("empty input", self.peek())
        sign = 1.0
        if self.peek()[0] in "+-":
            sign = -1.0 if self.advance()[0] == "-" else 1.0
        while True:
            key, coeff = self.term()
            terms[key] = terms.get(key, 0.0) + sign * coeff
            kind = self.peek()[0]
            if kind == "end":
                return terms
            if kind not in "+-":
                self.error(f"expected '+' or '-', found {self.peek()[1]!r}", self.peek())
            sign = -1.0 if self.advance()[0] == "-" else 1.0

    def term(self):
        tok = self.peek()
        coeff = 1.0
        exps: dict[int, int] = {}
        if tok[0] == "number":
            self.advance()
            coeff = float(tok[1])
            if self.peek()[0] != "*":
                return (), coeff
            self.advance()
            self.factor(exps)
        elif tok[0] == "var":
            self.factor(exps)
        else:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            self.error(f"dangling operator: expected a term, found {what}", tok)
        while self.peek()[0] == "*":
            self.advance()
            self.factor(exps)
        width = max(exps, default=0)
        key = tuple(exps.get(j, 0) for j in range(1, width + 1))
        return key, coeff

    def factor(self, exps):
        tok = self.advance()
        if tok[0] != "var":
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            self.error(f"expected a variable like x1, found {what}", tok)
        index = int(tok[1])
        if index == 0:
            self.error("variable indices start at 1", tok)
        if self.dimension is not None and index > self.dimension:
            self.error(f"variable index {index} exceeds dimension {self.dimension}", tok)
        exponent = 1
        if self.peek()[0] == "^":
            self.advance()
            etok = self.advance()
            if etok[0] != "number" or not etok[1].isdigit():
                what = "end of input" if etok[0] == "end" else repr(etok[1])
                self.error(f"malformed exponent: expected a nonnegative integer, found {what}", etok)
            exponent = int(etok[1])
        exps[index] = exps.get(index, 0) + exponent


def parse(text: str, dimension: int | None = None) -> Polynomial:
    """Parse ``text`` into a :class:`Polynomial`.

    If ``dimension`` is given, variables beyond it are rejected.
    Raises :class:`ParseError` with the offending position.
    """
    return Polynomial(_Parser(text, dimension).expression())
