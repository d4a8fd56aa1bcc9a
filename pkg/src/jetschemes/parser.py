"""Reading and writing polynomial expressions.

Grammar (whitespace is insignificant)::

    expr     := term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := '-' factor | atom ('^' natural)?
    atom     := identifier | rational | '(' expr ')'
    rational := integer ('/' positive-integer)?
    identifier := letter (letter | digit | '_')* ('#' natural)?

Multiplication is always explicit: ``xz`` is a single identifier.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .polynomial import QQ, Polynomial, Ring, Variable

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*(?:\#[0-9]+)?)
  | (?P<int>[0-9]+)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


class ParseError(ValueError):
    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}: {text!r}")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, ring: Ring):
        self.text = text
        self.ring = ring
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def error(self, msg: str):
        raise ParseError(msg, self.text, self.tok[2])

    def take(self, value: str | None = None, kind: str | None = None):
        k, v, _ = self.tok
        if (value is not None and v != value) or (kind is not None and k != kind):
            self.error(f"expected {value or kind}, found {v or 'end of input'!r}")
        self.i += 1
        return v

    def at(self, value: str) -> bool:
        return self.tok[0] == "op" and self.tok[1] == value

    def parse(self) -> Polynomial:
        if self.tok[0] == "end":
            self.error("empty expression")
        p = self.expr()
        if self.tok[0] != "end":
            self.error(f"unexpected {self.tok[1]!r}")
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while self.at("+") or self.at("-"):
            op = self.take()
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.factor()
        while self.at("*"):
            self.take()
            p = p * self.factor()
        return p

    def factor(self) -> Polynomial:
        if self.at("-"):
            self.take()
            return -self.factor()
        p = self.atom()
        if self.at("^"):
            self.take()
            n = self.take(kind="int")
            p = p ** int(n)
        return p

    def atom(self) -> Polynomial:
        kind, value, pos = self.tok
        if kind == "ident":
            self.i += 1
            v = Variable.parse(value)
            if v not in self.ring.index:
                raise ParseError(f"unknown identifier {value!r}", self.text, pos)
            return self.ring.gen(v)
        if kind == "int":
            self.i += 1
            num = int(value)
            if self.at("/"):
                self.take()
                den_pos = self.tok[2]
                den = int(self.take(kind="int"))
                if den == 0:
                    raise ParseError("zero denominator", self.text, den_pos)
                return self.ring.const(QQ(num, den))
            return self.ring.const(num)
        if self.at("("):
            self.take()
            p = self.expr()
            self.take(")")
            return p
        self.error(f"unexpected {value or 'end of input'!r}")


def parse(text: str, ring: Ring | list) -> Polynomial:
    """Parse ``text`` into a polynomial over ``ring`` (a Ring or a list of variables)."""
    if not isinstance(ring, Ring):
        ring = Ring(ring)
    return _Parser(text, ring).parse()


def grevlex_descending(exponent: tuple[int, ...]) -> tuple:
    """Sort key that lists monomials in descending graded reverse lexicographic order."""
    return (-sum(exponent),) + exponent[::-1]


def format_monomial(ring: Ring, e: tuple[int, ...]) -> str:
    parts = []
    for v, a in zip(ring.variables, e):
        if a == 1:
            parts.append(str(v))
        elif a:
            parts.append(f"{v}^{a}")
    return "*".join(parts)


def _format_coefficient(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_polynomial(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    out = []
    for e in sorted(p.terms, key=grevlex_descending):
        c = p.terms[e]
        mono = format_monomial(p.ring, e)
        mag = abs(c)
        if not mono:
            body = _format_coefficient(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_format_coefficient(mag)}*{mono}"
        if not out:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(out)
