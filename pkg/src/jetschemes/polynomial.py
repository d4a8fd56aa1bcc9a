"""Exact multivariate polynomials over the rationals.

A :class:`Ring` is an ordered tuple of :class:`Variable` objects; a
:class:`Polynomial` stores a map from dense exponent tuples (one slot per ring
variable) to nonzero rational coefficients (``gmpy2.mpq``, or ``Fraction`` without gmpy2).  Values are
immutable once built.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

try:  # GMP rationals are several times faster than Fraction in the hot loops
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover
    QQ = Fraction
from typing import Iterable, Iterator, Mapping

Exponent = tuple[int, ...]


class RingMismatchError(ValueError):
    """Raised when two operands live in different rings."""


@dataclass(frozen=True, order=True)
class Variable:
    """A ring variable.  ``order`` is the jet level, ``None`` for plain variables."""

    name: str
    order: int | None = None

    def __post_init__(self):
        if self.order is not None and self.order < 0:
            raise ValueError(f"negative jet order for {self.name!r}")

    @property
    def weight(self) -> int:
        return 0 if self.order is None else self.order

    def at(self, level: int) -> "Variable":
        """The jet variable of ``self`` at ``level``."""
        return Variable(self.name, level)

    def __str__(self):
        if self.order is None:
            return self.name
        return f"{self.name}#{self.order}"

    def __repr__(self):
        return f"Variable({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "Variable":
        name, sep, level = text.strip().partition("#")
        if not sep:
            return cls(name)
        return cls(name, int(level))


def jet_sort_key(v: Variable, base_index: Mapping[str, int]) -> tuple:
    return (v.weight, base_index.get(v.name, len(base_index)), v.name)


class Ring:
    """An ordered, duplicate-free tuple of variables.

    Rings are interned, so two rings over the same variable tuple are the
    same object and comparisons are cheap.
    """

    __slots__ = ("variables", "index", "weights", "__weakref__")
    _interned: dict[tuple[Variable, ...], "Ring"] = {}

    def __new__(cls, variables: Iterable[Variable | str]):
        vs = tuple(Variable.parse(v) if isinstance(v, str) else v for v in variables)
        ring = cls._interned.get(vs)
        if ring is not None:
            return ring
        if len(set(vs)) != len(vs):
            raise ValueError(f"duplicate variables in ring: {[str(v) for v in vs]}")
        ring = super().__new__(cls)
        ring.variables = vs
        ring.index = {v: i for i, v in enumerate(vs)}
        ring.weights = tuple(v.weight for v in vs)
        cls._interned[vs] = ring
        return ring

    def __reduce__(self):
        return (Ring, (self.variables,))

    def __len__(self):
        return len(self.variables)

    def __iter__(self) -> Iterator[Variable]:
        return iter(self.variables)

    def __contains__(self, v) -> bool:
        return v in self.index

    def __repr__(self):
        return f"Ring({', '.join(map(str, self.variables))})"

    @property
    def ngens(self) -> int:
        return len(self.variables)

    def variable(self, v: Variable | str) -> Variable:
        if isinstance(v, str):
            v = Variable.parse(v)
        if v not in self.index:
            raise KeyError(f"{v} is not a variable of {self!r}")
        return v

    def gen(self, v: Variable | str) -> "Polynomial":
        v = self.variable(v)
        e = [0] * len(self.variables)
        e[self.index[v]] = 1
        return Polynomial(self, {tuple(e): QQ(1)}, _trusted=True)

    def gens(self) -> tuple["Polynomial", ...]:
        return tuple(self.gen(v) for v in self.variables)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {}, _trusted=True)

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = _coerce(c)
        if not c:
            return self.zero()
        return Polynomial(self, {(0,) * len(self.variables): c}, _trusted=True)

    def extend(self, extra: Iterable[Variable | str]) -> "Ring":
        """This ring with ``extra`` variables appended."""
        extra = [Variable.parse(v) if isinstance(v, str) else v for v in extra]
        clash = [str(v) for v in extra if v in self.index]
        if clash:
            raise ValueError(f"variables already present: {clash}")
        return Ring(self.variables + tuple(extra))

    def __call__(self, text: str) -> "Polynomial":
        from .parser import parse

        return parse(text, self)


def _coerce(c) -> Fraction:
    if type(c) is QQ:
        return c
    if isinstance(c, (int, Rational)) and not isinstance(c, bool):
        return QQ(c)
    raise TypeError(f"cannot use {type(c).__name__} as a rational coefficient")


class Polynomial:
    """A polynomial in canonical form: no zero coefficients, one entry per monomial."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[Exponent, object] | None = None, *, _trusted=False):
        self.ring = ring
        self._hash = None
        if _trusted:
            self.terms = terms
            return
        n = len(ring)
        clean: dict[Exponent, Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n or any(a < 0 for a in e):
                raise ValueError(f"bad exponent {e} for {ring!r}")
            c = _coerce(c)
            s = clean.get(e, 0) + c
            if s:
                clean[e] = s
            else:
                clean.pop(e, None)
        self.terms = clean

    # -- basic predicates -------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.ring), QQ(0))

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring is other.ring and self.terms == other.terms
        if isinstance(other, (int, Rational)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.variables, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic ---------------------------------------------------------
    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring is not self.ring:
                raise RingMismatchError(f"{self.ring!r} vs {other.ring!r}")
            return other
        if isinstance(other, (int, Rational)):
            return self.ring.const(other)
        raise TypeError(f"unsupported operand {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        out = dict(big)
        for e, c in small.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                del out[e]
        return Polynomial(self.ring, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, Polynomial):
            return self.scale(other)
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        out: dict[Exponent, Fraction] = {}
        get = out.get
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple([a + b for a, b in zip(e1, e2)])
                out[e] = get(e, 0) + c1 * c2
        return Polynomial(self.ring, {e: c for e, c in out.items() if c}, _trusted=True)

    def __rmul__(self, other):
        return self.__mul__(other)

    def scale(self, c) -> "Polynomial":
        c = _coerce(c)
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {e: a * c for e, a in self.terms.items()}, _trusted=True)

    def __truediv__(self, c):
        if isinstance(c, Polynomial):
            if not c.is_constant() or c.is_zero():
                return NotImplemented
            c = c.constant_term()
        return self.scale(1 / _coerce(c))

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- structure -------------------------------------------------------------
    def variables(self) -> tuple[Variable, ...]:
        """Variables that actually occur, in ring order."""
        used = [False] * len(self.ring)
        for e in self.terms:
            for i, a in enumerate(e):
                if a:
                    used[i] = True
        return tuple(v for v, u in zip(self.ring.variables, used) if u)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, v: Variable | str) -> int:
        i = self.ring.index[self.ring.variable(v)]
        return max((e[i] for e in self.terms), default=-1)

    def weights(self) -> set[int]:
        """Set of monomial weights (sum of jet order times exponent)."""
        w = self.ring.weights
        return {sum(a * b for a, b in zip(e, w)) for e in self.terms}

    def is_weight_homogeneous(self, weight: int | None = None) -> bool:
        ws = self.weights()
        if not ws:
            return True
        if len(ws) > 1:
            return False
        return weight is None or ws == {weight}

    def weight_part(self, weight: int) -> "Polynomial":
        w = self.ring.weights
        return Polynomial(
            self.ring,
            {e: c for e, c in self.terms.items() if sum(a * b for a, b in zip(e, w)) == weight},
            _trusted=True,
        )

    def monomials(self) -> Iterator[tuple[Fraction, dict[Variable, int]]]:
        for e, c in self.terms.items():
            yield c, {v: a for v, a in zip(self.ring.variables, e) if a}

    def to_ring(self, ring: Ring) -> "Polynomial":
        """Re-express in ``ring``, which must contain every variable that occurs."""
        if ring is self.ring:
            return self
        pos = []
        for v in self.variables():
            if v not in ring.index:
                raise RingMismatchError(f"{v} does not occur in {ring!r}")
        for i, v in enumerate(self.ring.variables):
            pos.append(ring.index.get(v))
        n = len(ring)
        out = {}
        for e, c in self.terms.items():
            new = [0] * n
            for i, a in enumerate(e):
                if a:
                    new[pos[i]] = a
            out[tuple(new)] = c
        return Polynomial(ring, out, _trusted=True)

    def rename(self, mapping: Mapping[Variable, Variable], ring: Ring) -> "Polynomial":
        """Rename variables (unmapped ones keep their name) and move into ``ring``."""
        pos = [ring.index[mapping.get(v, v)] for v in self.ring.variables]
        n = len(ring)
        out: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            new = [0] * n
            for i, a in enumerate(e):
                if a:
                    new[pos[i]] += a
            new = tuple(new)
            s = out.get(new, 0) + c
            if s:
                out[new] = s
            else:
                out.pop(new, None)
        return Polynomial(ring, out, _trusted=True)

    def evaluate(self, point: Mapping[Variable, object]):
        """Evaluate at rational values; every occurring variable must be assigned."""
        values = []
        for v in self.ring.variables:
            values.append(point.get(v))
        total = QQ(0)
        for e, c in self.terms.items():
            term = c
            for val, a in zip(values, e):
                if a:
                    if val is None:
                        raise KeyError("point is missing a variable that occurs")
                    term *= _coerce(val) ** a
            total += term
        return total

    def diff(self, v: Variable | str) -> "Polynomial":
        return partial_derivative(self, v)

    def subs(self, images: Mapping, ring: Ring | None = None) -> "Polynomial":
        return substitute(self, images, ring)

    def __str__(self):
        from .parser import format_polynomial

        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({str(self)!r})"


def partial_derivative(p: Polynomial, v: Variable | str) -> Polynomial:
    i = p.ring.index[p.ring.variable(v)]
    out = {}
    for e, c in p.terms.items():
        a = e[i]
        if a:
            out[e[:i] + (a - 1,) + e[i + 1:]] = c * a
    return Polynomial(p.ring, out, _trusted=True)


def substitute(p: Polynomial, images: Mapping, ring: Ring | None = None) -> Polynomial:
    """Ring homomorphism: replace each variable of ``p`` by its image.

    ``images`` maps variables (or their string forms) to polynomials in the
    target ring.  Every variable that occurs in ``p`` needs an image.  The
    target ring defaults to the ring of the images.
    """
    imgs: dict[Variable, Polynomial] = {}
    for k, val in images.items():
        imgs[Variable.parse(k) if isinstance(k, str) else k] = val
    if ring is None:
        rings = {q.ring for q in imgs.values() if isinstance(q, Polynomial)}
        if len(rings) > 1:
            raise RingMismatchError("images live in different rings")
        if not rings:
            raise ValueError("cannot infer target ring; pass ring=")
        ring = rings.pop()
    columns = []
    for i, v in enumerate(p.ring.variables):
        img = imgs.get(v)
        if img is None:
            columns.append(None)
            continue
        if not isinstance(img, Polynomial):
            img = ring.const(img)
        elif img.ring is not ring:
            raise RingMismatchError(f"image of {v} is not in the target ring")
        columns.append(img)
    for v, img in zip(p.ring.variables, columns):
        if img is None and any(e[p.ring.index[v]] for e in p.terms):
            raise KeyError(f"no image given for variable {v}")

    powers: dict[tuple[int, int], Polynomial] = {}

    def power(i: int, a: int) -> Polynomial:
        key = (i, a)
        q = powers.get(key)
        if q is None:
            q = columns[i] if a == 1 else power(i, a - 1) * columns[i]
            powers[key] = q
        return q

    acc: dict[Exponent, Fraction] = {}
    get = acc.get
    for e, c in p.terms.items():
        term = None
        for i, a in enumerate(e):
            if a:
                f = power(i, a)
                term = f if term is None else term * f
        if term is None:
            k = (0,) * len(ring)
            acc[k] = get(k, 0) + c
        else:
            for k, b in term.terms.items():
                acc[k] = get(k, 0) + c * b
    return Polynomial(ring, {e: c for e, c in acc.items() if c}, _trusted=True)
