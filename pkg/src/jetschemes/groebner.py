"""Buchberger's algorithm, normal forms and the ideal questions built on them."""

from __future__ import annotations

import heapq
import logging
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .polynomial import Exponent, Polynomial, Ring, RingMismatchError, Variable

log = logging.getLogger(__name__)

DEFAULT_MAX_PAIRS = 50_000
DEFAULT_MAX_BASIS = 2_000


class GroebnerLimitExceeded(RuntimeError):
    """The pair or basis-size guard tripped before the computation finished."""


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order on a ring.

    ``kind`` is ``"grevlex"``, ``"lex"`` or ``"block"``.  ``priority`` lists
    variables from largest to smallest; ``None`` means ring order.  For
    ``"block"`` the variables in ``front`` form the first (eliminated) block;
    each block is compared by grevlex.
    """

    kind: str = "grevlex"
    priority: tuple[Variable, ...] | None = None
    front: frozenset[Variable] = frozenset()

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")

    def sort_key(self, ring: Ring) -> Callable[[Exponent], tuple]:
        """Key under which ascending sort lists monomials from largest to smallest."""
        return _sort_key(self, ring)


_KEY_CACHE: dict[tuple[MonomialOrder, Ring], Callable] = {}


def _sort_key(order: MonomialOrder, ring: Ring) -> Callable[[Exponent], tuple]:
    fn = _KEY_CACHE.get((order, ring))
    if fn is not None:
        return fn
    prio = order.priority if order.priority is not None else ring.variables
    if len(prio) != len(ring) or set(prio) != set(ring.variables):
        raise ValueError("monomial order priority must list exactly the ring variables")
    perm = tuple(ring.index[v] for v in prio)
    rev = perm[::-1]
    memo: dict[Exponent, tuple] = {}

    if order.kind == "grevlex":
        def raw(e):
            return (-sum(e),) + tuple([e[i] for i in rev])
    elif order.kind == "lex":
        def raw(e):
            return tuple([-e[i] for i in perm])
    else:
        front = tuple(i for i in perm if ring.variables[i] in order.front)
        back = tuple(i for i in perm if ring.variables[i] not in order.front)
        front_r, back_r = front[::-1], back[::-1]

        def raw(e):
            return (
                (-sum(e[i] for i in front),)
                + tuple([e[i] for i in front_r])
                + (-sum(e[i] for i in back),)
                + tuple([e[i] for i in back_r])
            )

    def key(e):
        k = memo.get(e)
        if k is None:
            k = memo[e] = raw(e)
        return k

    _KEY_CACHE[(order, ring)] = key
    return key


def default_order(ring: Ring) -> MonomialOrder:
    """grevlex with higher jet levels first, ties broken by ring position."""
    prio = sorted(ring.variables, key=lambda v: (-v.weight, ring.index[v]))
    return MonomialOrder("grevlex", tuple(prio))


def leading_exponent(p: Polynomial, order: MonomialOrder) -> Exponent:
    if not p.terms:
        raise ValueError("zero polynomial has no leading term")
    return min(p.terms, key=order.sort_key(p.ring))


def _divides(a: Exponent, b: Exponent) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple([x if x > y else y for x, y in zip(a, b)])


class _Basis:
    """Working set of monic polynomials with cached leading exponents."""

    def __init__(self, key):
        self.key = key
        self.polys: list[dict[Exponent, Fraction]] = []
        self.leads: list[Exponent] = []
        self.alive: list[bool] = []

    def add(self, terms: dict[Exponent, Fraction]) -> int:
        lead = min(terms, key=self.key)
        self.polys.append(terms)
        self.leads.append(lead)
        self.alive.append(True)
        return len(self.polys) - 1

    def reducer(self, e: Exponent, skip: int = -1):
        for i, lead in enumerate(self.leads):
            if i != skip and self.alive[i] and _divides(lead, e):
                return i
        return None


def _reduce(terms: dict[Exponent, Fraction], basis: _Basis, skip: int = -1) -> dict[Exponent, Fraction]:
    """Full reduction of ``terms`` by the live basis elements (monic)."""
    key = basis.key
    p = dict(terms)
    heap = [(key(e), e) for e in p]
    heapq.heapify(heap)
    rem: dict[Exponent, Fraction] = {}
    while heap:
        _, lt = heapq.heappop(heap)
        c = p.get(lt)
        if c is None:
            continue
        i = basis.reducer(lt, skip)
        if i is None:
            rem[lt] = c
            del p[lt]
            continue
        g = basis.polys[i]
        shift = tuple([a - b for a, b in zip(lt, basis.leads[i])])
        for e, a in g.items():
            ne = tuple([x + y for x, y in zip(e, shift)])
            old = p.get(ne)
            if old is None:
                p[ne] = -c * a
                heapq.heappush(heap, (key(ne), ne))
            else:
                v = old - c * a
                if v:
                    p[ne] = v
                else:
                    del p[ne]
    return rem


def _monic(terms: dict[Exponent, Fraction], key) -> dict[Exponent, Fraction]:
    lead = min(terms, key=key)
    c = terms[lead]
    if c == 1:
        return terms
    inv = 1 / c
    return {e: a * inv for e, a in terms.items()}


@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced, monic Gröbner basis, sorted by leading monomial (largest first)."""

    ring: Ring
    order: MonomialOrder
    basis: tuple[Polynomial, ...]
    stats: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        key = self.order.sort_key(self.ring)
        b = _Basis(key)
        for g in self.basis:
            b.add(g.terms)
        object.__setattr__(self, "_work", b)

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return len(self.basis)

    def is_unit(self) -> bool:
        return len(self.basis) == 1 and self.basis[0].is_constant() and not self.basis[0].is_zero()

    def is_zero_ideal(self) -> bool:
        return not self.basis

    def leading_exponents(self) -> list[Exponent]:
        return list(self._work.leads)

    def normal_form(self, p: Polynomial) -> Polynomial:
        return normal_form(p, self)

    def contains(self, p: Polynomial) -> bool:
        return normal_form(p, self).is_zero()


def buchberger(
    gens: Iterable[Polynomial],
    order: MonomialOrder | None = None,
    ring: Ring | None = None,
    *,
    max_pairs: int | None = DEFAULT_MAX_PAIRS,
    max_basis: int | None = DEFAULT_MAX_BASIS,
) -> GroebnerBasis:
    """Reduced Gröbner basis of the ideal generated by ``gens``.

    Pairs are selected by the normal strategy (smallest lcm first) and pruned
    with Buchberger's coprime and chain criteria.  ``max_pairs`` bounds the
    number of S-polynomials reduced and ``max_basis`` the size of the working
    basis; exceeding either raises :class:`GroebnerLimitExceeded`.
    """
    gens = [g for g in gens]
    if ring is None:
        if not gens:
            raise ValueError("ring is required when there are no generators")
        ring = gens[0].ring
    for g in gens:
        if g.ring is not ring:
            raise RingMismatchError("generators must share one ring")
    if order is None:
        order = default_order(ring)
    key = order.sort_key(ring)
    work = _Basis(key)

    pairs: list[tuple[tuple, int, int]] = []
    pending: set[tuple[int, int]] = set()
    processed = 0

    def push_pairs(j: int):
        lj = work.leads[j]
        for i in range(j):
            if not work.alive[i]:
                continue
            lcm = _lcm(work.leads[i], lj)
            # normal strategy: smallest lcm degree first, older pairs first on ties
            heapq.heappush(pairs, ((sum(lcm), j, i), i, j))
            pending.add((i, j))

    def insert(terms):
        terms = _monic(terms, key)
        j = work.add(terms)
        if max_basis is not None and len(work.polys) > max_basis:
            raise GroebnerLimitExceeded(f"working basis exceeded {max_basis} elements")
        push_pairs(j)
        return j

    for g in sorted(gens, key=lambda q: (len(q.terms), str(q))):
        if g.is_zero():
            continue
        r = _reduce(g.terms, work)
        if r:
            insert(r)
            if len(r) == 1 and not any(next(iter(r))):
                break

    while pairs:
        _, i, j = heapq.heappop(pairs)
        if (i, j) not in pending:
            continue
        pending.discard((i, j))
        if not (work.alive[i] and work.alive[j]):
            continue
        li, lj = work.leads[i], work.leads[j]
        lcm = _lcm(li, lj)
        # coprime leading monomials: the S-polynomial reduces to zero
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue
        if _chain_criterion(work, pending, i, j, lcm):
            continue
        processed += 1
        if max_pairs is not None and processed > max_pairs:
            raise GroebnerLimitExceeded(f"more than {max_pairs} S-pairs reduced")
        s = _spoly(work, i, j, lcm)
        if not s:
            continue
        r = _reduce(s, work)
        if not r:
            continue
        jn = insert(r)
        log.debug("pair %d: new element %d, %d terms, degree %d", processed, jn, len(r), max(map(sum, r)))
        if len(r) == 1 and not any(next(iter(r))):
            # unit ideal
            for k in range(len(work.alive)):
                work.alive[k] = k == jn
            pairs.clear()
            break

    basis = _interreduce(work, ring)
    return GroebnerBasis(ring, order, tuple(basis), {"pairs": processed})


def _chain_criterion(work: _Basis, pending: set, i: int, j: int, lcm: Exponent) -> bool:
    for k, lk in enumerate(work.leads):
        if k == i or k == j or not work.alive[k]:
            continue
        if not _divides(lk, lcm):
            continue
        if (min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending:
            continue
        return True
    return False


def _spoly(work: _Basis, i: int, j: int, lcm: Exponent) -> dict[Exponent, Fraction]:
    out: dict[Exponent, Fraction] = {}
    for idx, sign in ((i, 1), (j, -1)):
        shift = tuple([a - b for a, b in zip(lcm, work.leads[idx])])
        for e, c in work.polys[idx].items():
            ne = tuple([x + y for x, y in zip(e, shift)])
            v = out.get(ne, 0) + sign * c
            if v:
                out[ne] = v
            else:
                out.pop(ne, None)
    return out


def _interreduce(work: _Basis, ring: Ring) -> list[Polynomial]:
    key = work.key
    live = [k for k in range(len(work.polys)) if work.alive[k]]
    # minimal basis: drop elements whose leading monomial another one divides
    minimal = []
    for k in sorted(live, key=lambda k: key(work.leads[k]), reverse=True):
        if any(_divides(work.leads[m], work.leads[k]) for m in minimal):
            continue
        minimal.append(k)
    mb = _Basis(key)
    for k in minimal:
        mb.add(work.polys[k])
    out = []
    for idx in range(len(mb.polys)):
        r = _reduce(mb.polys[idx], mb, skip=idx)
        r = _monic(r, key)
        mb.polys[idx] = r
        out.append(r)
    polys = [Polynomial(ring, t, _trusted=True) for t in out]
    polys.sort(key=lambda p: key(min(p.terms, key=key)))
    return polys


def normal_form(p: Polynomial, G: GroebnerBasis) -> Polynomial:
    """The unique remainder of ``p`` modulo the ideal of ``G``."""
    if p.ring is not G.ring:
        raise RingMismatchError(f"{p.ring!r} vs {G.ring!r}")
    if not G.basis or not p.terms:
        return p
    return Polynomial(p.ring, _reduce(p.terms, G._work), _trusted=True)


def ideal_equal(
    A: Sequence[Polynomial], B: Sequence[Polynomial], order: MonomialOrder | None = None, ring: Ring | None = None
) -> bool:
    """True iff A and B generate the same ideal."""
    ring = ring or (A[0].ring if A else B[0].ring if B else None)
    for p in itertools.chain(A, B):
        if p.ring is not ring:
            raise RingMismatchError("generators must share one ring")
    return buchberger(A, order, ring).basis == buchberger(B, order, ring).basis


def determinant(matrix: Sequence[Sequence[Polynomial]], ring: Ring) -> Polynomial:
    """Laplace expansion; matrices here are small."""
    n = len(matrix)
    if n == 0:
        return ring.one()
    if n == 1:
        return matrix[0][0]
    total = ring.zero()
    for col in range(n):
        entry = matrix[0][col]
        if entry.is_zero():
            continue
        minor = [row[:col] + row[col + 1:] for row in matrix[1:]]
        term = entry * determinant(minor, ring)
        total = total + term if col % 2 == 0 else total - term
    return total


def jacobian(generators: Sequence[Polynomial], variables: Sequence[Variable]) -> list[list[Polynomial]]:
    return [[g.diff(v) for v in variables] for g in generators]


def jacobian_ideal(generators: Sequence[Polynomial], ring: Ring, codim: int) -> list[Polynomial]:
    """The generators together with all codim x codim minors of their Jacobian."""
    J = jacobian(generators, ring.variables)
    minors = []
    for rows in itertools.combinations(range(len(J)), codim):
        for cols in itertools.combinations(range(len(ring)), codim):
            d = determinant([[J[r][c] for c in cols] for r in rows], ring)
            if d:
                minors.append(d)
    return list(generators) + minors


def is_smooth(presentation, codim: int | None = None, order: MonomialOrder | None = None, **limits) -> bool:
    """Jacobian criterion: the generators plus the codim-sized minors generate (1).

    ``codim`` defaults to the number of generators, which is right for
    hypersurfaces and complete intersections.
    """
    gens = list(presentation.generators)
    ring = presentation.ring
    if codim is None:
        codim = len(gens)
    if codim == 0:
        return True
    G = buchberger(jacobian_ideal(gens, ring, codim), order, ring, **limits)
    return G.is_unit()
