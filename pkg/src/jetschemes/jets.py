"""Jet schemes of affine varieties by truncated substitution.

For a variety ``V = Spec k[x_1..x_N]/(f_1..f_r)`` the m-jet scheme is
presented by the variables ``x_i#j`` (0 <= j <= m) and the strata
``F_{a,k}``, defined by

    f_a(sum_j x#j t^j) = sum_k F_{a,k} t^k   (mod t^(m+1)).

``x_i#j`` has weight ``j`` and ``F_{a,k}`` is weight-homogeneous of weight k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from .polynomial import Polynomial, Ring, Variable
from .presentation import Presentation


def jet_ring(base: Ring, m: int) -> Ring:
    """Jet variables of ``base`` up to level m, ordered by level then base position."""
    return Ring(Variable(v.name, j) for j in range(m + 1) for v in base.variables)


def _check_level(m) -> int:
    if isinstance(m, float) and math.isinf(m):
        raise ValueError("m = infinity has no finite presentation; use a finite truncation level")
    if not isinstance(m, int) or m < 0:
        raise ValueError(f"jet level must be a non-negative integer, got {m!r}")
    return m


def _plain(base: Presentation):
    for v in base.variables:
        if v.order is not None:
            raise ValueError(f"base presentation has a jet variable {v}; expected plain variables")


class TruncatedSeries:
    """Polynomial-coefficient power series in t modulo t^(m+1)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Polynomial]):
        self.coeffs = list(coeffs)

    @property
    def precision(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return TruncatedSeries([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        m = self.precision
        out = []
        for k in range(m + 1):
            acc = None
            for j in range(k + 1):
                a, b = self.coeffs[j], other.coeffs[k - j]
                if a and b:
                    acc = a * b if acc is None else acc + a * b
            out.append(acc if acc is not None else self.coeffs[0].ring.zero())
        return TruncatedSeries(out)

    def scale(self, c) -> "TruncatedSeries":
        return TruncatedSeries([a.scale(c) for a in self.coeffs])


def _series_of(p: Polynomial, series: Sequence[TruncatedSeries], ring: Ring, m: int) -> TruncatedSeries:
    """Evaluate ``p`` at the given series (one per variable of p's ring)."""
    zero = ring.zero()
    total = TruncatedSeries([zero] * (m + 1))
    powers: dict[tuple[int, int], TruncatedSeries] = {}

    def power(i, a):
        s = powers.get((i, a))
        if s is None:
            s = series[i] if a == 1 else power(i, a - 1) * series[i]
            powers[(i, a)] = s
        return s

    for e, c in p.terms.items():
        term = None
        for i, a in enumerate(e):
            if a:
                term = power(i, a) if term is None else term * power(i, a)
        if term is None:
            term = TruncatedSeries([ring.one()] + [zero] * m)
        total = total + term.scale(c)
    return total


@dataclass(frozen=True)
class JetPresentation:
    """The m-jet scheme ``X_m = Spec R^(m)`` of a variety."""

    base: Presentation
    level: int
    ring: Ring
    strata: tuple[tuple[Polynomial, ...], ...]  # strata[a][k] = F_{a,k}

    @property
    def jet_variables(self) -> tuple[Variable, ...]:
        return self.ring.variables

    def stratum(self, a: int, k: int) -> Polynomial:
        return self.strata[a][k]

    def level_generators(self, k: int) -> tuple[Polynomial, ...]:
        return tuple(row[k] for row in self.strata)

    @property
    def generators(self) -> tuple[Polynomial, ...]:
        """Nonzero strata, level-major: F_{1,0}, .., F_{r,0}, F_{1,1}, ..."""
        return tuple(g for k in range(self.level + 1) for g in self.level_generators(k) if g)

    @cached_property
    def presentation(self) -> Presentation:
        return Presentation(f"{self.base.name}_{self.level}", self.ring, self.generators, self.base.groebner_limits)

    def variables_at(self, level: int) -> tuple[Variable, ...]:
        return tuple(v.at(level) for v in self.base.variables)


def jet_equations(V: Presentation, m: int) -> JetPresentation:
    """Construct the m-jet presentation of ``V``."""
    m = _check_level(m)
    _plain(V)
    ring = jet_ring(V.ring, m)
    zero = ring.zero()
    series = [TruncatedSeries([ring.gen(v.at(j)) for j in range(m + 1)]) for v in V.variables]
    strata = []
    for f in V.generators:
        s = _series_of(f, series, ring, m)
        strata.append(tuple(c if c is not None else zero for c in s.coeffs))
    return JetPresentation(V, m, ring, tuple(strata))


# --- points -----------------------------------------------------------------

TruncatedSeriesPoint = Mapping[Variable, Sequence]


def evaluate_on_jet(J: JetPresentation, gamma: Mapping) -> list[Fraction]:
    """All F_{a,k}(gamma), ordered by generator then level.

    ``gamma`` maps each base variable (or its name) to its m+1 series
    coefficients.  gamma is an m-jet of the base iff every value is zero.
    """
    point = {}
    by_name = {(Variable.parse(k) if isinstance(k, str) else k): v for k, v in gamma.items()}
    for v in J.base.variables:
        coeffs = by_name.get(v)
        if coeffs is None:
            raise ValueError(f"jet point is missing base variable {v}")
        if len(coeffs) != J.level + 1:
            raise ValueError(f"{v} has {len(coeffs)} coefficients, expected {J.level + 1}")
        for j, c in enumerate(coeffs):
            point[v.at(j)] = c
    if set(by_name) - set(J.base.variables):
        raise ValueError("jet point has variables outside the base ring")
    return [F.evaluate(point) for row in J.strata for F in row]


# --- grading ----------------------------------------------------------------

@dataclass
class GradingReport:
    ok: bool
    checked: int
    violations: list[str] = field(default_factory=list)


def _first_bad_term(F: Polynomial, k: int) -> str | None:
    w = F.ring.weights
    for c, e in ((c, e) for e, c in F.terms.items()):
        wt = sum(a * b for a, b in zip(e, w))
        if wt != k:
            from .parser import format_monomial

            return f"term {c}*{format_monomial(F.ring, e) or '1'} has weight {wt}"
    return None


def scaling_defect(F: Polynomial, k: int, s_name: str = "s") -> Polynomial:
    """F(s.x) - s^k F(x) in the ring extended by a fresh symbol s.

    ``s.x`` scales every level-j variable by s^j.  Zero means F is
    weight-homogeneous of weight k.
    """
    s = Variable(s_name)
    while s in F.ring:
        s = Variable(s.name + "_")
    ext = F.ring.extend([s])
    S = ext.gen(s)
    images = {v: (S ** v.weight) * ext.gen(v) for v in F.ring.variables}
    return F.subs(images, ext) - (S ** k) * F.to_ring(ext)


def check_grading(J: JetPresentation) -> GradingReport:
    """Weight homogeneity, stratification and the symbolic scaling identity."""
    report = GradingReport(True, 0)
    for a, row in enumerate(J.strata):
        for k, F in enumerate(row):
            report.checked += 1
            label = f"F[{a + 1},{k}]"
            bad = _first_bad_term(F, k)
            if bad:
                report.violations.append(f"{label}: not weight-homogeneous of weight {k}: {bad}")
                continue
            high = [str(v) for v in F.variables() if v.weight > k]
            if high:
                report.violations.append(f"{label}: uses variables above level {k}: {', '.join(high)}")
            defect = scaling_defect(F, k)
            if defect:
                report.violations.append(f"{label}: F(s.x) - s^{k} F(x) = {defect}")
    report.ok = not report.violations
    return report


def jacobian_pairing(V: Presentation, a: int, ring: Ring, level: int) -> Polynomial:
    """sum_i df_a/dx_i (x#0) * x_i#level, expressed in ``ring``."""
    f = V.generators[a]
    to_zero = {v: ring.gen(v.at(0)) for v in V.variables}
    total = ring.zero()
    for v in V.variables:
        d = f.diff(v)
        if d:
            total = total + d.subs(to_zero, ring) * ring.gen(v.at(level))
    return total


# --- truncation, projection, zero section -------------------------------------

def truncation_map(J: JetPresentation, lower: int):
    """Ring map R^(lower) -> R^(level) including lower-level variables identically.

    Checks that the strata of levels <= lower are literally shared.
    """
    from .morphisms import RingMap

    lower = _check_level(lower)
    if lower > J.level:
        raise ValueError(f"cannot truncate level {J.level} jets to level {lower}")
    Jl = jet_equations(J.base, lower)
    for a in range(len(J.strata)):
        for k in range(lower + 1):
            if J.strata[a][k].to_ring(Jl.ring) != Jl.strata[a][k]:
                raise AssertionError(f"stratum F[{a + 1},{k}] differs between levels {lower} and {J.level}")
    images = {v: J.ring.gen(v) for v in Jl.ring.variables}
    return RingMap(Jl.presentation, J.presentation, images)


def projection(J: JetPresentation):
    """pi_m on rings: base coordinate ring -> R^(m), x -> x#0."""
    from .morphisms import RingMap

    return RingMap(J.base, J.presentation, {v: J.ring.gen(v.at(0)) for v in J.base.variables})


def zero_section(J: JetPresentation):
    """sigma_m on rings: R^(m) -> base coordinate ring, x#0 -> x and x#j -> 0 for j >= 1."""
    from .morphisms import RingMap

    base = J.base.ring
    images = {v: (base.gen(Variable(v.name)) if v.order == 0 else base.zero()) for v in J.ring.variables}
    return RingMap(J.presentation, J.base, images)


# --- fiber over the zero section ----------------------------------------------

@dataclass
class FiberPresentation:
    """Jets whose levels 1..m-1 vanish: ``Spec S(Omega)`` in the level-m variables."""

    presentation: Presentation
    level: int
    reduced_strata: tuple[tuple[Polynomial, ...], ...]
    pairings: tuple[Polynomial, ...]
    ok: bool
    failures: list[str]


def fiber_over_zero_section(V: Presentation, m: int) -> FiberPresentation:
    """Restrict the m-jets of V to the fiber over the zero section of X_{m-1}.

    Checks the linearization identity: strata 1..m-1 vanish and stratum m
    becomes the Jacobian pairing with the level-m variables.
    """
    m = _check_level(m)
    if m == 0:
        raise ValueError("the fiber over the zero section needs m >= 1")
    J = jet_equations(V, m)
    ring = Ring([v.at(0) for v in V.variables] + [v.at(m) for v in V.variables])
    images = {}
    for v in J.ring.variables:
        images[v] = ring.gen(v) if v.order in (0, m) else ring.zero()
    reduced = tuple(tuple(F.subs(images, ring) for F in row) for row in J.strata)
    pairings = tuple(jacobian_pairing(V, a, ring, m) for a in range(len(V.generators)))
    failures = []
    for a, row in enumerate(reduced):
        for k in range(1, m):
            if row[k]:
                failures.append(f"F[{a + 1},{k}] does not vanish: {row[k]}")
        if row[m] != pairings[a]:
            failures.append(f"F[{a + 1},{m}] = {row[m]} differs from the Jacobian pairing {pairings[a]}")
    gens = tuple(g for row in reduced for g in row if g)
    pres = Presentation(f"{V.name}_{m}|zero-section", ring, gens, V.groebner_limits)
    return FiberPresentation(pres, m, reduced, pairings, not failures, failures)
