"""Ring maps between presentations and isomorphism certificates.

A :class:`RingMap` sends every source variable to a polynomial over the
target ring; it is *well-defined* when every source generator maps into the
target ideal.  An :class:`IsoCertificate` pairs two such maps with a
transcript of the normal-form identities proving they are mutually inverse.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .polynomial import Polynomial, Ring, Variable
from .presentation import Presentation


class VerificationError(Exception):
    """An identity that should hold modulo an ideal does not."""

    def __init__(self, label: str, remainder: Polynomial | None = None, detail: str = ""):
        self.label = label
        self.remainder = remainder
        msg = label
        if remainder is not None:
            msg += f": remainder {remainder}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


@dataclass(frozen=True)
class Identity:
    """One checked claim: ``remainder`` is the normal form of the difference."""

    label: str
    ideal: str
    remainder: Polynomial

    @property
    def holds(self) -> bool:
        return self.remainder.is_zero()

    def line(self) -> str:
        return f"{self.label} mod ({self.ideal}) -> {self.remainder}"


@dataclass
class Transcript:
    identities: list[Identity] = field(default_factory=list)

    def record(self, label: str, presentation: Presentation, difference: Polynomial, *, exact: bool = False) -> Identity:
        rem = difference if exact else presentation.normal_form(difference)
        ident = Identity(label, "exact" if exact else presentation.name, rem)
        self.identities.append(ident)
        return ident

    def require(self, label: str, presentation: Presentation, difference: Polynomial, *, exact: bool = False) -> None:
        ident = self.record(label, presentation, difference, exact=exact)
        if not ident.holds:
            raise VerificationError(label, ident.remainder)

    def extend(self, other: "Transcript") -> None:
        self.identities.extend(other.identities)

    @property
    def ok(self) -> bool:
        return all(i.holds for i in self.identities)

    def __len__(self):
        return len(self.identities)

    def lines(self) -> list[str]:
        return [i.line() for i in self.identities]

    def digest(self) -> str:
        h = hashlib.sha256()
        for line in self.lines():
            h.update(line.encode())
            h.update(b"\n")
        return h.hexdigest()


@dataclass(frozen=True)
class RingMap:
    """Ring homomorphism ``k[source]/I -> k[target]/J`` given by generator images."""

    source: Presentation
    target: Presentation
    images: Mapping[Variable, Polynomial]

    def __post_init__(self):
        imgs = {}
        ring = self.target.ring
        for k, v in self.images.items():
            var = Variable.parse(k) if isinstance(k, str) else k
            if isinstance(v, str):
                v = ring(v)
            elif not isinstance(v, Polynomial):
                v = ring.const(v)
            elif v.ring is not ring:
                v = v.to_ring(ring)
            imgs[var] = v
        missing = [str(v) for v in self.source.variables if v not in imgs]
        if missing:
            raise ValueError(f"no image for source variables {missing}")
        extra = [str(v) for v in imgs if v not in self.source.ring]
        if extra:
            raise ValueError(f"images given for unknown variables {extra}")
        object.__setattr__(self, "images", {v: imgs[v] for v in self.source.variables})

    def __call__(self, p: Polynomial) -> Polynomial:
        if p.ring is not self.source.ring:
            p = p.to_ring(self.source.ring)
        return p.subs(self.images, self.target.ring)

    def then(self, other: "RingMap") -> "RingMap":
        """``other`` after ``self``: source(self) -> target(self) = source(other) -> target(other)."""
        if self.target.ring is not other.source.ring:
            raise ValueError("maps are not composable: rings differ")
        return RingMap(self.source, other.target, {v: other(img) for v, img in self.images.items()})

    def reduced(self) -> "RingMap":
        """Same map with images replaced by their normal forms in the target."""
        return RingMap(self.source, self.target, {v: self.target.normal_form(p) for v, p in self.images.items()})

    def first_weight_violation(self) -> Variable | None:
        """First variable whose image is not homogeneous of the variable's own weight."""
        for v, img in self.images.items():
            if not img.is_weight_homogeneous(v.weight):
                return v
        return None

    def is_weight_preserving(self) -> bool:
        return self.first_weight_violation() is None


def identity_map(P: Presentation) -> RingMap:
    return RingMap(P, P, {v: P.ring.gen(v) for v in P.variables})


def verify_ring_map(phi: RingMap) -> Transcript:
    """Check that every source generator maps into the target ideal."""
    t = Transcript()
    for i, g in enumerate(phi.source.generators):
        t.require(f"{phi.source.name}->{phi.target.name}: image of generator {i + 1}", phi.target, phi(g))
    return t


@dataclass
class IsoCertificate:
    """Mutually inverse ring maps plus the transcript that proves it."""

    forward: RingMap
    backward: RingMap
    transcript: Transcript

    @property
    def source(self) -> Presentation:
        return self.forward.source

    @property
    def target(self) -> Presentation:
        return self.forward.target

    def inverse(self) -> "IsoCertificate":
        return verify_iso(self.backward, self.forward)

    def reverify(self) -> "IsoCertificate":
        """Re-run every check from the raw maps; the transcripts must agree."""
        fresh = verify_iso(self.forward, self.backward)
        if fresh.transcript.digest() != self.transcript.digest():
            raise VerificationError("re-verification produced a different transcript")
        return fresh

    def is_weight_preserving(self) -> bool:
        return self.forward.is_weight_preserving() and self.backward.is_weight_preserving()


def verify_iso(forward: RingMap, backward: RingMap) -> IsoCertificate:
    """Verify that ``forward`` and ``backward`` are inverse isomorphisms."""
    if forward.source != backward.target or forward.target != backward.source:
        raise ValueError("forward and backward maps do not run between the same presentations")
    t = Transcript()
    t.extend(verify_ring_map(forward))
    t.extend(verify_ring_map(backward))
    S, T = forward.source, forward.target
    for v in S.variables:
        t.require(f"backward(forward({v})) = {v}", S, backward(forward.images[v]) - S.ring.gen(v))
    for v in T.variables:
        t.require(f"forward(backward({v})) = {v}", T, forward(backward.images[v]) - T.ring.gen(v))
    return IsoCertificate(forward, backward, t)


def identity_certificate(P: Presentation) -> IsoCertificate:
    ident = identity_map(P)
    return verify_iso(ident, ident)


def renaming_certificate(P: Presentation, mapping: Mapping[Variable, Variable], name: str | None = None) -> IsoCertificate:
    """Certificate for ``P`` and the same presentation with variables renamed."""
    Q = P.rename(dict(mapping), name)
    fwd = RingMap(P, Q, {v: Q.ring.gen(mapping.get(v, v)) for v in P.variables})
    inv = {mapping.get(v, v): v for v in P.variables}
    bwd = RingMap(Q, P, {w: P.ring.gen(inv[w]) for w in Q.variables})
    return verify_iso(fwd, bwd)


def product_with_affine_space(
    P: Presentation, r: int, prefix: str = "t", level: int | None = None, name: str | None = None
) -> Presentation:
    """``P x A^r``: the same generators with r new free variables prefix1..prefixr."""
    if r < 0:
        raise ValueError("r must be non-negative")
    if r == 0:
        return P
    extra = [Variable(f"{prefix}{k}", level) for k in range(1, r + 1)]
    clash = [str(v) for v in extra if v in P.ring]
    if clash:
        raise ValueError(f"fresh variable names collide with existing ones: {clash}")
    return P.extend(extra, name or f"{P.name}*A{r}")


def extend_map(phi: RingMap, source: Presentation, target: Presentation, extra: Sequence[Variable]) -> RingMap:
    images = {v: phi.images[v].to_ring(target.ring) for v in phi.source.variables}
    for v in extra:
        images[v] = target.ring.gen(v)
    return RingMap(source, target, images)


def extend_certificate(
    c: IsoCertificate, extra: Sequence[Variable], *, verify: bool = True, names: tuple[str, str] | None = None
) -> IsoCertificate:
    """``A x A^k ~ B x A^k`` from ``A ~ B``, acting as the identity on the new variables."""
    extra = list(extra)
    S = c.source.extend(extra, names[0] if names else None)
    T = c.target.extend(extra, names[1] if names else None)
    fwd = extend_map(c.forward, S, T, extra)
    bwd = extend_map(c.backward, T, S, extra)
    return verify_iso(fwd, bwd) if verify else IsoCertificate(fwd, bwd, Transcript())


def compose_certificates(
    c1: IsoCertificate,
    c2: IsoCertificate,
    renaming: Mapping[Variable, Variable] | None = None,
    *,
    verify: bool = True,
    reduce: bool = True,
) -> IsoCertificate:
    """``A ~ C`` from ``c1: A ~ B`` and ``c2: B' ~ C``.

    ``renaming`` sends variables of B to those of B'; the two middle
    presentations must then agree.  The composite is re-verified from
    scratch unless ``verify`` is False.
    """
    renaming = dict(renaming or {})
    B = c1.target
    Bp = c2.source
    if renaming:
        renamed = B.rename(renaming, Bp.name)
    else:
        renamed = B
    if renamed.ring is not Bp.ring or not renamed.same_as(Bp):
        raise ValueError(f"middle presentations differ: {B.name} vs {Bp.name}")
    back = {renaming.get(v, v): v for v in B.variables}

    def to_bp(p: Polynomial) -> Polynomial:
        return p.rename(renaming, Bp.ring) if renaming else p

    def to_b(p: Polynomial) -> Polynomial:
        return p.rename(back, B.ring) if renaming else p

    A, C = c1.source, c2.target
    fwd = {v: c2.forward(to_bp(img)) for v, img in c1.forward.images.items()}
    bwd = {w: c1.backward(to_b(img)) for w, img in c2.backward.images.items()}
    if reduce:
        fwd = {v: C.normal_form(p) for v, p in fwd.items()}
        bwd = {w: A.normal_form(p) for w, p in bwd.items()}
    F, Bk = RingMap(A, C, fwd), RingMap(C, A, bwd)
    return verify_iso(F, Bk) if verify else IsoCertificate(F, Bk, Transcript())


def weight_zero_part(P: Presentation, name: str | None = None) -> Presentation:
    """Weight-0 variables with the weight-0 generators: the degree-0 part of a graded presentation."""
    vs = [v for v in P.variables if v.weight == 0]
    ring = Ring(vs)
    gens = tuple(g.to_ring(ring) for g in P.generators if g.is_weight_homogeneous(0))
    return Presentation(name or f"{P.name}|weight-0", ring, gens, P.groebner_limits)


def _strip_levels(P: Presentation) -> dict[Variable, Variable]:
    if P.variables and all(v.order == 0 for v in P.variables):
        return {v: Variable(v.name) for v in P.variables}
    return {}


def descend_equivariant_iso(c: IsoCertificate, names: tuple[str, str] | None = None) -> IsoCertificate:
    """Restrict a grading-preserving isomorphism of jet presentations to weight 0.

    Raises ``VerificationError`` naming the first variable whose image is not
    homogeneous of its own weight.  Level-0 jet variables ``x#0`` are
    renamed back to plain ``x`` in the result.
    """
    for label, phi in (("forward", c.forward), ("backward", c.backward)):
        bad = phi.first_weight_violation()
        if bad is not None:
            raise VerificationError(
                f"{label} map is not weight-preserving at {bad}",
                detail=f"image {phi.images[bad]} has weights {sorted(phi.images[bad].weights())}, expected {bad.weight}",
            )
    for P in (c.source, c.target):
        for g in P.generators:
            if not g.weights() or len(g.weights()) > 1:
                raise ValueError(f"{P.name} is not presented by weight-homogeneous generators")
    S0 = weight_zero_part(c.source)
    T0 = weight_zero_part(c.target)
    fwd = RingMap(S0, T0, {v: c.forward.images[v].to_ring(T0.ring) for v in S0.variables})
    bwd = RingMap(T0, S0, {v: c.backward.images[v].to_ring(S0.ring) for v in T0.variables})
    try:
        cert = verify_iso(fwd, bwd)
    except VerificationError as exc:  # pragma: no cover - impossible for a grading-preserving iso
        raise AssertionError(f"weight-0 restriction failed to verify: {exc}") from exc
    ms, mt = _strip_levels(S0), _strip_levels(T0)
    if ms and mt:
        sname, tname = names or (S0.name, T0.name)
        S, T = S0.rename(ms, sname), T0.rename(mt, tname)
        f2 = RingMap(S, T, {ms[v]: p.rename(mt, T.ring) for v, p in fwd.images.items()})
        b2 = RingMap(T, S, {mt[v]: p.rename(ms, S.ring) for v, p in bwd.images.items()})
        cert = verify_iso(f2, b2)
    return cert


def induced_jet_map(g: RingMap, m: int, source_jets=None, target_jets=None) -> RingMap:
    """The map on m-jets induced by a map of varieties, by coefficient extraction."""
    from .jets import TruncatedSeries, _series_of, jet_equations

    Js = source_jets or jet_equations(g.source, m)
    Jt = target_jets or jet_equations(g.target, m)
    ring = Jt.ring
    series = [TruncatedSeries([ring.gen(v.at(j)) for j in range(m + 1)]) for v in g.target.variables]
    images = {}
    for v, img in g.images.items():
        s = _series_of(img, series, ring, m)
        for j in range(m + 1):
            images[v.at(j)] = s.coeffs[j]
    return RingMap(Js.presentation, Jt.presentation, images)


def induced_jet_certificate(c: IsoCertificate, m: int) -> IsoCertificate:
    from .jets import jet_equations

    Js, Jt = jet_equations(c.source, m), jet_equations(c.target, m)
    return verify_iso(induced_jet_map(c.forward, m, Js, Jt), induced_jet_map(c.backward, m, Jt, Js))


def verify_additive_action(V: Presentation, action: RingMap, t: Variable | str = "t") -> Transcript:
    """Check that ``action`` (V -> V x A^1_t on rings) is an additive group action.

    Laws: the ideal is preserved, t = 0 acts as the identity, and acting by
    s then by t equals acting by s + t, all modulo the ideal.
    """
    t = Variable.parse(t) if isinstance(t, str) else t
    if action.source.ring is not V.ring:
        raise ValueError("action must be defined on the variety's variables")
    ext = action.target
    if t not in ext.ring or set(ext.variables) != set(V.variables) | {t}:
        raise ValueError(f"action target must be the variety's ring extended by {t}")
    tr = Transcript()
    failed: list[tuple[str, Polynomial]] = []  # every law is checked before reporting

    for i, g in enumerate(V.generators):
        img = action(g)
        if img == g.to_ring(ext.ring):
            tr.record(f"action preserves generator {i + 1}", ext, img - g.to_ring(ext.ring), exact=True)
        else:
            ident = tr.record(f"action preserves generator {i + 1}", ext, img)
            if not ident.holds:
                failed.append(("ideal preservation", ident.remainder))

    at_zero = {v: V.ring.gen(v) for v in V.variables}
    at_zero[t] = V.ring.zero()
    for v in V.variables:
        d = action.images[v].subs(at_zero, V.ring) - V.ring.gen(v)
        ident = tr.record(f"identity law at t=0 for {v}", V, d)
        if not ident.holds:
            failed.append(("identity law", ident.remainder))

    s = Variable("s")
    while s in ext.ring:
        s = Variable(s.name + "_")
    big = Presentation(f"{V.name}[s,t]", ext.ring.extend([s]), tuple(g.to_ring(ext.ring.extend([s])) for g in V.generators))
    R = big.ring
    by_s = {v: action.images[v].rename({t: s}, R) for v in V.variables}
    then_t = dict(by_s)
    then_t[t] = R.gen(t)
    total = {v: R.gen(v) for v in V.variables}
    total[t] = R.gen(s) + R.gen(t)
    for v in V.variables:
        lhs = action.images[v].to_ring(R).subs(then_t, R)
        rhs = action.images[v].to_ring(R).subs(total, R)
        ident = tr.record(f"composition law for {v}", big, lhs - rhs)
        if not ident.holds:
            failed.append(("composition law", ident.remainder))
    if failed:
        laws = list(dict.fromkeys(label for label, _ in failed))
        err = VerificationError(", ".join(laws), failed[0][1])
        err.laws = laws
        raise err
    return tr
