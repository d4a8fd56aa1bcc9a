"""The Danielewski surfaces and the end-to-end jet isomorphism suite.

X: xz - y^2 + 1 = 0 and Y: x^2 z - y^2 + 1 = 0 are not isomorphic, yet
X x A^1 ~ Y x A^1.  Since both have free differentials of rank 2, their
m-jet schemes are X x A^(2m) and Y x A^(2m), hence isomorphic for every m.
No such isomorphism preserves the jet grading.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from importlib import resources

from .corpus import builtin
from .frames import CotangentFrame, search_frame, trivialize_jets, truncation_compatibility, verify_frame
from .groebner import is_smooth
from .jets import jet_equations, truncation_map
from .morphisms import (
    IsoCertificate,
    RingMap,
    VerificationError,
    compose_certificates,
    descend_equivariant_iso,
    extend_certificate,
    induced_jet_certificate,
    verify_additive_action,
    verify_iso,
)
from .polynomial import Variable
from .presentation import Presentation
from .report import Report

log = logging.getLogger(__name__)

X_NAME, Y_NAME = "danielewski-x", "danielewski-y"
U = Variable("u")


def surface_x() -> Presentation:
    return builtin(X_NAME)


def surface_y() -> Presentation:
    return builtin(Y_NAME)


def times_line(V: Presentation) -> Presentation:
    """``V x A^1`` with the line coordinate ``u``."""
    return V.extend([U], f"{V.name}-A1")


def lookup(name: str) -> Presentation:
    """Built-in variety by name, including the ``-A1`` products of the Danielewski surfaces."""
    name = name.lstrip("@")
    if name in (f"{X_NAME}-A1", f"{Y_NAME}-A1"):
        return times_line(builtin(name[:-3]))
    return builtin(name)


def additive_action(V: Presentation, power: int, *, broken: bool = False) -> RingMap:
    """(x, y, z) -> (x, y + x^p t, z + 2yt + x^p t^2) as a ring map V -> V[t]."""
    t = Variable("t")
    ext = V.extend([t], f"{V.name}[t]")
    R = ext.ring
    x, y, z, T = R.gen("x"), R.gen("y"), R.gen("z"), R.gen(t)
    xp = x ** power
    z_img = z + 2 * y * T if broken else z + 2 * y * T + xp * T ** 2
    return RingMap(V, ext, {Variable("x"): x, Variable("y"): y + xp * T, Variable("z"): z_img})


def action_x(**kw) -> RingMap:
    return additive_action(surface_x(), 1, **kw)


def action_y(**kw) -> RingMap:
    return additive_action(surface_y(), 2, **kw)


def action_automorphism(action: RingMap, time: int = 1) -> IsoCertificate:
    """The automorphism given by flowing for ``time``, with its inverse flow."""
    V = action.source
    t = Variable("t")

    def at(s):
        imgs = {v: V.ring.gen(v) for v in V.variables}
        imgs[t] = V.ring.const(s)
        return RingMap(V, V, {v: p.subs(imgs, V.ring) for v, p in action.images.items()})

    return verify_iso(at(time), at(-time))


def cancellation_text() -> str:
    return resources.files("jetschemes").joinpath("data/cancellation_xy.cert").read_text()


def load_cancellation(text: str | None = None, origin: str = "cancellation_xy.cert") -> IsoCertificate:
    """Parse and verify a certificate for ``X x A^1 ~ Y x A^1`` (bundled one by default)."""
    from .fileformats import parse_certificate

    text = cancellation_text() if text is None else text
    fwd, bwd = parse_certificate(text, times_line(surface_x()), times_line(surface_y()), origin)
    return verify_iso(fwd, bwd)


def default_frames(degree_bound: int = 4) -> tuple[CotangentFrame, CotangentFrame]:
    return search_frame(surface_x(), 2, degree_bound), search_frame(surface_y(), 2, degree_bound)


def extend_cancellation(cancellation: IsoCertificate, m: int, prefix: str = "th") -> IsoCertificate:
    """``X x A^(2m) ~ Y x A^(2m)``: the line coordinate becomes th1#1, other thetas are fixed."""
    from .frames import theta_variables

    thetas = [v for j in range(1, m + 1) for v in theta_variables(2, j, prefix)]
    first, rest = thetas[0], thetas[1:]
    S = cancellation.source.rename({U: first}, f"{X_NAME}*A{2 * m}")
    T = cancellation.target.rename({U: first}, f"{Y_NAME}*A{2 * m}")
    ren = {U: first}
    fwd = RingMap(S, T, {ren.get(v, v): p.rename(ren, T.ring) for v, p in cancellation.forward.images.items()})
    bwd = RingMap(T, S, {ren.get(v, v): p.rename(ren, S.ring) for v, p in cancellation.backward.images.items()})
    return extend_certificate(verify_iso(fwd, bwd), rest, names=(S.name, T.name))


def cross_certificate(
    m: int,
    cancellation: IsoCertificate,
    frames: tuple[CotangentFrame, CotangentFrame] | None = None,
    trivializations: tuple[IsoCertificate, IsoCertificate] | None = None,
) -> IsoCertificate:
    """A verified isomorphism ``R_X^(m) ~ R_Y^(m)`` through ``X x A^(2m) ~ Y x A^(2m)``."""
    if trivializations is None:
        fx, fy = frames or default_frames()
        trivializations = (trivialize_jets(surface_x(), fx, m), trivialize_jets(surface_y(), fy, m))
    tx, ty = trivializations
    ext = extend_cancellation(cancellation, m)
    if ext.source.ring is not tx.source.ring:
        raise ValueError("cancellation extension does not match the trivialization variables")
    first = compose_certificates(tx.inverse(), ext)
    return compose_certificates(first, ty)


@dataclass
class SuiteResult:
    report: Report
    cross: dict[int, IsoCertificate]


def run_suite(
    m: int,
    cancellation_text_or_none: str | None = None,
    *,
    degree_bound: int = 4,
    origin: str = "<cancellation>",
) -> SuiteResult:
    """Smoothness, actions, frames, trivializations and (given a cancellation certificate) the cross isomorphism."""
    if not isinstance(m, int) or m < 1:
        raise ValueError("the Danielewski suite needs m >= 1")
    report = Report(f"danielewski --order {m}")
    X, Y = surface_x(), surface_y()
    cross: dict[int, IsoCertificate] = {}

    report.add("smooth danielewski-x", is_smooth(X))
    report.add("smooth danielewski-y", is_smooth(Y))
    for label, act in (("x", action_x()), ("y", action_y())):
        try:
            tr = verify_additive_action(act.source, act)
            report.add(f"additive action on danielewski-{label}", True, f"transcript {tr.digest()[:16]} ({len(tr)} identities)")
        except VerificationError as exc:
            report.add(f"additive action on danielewski-{label}", False, str(exc))

    frames = {}
    for V in (X, Y):
        try:
            F = search_frame(V, 2, degree_bound)
            tr = verify_frame(V, F)
            frames[V.name] = F
            report.add(f"frame {V.name}", True, f"transcript {tr.digest()[:16]} (max degree {F.max_degree()})")
        except Exception as exc:  # search exhausted or verification failure
            report.add(f"frame {V.name}", False, str(exc))
    if len(frames) < 2:
        return SuiteResult(report, cross)

    trivs: dict[tuple[str, int], IsoCertificate] = {}
    levels = [m - 1, m] if m >= 2 else [m]
    for V in (X, Y):
        for level in levels:
            try:
                c = trivialize_jets(V, frames[V.name], level)
                trivs[(V.name, level)] = c
                ok = all(c.forward.images[th].is_weight_homogeneous(th.weight) for th in c.source.variables if th.order)
                report.add(
                    f"trivialize {V.name}_{level} ~ {V.name} x A^{2 * level}", ok,
                    f"transcript {c.transcript.digest()[:16]} ({len(c.transcript)} identities)",
                )
            except Exception as exc:
                report.add(f"trivialize {V.name}_{level} ~ {V.name} x A^{2 * level}", False, str(exc))
        if m >= 2 and (V.name, m) in trivs and (V.name, m - 1) in trivs:
            try:
                tr = truncation_compatibility(V, frames[V.name], m, trivs[(V.name, m - 1)], trivs[(V.name, m)])
                report.add(f"truncation compatibility {V.name} levels {m - 1},{m}", True, f"transcript {tr.digest()[:16]}")
            except VerificationError as exc:
                report.add(f"truncation compatibility {V.name} levels {m - 1},{m}", False, str(exc))

    # induced isomorphisms of genuine base automorphisms descend
    for label, act in (("x", action_x()), ("y", action_y())):
        try:
            g = action_automorphism(act)
            gm = induced_jet_certificate(g, m)
            back = descend_equivariant_iso(gm)
            ok = all(back.forward.images[v] == g.forward.images[v].to_ring(back.target.ring) for v in g.source.variables)
            report.add(f"descent of induced automorphism of danielewski-{label}", ok)
        except Exception as exc:
            report.add(f"descent of induced automorphism of danielewski-{label}", False, str(exc))

    if cancellation_text_or_none is None:
        for name in ("cancellation certificate", f"cross isomorphism X_{m} ~ Y_{m}", "cross isomorphism is not graded"):
            report.skip(name, "skipped: no cancellation certificate")
        return SuiteResult(report, cross)

    try:
        canc = load_cancellation(cancellation_text_or_none, origin)
        report.add("cancellation certificate", True, f"transcript {canc.transcript.digest()[:16]}")
    except Exception as exc:
        report.add("cancellation certificate", False, str(exc))
        return SuiteResult(report, cross)

    for level in levels:
        try:
            c = cross_certificate(level, canc, trivializations=(trivs[(X.name, level)], trivs[(Y.name, level)]))
            cross[level] = c
        except Exception as exc:
            report.add(f"cross isomorphism X_{level} ~ Y_{level}", False, str(exc))
            return SuiteResult(report, cross)
    c = cross[m]
    report.add(f"cross isomorphism X_{m} ~ Y_{m}", True, f"transcript {c.transcript.digest()[:16]} ({len(c.transcript)} identities)")
    try:
        descend_equivariant_iso(c)
        report.add("cross isomorphism is not graded", False, "descent unexpectedly accepted the cross isomorphism")
    except VerificationError as exc:
        report.add("cross isomorphism is not graded", True, str(exc))
    if m >= 2:
        try:
            tr = cross_truncation_compatibility(cross[m - 1], cross[m], m)
            report.add(f"cross isomorphisms commute with truncation {m - 1},{m}", True, f"transcript {tr.digest()[:16]}")
        except VerificationError as exc:
            report.add(f"cross isomorphisms commute with truncation {m - 1},{m}", False, str(exc))
    return SuiteResult(report, cross)


def cross_truncation_compatibility(low: IsoCertificate, high: IsoCertificate, m: int):
    """forward_m . psi_X = psi_Y . forward_(m-1) and likewise backwards, modulo the ideals."""
    from .morphisms import Transcript

    psi_x = truncation_map(jet_equations(surface_x(), m), m - 1)
    psi_y = truncation_map(jet_equations(surface_y(), m), m - 1)
    t = Transcript()
    for v in low.source.variables:
        t.require(f"cross forward commutes at {v}", high.target, high.forward(psi_x.images[v]) - psi_y(low.forward.images[v]))
    for v in low.target.variables:
        t.require(f"cross backward commutes at {v}", high.source, high.backward(psi_y.images[v]) - psi_x(low.backward.images[v]))
    return t
