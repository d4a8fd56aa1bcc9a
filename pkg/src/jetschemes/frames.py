"""Cotangent frames and the constructive trivialization ``X_m ~ X x A^(mn)``.

A frame ``(A, B, C)`` for a smooth ``V`` of dimension n with N ambient
variables and r equations certifies that the forms
``w_k = sum_i A[k][i] dx_i`` are a free basis of the module of differentials:

* ``J B = 0``                (B sends the basis back into differentials)
* ``B A = I_N + C J``        (dx_i = sum_k B[i][k] w_k modulo the relations)
* ``A B = I_n``              (the w_k are independent)

all modulo the ideal, with ``J`` the r x N Jacobian matrix.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

from .groebner import determinant, jacobian
from .jets import JetPresentation, jacobian_pairing, jet_equations, truncation_map
from .linalg import solve
from .morphisms import (
    IsoCertificate,
    RingMap,
    Transcript,
    VerificationError,
    compose_certificates,
    extend_certificate,
    renaming_certificate,
    verify_iso,
)
from .polynomial import QQ, Polynomial, Ring, Variable
from .presentation import Presentation

log = logging.getLogger(__name__)

Matrix = list[list[Polynomial]]


class FrameSearchError(RuntimeError):
    """No frame exists within the requested degree bound."""


class CorrectionError(RuntimeError):
    """The lifting equation for the correction terms has no solution."""


@dataclass
class CotangentFrame:
    n: int
    A: Matrix  # n x N
    B: Matrix  # N x n
    C: Matrix  # N x r

    def max_degree(self) -> int:
        return max((p.degree() for M in (self.A, self.B, self.C) for row in M for p in row), default=0)


def _identity(ring: Ring, n: int) -> Matrix:
    return [[ring.one() if i == j else ring.zero() for j in range(n)] for i in range(n)]


def _matmul(X: Matrix, Y: Matrix, ring: Ring, inner: int) -> Matrix:
    rows = len(X)
    cols = len(Y[0]) if Y else 0
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = ring.zero()
            for k in range(inner):
                if X[i][k] and Y[k][j]:
                    acc = acc + X[i][k] * Y[k][j]
            row.append(acc)
        out.append(row)
    return out


def _shape_check(V: Presentation, F: CotangentFrame):
    N, r, n = len(V.variables), len(V.generators), F.n
    shapes = {"A": (F.A, n, N), "B": (F.B, N, n), "C": (F.C, N, r)}
    for label, (M, rows, cols) in shapes.items():
        if len(M) != rows or any(len(row) != cols for row in M):
            raise ValueError(f"frame matrix {label} must be {rows} x {cols}")
        for row in M:
            for p in row:
                if p.ring is not V.ring:
                    raise ValueError(f"frame matrix {label} has an entry outside {V.ring!r}")


def verify_frame(V: Presentation, F: CotangentFrame) -> Transcript:
    """Check the frame identities by normal forms modulo V's ideal."""
    _shape_check(V, F)
    ring = V.ring
    N, r, n = len(V.variables), len(V.generators), F.n
    J = jacobian(V.generators, V.variables)
    t = Transcript()
    JB = _matmul(J, F.B, ring, N)
    for a in range(r):
        for k in range(n):
            t.require(f"relation (a={a + 1}, k={k + 1}): sum_i df_a/dx_i b_ik = 0", V, JB[a][k])
    BA = _matmul(F.B, F.A, ring, n)
    CJ = _matmul(F.C, J, ring, r) if r else [[ring.zero()] * N for _ in range(N)]
    for i in range(N):
        for i2 in range(N):
            d = BA[i][i2] - CJ[i][i2] - (1 if i == i2 else 0)
            t.require(f"unimodularity (i={i + 1}, i'={i2 + 1}): (BA - I - CJ) = 0", V, d)
    AB = _matmul(F.A, F.B, ring, N)
    for k in range(n):
        for k2 in range(n):
            t.require(f"duality (k={k + 1}, k'={k2 + 1}): (AB - I) = 0", V, AB[k][k2] - (1 if k == k2 else 0))
    return t


def _monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """Exponents of total degree <= degree, by degree then grevlex."""
    out = []
    for d in range(degree + 1):
        level = [e for e in itertools.product(range(d + 1), repeat=nvars) if sum(e) == d]
        level.sort(key=lambda e: e[::-1])
        out.extend(level)
    return out


def _cofactor(M: Matrix, i: int, j: int, ring: Ring) -> Polynomial:
    minor = [row[:j] + row[j + 1:] for k, row in enumerate(M) if k != i]
    d = determinant(minor, ring)
    return d if (i + j) % 2 == 0 else -d


def _adjugate(M: Matrix, ring: Ring) -> Matrix:
    n = len(M)
    return [[_cofactor(M, j, i, ring) for j in range(n)] for i in range(n)]


def frame_from_forms(V: Presentation, A: Matrix) -> CotangentFrame | None:
    """Complete n rows of forms to a frame when det([A; J]) reduces to 1."""
    ring = V.ring
    J = jacobian(V.generators, V.variables)
    Q = [list(row) for row in A] + [list(row) for row in J]
    if V.normal_form(determinant(Q, ring) - 1):
        return None
    adj = _adjugate(Q, ring)
    n = len(A)
    nf = V.normal_form
    B = [[nf(adj[i][k]) for k in range(n)] for i in range(len(Q))]
    C = [[nf(-adj[i][n + a]) for a in range(len(J))] for i in range(len(Q))]
    A = [[nf(p) for p in row] for row in A]
    return CotangentFrame(n, A, B, C)


def search_frame(V: Presentation, n: int, degree_bound: int = 4, *, max_candidates: int = 20_000) -> CotangentFrame:
    """Bounded search for a frame with entries of degree <= degree_bound.

    For each degree d = 0, 1, ..., the first n-1 forms range over single
    monomial forms ``x^e dx_i`` and the last form is solved for linearly so
    that ``det([A; J])`` reduces to 1.  The first frame whose entries all
    have degree <= d and which passes ``verify_frame`` is returned.
    """
    ring = V.ring
    N, r = len(V.variables), len(V.generators)
    if n != N - r:
        log.warning("dimension %d is not N - r = %d; searching anyway", n, N - r)
    if n < 1:
        raise ValueError("frames need n >= 1")
    if V.groebner.is_unit():
        raise ValueError(f"{V.name} is empty (unit ideal)")
    J = jacobian(V.generators, V.variables)
    nf = V.normal_form
    for d in range(degree_bound + 1):
        monos = _monomials(N, d)
        mono_polys = [_mono(ring, e) for e in monos]
        pool = [(i, k) for k in range(len(monos)) for i in range(N)]
        tried = 0
        for fixed in itertools.combinations(pool, n - 1):
            tried += 1
            if tried > max_candidates:
                break
            rows = []
            for i, k in fixed:
                row = [ring.zero()] * N
                row[i] = mono_polys[k]
                rows.append(row)
            last = _solve_last_row(V, rows, J, mono_polys, nf)
            if last is None:
                continue
            frame = frame_from_forms(V, rows + [last])
            if frame is None or frame.max_degree() > d:
                continue
            try:
                verify_frame(V, frame)
            except VerificationError:
                continue
            log.info("frame for %s found at degree %d", V.name, d)
            return frame
    raise FrameSearchError(f"no frame for {V.name} with entries of degree <= {degree_bound}; raise the bound")


def _mono(ring: Ring, e: tuple[int, ...]) -> Polynomial:
    return Polynomial(ring, {e: QQ(1)})


def _solve_last_row(V, rows, J, mono_polys, nf) -> list[Polynomial] | None:
    """Solve det([rows; a; J]) = 1 mod I for the entries of a (linear in a)."""
    ring = V.ring
    N = len(V.variables)
    n1 = len(rows)
    placeholder = [ring.zero()] * N
    Q = [list(r) for r in rows] + [placeholder] + [list(r) for r in J]
    cofs = [_cofactor(Q, n1, i, ring) for i in range(N)]
    columns = []  # NF(mono * cof_i) for each unknown
    unknowns = []
    for k, mono in enumerate(mono_polys):
        for i in range(N):
            if cofs[i]:
                columns.append(nf(mono * cofs[i]))
                unknowns.append((i, k))
    target = nf(ring.one())
    keys = sorted({e for col in columns for e in col.terms} | set(target.terms))
    index = {e: j for j, e in enumerate(keys)}
    eq_rows = [dict() for _ in keys]
    for u, col in enumerate(columns):
        for e, c in col.terms.items():
            eq_rows[index[e]][u] = c
    rhs = [target.terms.get(e, QQ(0)) for e in keys]
    sol = solve(eq_rows, rhs, len(unknowns))
    if sol is None:
        return None
    a = [ring.zero() for _ in range(N)]
    for (i, k), c in zip(unknowns, sol):
        if c:
            a[i] = a[i] + mono_polys[k].scale(c)
    return a


# --- prolongation -----------------------------------------------------------

def theta_variables(n: int, level: int, prefix: str = "th") -> list[Variable]:
    return [Variable(f"{prefix}{k}", level) for k in range(1, n + 1)]


def _at_level_zero(p: Polynomial, V: Presentation, ring: Ring) -> Polynomial:
    return p.subs({v: ring.gen(v.at(0)) for v in V.variables}, ring)


def correction_terms(V: Presentation, F: CotangentFrame, Jm: JetPresentation, lower: Presentation) -> list[Polynomial]:
    """Weight-m corrections h solving sum_i df_a/dx_i(x#0) h_i + G_a = 0 modulo R^(m-1).

    With the frame identity B A = I + C J, h = C G solves the lifting
    equation whenever any solution exists.
    """
    m = Jm.level
    r = len(V.generators)
    G = []
    for a in range(r):
        Ga = Jm.stratum(a, m) - jacobian_pairing(V, a, Jm.ring, m)
        G.append(Ga.to_ring(lower.ring))
    Cl = [[_at_level_zero(c, V, lower.ring) for c in row] for row in F.C]
    h = []
    for i in range(len(V.variables)):
        acc = lower.ring.zero()
        for a in range(r):
            if Cl[i][a] and G[a]:
                acc = acc + Cl[i][a] * G[a]
        h.append(lower.normal_form(acc))
    Jl = [[_at_level_zero(V.generators[a].diff(v), V, lower.ring) for v in V.variables] for a in range(r)]
    for a in range(r):
        check = G[a] + sum((Jl[a][i] * h[i] for i in range(len(h))), lower.ring.zero())
        rem = lower.normal_form(check)
        if rem:
            raise CorrectionError(f"lifting equation {a + 1} at level {m} has remainder {rem}")
    return h


def build_prolongation_iso(
    V: Presentation, F: CotangentFrame, m: int, *, prefix: str = "th", verify: bool = True
) -> IsoCertificate:
    """Certificate for ``R^(m-1)[th#m] ~ R^(m)`` (forward: th -> A x#m)."""
    if m < 1:
        raise ValueError("prolongation needs m >= 1")
    Jm = jet_equations(V, m)
    lower_jets = jet_equations(V, m - 1)
    thetas = theta_variables(F.n, m, prefix)
    source = lower_jets.presentation.extend(thetas, f"{V.name}_{m - 1}*A{F.n}")
    target = Jm.presentation
    S, T = source.ring, target.ring

    fwd = {v: T.gen(v) for v in lower_jets.ring.variables}
    for k, th in enumerate(thetas):
        acc = T.zero()
        for i, v in enumerate(V.variables):
            if F.A[k][i]:
                acc = acc + _at_level_zero(F.A[k][i], V, T) * T.gen(v.at(m))
        fwd[th] = acc

    h = correction_terms(V, F, Jm, lower_jets.presentation)
    bwd = {v: S.gen(v) for v in lower_jets.ring.variables}
    for i, v in enumerate(V.variables):
        acc = h[i].to_ring(S)
        for k, th in enumerate(thetas):
            if F.B[i][k]:
                acc = acc + _at_level_zero(F.B[i][k], V, S) * S.gen(th)
        bwd[v.at(m)] = acc

    forward, backward = RingMap(source, target, fwd), RingMap(target, source, bwd)
    if verify:
        return verify_iso(forward, backward)
    return IsoCertificate(forward, backward, Transcript())


def product_name(V: Presentation, count: int) -> str:
    return f"{V.name}*A{count}"


def trivialize_jets(V: Presentation, F: CotangentFrame, m: int, *, prefix: str = "th", verify: bool = True) -> IsoCertificate:
    """Certificate for ``V[th#1..th#m] ~ R^(m)`` composed from the level-by-level prolongations."""
    if m < 1:
        raise ValueError("trivialization needs m >= 1")
    cert = build_prolongation_iso(V, F, m, prefix=prefix, verify=verify)
    upper: list[Variable] = theta_variables(F.n, m, prefix)
    for j in range(m - 1, 0, -1):
        step = build_prolongation_iso(V, F, j, prefix=prefix, verify=verify)
        step = extend_certificate(step, upper, verify=False, names=(f"{V.name}_{j - 1}*A{F.n * (m - j + 1)}", cert.source.name))
        cert = compose_certificates(step, cert, verify=False)
        upper = theta_variables(F.n, j, prefix) + upper
    # R^(0)[th] ~ V[th]: rename x#0 back to x
    base_jets = cert.source
    plain = {v.at(0): v for v in V.variables}
    ren = renaming_certificate(base_jets, plain, product_name(V, F.n * m)).inverse()
    return compose_certificates(ren, cert, verify=verify)


def truncation_compatibility(V: Presentation, F: CotangentFrame, m: int, low: IsoCertificate | None = None,
                             high: IsoCertificate | None = None, prefix: str = "th") -> Transcript:
    """Check that the level-m and level-(m-1) trivializations commute with truncation.

    backward_m restricted to R^(m-1) must equal backward_(m-1) followed by the
    inclusion of free variables, and forward_m restricted to V[th#1..th#(m-1)]
    must equal forward_(m-1) followed by the truncation inclusion.
    """
    if m < 2:
        raise ValueError("compatibility needs m >= 2")
    high = high or trivialize_jets(V, F, m, prefix=prefix)
    low = low or trivialize_jets(V, F, m - 1, prefix=prefix)
    psi = truncation_map(jet_equations(V, m), m - 1)
    t = Transcript()
    big = high.source
    for v in psi.source.variables:
        lhs = high.backward(psi.images[v])
        rhs = low.backward.images[v].to_ring(big.ring)
        t.require(f"backward_{m}(psi({v})) = backward_{m - 1}({v})", big, lhs - rhs)
    for w in low.source.variables:
        lhs = high.forward.images[w]
        rhs = psi(low.forward.images[w])
        t.require(f"forward_{m}({w}) = psi(forward_{m - 1}({w}))", high.target, lhs - rhs)
    return t
