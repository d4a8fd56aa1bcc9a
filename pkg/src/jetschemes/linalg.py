"""Exact sparse linear solving over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .polynomial import QQ


def solve(rows: Sequence[Mapping[int, Fraction]], rhs: Sequence[Fraction], ncols: int) -> list[Fraction] | None:
    """One solution of ``rows . u = rhs``, or None if the system is inconsistent.

    Each row maps column index to coefficient.  Pivots are taken at the
    smallest available column, and free unknowns are set to zero, so the
    solution prefers low-index unknowns.
    """
    pivots: dict[int, tuple[dict[int, Fraction], Fraction]] = {}
    for row, b in zip(rows, rhs):
        r = {c: QQ(v) for c, v in row.items() if v}
        b = QQ(b)
        # eliminate existing pivot columns, smallest first
        while True:
            hit = [c for c in r if c in pivots]
            if not hit:
                break
            c = min(hit)
            prow, pb = pivots[c]
            f = r[c]
            for k, v in prow.items():
                nv = r.get(k, 0) - f * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
            b -= f * pb
        if not r:
            if b:
                return None
            continue
        c = min(r)
        inv = 1 / r[c]
        r = {k: v * inv for k, v in r.items()}
        b *= inv
        # keep existing pivot rows reduced against the new pivot
        for pc, (prow, pb) in list(pivots.items()):
            f = prow.get(c)
            if f:
                for k, v in r.items():
                    nv = prow.get(k, 0) - f * v
                    if nv:
                        prow[k] = nv
                    else:
                        prow.pop(k, None)
                pivots[pc] = (prow, pb - f * b)
        pivots[c] = (r, b)
    u = [QQ(0)] * ncols
    for c, (_, b) in pivots.items():
        u[c] = b
    return u
