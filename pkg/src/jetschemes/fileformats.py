"""Line-oriented text formats for varieties, maps, frames and certificates.

Variety::

    ring x y z
    ideal
    x*z - y^2 + 1
    end

Map::

    map <source-name> <target-name>
    x -> x
    y -> y + x*t
    end

Certificate: a ``forward`` line followed by a map block, then a
``backward`` line followed by a map block.

Frame (entries separated by commas, one matrix row per line)::

    frame n=2
    A:
    1, 0, 0
    0, -z, 1/2*y
    B:
    ...
    C:
    ...
    end

Lines whose first non-blank character is ``#`` are comments.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterator

from .frames import CotangentFrame
from .morphisms import IsoCertificate, RingMap
from .parser import ParseError
from .polynomial import Ring, Variable
from .presentation import Presentation


class FormatError(ValueError):
    """Malformed input file."""

    def __init__(self, message: str, line: int | None = None, source: str = "<input>"):
        self.line = line
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)


def _lines(text: str) -> Iterator[tuple[int, str]]:
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        yield no, s


class _Cursor:
    def __init__(self, text: str, source: str):
        self.items = list(_lines(text))
        self.i = 0
        self.source = source

    def peek(self) -> tuple[int, str] | None:
        return self.items[self.i] if self.i < len(self.items) else None

    def next(self, what: str) -> tuple[int, str]:
        item = self.peek()
        if item is None:
            last = self.items[-1][0] if self.items else None
            raise FormatError(f"unexpected end of input, expected {what}", last, self.source)
        self.i += 1
        return item

    def fail(self, message: str, line: int):
        raise FormatError(message, line, self.source)

    def parse(self, text: str, ring: Ring, line: int):
        try:
            return ring(text)
        except ParseError as exc:
            self.fail(str(exc), line)


# --- varieties -----------------------------------------------------------------

def parse_variety(text: str, name: str = "V", source: str = "<input>") -> Presentation:
    cur = _Cursor(text, source)
    no, head = cur.next("'ring' line")
    words = head.split()
    if not words or words[0] != "ring":
        cur.fail("first line must start with 'ring'", no)
    try:
        ring = Ring(words[1:])
    except ValueError as exc:
        cur.fail(str(exc), no)
    for v in ring.variables:
        if not v.name.isidentifier() or not v.name[0].isalpha():
            cur.fail(f"bad variable name {v}", no)
    no, line = cur.next("'ideal'")
    if line != "ideal":
        cur.fail("second line must be 'ideal'", no)
    gens = []
    while True:
        no, line = cur.next("'end'")
        if line == "end":
            break
        p = cur.parse(line, ring, no)
        if p.is_zero():
            cur.fail("generators must be nonzero", no)
        gens.append(p)
    extra = cur.peek()
    if extra is not None:
        cur.fail("content after 'end'", extra[0])
    return Presentation(name, ring, tuple(gens))


def format_variety(P: Presentation) -> str:
    out = [f"# {P.name}", "ring " + " ".join(map(str, P.variables)), "ideal"]
    out += [str(g) for g in P.generators]
    out.append("end")
    return "\n".join(out) + "\n"


def load_variety(spec: str, **kw) -> Presentation:
    """A file path, or ``@name`` for a built-in variety."""
    if spec.startswith("@"):
        from .danielewski import lookup

        return lookup(spec)
    path = Path(spec)
    return parse_variety(path.read_text(), path.stem, str(path))


# --- maps and certificates ----------------------------------------------------------

def _parse_map_block(cur: _Cursor, source: Presentation, target: Presentation) -> RingMap:
    no, head = cur.next("'map' header")
    words = head.split()
    if len(words) != 3 or words[0] != "map":
        cur.fail("map header must be 'map <source> <target>'", no)
    if words[1] != source.name or words[2] != target.name:
        cur.fail(f"map runs {words[1]} -> {words[2]}, expected {source.name} -> {target.name}", no)
    images = {}
    while True:
        no, line = cur.next("'end'")
        if line == "end":
            break
        lhs, arrow, rhs = line.partition("->")
        if not arrow:
            cur.fail("expected 'var -> expression'", no)
        try:
            var = Variable.parse(lhs.strip())
        except ValueError:
            cur.fail(f"bad variable {lhs.strip()!r}", no)
        if var not in source.ring:
            cur.fail(f"{var} is not a variable of {source.name}", no)
        if var in images:
            cur.fail(f"duplicate image for {var}", no)
        images[var] = cur.parse(rhs.strip(), target.ring, no)
    try:
        return RingMap(source, target, images)
    except ValueError as exc:
        cur.fail(str(exc), no)


def parse_map(text: str, source: Presentation, target: Presentation, origin: str = "<input>") -> RingMap:
    cur = _Cursor(text, origin)
    phi = _parse_map_block(cur, source, target)
    if cur.peek() is not None:
        cur.fail("content after 'end'", cur.peek()[0])
    return phi


def format_map(phi: RingMap) -> str:
    out = [f"map {phi.source.name} {phi.target.name}"]
    out += [f"{v} -> {p}" for v, p in phi.images.items()]
    out.append("end")
    return "\n".join(out) + "\n"


def parse_certificate(
    text: str, source: Presentation, target: Presentation, origin: str = "<input>"
) -> tuple[RingMap, RingMap]:
    """The raw (forward, backward) maps; verification is left to the caller."""
    cur = _Cursor(text, origin)
    no, tag = cur.next("'forward'")
    if tag != "forward":
        cur.fail("certificate must start with 'forward'", no)
    fwd = _parse_map_block(cur, source, target)
    no, tag = cur.next("'backward'")
    if tag != "backward":
        cur.fail("expected 'backward'", no)
    bwd = _parse_map_block(cur, target, source)
    if cur.peek() is not None:
        cur.fail("content after the backward map", cur.peek()[0])
    return fwd, bwd


def format_certificate(c: IsoCertificate) -> str:
    return "forward\n" + format_map(c.forward) + "backward\n" + format_map(c.backward)


# --- frames ---------------------------------------------------------------------------

def parse_frame(text: str, V: Presentation, origin: str = "<input>") -> CotangentFrame:
    cur = _Cursor(text, origin)
    no, head = cur.next("'frame n=<n>'")
    words = head.split()
    if len(words) != 2 or words[0] != "frame" or not words[1].startswith("n="):
        cur.fail("header must be 'frame n=<n>'", no)
    try:
        n = int(words[1][2:])
    except ValueError:
        cur.fail("bad frame dimension", no)
    N, r = len(V.variables), len(V.generators)
    blocks: dict[str, list] = {}
    expected = {"A": (n, N), "B": (N, n), "C": (N, r)}
    current = None
    while True:
        no, line = cur.next("'end'")
        if line == "end":
            break
        if line.endswith(":") and line[:-1] in expected:
            current = line[:-1]
            if current in blocks:
                cur.fail(f"duplicate block {current}", no)
            blocks[current] = []
            continue
        if current is None:
            cur.fail("matrix row outside a block", no)
        cells = [c.strip() for c in line.split(",")] if line != "-" else []
        blocks[current].append([cur.parse(c, V.ring, no) for c in cells])
    for label, (rows, cols) in expected.items():
        M = blocks.get(label, [])
        if cols == 0:
            M = M or [[] for _ in range(rows)]
            blocks[label] = M
        if len(M) != rows or any(len(row) != cols for row in M):
            raise FormatError(f"block {label} must be {rows} x {cols}", None, origin)
    return CotangentFrame(n, blocks["A"], blocks["B"], blocks["C"])


def format_frame(F: CotangentFrame) -> str:
    out = [f"frame n={F.n}"]
    for label, M in (("A", F.A), ("B", F.B), ("C", F.C)):
        out.append(f"{label}:")
        for row in M:
            out.append(", ".join(map(str, row)) if row else "-")
    out.append("end")
    return "\n".join(out) + "\n"
