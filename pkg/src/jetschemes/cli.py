"""Command-line interface: ``jetschemes <command> [options]``.

Exit status: 0 when every check passes, 1 on a mathematical failure,
2 on bad input (unreadable or malformed files, invalid options).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import danielewski
from .fileformats import (
    FormatError,
    format_certificate,
    format_frame,
    format_variety,
    load_variety,
    parse_certificate,
    parse_frame,
)
from .frames import FrameSearchError, CorrectionError, search_frame, trivialize_jets, verify_frame
from .groebner import GroebnerLimitExceeded, is_smooth
from .jets import check_grading, fiber_over_zero_section, jet_equations
from .morphisms import VerificationError, descend_equivariant_iso, verify_iso
from .parser import ParseError
from .presentation import Presentation
from .report import Report

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
BUNDLED = "@cancellation"


class InputError(Exception):
    """Invalid user input; maps to exit status 2."""


# --- helpers ---------------------------------------------------------------------

def _variety(args, spec: str | None = None) -> Presentation:
    spec = spec or args.variety
    if not spec:
        raise InputError("--variety is required")
    try:
        V = load_variety(spec)
    except KeyError as exc:
        raise InputError(exc.args[0]) from None
    except OSError as exc:
        raise InputError(f"cannot read {spec}: {exc.strerror or exc}") from None
    if args.max_pairs is not None:
        V = V.with_limits(max_pairs=args.max_pairs)
    return V


def _order(args, minimum: int = 0) -> int:
    if args.order is None:
        raise InputError("--order is required")
    if args.order < minimum:
        raise InputError(f"--order must be >= {minimum}")
    return args.order


def _read(path: str | None, what: str) -> str:
    if not path:
        raise InputError(f"{what} is required")
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None


def _codim(args, V: Presentation) -> int:
    if args.codim is not None:
        return args.codim
    if len(V.generators) <= 1:
        return len(V.generators)
    raise InputError(f"{V.name} has {len(V.generators)} generators; pass --codim explicitly")


def _write(path: str | None, text: str, report: Report, what: str) -> None:
    if path:
        Path(path).write_text(text)
        report.note(what, path)


def _frame(args, V: Presentation, report: Report):
    if args.frame:
        F = parse_frame(_read(args.frame, "--frame"), V, args.frame)
        tr = verify_frame(V, F)
        report.add(f"frame {V.name}", True, f"transcript {tr.digest()[:16]}")
        return F
    codim = args.codim if args.codim is not None else len(V.generators)
    n = len(V.variables) - codim
    F = search_frame(V, n, args.degree_bound)
    report.add(f"frame {V.name} (searched, degree <= {args.degree_bound})", True, f"max degree {F.max_degree()}")
    return F


def _pair(args) -> tuple[Presentation, Presentation]:
    S, T = _variety(args), _variety(args, args.target)
    if args.order is not None:
        m = _order(args)
        S, T = jet_equations(S, m).presentation, jet_equations(T, m).presentation
    return S, T


# --- commands --------------------------------------------------------------------

def cmd_compute(args) -> Report:
    V = _variety(args)
    m = _order(args)
    J = jet_equations(V, m)
    report = Report(f"compute {V.name} --order {m}")
    report.note("variables", len(J.ring.variables))
    report.note("generators", len(J.generators))
    grading = check_grading(J)
    report.add("strata weight-homogeneous and stratified", grading.ok, "\n".join(grading.violations))
    _write(args.out, format_variety(J.presentation), report, "written")
    if not args.out:
        report.note("presentation", "\n" + format_variety(J.presentation).rstrip())
    return report


def cmd_grading(args) -> Report:
    V = _variety(args)
    m = _order(args)
    g = check_grading(jet_equations(V, m))
    report = Report(f"grading {V.name} --order {m}")
    report.note("strata checked", g.checked)
    report.add("weight homogeneity, stratification and scaling", g.ok, "\n".join(g.violations))
    return report


def cmd_fiber(args) -> Report:
    V = _variety(args)
    m = _order(args, 1)
    fib = fiber_over_zero_section(V, m)
    report = Report(f"fiber {V.name} --order {m}")
    for a, p in enumerate(fib.pairings):
        report.note(f"pairing {a + 1}", p)
    report.add("strata 1..m-1 vanish and stratum m is the Jacobian pairing", fib.ok, "\n".join(fib.failures))
    return report


def cmd_smooth(args) -> Report:
    V = _variety(args)
    codim = _codim(args, V)
    report = Report(f"smooth {V.name}")
    report.note("codim", codim)
    report.add(f"Jacobian criterion for {V.name}", is_smooth(V, codim, **V.groebner_limits),
               "generators and maximal minors do not generate the unit ideal")
    return report


def cmd_frame_check(args) -> Report:
    V = _variety(args)
    F = parse_frame(_read(args.frame, "--frame"), V, args.frame)
    report = Report(f"frame-check {V.name}")
    try:
        tr = verify_frame(V, F)
        report.add("frame identities", True, f"transcript {tr.digest()[:16]} ({len(tr)} identities)")
    except VerificationError as exc:
        report.add("frame identities", False, str(exc))
    return report


def cmd_search_frame(args) -> Report:
    V = _variety(args)
    report = Report(f"search-frame {V.name} --degree-bound {args.degree_bound}")
    try:
        F = _frame(args, V, report)
    except FrameSearchError as exc:
        report.add(f"frame {V.name}", False, str(exc))
        return report
    text = format_frame(F)
    _write(args.out, text, report, "written")
    if not args.out:
        report.note("frame", "\n" + text.rstrip())
    return report


def cmd_trivialize(args) -> Report:
    V = _variety(args)
    m = _order(args, 1)
    report = Report(f"trivialize {V.name} --order {m}")
    codim = _codim(args, V)
    if not report.add(f"smooth {V.name}", is_smooth(V, codim, **V.groebner_limits)):
        return report
    try:
        F = _frame(args, V, report)
    except (FrameSearchError, VerificationError) as exc:
        report.add(f"frame {V.name}", False, str(exc))
        return report
    try:
        c = trivialize_jets(V, F, m)
    except (VerificationError, CorrectionError) as exc:
        report.add(f"{V.name}_{m} ~ {V.name} x A^{F.n * m}", False, str(exc))
        return report
    report.add(f"{V.name}_{m} ~ {V.name} x A^{F.n * m}", True,
               f"transcript {c.transcript.digest()[:16]} ({len(c.transcript)} identities)")
    _write(args.out, format_certificate(c), report, "certificate")
    return report


def _certificate(args, S: Presentation, T: Presentation):
    fwd, bwd = parse_certificate(_read(args.cert, "--cert"), S, T, args.cert)
    return verify_iso(fwd, bwd)


def cmd_iso_verify(args) -> Report:
    S, T = _pair(args)
    report = Report(f"iso-verify {S.name} {T.name}")
    try:
        c = _certificate(args, S, T)
        report.add(f"{S.name} ~ {T.name}", True, f"transcript {c.transcript.digest()[:16]} ({len(c.transcript)} identities)")
    except VerificationError as exc:
        report.add(f"{S.name} ~ {T.name}", False, str(exc))
    return report


def cmd_descend(args) -> Report:
    _order(args)
    S, T = _pair(args)
    report = Report(f"descend {S.name} {T.name}")
    try:
        c = _certificate(args, S, T)
    except VerificationError as exc:
        report.add(f"{S.name} ~ {T.name}", False, str(exc))
        return report
    report.add(f"{S.name} ~ {T.name}", True, f"transcript {c.transcript.digest()[:16]}")
    try:
        base = descend_equivariant_iso(c)
    except VerificationError as exc:
        report.add("grading-preserving descent", False, str(exc))
        return report
    report.add("grading-preserving descent", True, f"transcript {base.transcript.digest()[:16]}")
    _write(args.out, format_certificate(base), report, "certificate")
    return report


def cmd_danielewski(args) -> Report:
    m = _order(args, 1)
    text, origin = None, None
    if args.cert == BUNDLED:
        text, origin = danielewski.cancellation_text(), "cancellation_xy.cert"
    elif args.cert:
        text, origin = _read(args.cert, "--cert"), args.cert
    result = danielewski.run_suite(m, text, degree_bound=args.degree_bound, origin=origin or "<cancellation>")
    if m in result.cross:
        _write(args.out, format_certificate(result.cross[m]), result.report, "certificate")
    return result.report


COMMANDS = {
    "compute": (cmd_compute, "write the m-jet presentation of a variety"),
    "grading": (cmd_grading, "check weight homogeneity and the scaling identity of the strata"),
    "fiber": (cmd_fiber, "check the fiber over the zero section"),
    "smooth": (cmd_smooth, "Jacobian smoothness criterion"),
    "frame-check": (cmd_frame_check, "verify a cotangent frame file"),
    "search-frame": (cmd_search_frame, "search for a cotangent frame"),
    "trivialize": (cmd_trivialize, "certify X_m ~ X x A^(mn)"),
    "iso-verify": (cmd_iso_verify, "verify an isomorphism certificate"),
    "descend": (cmd_descend, "restrict a grading-preserving jet isomorphism to the base"),
    "danielewski": (cmd_danielewski, "run the Danielewski surface suite"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--variety", help="variety file or @name of a built-in variety")
    common.add_argument("--target", help="second variety (iso-verify, descend)")
    common.add_argument("--order", type=int, help="jet order m")
    common.add_argument("--frame", help="cotangent frame file")
    common.add_argument("--cert", help=f"certificate file ({BUNDLED} for the bundled cancellation certificate)")
    common.add_argument("--out", help="output file")
    common.add_argument("--degree-bound", type=int, default=4, help="frame search degree bound (default 4)")
    common.add_argument("--codim", type=int, help="codimension for the Jacobian criterion")
    common.add_argument("--max-pairs", type=int, help="Groebner critical pair guard")
    common.add_argument("--porcelain", action="store_true", help="key=value output")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    parser = argparse.ArgumentParser(prog="jetschemes", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(name)s: %(message)s")
    func = COMMANDS[args.command][0]
    try:
        report = func(args)
    except (InputError, FormatError, ParseError) as exc:
        print(f"jetschemes {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:  # invalid parameters rejected by the library
        print(f"jetschemes {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except VerificationError as exc:
        print(f"jetschemes {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except GroebnerLimitExceeded as exc:
        print(f"jetschemes {args.command}: {exc}; raise --max-pairs", file=sys.stderr)
        return EXIT_FAIL
    sys.stdout.write(report.render(args.porcelain))
    return EXIT_OK if report.ok else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
