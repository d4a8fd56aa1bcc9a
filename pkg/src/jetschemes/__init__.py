"""Jet schemes of affine varieties with exact, certificate-producing verification."""

from .corpus import builtin, corpus
from .frames import CotangentFrame, search_frame, trivialize_jets, verify_frame
from .groebner import GroebnerBasis, MonomialOrder, buchberger, ideal_equal, is_smooth
from .jets import check_grading, fiber_over_zero_section, jet_equations, truncation_map
from .morphisms import (
    IsoCertificate,
    RingMap,
    VerificationError,
    compose_certificates,
    descend_equivariant_iso,
    verify_iso,
)
from .parser import ParseError, parse
from .polynomial import Polynomial, Ring, Variable
from .presentation import Presentation, affine_space

__all__ = [
    "CotangentFrame", "GroebnerBasis", "IsoCertificate", "MonomialOrder", "ParseError", "Polynomial",
    "Presentation", "Ring", "RingMap", "Variable", "VerificationError", "affine_space", "buchberger",
    "builtin", "check_grading", "compose_certificates", "corpus", "descend_equivariant_iso",
    "fiber_over_zero_section", "ideal_equal", "is_smooth", "jet_equations", "parse", "search_frame",
    "trivialize_jets", "truncation_map", "verify_frame", "verify_iso",
]
