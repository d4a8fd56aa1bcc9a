import pytest
from hypothesis import given

from conftest import polynomials
from jetschemes.corpus import CORPUS_NAMES, builtin
from jetschemes.danielewski import cancellation_text, load_cancellation, lookup, times_line
from jetschemes.fileformats import (
    FormatError,
    format_certificate,
    format_frame,
    format_map,
    format_variety,
    load_variety,
    parse_certificate,
    parse_frame,
    parse_map,
    parse_variety,
)
from jetschemes.frames import search_frame
from jetschemes.jets import jet_equations
from jetschemes.morphisms import identity_certificate
from jetschemes.presentation import Presentation

X = builtin("danielewski-x")


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_variety_round_trip(name):
    V = builtin(name)
    again = parse_variety(format_variety(V), V.name)
    assert again == V


def test_jet_presentation_round_trip():
    J = jet_equations(X, 2).presentation
    again = parse_variety(format_variety(J), J.name)
    assert again.ring is J.ring and again.generators == J.generators


@given(polynomials())
def test_single_generator_round_trip(p):
    if p.is_zero():
        return
    V = Presentation("V", p.ring, (p,))
    assert parse_variety(format_variety(V), "V") == V


@pytest.mark.parametrize(
    "text,where",
    [
        ("", None),
        ("ring x y\nideal\nx +\nend\n", 3),
        ("ring x y\nx - y\nend\n", 2),
        ("ring x y\nideal\nx - y\n", 3),
        ("ring x x\nideal\nend\n", 1),
        ("ideal\nend\n", 1),
        ("ring x y\nideal\nw\nend\n", 3),
        ("ring x y\nideal\n0\nend\n", 3),
        ("ring x y\nideal\nx\nend\nx\n", 5),
    ],
)
def test_malformed_varieties(text, where):
    with pytest.raises(FormatError) as info:
        parse_variety(text, source="bad.var")
    if where is not None:
        assert info.value.line == where
    assert "bad.var" in str(info.value)


def test_comments_and_blank_lines():
    text = "# the surface\n\nring x y z\nideal\n  x*z - y^2 + 1  # not a comment marker here\nend\n"
    with pytest.raises(FormatError):
        parse_variety(text)
    ok = "# the surface\n\nring x y z\nideal\n# generator\nx*z - y^2 + 1\nend\n"
    assert parse_variety(ok, "danielewski-x") == X


def test_load_variety(tmp_path):
    path = tmp_path / "surface.var"
    path.write_text(format_variety(X))
    V = load_variety(str(path))
    assert V.name == "surface" and V.generators == X.generators
    assert load_variety("@danielewski-x") == X
    assert len(lookup("@danielewski-y-A1").variables) == 4
    with pytest.raises(KeyError):
        load_variety("@nonexistent")


def test_map_round_trip_and_errors():
    c = identity_certificate(X)
    text = format_map(c.forward)
    assert parse_map(text, X, X).images == c.forward.images
    with pytest.raises(FormatError, match="expected"):
        parse_map(text.replace("danielewski-x danielewski-x", "a b"), X, X)
    with pytest.raises(FormatError, match="duplicate"):
        parse_map(text.replace("end", "x -> y\nend"), X, X)
    with pytest.raises(FormatError, match="no image"):
        parse_map("map danielewski-x danielewski-x\nx -> x\nend\n", X, X)
    with pytest.raises(FormatError):
        parse_map("map danielewski-x danielewski-x\nx = x\nend\n", X, X)


def test_certificate_round_trip():
    c = load_cancellation()
    S, T = times_line(X), times_line(builtin("danielewski-y"))
    fwd, bwd = parse_certificate(format_certificate(c), S, T)
    assert fwd.images == c.forward.images and bwd.images == c.backward.images
    with pytest.raises(FormatError, match="backward"):
        parse_certificate(cancellation_text().replace("backward", "reverse"), S, T)


@pytest.mark.parametrize("name", ["parabola", "circle", "danielewski-x", "danielewski-y"])
def test_frame_round_trip(name):
    V = builtin(name)
    F = search_frame(V, len(V.variables) - 1)
    G = parse_frame(format_frame(F), V)
    assert (G.n, G.A, G.B, G.C) == (F.n, F.A, F.B, F.C)


def test_frame_shape_errors():
    V = builtin("parabola")
    with pytest.raises(FormatError, match="block B"):
        parse_frame("frame n=1\nA:\n1, 0\nB:\n1\nC:\n0\n-1\nend\n", V)
    with pytest.raises(FormatError):
        parse_frame("frame 1\nend\n", V)
    with pytest.raises(FormatError, match="outside"):
        parse_frame("frame n=1\n1, 0\nend\n", V)
