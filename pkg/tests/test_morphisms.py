import pytest
from hypothesis import given, strategies as st

from jetschemes.corpus import builtin
from jetschemes.danielewski import action_automorphism, action_x, action_y, surface_x, surface_y
from jetschemes.jets import jet_equations
from jetschemes.morphisms import (
    RingMap,
    VerificationError,
    compose_certificates,
    descend_equivariant_iso,
    extend_certificate,
    identity_certificate,
    identity_map,
    induced_jet_certificate,
    induced_jet_map,
    product_with_affine_space,
    renaming_certificate,
    verify_additive_action,
    verify_iso,
    verify_ring_map,
)
from jetschemes.polynomial import Variable
from jetschemes.presentation import Presentation, affine_space

X = surface_x()
A2 = affine_space(2)


def linear_change():
    fwd = RingMap(A2, A2, {"x1": "x1 + 2*x2", "x2": "x2 - 1"})
    bwd = RingMap(A2, A2, {"x1": "x1 - 2*x2 - 2", "x2": "x2 + 1"})
    return verify_iso(fwd, bwd)


def test_ring_map_examples():
    assert verify_ring_map(identity_map(X)).ok
    act = action_x()
    tr = verify_ring_map(act)
    assert tr.ok
    shift = RingMap(X, X, {"x": "x", "y": "y", "z": "z + 1"})
    with pytest.raises(VerificationError) as info:
        verify_ring_map(shift)
    assert info.value.remainder == X.ring("x")


def test_ring_map_requires_all_images():
    with pytest.raises(ValueError):
        RingMap(X, X, {"x": "x", "y": "y"})
    with pytest.raises(ValueError):
        RingMap(X, X, {"x": "x", "y": "y", "z": "z", "w": "x"})


def test_iso_examples():
    c = identity_certificate(X)
    assert c.transcript.ok and len(c.transcript) == 2 + 6
    lin = linear_change()
    assert lin.reverify().transcript.digest() == lin.transcript.digest()
    XU = X.extend([Variable("u")], "X-u")
    ren = renaming_certificate(XU, {Variable("u"): Variable("w")}, "X-w")
    assert [str(v) for v in ren.target.variables] == ["x", "y", "z", "w"]


def test_non_inverse_maps_are_rejected():
    fwd = RingMap(A2, A2, {"x1": "x1 + x2", "x2": "x2"})
    with pytest.raises(VerificationError):
        verify_iso(fwd, fwd)
    # a map to a point is not an isomorphism
    squash = RingMap(X, X, {"x": 1, "y": 0, "z": 1})
    with pytest.raises(VerificationError):
        verify_iso(squash, identity_map(X))


def test_product_with_affine_space():
    assert product_with_affine_space(X, 0) is X
    P = product_with_affine_space(X, 2)
    assert len(P.variables) == 5 and len(P.generators) == 1
    point = Presentation.from_strings("point", [], [])
    assert len(product_with_affine_space(point, 3).variables) == 3
    with pytest.raises(ValueError):
        product_with_affine_space(A2, 1, prefix="x")


def test_composition():
    lin = linear_change()
    ident = identity_certificate(A2)
    c = compose_certificates(lin, ident)
    assert c.forward.images == lin.forward.images and c.backward.images == lin.backward.images
    back = compose_certificates(lin, lin.inverse())
    for v in A2.variables:
        assert back.forward.images[v] == A2.ring.gen(v)
    with pytest.raises(ValueError):
        compose_certificates(lin, identity_certificate(X))


def test_extension_by_free_variables():
    lin = linear_change()
    extra = [Variable("s1"), Variable("s2")]
    ext = extend_certificate(lin, extra)
    assert ext.forward.images[extra[1]] == ext.target.ring.gen(extra[1])
    assert len(ext.source.variables) == 4


def test_descent_recovers_base_isomorphism():
    g = action_automorphism(action_x())
    for m in (1, 2):
        back = descend_equivariant_iso(induced_jet_certificate(g, m))
        for v in X.variables:
            assert back.forward.images[v] == g.forward.images[v]
            assert back.backward.images[v] == g.backward.images[v]
    ident = descend_equivariant_iso(identity_certificate(jet_equations(X, 2).presentation))
    assert all(ident.forward.images[v] == X.ring.gen(v) for v in X.variables)


def test_descent_rejects_non_graded_iso():
    J = jet_equations(A2, 1).presentation
    shear = verify_iso(
        RingMap(J, J, {"x1#0": "x1#0 + x1#1", "x2#0": "x2#0", "x1#1": "x1#1", "x2#1": "x2#1"}),
        RingMap(J, J, {"x1#0": "x1#0 - x1#1", "x2#0": "x2#0", "x1#1": "x1#1", "x2#1": "x2#1"}),
    )
    assert not shear.is_weight_preserving()
    with pytest.raises(VerificationError, match="x1#0"):
        descend_equivariant_iso(shear)


def test_induced_map_is_coefficient_extraction():
    P = builtin("parabola")
    g = RingMap(A2, P, {"x1": "x", "x2": "y"})
    phi = induced_jet_map(RingMap(P, A2, {"x": "x1", "y": "x1^2"}), 2)
    R = phi.target.ring
    assert phi.images[Variable("y", 2)] == R("2*x1#0*x1#2 + x1#1^2")
    assert g.images[Variable("x1")] == P.ring("x")


def test_additive_actions():
    tr = verify_additive_action(X, action_x())
    assert tr.ok
    exact = [i for i in tr.identities if i.label.startswith("action preserves")]
    assert exact and all(i.ideal == "exact" for i in exact)
    assert verify_additive_action(surface_y(), action_y()).ok


def test_broken_action_fails_composition_law():
    with pytest.raises(VerificationError) as info:
        verify_additive_action(X, action_x(broken=True))
    assert "composition law" in info.value.laws


@given(st.integers(-4, 4), st.integers(-4, 4))
def test_action_flows_compose(s, t):
    act = action_x()
    gs, gt, gst = (action_automorphism(act, k) for k in (s, t, s + t))
    composite = compose_certificates(gs, gt, verify=False, reduce=False)
    for v in X.variables:
        assert X.normal_form(composite.forward.images[v] - gst.forward.images[v]).is_zero()
