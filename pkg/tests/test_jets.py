import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from oracles import series_strata, series_values, to_sympy
from jetschemes.corpus import CORPUS_NAMES, builtin
from jetschemes.jets import (
    check_grading,
    evaluate_on_jet,
    fiber_over_zero_section,
    jacobian_pairing,
    jet_equations,
    projection,
    scaling_defect,
    truncation_map,
    zero_section,
)

from jetschemes.presentation import Presentation, affine_space

X = builtin("danielewski-x")


def test_affine_space_has_free_jets():
    for n in (1, 3):
        for m in (0, 2, 5):
            J = jet_equations(affine_space(n), m)
            assert len(J.ring.variables) == n * (m + 1)
            assert J.generators == ()


def test_danielewski_strata_levels_one_and_two():
    J = jet_equations(X, 2)
    R = J.ring
    assert J.stratum(0, 0) == R("x#0*z#0 - y#0^2 + 1")
    assert J.stratum(0, 1) == R("x#0*z#1 + x#1*z#0 - 2*y#0*y#1")
    assert J.stratum(0, 2) == R("x#0*z#2 + x#1*z#1 + x#2*z#0 - 2*y#0*y#2 - y#1^2")
    assert [str(v) for v in R.variables[:4]] == ["x#0", "y#0", "z#0", "x#1"]


@pytest.mark.parametrize("name", CORPUS_NAMES)
@pytest.mark.parametrize("m", [1, 2, 3])
def test_strata_agree_with_series_oracle(name, m):
    V = builtin(name)
    J = jet_equations(V, m)
    expected = series_strata(V, m)
    for a in range(len(V.generators)):
        for k in range(m + 1):
            assert sympy.expand(to_sympy(J.stratum(a, k)) - expected[a][k]) == 0


def test_level_is_validated():
    with pytest.raises(ValueError, match="infinity"):
        jet_equations(X, float("inf"))
    with pytest.raises(ValueError):
        jet_equations(X, -1)
    with pytest.raises(ValueError):
        jet_equations(jet_equations(X, 1).presentation, 1)


def test_evaluate_on_jet_examples():
    J = jet_equations(X, 1)
    assert evaluate_on_jet(J, {"x": [1, 0], "y": [1, 0], "z": [0, 0]}) == [0, 0]
    assert evaluate_on_jet(J, {"x": [0, 0], "y": [0, 0], "z": [0, 0]})[0] == 1


@pytest.mark.parametrize("name", ["danielewski-x", "danielewski-y", "node"])
def test_evaluate_on_jet_matches_direct_series(name):
    V = builtin(name)
    m = 3
    J = jet_equations(V, m)
    rng = random.Random(name)
    for _ in range(50):
        gamma = {v: [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(m + 1)] for v in V.variables}
        got = evaluate_on_jet(J, gamma)
        assert [sympy.Rational(int(g.numerator), int(g.denominator)) for g in got] == series_values(V, m, gamma)


def test_grading_passes_on_corpus():
    for P in (builtin(n) for n in CORPUS_NAMES):
        rep = check_grading(jet_equations(P, 2))
        assert rep.ok, rep.violations


def test_scaling_examples():
    J = jet_equations(X, 2)
    assert scaling_defect(J.stratum(0, 2), 2).is_zero()
    assert scaling_defect(J.stratum(0, 0), 0).is_zero()
    fake = J.ring("x#0 + x#1")
    assert not scaling_defect(fake, 1).is_zero()


def test_grading_reports_fake_stratum():
    J = jet_equations(X, 1)
    R = J.ring
    fake = type(J)(J.base, 1, R, ((J.stratum(0, 0), R("x#0 + x#1")),))
    rep = check_grading(fake)
    assert not rep.ok
    assert "F[1,1]" in rep.violations[0]


@given(st.sampled_from(CORPUS_NAMES), st.integers(0, 3), st.fractions(min_value=-3, max_value=3, max_denominator=3))
def test_scaling_identity_numerically(name, m, s):
    V = builtin(name)
    J = jet_equations(V, m)
    rng = random.Random(f"{name}{m}{s}")
    pt = {v: Fraction(rng.randint(-5, 5)) for v in J.ring.variables}
    scaled = {v: s**v.weight * c for v, c in pt.items()}
    for row in J.strata:
        for k, F in enumerate(row):
            assert F.evaluate(scaled) == s**k * F.evaluate(pt)


def test_truncation_map():
    J2 = jet_equations(X, 2)
    psi = truncation_map(J2, 1)
    J1 = jet_equations(X, 1)
    for k in range(2):
        assert psi(J1.stratum(0, k)) == J2.stratum(0, k)
    same = truncation_map(J2, 2)
    assert all(same.images[v] == J2.ring.gen(v) for v in J2.ring.variables)
    base = truncation_map(J2, 0)
    assert set(map(str, base.source.variables)) == {"x#0", "y#0", "z#0"}
    with pytest.raises(ValueError):
        truncation_map(J2, 3)


def test_projection_and_zero_section():
    J = jet_equations(X, 2)
    pi, sigma = projection(J), zero_section(J)
    for v in X.variables:
        assert sigma(pi.images[v]) == X.ring.gen(v)
    assert sigma(J.stratum(0, 0)) == X.generators[0]
    assert sigma(J.stratum(0, 1)).is_zero() and sigma(J.stratum(0, 2)).is_zero()


def test_fiber_examples():
    fib = fiber_over_zero_section(X, 2)
    assert fib.ok
    R = fib.presentation.ring
    assert fib.reduced_strata[0][1].is_zero()
    assert fib.reduced_strata[0][2] == R("z#0*x#2 - 2*y#0*y#2 + x#0*z#2")
    cusp = fiber_over_zero_section(builtin("cusp"), 2)
    assert cusp.ok
    assert cusp.reduced_strata[0][2] == cusp.presentation.ring("-3*x#0^2*x#2 + 2*y#0*y#2")
    one = fiber_over_zero_section(X, 1)
    assert one.ok and one.reduced_strata[0][1] == jet_equations(X, 1).stratum(0, 1)
    with pytest.raises(ValueError):
        fiber_over_zero_section(X, 0)


@pytest.mark.parametrize("name", CORPUS_NAMES)
@pytest.mark.parametrize("m", [2, 3, 4])
def test_fiber_identity_on_corpus(name, m):
    V = builtin(name)
    fib = fiber_over_zero_section(V, m)
    assert fib.ok, fib.failures
    for a in range(len(V.generators)):
        assert fib.reduced_strata[a][m] == jacobian_pairing(V, a, fib.presentation.ring, m)


def test_multiple_generators():
    V = Presentation.from_strings("twisted", ["x", "y", "z"], ["y - x^2", "z - x^3"])
    J = jet_equations(V, 2)
    assert len(J.generators) == 6
    assert J.generators[:2] == J.level_generators(0)
    assert check_grading(J).ok
