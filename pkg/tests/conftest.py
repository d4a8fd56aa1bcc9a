import os

from hypothesis import HealthCheck, settings, strategies as st

from jetschemes.polynomial import Polynomial, Ring

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

XYZ = Ring(["x", "y", "z"])

coefficients = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def polynomials(ring=XYZ, max_terms=5, max_exp=3):
    exps = st.tuples(*[st.integers(0, max_exp) for _ in ring.variables])
    return st.dictionaries(exps, coefficients, max_size=max_terms).map(lambda d: Polynomial(ring, d))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
