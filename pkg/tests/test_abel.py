import random
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taylordom.abel import (
    ORIENTATION,
    AbelEquation,
    DivergenceError,
    fixed_point_count,
    group_property_probe,
    moment_like,
    ode_oracle,
    oracle_agreement,
    orientation_probe,
    poincare_coefficients,
    random_equation,
    return_map_eval,
)
from taylordom.core.poly import UniPoly

RICCATI = AbelEquation(UniPoly([1]), UniPoly([]))    # y' = y^2
CUBIC = AbelEquation(UniPoly([]), UniPoly([1]))      # y' = y^3
TRIVIAL = AbelEquation(UniPoly([]), UniPoly([]))


def test_riccati_closed_form():
    exp = poincare_coefficients(RICCATI, 20)
    assert all(exp.v[k] == UniPoly([0, -1]) ** (k - 1) for k in range(1, 21))


def test_trivial_and_cubic_coefficients():
    exp = poincare_coefficients(TRIVIAL, 10)
    assert all(v.is_zero() for v in exp.v[2:])
    exp = poincare_coefficients(CUBIC, 6)
    assert exp.v[2].is_zero() and exp.v[3] == UniPoly([0, -1]) and exp.v[4].is_zero()
    assert exp.check()


def test_return_map_examples():
    exp = poincare_coefficients(RICCATI, 20)
    assert return_map_eval(exp, 1, F(1, 10)) == pytest.approx(1 / 11, abs=1e-18)
    assert return_map_eval(exp, 1, 0) == 0
    assert return_map_eval(poincare_coefficients(TRIVIAL, 5), 1, F(3, 7)) == F(3, 7)
    with pytest.raises(DivergenceError):
        return_map_eval(exp, 1, F(9, 10))


def test_ode_oracle_examples():
    with mpmath.workdps(30):
        assert abs(ode_oracle(RICCATI, F(1, 10), "forward") - mpmath.mpf(1) / 9) < 1e-25
        assert ode_oracle(RICCATI, 0) == 0
        assert abs(ode_oracle(RICCATI, F(1, 9), "backward") - mpmath.mpf(1) / 10) < 1e-25


def test_orientation_is_backward():
    assert ORIENTATION == "backward"
    eq = AbelEquation(UniPoly([1, F(1, 2)]), UniPoly([F(-1, 2), 0, 1]))
    probe = orientation_probe(eq)
    assert probe["best"] == "backward"
    assert probe["mismatch"]["backward"] < 1e-30 < probe["mismatch"]["forward"]


def test_translation_to_zero():
    eq = AbelEquation(UniPoly([0, 1]), UniPoly([1]), 1, 2)
    exp = poincare_coefficients(eq, 12)
    assert exp.provenance["translated_by"] == "1"
    ag = oracle_agreement(eq, K=12, ys=(F(1, 100), F(1, 1000)))
    assert ag.passed, ag


def test_oracle_agreement_slope():
    eq = AbelEquation(UniPoly([F(1, 2), -1]), UniPoly([1, 0, F(-1, 2)]))
    ag = oracle_agreement(eq, K=20)
    assert ag.slope >= 20.5


def test_center_case_agrees_exactly():
    ag = oracle_agreement(TRIVIAL, K=8, ys=(F(1, 100), F(1, 1000)))
    assert ag.exact_match and ag.passed


def test_group_property():
    eq = AbelEquation(UniPoly([1, 1]), UniPoly([0, -1]))
    assert group_property_probe(eq, F(1, 3), F(1, 5)) < 1e-30


def test_moment_like_examples():
    assert list(moment_like(AbelEquation(UniPoly([1]), UniPoly([1])), 8)) == [F(1, k + 1) for k in range(9)]
    assert all(m == 0 for m in moment_like(RICCATI, 8))
    eq = AbelEquation(UniPoly([0, 2]), UniPoly([1]))
    assert list(moment_like(eq, 8)) == [F(1, 2 * k + 1) for k in range(9)]


def test_moment_like_uses_left_endpoint():
    eq = AbelEquation(UniPoly([1]), UniPoly([1]), 1, 2)
    assert list(moment_like(eq, 4)) == [F(1, k + 1) for k in range(5)]


def test_fixed_point_counts():
    fp = fixed_point_count(poincare_coefficients(TRIVIAL, 10), 1, F(1, 20))
    assert fp.center and fp.count is None
    fp = fixed_point_count(poincare_coefficients(RICCATI, 20), 1, F(1, 20))
    assert not fp.center and fp.count.count == 2 and fp.leading_order == 2


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_defining_identity_and_leading_order(seed):
    rng = random.Random(seed)
    eq = random_equation(rng)
    exp = poincare_coefficients(eq, 15)
    assert exp.check()
    fp = fixed_point_count(exp, 1, F(1, 1000))
    if not fp.center:
        assert fp.count.count == fp.leading_order
