from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taylordom.core.poly import UniPoly
from taylordom.dfinite import (
    DifferentialOperator,
    ExpPolyPiece,
    OperatorError,
    PiecewiseFunction,
    analyze_operator,
    builtin_family,
    companion_growth,
    companion_system,
    direct_moments,
    epsilon_sequence,
    moment_recurrence,
    spectrum_check,
    stieltjes_certificate,
    vanishing_bound,
    vanishing_family_check,
)
from taylordom.domination import verify
from taylordom.recurrence import radius_estimate

D = DifferentialOperator((UniPoly([0]), UniPoly([1])))
XD_MINUS_1 = DifferentialOperator((UniPoly([-1]), UniPoly([0, 1])))
ONE = PiecewiseFunction.polynomial(0, 1, [], [[1]])
X = PiecewiseFunction.polynomial(0, 1, [], [[0, 1]])
STEP = PiecewiseFunction.polynomial(0, 1, [F(1, 2)], [[0], [1]])
FAMILY = {m.name: m for m in builtin_family()}


def test_direct_moments_closed_forms():
    assert list(direct_moments(ONE, 10)) == [F(1, k + 1) for k in range(11)]
    assert list(direct_moments(X, 10)) == [F(1, k + 2) for k in range(11)]
    assert list(direct_moments(STEP, 10)) == [(1 - F(1, 2) ** (k + 1)) / (k + 1) for k in range(11)]


def test_exponential_piece_uses_quadrature():
    g = PiecewiseFunction(0, 1, (), (ExpPolyPiece(UniPoly([1]), F(1)),))
    m = direct_moments(g, 3)
    with mpmath.workprec(200):
        assert abs(m[0] - (mpmath.e - 1)) < mpmath.mpf(10) ** -30
        assert abs(m[1] - 1) < mpmath.mpf(10) ** -30  # int x e^x = 1 on [0, 1]
    assert m.error_bound is not None


def test_master_oracle_on_first_examples():
    for op, g in [(D, ONE), (XD_MINUS_1, X), (D, STEP)]:
        rec = moment_recurrence(op)
        m = direct_moments(g, 110)
        data = g.data(op.n)
        assert all(rec.residual(k, m, data) == 0 for k in range(101))


@pytest.mark.parametrize("name", sorted(FAMILY))
def test_master_oracle_and_companion_on_family(name):
    case = FAMILY[name]
    data = case.g.data(case.op.n)
    rec = moment_recurrence(case.op)
    m = direct_moments(case.g, 110)
    assert all(rec.residual(k, m, data) == 0 for k in range(101))
    system = companion_system(case.op, data)
    eps = epsilon_sequence(rec, data, 110)
    for k in range(60):
        assert all(v == 0 for v in system.step_residual(k, m, eps))
    ok, gap = spectrum_check(system)
    assert ok, gap


def test_operator_analysis_examples():
    info = analyze_operator(D, ONE.data(1))
    assert info.poincare_ok and info.tau == 2
    assert {z for z, _ in info.Z_A} == {0, 1}
    info = analyze_operator(XD_MINUS_1, X.data(1))
    assert info.poincare_ok and {z for z, _ in info.Z_A} == {0, 1}
    cubic = DifferentialOperator((UniPoly([0, 0, 0, 1]), UniPoly([1])))
    assert not analyze_operator(cubic, ONE.data(1)).poincare_ok


def test_companion_spectrum_of_euler_operator():
    system = companion_system(XD_MINUS_1, X.data(1))
    eigs = sorted(float(abs(z)) for z in system.eigenvalues())
    assert eigs[0] < 1e-30 and abs(eigs[-1] - 1) < 1e-30
    assert {round(e) for e in eigs} == {0, 1}


def test_B_decreases_for_fuchsian_samples():
    for name in ("linear", "euler", "cubic-jump", "offset-square"):
        case = FAMILY[name]
        system = companion_system(case.op, case.g.data(case.op.n))
        norms = []
        for k in (10, 100, 1000):
            B = system.B(k)
            norms.append(max(abs(v) for row in B for v in row))
        assert norms[0] >= norms[1] >= norms[2]
        assert norms[2] < F(1, 50) or norms[2] == 0


def test_vanishing_bounds():
    vb = vanishing_bound(D, ONE.data(1))
    assert (vb.bound, vb.case) == (1, "jump-regular")
    vb = vanishing_bound(XD_MINUS_1, X.data(1))
    assert vb.bound == 2


def test_vanishing_bound_refuses_irregular_operator():
    irregular = DifferentialOperator((UniPoly([1]), UniPoly([0, 0, 1])))
    with pytest.raises(OperatorError):
        vanishing_bound(irregular, ONE.data(1))


@pytest.mark.parametrize("name", sorted(FAMILY))
def test_vanishing_family_rank(name):
    case = FAMILY[name]
    ok, bound, r, dim = vanishing_family_check(case.op, case.basis, case.g.points)
    assert ok, (bound, r, dim)


def test_stieltjes_radius_examples():
    for g, expected in [(ONE, 1), (STEP, 1)]:
        cert = stieltjes_certificate(D, g.data(1), direct_moments(g, 300))
        assert cert.R == expected
        assert verify(direct_moments(g, 300), cert).passed
    half = FAMILY["half-support"]
    m = direct_moments(half.g, 500)
    cert = stieltjes_certificate(half.op, half.g.data(1), m)
    assert cert.R == 2
    assert radius_estimate(m, moduli=[F(1, 2)]).radius == pytest.approx(2, rel=0.02)


def test_companion_growth_matches_an_eigenvalue():
    for name in ("step", "euler", "bridge"):
        case = FAMILY[name]
        system = companion_system(case.op, case.g.data(case.op.n))
        est = companion_growth(system, direct_moments(case.g, 520), 500)
        assert est.gap < 0.02


@settings(max_examples=20, deadline=None)
@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=5), min_size=1, max_size=3),
       st.fractions(min_value=F(1, 10), max_value=F(9, 10), max_denominator=10))
def test_master_oracle_on_random_jump_polynomials(coeffs, brk):
    # any polynomial g of degree < n is annihilated by D^n
    n = len(coeffs)
    op = DifferentialOperator(tuple(UniPoly([0]) for _ in range(n)) + (UniPoly([1]),))
    g = PiecewiseFunction.polynomial(0, 1, [brk], [coeffs, [c * 2 for c in coeffs]])
    rec = moment_recurrence(op)
    m = direct_moments(g, 40)
    data = g.data(n)
    assert all(rec.residual(k, m, data) == 0 for k in range(31))
