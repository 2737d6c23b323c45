import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taylordom.bautin import (
    ConstantTermError,
    NonLinearError,
    ParametricRecurrence,
    a0_profile,
    coefficient_recurrence_check,
    degree_bounds,
    generate_parametric,
    ideal_witness,
    random_parametric,
    specialize_and_certify,
    specialized_spec,
)
from taylordom.core.multipoly import MultiPoly
from taylordom.domination import verify
from taylordom.recurrence import generate

L1, L2 = MultiPoly.var(0, 2), MultiPoly.var(1, 2)
TWO_PARAM = ParametricRecurrence.linear([[[1, 0], [0, 1]]], 2)   # A_{k,1} = l1, A_{k,2} = l2
POWERS = ParametricRecurrence.linear([[[1]]], 1)                 # a_k = l1 a_{k-1}
X1 = MultiPoly.var(0, 1)


def test_powers_of_lambda():
    ps = generate_parametric(POWERS, [1], 8)
    assert all(a == X1**k for k, a in enumerate(ps.values))


def test_two_parameter_hand_unroll():
    ps = generate_parametric(TWO_PARAM, [L1, L2], 3)
    assert ps[2] == 2 * L1 * L2
    assert ps[3] == 2 * L1**2 * L2 + L2**2


def test_zero_init_gives_zero_series():
    ps = generate_parametric(TWO_PARAM, [0, 0], 10)
    assert all(a.is_zero() for a in ps.values)
    assert coefficient_recurrence_check(ps).ok


def test_witness_for_two_parameter_example():
    w = ideal_witness(TWO_PARAM, [L1, L2], 12)
    assert w.verified and w.index_bound == 2
    psi0, psi1 = w.cofactors[2]
    assert psi0 * L1 + psi1 * L2 == 2 * L1 * L2


def test_unit_generator_gives_whole_ring():
    ps = generate_parametric(POWERS, [1], 6)
    w = ideal_witness(POWERS, [1], 6, series=ps)
    assert all(w.cofactors[k][0] == ps[k] for k in range(7))


def test_quadratic_rule_still_reduces():
    rule = {(1, 0): L1, (0, 2): MultiPoly.constant(1, 2), (1, 1): L2}
    rec = ParametricRecurrence(2, 2, (rule,))
    w = ideal_witness(rec, [L1 + 1, L2], 7)
    assert w.verified


def test_constant_term_rejected():
    rec = ParametricRecurrence(1, 1, ({(0,): MultiPoly.constant(1, 1), (1,): X1},))
    with pytest.raises(ConstantTermError):
        generate_parametric(rec, [X1], 3)


def test_a0_profile_examples():
    prof = a0_profile(generate_parametric(POWERS, [1], 10))
    assert (prof.K1, prof.K2) == (1, 0)
    assert prof.K3 == pytest.approx(1) and prof.K4 == pytest.approx(1)
    doubled = ParametricRecurrence.linear([[[2]]], 1)
    ps = generate_parametric(doubled, [1], 10)
    prof = a0_profile(ps)
    assert prof.K4 == pytest.approx(2) and prof.holds(ps)


def test_prop3_degree_bound_to_fifty():
    rng = random.Random(5)
    rec, init = random_parametric(rng, 50, d=3, nvars=2, linear=True)
    ps = generate_parametric(rec, init, 50)
    prof = a0_profile(ps)
    assert prof.degree_at_most_k and prof.holds(ps)


def test_coefficient_recurrence_examples():
    ps = generate_parametric(POWERS, [1], 10)
    assert coefficient_recurrence_check(ps).ok
    ps = generate_parametric(TWO_PARAM, [L1, L2], 3)
    # the coefficient of l1^2 l2 in a_3 comes from (1,1) in a_2 and (2,0) in a_1 (absent)
    assert ps[3].coefficient((2, 1)) == 1 * ps[2].coefficient((1, 1)) + 1 * ps[1].coefficient((2, 0)) == 2
    assert coefficient_recurrence_check(ps).checked > 0
    with pytest.raises(NonLinearError):
        coefficient_recurrence_check(generate_parametric(ParametricRecurrence(1, 1, ({(2,): X1},)), [X1], 3))


def test_specialize_and_certify_geometric():
    ps = generate_parametric(POWERS, [1], 40)
    grid = [[F(i, 10)] for i in range(-10, 11)]
    rep = specialize_and_certify(ps, grid, F(1, 2))
    assert rep.N == 0 and rep.sup_C <= 1


def test_zero_locus_sample_is_excluded_and_counted():
    ps = generate_parametric(TWO_PARAM, [L1, L2], 20)
    rep = specialize_and_certify(ps, [[0, 0], [1, 1], [F(1, 2), -1]], F(1, 4))
    assert rep.identically_zero == 1 and len(rep.constants) == 2
    # a_0 = 0 but a_1 != 0 keeps the sample usable since N = 1
    rep = specialize_and_certify(ps, [[0, 1]], F(1, 4))
    assert rep.excluded == 0 and len(rep.constants) == 1


def test_sup_constant_monotone_in_horizon():
    rng = random.Random(11)
    rec, init = random_parametric(rng, 40, d=2, nvars=2, linear=True)
    ps = generate_parametric(rec, init, 40)
    samples = [[F(rng.randint(-10, 10), 10), F(rng.randint(-10, 10), 10)] for _ in range(100)]
    rep = specialize_and_certify(ps, samples, F(1, 8))
    sups = [rep.sup_C_at(h) for h in range(rep.N + 1, 41)]
    assert sups == sorted(sups) and rep.sup_C == sups[-1]
    for point in samples[:10]:
        vals = ps.specialize(point)
        if any(vals[: rep.N + 1]):
            cert = rep.certificate()
            assert verify(vals, cert).passed


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_witness_identity_and_degree_bounds_random(seed, linear):
    rng = random.Random(seed)
    rec, init = random_parametric(rng, 14, linear=linear)
    ps = generate_parametric(rec, init, 14)
    assert ideal_witness(rec, init, 14, series=ps).verified
    assert all(a.degree <= b for a, b in zip(ps.values, degree_bounds(rec, init, 14)))
    if linear:
        assert coefficient_recurrence_check(ps).ok
        assert all(a.degree <= k for k, a in enumerate(ps.values))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_specialization_commutes(seed):
    rng = random.Random(seed)
    rec, init = random_parametric(rng, 25, linear=True)
    ps = generate_parametric(rec, init, 25)
    point = [F(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(rec.nvars)]
    spec = specialized_spec(rec, point, 25)
    direct = generate(spec, [a(point) for a in init], 25, check_bounds=False)
    assert list(direct) == ps.specialize(point)
