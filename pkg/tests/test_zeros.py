import random
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taylordom.core import UniPoly
from taylordom.core.roots import monic_from_roots
from taylordom.domination import ConstantRule, DominationCertificate, cert_turan, cert_poincare
from taylordom.recurrence import RecurrenceSpec, generate
from taylordom.zeros import (
    NearContourZeroError,
    count_zeros,
    valency_growth_probe,
    zero_bound,
)


def test_count_zeros_examples():
    assert count_zeros(UniPoly([1, 2]), 0.6).count == 1
    assert count_zeros(UniPoly([1, 0, 1]), 0.5).count == 0
    fib = generate(RecurrenceSpec((1, 1)), [0, 1], 50)
    res = count_zeros(fib, 0.3)
    assert res.count == 1 and res.reliable


def test_count_zeros_near_contour_rejected():
    with pytest.raises(NearContourZeroError):
        count_zeros(UniPoly([-1, 2]), 0.5)
    with pytest.raises(NearContourZeroError):
        count_zeros(UniPoly([F(-1, 2) - F(1, 10**8), 1]), 0.5)


def test_count_zeros_identically_zero_flag():
    assert count_zeros(UniPoly([]), 1).identically_zero


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(-9, 9), st.integers(-9, 9)), min_size=1, max_size=10),
       st.sampled_from([0.35, 0.75, 1.25, 2.1]))
def test_count_matches_planted_roots(points, r):
    roots = [complex(a, b) / 4 for a, b in points]
    if any(abs(abs(z) - r) < 0.02 for z in roots):
        return
    p = monic_from_roots([mpmath.mpc(z.real, z.imag) for z in roots])
    assert count_zeros(p, r).count == sum(abs(z) < r for z in roots)


def test_zero_bound_constant_function():
    zb = zero_bound(DominationCertificate(0, 1, ConstantRule(1)), [1], F(1, 2))
    # T(r*) = r*/(1 - r*) < 1 requires r* < 1/2, which the grid above 1/2 never offers
    assert not zb.certified
    zb = zero_bound(DominationCertificate(0, 1, ConstantRule(F(1, 10**6))), [1], F(1, 2))
    assert zb.certified and zb.bound == 0


def test_zero_bound_geometric_series():
    cert = cert_turan(RecurrenceSpec((1,)))
    zb = zero_bound(cert, [1], F(1, 100))
    assert zb.certified and zb.bound == 0 and zb.tail_bound < zb.min_modulus
    assert zero_bound(cert, [1], F(9, 10)).bound == "not certified"


def test_zero_bound_rejects_zero_prefix():
    with pytest.raises(ValueError):
        zero_bound(DominationCertificate(1, 1, ConstantRule(1)), [0, 0], F(1, 10))


def test_zero_bound_monotone_in_radius():
    cert = cert_turan(RecurrenceSpec((1,)))
    wit = zero_bound(cert, [1], F(1, 100))
    for rp in [F(1, 200), F(1, 1000)]:
        z = zero_bound(cert, [1], rp)
        assert z.certified


def test_zero_bound_consistent_with_count():
    rng = random.Random(5)
    for _ in range(15):
        d = rng.randint(1, 4)
        cs = tuple(F(rng.randint(-20, 20), 4) for _ in range(d))
        if all(c == 0 for c in cs):
            continue
        spec = RecurrenceSpec(cs)
        seq = generate(spec, [F(rng.randint(-5, 5)) for _ in range(d)], 120)
        if all(v == 0 for v in seq.values[:d]):
            continue
        for cert in (cert_turan(spec), cert_poincare(spec)):
            if all(v == 0 for v in seq.values[: cert.N + 1]):
                continue
            zb = zero_bound(cert, seq, cert.R / 100)
            if zb.certified:
                assert count_zeros(seq, float(cert.R) / 100).count <= zb.bound


def test_valency_probe_examples():
    assert valency_growth_probe([0, 1] + [0] * 40, 1, 1).status == "polynomial"
    koebe = valency_growth_probe(list(range(60)), F(99, 100), 1)
    assert koebe.status == "pass" and 0 < koebe.slope <= 1
    zp = valency_growth_probe([0, 0, 0, 1] + [0] * 40, 1, 3)
    assert zp.status == "polynomial"
    grow = valency_growth_probe([k**5 for k in range(80)], 1, 1)
    assert grow.status == "fail" and grow.slope == pytest.approx(5, abs=0.01)
