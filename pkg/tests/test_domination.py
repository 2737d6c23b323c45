import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taylordom.domination import (
    CertificateError,
    ConstantRule,
    DominationCertificate,
    TuranRule,
    bounded_certificate_for,
    cert_bounded,
    cert_lipschitz,
    cert_poincare,
    cert_trivial,
    cert_turan,
    verify,
)
from taylordom.recurrence import (
    ZERO,
    GeometricLaw,
    LipschitzFamilyConfig,
    RationalLaw,
    RecurrenceSpec,
    TabulatedLaw,
    generate,
)

FIB = RecurrenceSpec((1, 1))
PHI = (1 + 5**0.5) / 2


def test_turan_fibonacci():
    cert = cert_turan(FIB)
    assert cert.N == 1
    assert float(cert.R) == pytest.approx(1 / PHI, rel=1e-11)
    assert cert.R < F(1) / F(PHI)  # rounded down
    assert isinstance(cert.rule, TuranRule) and cert.rule.d == 2
    assert verify(generate(FIB, [0, 1], 200), cert, 200).passed


def test_turan_unit_and_symmetric_roots():
    cert = cert_turan(RecurrenceSpec((1,)))
    assert (cert.N, cert.R) == (0, 1)
    assert float(cert.rule.lower(3)) == pytest.approx(2 * 2.718281828459045 * 4)
    cert = cert_turan(RecurrenceSpec((0, 4)))
    assert (cert.N, cert.R) == (1, F(1, 2))


def test_turan_rejects_perturbed_or_degenerate():
    with pytest.raises(CertificateError):
        cert_turan(RecurrenceSpec((1,), (RationalLaw.of([1], [0, 1]),)))
    with pytest.raises(CertificateError):
        cert_turan(RecurrenceSpec((0, 0)))


def test_verify_examples():
    assert verify([1] + [0] * 20, DominationCertificate(0, F(7, 3), ConstantRule(F(1, 100)))).passed
    rep = verify([2**k for k in range(6)], DominationCertificate(0, 1, ConstantRule(1)))
    assert not rep.passed and rep.worst_k == 5
    assert rep.ratios[0] == (1, 2.0)


def test_verify_zero_prefix_fails():
    rep = verify([0, 0, 1, 1], DominationCertificate(1, 1, ConstantRule(100)))
    assert not rep.passed and rep.worst_k == 2 and "vanish" in rep.diagnostic


def test_bounded_formula_instantiation():
    cert = bounded_certificate_for(RecurrenceSpec((1,)), 1, 1)
    assert (cert.N, cert.R, cert.rule.C) == (0, F(1, 4), 1)
    spec = RecurrenceSpec((6, -18, 54), declared_bounds=(2, 3))
    cert = bounded_certificate_for(spec, 2, 3)
    assert cert.R == F(1, 18) and cert.rule.C == 36


def test_bounded_grid_fibonacci():
    cert = cert_bounded(FIB)
    assert cert.provenance["nu"] == 4
    assert verify(generate(FIB, [0, 1], 200), cert).passed


def test_bounded_uses_declared_pair_for_tabulated_laws():
    law = TabulatedLaw(1, tuple(F((-1) ** k, 2) for k in range(1, 40)), F(1, 2))
    spec = RecurrenceSpec((1,), (law,), declared_bounds=(F(3, 2), 1))
    cert = cert_bounded(spec)
    assert cert.provenance["nu"] <= 5
    assert verify(generate(spec, [1], 39), cert).passed
    with pytest.raises(CertificateError):
        cert_bounded(RecurrenceSpec((1,), (TabulatedLaw(1, (F(1),), None),)))


def test_poincare_fibonacci():
    cert = cert_poincare(FIB)
    assert cert.N == 2 and cert.rule.C == 1024
    assert float(cert.R) == pytest.approx(2**-5 / PHI, rel=1e-11)
    assert verify(generate(FIB, [0, 1], 300), cert).passed


def test_poincare_harmonic_and_delta():
    cert = cert_poincare(RecurrenceSpec((1,), (RationalLaw.of([1], [0, 1]),)))
    assert (cert.N, cert.R, cert.rule.C) == (1, F(1, 16), 16)
    spec = RecurrenceSpec((1, 1), (RationalLaw.of([1], [0, 1]), ZERO), delta=RationalLaw.of([1], [0, 1]))
    cert = cert_poincare(spec, use_delta=True)
    assert cert.N == 2 and cert.rule.C == 2**10
    assert cert.provenance["method"] == "poincare-delta"


def test_poincare_cutoff_scans_large_perturbation():
    # |100/k| <= 2 rho = 2 exactly when k >= 50
    spec = RecurrenceSpec((1,), (RationalLaw.of([100], [0, 1]),))
    cert = cert_poincare(spec)
    assert cert.provenance["N_hat"] == 49 and cert.N == 50
    assert verify(generate(spec, [1], 300), cert).passed


def test_trivial_certificate():
    assert cert_trivial([0, 0, 5, 1, 0], F(1, 2)).N == 2
    cert = cert_trivial([1] * 10, F(1, 2))
    assert cert.rule.values[:3] == (F(1, 2), F(1, 4), F(1, 8))
    fib = generate(FIB, [0, 1], 100)
    cert = cert_trivial(fib, F(3, 5))
    rep = verify(fib, cert)
    assert rep.passed and rep.worst_ratio == pytest.approx(1.0)
    with pytest.raises(CertificateError):
        cert_trivial([0, 0, 0], 1)


def test_lipschitz_certificates():
    f = lambda k, w: 0  # noqa: E731
    for d, C, expected in [(2, 1, (2, 1, 1)), (3, 2, (3, F(1, 2), 8)), (1, F(1, 2), (1, 2, 1))]:
        cert = cert_lipschitz(LipschitzFamilyConfig(d, C, 1, f))
        assert (cert.N, cert.R, cert.rule.C) == expected


def test_lipschitz_certificate_holds_on_saturating_family():
    from taylordom.recurrence import generate_lipschitz

    cfg = LipschitzFamilyConfig(2, 3, 1, lambda k, w: 3**k * w[0])
    cert = cert_lipschitz(cfg)
    rng = random.Random(3)
    for _ in range(20):
        w = tuple(F(rng.randint(-100, 100), 100) for _ in range(3))
        if any(w):
            assert verify(generate_lipschitz(cfg, w, 40), cert).passed


rat = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def constant_specs(draw):
    cs = draw(st.lists(rat, min_size=1, max_size=4))
    if all(c == 0 for c in cs):
        cs[-1] = F(1)
    init = draw(st.lists(rat, min_size=len(cs), max_size=len(cs)))
    return RecurrenceSpec(tuple(cs)), init


@settings(max_examples=25, deadline=None)
@given(constant_specs())
def test_turan_sound_on_random_specs(case):
    spec, init = case
    assert verify(generate(spec, init, 120), cert_turan(spec)).passed


@settings(max_examples=25, deadline=None)
@given(constant_specs(), st.integers(1, 8))
def test_radius_monotonicity(case, shrink):
    spec, init = case
    seq = generate(spec, init, 80)
    cert = cert_turan(spec)
    if verify(seq, cert).passed:
        assert verify(seq, cert.with_radius(cert.R * F(shrink, shrink + 1))).passed


@settings(max_examples=25, deadline=None)
@given(constant_specs(), st.integers(0, 3))
def test_cutoff_monotonicity_inequality_chain(case, extra):
    spec, init = case
    seq = generate(spec, init, 80)
    cert = cert_bounded(spec)
    R = cert.R
    m_small = max(abs(seq[i]) * R**i for i in range(cert.N + 1))
    m_large = max(abs(seq[i]) * R**i for i in range(cert.N + extra + 1))
    assert m_large >= m_small
    if verify(seq, cert).passed:
        larger = cert.with_cutoff(cert.N + extra)
        # each checked k > N' is also > N, and its right-hand side only grew
        for k in range(larger.N + 1, 81):
            assert abs(seq[k]) * R**k <= cert.rule.lower(k) * m_small <= cert.rule.lower(k) * m_large
        assert verify(seq, larger).passed


@settings(max_examples=20, deadline=None)
@given(constant_specs(), st.lists(st.sampled_from(["zero", "harmonic", "geometric"]), min_size=4, max_size=4),
       st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_poincare_and_bounded_sound_on_random_specs(case, kinds, cs):
    spec, init = case
    laws = []
    for kind, c in zip(kinds[: spec.d], cs):
        laws.append({"zero": ZERO, "harmonic": RationalLaw.of([c], [0, 1]), "geometric": GeometricLaw(c, F(1, 2))}[kind])
    spec = RecurrenceSpec(spec.constant, tuple(laws))
    seq = generate(spec, init, 150)
    assert verify(seq, cert_poincare(spec)).passed
    assert verify(seq, cert_bounded(spec)).passed
