"""Taylor domination certificates and their verification.

A certificate (N, R, S) asserts |a_k| R^k <= S(k) * max_{i<=N} |a_i| R^i for
every k > N.  Constructors below instantiate the explicit constants known
for several recurrence classes; ``verify`` checks any certificate against a
concrete coefficient sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from .core.scalar import DEFAULT_PRECISION, ceil_rational, floor_rational, to_mp
from .recurrence import (
    CoefficientSequence,
    LipschitzFamilyConfig,
    RecurrenceSpec,
    UnboundedLawError,
    characteristic_data,
)

# e to 30 digits, rounded down and up
E_LO = Fraction(2718281828459045235360287471352, 10**30)
E_HI = E_LO + Fraction(1, 10**30)


class CertificateError(ValueError):
    pass


# --------------------------------------------------------------------------
# S-rules


@dataclass(frozen=True)
class ConstantRule:
    C: Fraction
    name = "constant"

    def lower(self, k: int) -> Fraction:
        return self.C

    upper = lower

    def describe(self) -> dict:
        return {"rule": self.name, "C": self.C}


@dataclass(frozen=True)
class TuranRule:
    """Q(k, d) = [2e(k/d + 1)]^d."""

    d: int
    name = "turan"

    def lower(self, k: int) -> Fraction:
        return (2 * E_LO * (Fraction(k, self.d) + 1)) ** self.d

    def upper(self, k: int) -> Fraction:
        return (2 * E_HI * (Fraction(k, self.d) + 1)) ** self.d

    def describe(self) -> dict:
        return {"rule": self.name, "d": self.d}


@dataclass(frozen=True)
class TabulatedRule:
    start: int
    values: tuple
    name = "tabulated"

    def lower(self, k: int) -> Fraction:
        i = k - self.start
        if 0 <= i < len(self.values):
            return self.values[i]
        raise CertificateError(f"tabulated S-rule undefined at k={k}")

    upper = lower

    @property
    def last(self) -> int:
        return self.start + len(self.values) - 1

    def describe(self) -> dict:
        return {"rule": self.name, "start": self.start, "length": len(self.values)}


@dataclass(frozen=True)
class DominationCertificate:
    N: int
    R: Fraction
    rule: object
    provenance: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.N < 0:
            raise CertificateError("N must be nonnegative")
        if not (isinstance(self.R, (int, Fraction)) and self.R > 0):
            raise CertificateError("R must be a positive rational")
        object.__setattr__(self, "R", Fraction(self.R))

    def with_radius(self, R) -> "DominationCertificate":
        return DominationCertificate(self.N, Fraction(R), self.rule, dict(self.provenance, R_override=True))

    def with_cutoff(self, N: int) -> "DominationCertificate":
        return DominationCertificate(N, self.R, self.rule, dict(self.provenance, N_override=True))


@dataclass(frozen=True)
class VerificationReport:
    horizon: int
    ratios: tuple          # (k, float ratio) for k = N+1..horizon
    worst_k: Optional[int]
    worst_ratio: float
    passed: bool
    diagnostic: str = ""


# --------------------------------------------------------------------------
# verification


def _split(x: Fraction):
    x = Fraction(x)
    return abs(x.numerator), x.denominator


def _ratio_float(num: int, den: int) -> float:
    if num == 0:
        return 0.0
    return float(mpmath.mpf(num) / mpmath.mpf(den))


def verify(seq, cert: DominationCertificate, K: Optional[int] = None) -> VerificationReport:
    """Check |a_k| R^k <= S(k) max_{i<=N} |a_i| R^i for N < k <= K.

    Exact sequences are compared exactly using rational lower bounds of S(k),
    so a reported pass is a proof for the checked range.
    """
    values = seq.values if isinstance(seq, CoefficientSequence) else tuple(seq)
    if K is None:
        K = len(values) - 1
    N = cert.N
    if len(values) < max(N + 1, K + 1):
        raise ValueError(f"sequence too short: need a_0..a_{max(N, K)}")
    if all(isinstance(v, (int, Fraction)) for v in values[: K + 1]):
        return _verify_exact(values, cert, K)
    return _verify_float(values, cert, K)


def _verify_exact(values, cert, K):
    N, R = cert.N, cert.R
    r, s = R.numerator, R.denominator
    # M = max_{i<=N} |a_i| R^i as a Fraction
    M = max(abs(Fraction(values[i])) * R**i for i in range(N + 1))
    if M == 0:
        bad = next((k for k in range(N + 1, K + 1) if values[k] != 0), None)
        if bad is not None:
            return VerificationReport(K, (), bad, math.inf, False,
                                      f"a_0..a_{N} vanish but a_{bad} != 0")
        return VerificationReport(K, tuple((k, 0.0) for k in range(N + 1, K + 1)), None, 0.0, True)
    m_num, m_den = M.numerator, M.denominator
    ratios = []
    worst_k, worst = None, -1.0
    passed = True
    rk, sk = r ** (N + 1), s ** (N + 1)
    for k in range(N + 1, K + 1):
        a_num, a_den = _split(values[k])
        S = Fraction(cert.rule.lower(k))
        # |a_k| R^k <= S M  <=>  a_num r^k S_den m_den <= S_num m_num a_den s^k
        lhs = a_num * rk * S.denominator * m_den
        rhs = S.numerator * m_num * a_den * sk
        ratio = _ratio_float(lhs, rhs) if rhs else (math.inf if lhs else 0.0)
        ratios.append((k, ratio))
        if lhs > rhs:
            passed = False
        if ratio > worst:
            worst, worst_k = ratio, k
        rk *= r
        sk *= s
    diag = "" if passed else f"inequality fails at k={worst_k} (ratio {worst:.6g})"
    return VerificationReport(K, tuple(ratios), worst_k, max(worst, 0.0), passed, diag)


def _verify_float(values, cert, K, prec=DEFAULT_PRECISION):
    N = cert.N
    with mpmath.workprec(prec):
        R = to_mp(cert.R, prec)
        M = max(abs(to_mp(values[i], prec)) * R**i for i in range(N + 1))
        if M == 0:
            bad = next((k for k in range(N + 1, K + 1) if values[k] != 0), None)
            if bad is not None:
                return VerificationReport(K, (), bad, math.inf, False,
                                          f"a_0..a_{N} vanish but a_{bad} != 0")
            return VerificationReport(K, tuple((k, 0.0) for k in range(N + 1, K + 1)), None, 0.0, True)
        ratios = []
        worst_k, worst = None, -1.0
        for k in range(N + 1, K + 1):
            ratio = float(abs(to_mp(values[k], prec)) * R**k / (to_mp(cert.rule.lower(k), prec) * M))
            ratios.append((k, ratio))
            if ratio > worst:
                worst, worst_k = ratio, k
    passed = worst <= 1.0
    diag = "" if passed else f"inequality fails at k={worst_k} (ratio {worst:.6g})"
    return VerificationReport(K, tuple(ratios), worst_k, max(worst, 0.0), passed, diag)


# --------------------------------------------------------------------------
# constructors


def _rho_bounds(spec: RecurrenceSpec, prec: int):
    """Rigorous (lower, upper) enclosure of rho from certified root radii."""
    cd = characteristic_data(spec, prec)
    if cd.degenerate:
        raise CertificateError("degenerate spec: all constant coefficients vanish (rho = 0)")
    exact_rho = _exact_rho(spec, cd, prec)
    if exact_rho is not None:
        return cd, exact_rho, exact_rho
    with mpmath.workprec(prec):
        hi = max(abs(r.value) + r.radius for r in cd.roots.roots)
        lo = max(abs(r.value) - r.radius for r in cd.roots.roots)
    return cd, lo, hi


def _exact_rho(spec: RecurrenceSpec, cd, prec: int) -> Optional[Fraction]:
    """rho as an exact rational when a dominant root is a (verified) rational."""
    poly = spec.characteristic_polynomial()
    q = Fraction(float(cd.rho)).limit_denominator(10**6)
    if q == 0 or (poly(q) != 0 and poly(-q) != 0):
        return None
    with mpmath.workprec(prec):
        tol = mpmath.mpf(10) ** -20
        qm = to_mp(q, prec)
        for r in cd.roots.roots:
            if min(abs(r.value - qm), abs(r.value + qm)) < tol:
                continue
            if abs(r.value) + r.radius >= qm:
                return None
    return q


def cert_turan(spec: RecurrenceSpec, prec: int = DEFAULT_PRECISION) -> DominationCertificate:
    """(d-1, min |sigma_i|^-1, Q(k,d)) for constant-coefficient recurrences."""
    if not spec.is_constant():
        raise CertificateError("Turan certificate needs a constant-coefficient spec")
    cd, _, hi = _rho_bounds(spec, prec)
    with mpmath.workprec(prec):
        R = 1 / hi if isinstance(hi, Fraction) else floor_rational(1 / hi)
        nominal = 1 / cd.rho
    return DominationCertificate(
        spec.d - 1, R, TuranRule(spec.d),
        {"method": "turan", "d": spec.d, "R_nominal": mpmath.nstr(nominal, 20)},
    )


def bounded_certificate_for(spec: RecurrenceSpec, K, rho) -> DominationCertificate:
    """(d-1, 1/((2K+2) rho), (2K+2)^(d-1)) for an admissible pair (K, rho)."""
    K, rho = Fraction(K), Fraction(rho)
    if K < 0 or rho <= 0:
        raise CertificateError("need K >= 0 and rho > 0")
    nu = (2 * K + 2) * rho
    return DominationCertificate(
        spec.d - 1, 1 / nu, ConstantRule((2 * K + 2) ** (spec.d - 1)),
        {"method": "bounded-coefficients", "K": K, "rho": rho, "nu": nu},
    )


def cert_bounded(
    spec: RecurrenceSpec,
    rho_overrides: Sequence = (),
    shifts: range = range(-5, 6),
    prec: int = DEFAULT_PRECISION,
) -> DominationCertificate:
    """Bounded-coefficient certificate minimising nu = (2K+2) rho over a grid.

    Candidate rho: characteristic moduli, the declared rho and overrides, each
    scaled by 2^i for i in ``shifts``; for each, K(rho) is the exact sup of
    |c_j(k)| / rho^j over k >= d.
    """
    if spec.is_degenerate():
        raise CertificateError("degenerate spec: all coefficients vanish")
    bases = [Fraction(1)] + [Fraction(r) for r in rho_overrides]
    candidates = []
    if spec.declared_bounds is not None:
        bases.append(spec.declared_bounds[1])
        candidates.append(spec.declared_bounds)
    cd = characteristic_data(spec, prec)
    if not cd.degenerate:
        for m in cd.roots.moduli():
            if m > 0:
                bases.append(ceil_rational(m, 20))
    grid = sorted({b * Fraction(2) ** i for b in bases for i in shifts})
    for rho in grid:
        try:
            candidates.append((spec.uniform_bound(rho), rho))
        except UnboundedLawError:
            if spec.declared_bounds is None:
                raise CertificateError("no finite uniform bound derivable for this spec")
            break
    K, rho = min(candidates, key=lambda kr: ((2 * kr[0] + 2) * kr[1], kr[1]))
    cert = bounded_certificate_for(spec, K, rho)
    cert.provenance["grid_size"] = len(grid)
    return cert


def poincare_cutoff(spec: RecurrenceSpec, use_delta: bool = False, prec: int = DEFAULT_PRECISION) -> int:
    """The threshold index N-hat.

    Smallest n >= 0 such that the tail condition holds for every k > n with
    k >= d (the recurrence is only defined from k = d on).  Without
    ``use_delta`` the condition is |psi_j(k)| <= 2^d rho^j for all j; with it,
    delta_k <= 2^d.
    """
    d = spec.d
    if use_delta:
        if spec.delta is None:
            raise CertificateError("delta variant needs a declared delta sequence")
        last = spec.delta.last_exceeding(Fraction(2) ** d, d)
        return last or 0
    _, lo, _ = _rho_bounds(spec, prec)
    last = None
    with mpmath.workprec(prec):
        for j, law in enumerate(spec.perturbation, start=1):
            try:
                thr = Fraction(2) ** d * lo**j if isinstance(lo, Fraction) else mpmath.mpf(2) ** d * lo**j
                lj = law.last_exceeding(thr, d)
            except UnboundedLawError as exc:
                raise CertificateError(f"perturbation psi_{j} has no certifiable tail: {exc}")
            if lj is not None:
                last = lj if last is None else max(last, lj)
    return last or 0


def cert_poincare(spec: RecurrenceSpec, use_delta: bool = False, prec: int = DEFAULT_PRECISION) -> DominationCertificate:
    """(N-hat + d, 2^-(d+3) / rho, 2^((d+3) N)) for Poincare-type recurrences."""
    d = spec.d
    if not use_delta and not spec.is_poincare():
        raise CertificateError("perturbations must tend to zero")
    cd, _, hi = _rho_bounds(spec, prec)
    n_hat = poincare_cutoff(spec, use_delta, prec)
    N = n_hat + d
    with mpmath.workprec(prec):
        if isinstance(hi, Fraction):
            R = Fraction(1, 2 ** (d + 3)) / hi
        else:
            R = floor_rational(mpmath.mpf(2) ** (-(d + 3)) / hi)
        nominal = mpmath.mpf(2) ** (-(d + 3)) / cd.rho
    return DominationCertificate(
        N, R, ConstantRule(Fraction(2) ** ((d + 3) * N)),
        {
            "method": "poincare-delta" if use_delta else "poincare",
            "d": d,
            "N_hat": n_hat,
            "N_hat_rule": "smallest n >= 0, condition checked for k > n, k >= d",
            "R_nominal": mpmath.nstr(nominal, 20),
        },
    )


def first_nonzero_index(seq) -> int:
    values = seq.values if isinstance(seq, CoefficientSequence) else tuple(seq)
    for i, v in enumerate(values):
        if v != 0:
            return i
    raise CertificateError("identically zero sequence has no first nonzero coefficient")


def tabulated_certificate(seq, R, N: int, method: str, K: Optional[int] = None) -> DominationCertificate:
    """(N, R, S) with S(k) = |a_k| R^k / max_{i<=N} |a_i| R^i tabulated to K."""
    values = seq.values if isinstance(seq, CoefficientSequence) else tuple(seq)
    K = len(values) - 1 if K is None else K
    R = Fraction(R)
    M = max(abs(Fraction(values[i])) * R**i for i in range(N + 1))
    if M == 0:
        raise CertificateError(f"a_0..a_{N} all vanish")
    table = tuple(abs(Fraction(values[k])) * R**k / M for k in range(N + 1, K + 1))
    return DominationCertificate(N, R, TabulatedRule(N + 1, table), {"method": method, "tabulated_to": K})


def cert_trivial(seq, R, N: Optional[int] = None) -> DominationCertificate:
    """First-nonzero-coefficient certificate with a tabulated S-rule."""
    if N is None:
        N = first_nonzero_index(seq)
    return tabulated_certificate(seq, R, N, "first-nonzero")


def cert_lipschitz(cfg: LipschitzFamilyConfig) -> DominationCertificate:
    """(d, 1/C, max(1, C)^d)."""
    if cfg.C <= 0:
        raise CertificateError("C must be positive")
    return DominationCertificate(
        cfg.d, 1 / cfg.C, ConstantRule(max(Fraction(1), cfg.C) ** cfg.d),
        {"method": "lipschitz", "d": cfg.d, "C": cfg.C},
    )


def subexponential_profile(cert: DominationCertificate) -> Optional[float]:
    """S(k)^(1/k) at the end of a tabulated rule (near 1 when S is subexponential)."""
    rule = cert.rule
    if not isinstance(rule, TabulatedRule) or not rule.values:
        return None
    k = rule.last
    v = rule.values[-1]
    return float(mpmath.mpf(v.numerator) / v.denominator) ** (1.0 / k) if v else 0.0


def turan_sharpness(reports: Sequence[VerificationReport]) -> dict:
    """Summary of worst observed ratios across Turan verifications."""
    worst = max((r.worst_ratio for r in reports), default=0.0)
    return {"runs": len(reports), "max_ratio": worst, "all_below_one": worst <= 1.0}


__all__ = [
    "CertificateError",
    "ConstantRule",
    "DominationCertificate",
    "TabulatedRule",
    "TuranRule",
    "VerificationReport",
    "bounded_certificate_for",
    "cert_bounded",
    "cert_lipschitz",
    "cert_poincare",
    "cert_trivial",
    "cert_turan",
    "first_nonzero_index",
    "poincare_cutoff",
    "subexponential_profile",
    "tabulated_certificate",
    "turan_sharpness",
    "verify",
]
