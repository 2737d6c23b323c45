"""Zero counting in disks and Rouche-type zero bounds from domination.

``count_zeros`` applies the argument principle on |z| = r with trapezoidal
quadrature of z P'(z) / P(z), evaluated for all nodes at once with an FFT.
``zero_bound`` turns a domination certificate into a certified statement
"at most N zeros in the disk of radius R'" or declines to certify.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
import numpy as np

from .core.poly import UniPoly
from .core.scalar import DEFAULT_PRECISION, log_abs, to_mp
from .domination import E_HI, ConstantRule, DominationCertificate, TabulatedRule, TuranRule

MIN_NODES = 2**12
MAX_NODES = 2**16
RESIDUAL_TARGET = 0.05
RESIDUAL_RELIABLE = 0.1
CONTOUR_CLEARANCE = 1e-6


class NearContourZeroError(ArithmeticError):
    pass


class ZeroCountUnreliable(ArithmeticError):
    pass


@dataclass(frozen=True)
class ZeroCount:
    radius: float
    count: int
    residual: float
    nodes: int
    reliable: bool
    identically_zero: bool = False


def _coefficients(f) -> list:
    if isinstance(f, UniPoly):
        return list(f.coeffs)
    return list(getattr(f, "values", f))


def _scaled(coeffs, r) -> np.ndarray:
    """Complex floats proportional to a_k r^k, normalised to max modulus 1."""
    logs = []
    for k, a in enumerate(coeffs):
        logs.append(-math.inf if a == 0 else log_abs(a) + k * math.log(r))
    top = max(logs)
    out = np.zeros(len(coeffs), dtype=complex)
    for k, (a, lg) in enumerate(zip(coeffs, logs)):
        if lg > -math.inf and lg - top > -700:
            z = complex(to_mp(a, 64)) if not isinstance(a, (int, Fraction)) else complex(float(a / abs(a)))
            phase = z / abs(z)
            out[k] = phase * math.exp(lg - top)
    return out


def _contour_values(b: np.ndarray, n: int):
    """P(r w^j) and r w^j P'(r w^j) for w = exp(2 pi i / n), up to a common scale."""
    deg = len(b) - 1
    k = np.arange(len(b))
    if n > deg:
        P = np.fft.ifft(np.concatenate([b, np.zeros(n - len(b))])) * n
        zP = np.fft.ifft(np.concatenate([k * b, np.zeros(n - len(b))])) * n
    else:
        folded = np.zeros(n, dtype=complex)
        folded_d = np.zeros(n, dtype=complex)
        np.add.at(folded, k % n, b)
        np.add.at(folded_d, k % n, k * b)
        P = np.fft.ifft(folded) * n
        zP = np.fft.ifft(folded_d) * n
    return P, zP


def count_zeros(f, r, nodes: Optional[int] = None) -> ZeroCount:
    """Number of zeros (with multiplicity) of a polynomial in |z| < r."""
    coeffs = _coefficients(f)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    r = float(r)
    if r <= 0:
        raise ValueError("radius must be positive")
    if not coeffs:
        return ZeroCount(r, 0, 0.0, 0, False, identically_zero=True)
    if len(coeffs) == 1:
        return ZeroCount(r, 0, 0.0, 0, True)
    b = _scaled(coeffs, r)
    n = nodes or MIN_NODES
    while n < 4 * len(b):
        n *= 2
    while True:
        P, zP = _contour_values(b, n)
        absP = np.abs(P)
        scale = np.sum(np.abs(b))
        if absP.min() <= 1e-13 * scale:
            raise NearContourZeroError(f"polynomial vanishes numerically on |z|={r}")
        # |P/P'| approximates the distance to the nearest zero; P' = zP / z
        clearance = np.min(absP / np.maximum(np.abs(zP) / r, 1e-300))
        if clearance < CONTOUR_CLEARANCE * r:
            raise NearContourZeroError(f"a zero lies within {clearance:.3g} of |z|={r}")
        w = np.mean(zP / P)
        count = int(round(w.real))
        residual = float(abs(w - count))
        if residual < RESIDUAL_TARGET or n >= MAX_NODES:
            break
        n *= 2
    if residual >= RESIDUAL_RELIABLE or absP.min() < 1e-9 * scale:
        count, residual = _count_zeros_mp(coeffs, r, n)
    return ZeroCount(r, max(count, 0), residual, n, residual < RESIDUAL_RELIABLE)


def _count_zeros_mp(coeffs, r, n, prec=DEFAULT_PRECISION):
    """High-precision fallback for badly conditioned contours."""
    with mpmath.workprec(prec):
        cs = [to_mp(c, prec) for c in coeffs]
        dcs = [k * c for k, c in enumerate(cs)]
        acc = mpmath.mpc(0)
        m = min(n, 2**13)
        for j in range(m):
            z = r * mpmath.expjpi(mpmath.mpf(2 * j) / m)
            P = mpmath.polyval(cs[::-1], z)
            dP = mpmath.polyval(dcs[::-1], z)
            acc += dP / P
        w = acc / m
        count = int(mpmath.nint(w.real))
        return count, float(abs(w - count))


# --------------------------------------------------------------------------
# Rouche-type zero bound


@dataclass(frozen=True)
class ZeroBoundCertificate:
    N: int
    R_prime: Fraction
    R: Fraction
    r_star: Optional[float]
    tail_bound: Optional[float]
    min_modulus: Optional[float]
    certified: bool
    reason: str = ""

    @property
    def bound(self):
        return self.N if self.certified else "not certified"


def tail_sum_upper(cert: DominationCertificate, M: float, q, cap: Optional[float] = None):
    """Upper bound on sum_{k>N} S(k) M q^k for q = r*/R < 1, or None.

    With ``cap`` the summation stops early (returning the partial sum) once
    it exceeds the cap, which is enough to reject a candidate radius.
    """
    rule, N = cert.rule, cert.N
    safety = 1 + 1e-9
    with mpmath.workprec(80):
        q = mpmath.mpf(q)
        M = mpmath.mpf(M)
        if isinstance(rule, ConstantRule):
            return to_mp(rule.upper(0), 80) * M * q ** (N + 1) / (1 - q) * safety
        if isinstance(rule, TuranRule):
            d = rule.d
            e_hi = to_mp(E_HI, 80)
            total = mpmath.mpf(0)
            k = N + 1
            term = (2 * e_hi * (mpmath.mpf(k) / d + 1)) ** d * q**k * M
            while True:
                total += term
                if cap is not None and total > cap:
                    return total
                ratio = ((mpmath.mpf(k + 1) / d + 1) / (mpmath.mpf(k) / d + 1)) ** d * q
                # the ratio decreases in k, so the remaining tail is dominated geometrically
                if ratio < 1 - mpmath.mpf(10) ** -6:
                    tail = term * ratio / (1 - ratio)
                    if tail <= 1e-6 * total or k - N > 10**5:
                        return (total + tail) * safety
                if k - N > 10**6:
                    return None
                term *= ratio
                k += 1
        return None


def _min_modulus_lower(coeffs, r: float, n: int = 256):
    """Rigorous-in-intent lower bound on min_{|z|=r} |P(z)|.

    Sampled minimum minus a Lipschitz bound for the arc between nodes and a
    relative allowance for floating error.
    """
    cs = np.array([complex(to_mp(c, 64)) for c in coeffs])
    ks = np.arange(len(cs))
    absum = float(np.sum(np.abs(cs) * r**ks))
    lip = float(np.sum(ks * np.abs(cs) * r ** np.maximum(ks - 1, 0)))
    while True:
        z = r * np.exp(2j * np.pi * np.arange(n) / n)
        vals = np.polyval(cs[::-1], z)
        sampled = float(np.min(np.abs(vals)))
        lower = sampled - lip * math.pi * r / n - 1e-12 * absum
        if lower > 0 or n >= 2**14 or sampled < 1e-9 * absum:
            return lower, sampled
        n *= 2


def zero_bound(
    cert: DominationCertificate,
    prefix: Sequence,
    R_prime,
    steps_per_octave: int = 16,
) -> ZeroBoundCertificate:
    """Certify at most N zeros in |z| < R' using Rouche on |z| = r*.

    r* runs over the fixed grid R 2^(-i/steps_per_octave), i = 1, 2, ...,
    restricted to r* > R', so a witness at R' is also a witness for every
    smaller R''.
    """
    N, R = cert.N, cert.R
    R_prime = Fraction(R_prime)
    if not 0 < R_prime < R:
        raise ValueError("need 0 < R' < R")
    coeffs = list(getattr(prefix, "values", prefix))[: N + 1]
    if len(coeffs) < N + 1:
        raise ValueError(f"prefix must contain a_0..a_{N}")
    if all(c == 0 for c in coeffs):
        raise ValueError("N-prefix is identically zero")
    if isinstance(cert.rule, TabulatedRule):
        return ZeroBoundCertificate(N, R_prime, R, None, None, None, False,
                                    "tabulated S-rule has no certified tail")
    Rf = float(R)
    M = max(float(abs(to_mp(c, 64))) * Rf**i for i, c in enumerate(coeffs)) * (1 + 1e-12)
    best_reason = "Rouche inequality not met on the radius grid"
    # grid points strictly above R', scanned upward from R' where tails are smallest
    i_max = math.ceil(steps_per_octave * math.log2(Rf / float(R_prime))) - 1
    for i in range(i_max, 0, -1):
        r_star = Rf * 2 ** (-i / steps_per_octave)
        if r_star <= float(R_prime):
            continue
        lower, _ = _min_modulus_lower(coeffs, r_star)
        if lower <= 0:
            continue
        T = tail_sum_upper(cert, M, r_star / Rf, cap=lower)
        if T is None:
            best_reason = "tail sum could not be bounded"
        elif lower > float(T):
            return ZeroBoundCertificate(N, R_prime, R, r_star, float(T), lower, True)
    return ZeroBoundCertificate(N, R_prime, R, None, None, None, False, best_reason)


# --------------------------------------------------------------------------
# valency growth probe


@dataclass(frozen=True)
class GrowthProbe:
    slope: Optional[float]
    predicted: float
    status: str          # "pass", "fail" or "polynomial"
    window: tuple


def valency_growth_probe(seq, R, p: int, min_terms: int = 4) -> GrowthProbe:
    """Log-log slope of |a_k| R^k over k in [K/2, K] against the exponent 2p."""
    values = list(getattr(seq, "values", seq))
    K = len(values) - 1
    lo = max(1, K // 2)
    R = float(R)
    pts = [(math.log(k), log_abs(values[k]) + k * math.log(R)) for k in range(lo, K + 1) if values[k] != 0]
    if len(pts) < min_terms:
        return GrowthProbe(None, 2.0 * p, "polynomial", (lo, K))
    xs, ys = zip(*pts)
    slope = statistics.linear_regression(xs, ys).slope
    return GrowthProbe(slope, 2.0 * p, "pass" if slope <= 2 * p + 0.5 else "fail", (lo, K))


__all__ = [
    "GrowthProbe",
    "NearContourZeroError",
    "ZeroBoundCertificate",
    "ZeroCount",
    "count_zeros",
    "tail_sum_upper",
    "valency_growth_probe",
    "zero_bound",
]
