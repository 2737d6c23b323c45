"""Linear recurrences a_k = sum_j (c_j + psi_j(k)) a_{k-j} and their solutions.

Perturbations psi_j are closed-form *laws* rather than opaque callbacks, so
questions of the form "for all k > n" can be decided exactly: every law can
report a rigorous supremum of |shift + psi(k)| over a tail and the last
index at which |psi(k)| exceeds a threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence

import mpmath
import numpy as np

from .core.poly import UniPoly, cauchy_root_bound
from .core.roots import RootSet, poly_roots
from .core.scalar import DEFAULT_PRECISION, EXACT, ceil_rational, convert, exact, log_abs, to_mp

MAX_TAIL_SCAN = 10**6


class PerturbationError(ValueError):
    """A coefficient law is undefined (pole, missing table entry) at some k."""


class UnboundedLawError(ValueError):
    """No finite uniform bound (or no certifiable tail) exists for a law."""


class DeclaredBoundError(ValueError):
    pass


class RecurrenceFitError(ValueError):
    pass


class LipschitzBoundError(ValueError):
    def __init__(self, k, message):
        super().__init__(message)
        self.k = k


def _exceeds(value: Fraction, threshold) -> bool:
    if isinstance(threshold, (int, Fraction)):
        return abs(value) > threshold
    return to_mp(abs(value), max(mpmath.mp.prec, DEFAULT_PRECISION)) > threshold


# --------------------------------------------------------------------------
# coefficient laws


class CoefficientLaw:
    kind = "abstract"

    def __call__(self, k: int) -> Fraction:
        raise NotImplementedError

    def tends_to_zero(self) -> bool:
        raise NotImplementedError

    def sup_abs(self, shift: Fraction, start: int) -> Fraction:
        """Rigorous upper bound on sup_{k >= start} |shift + psi(k)|."""
        raise NotImplementedError

    def last_exceeding(self, threshold, start: int) -> Optional[int]:
        """Largest k >= start with |psi(k)| > threshold, or None."""
        raise NotImplementedError


@dataclass(frozen=True)
class ZeroLaw(CoefficientLaw):
    kind = "zero"

    def __call__(self, k):
        return Fraction(0)

    def tends_to_zero(self):
        return True

    def sup_abs(self, shift, start):
        return abs(Fraction(shift))

    def last_exceeding(self, threshold, start):
        return None


@dataclass(frozen=True)
class RationalLaw(CoefficientLaw):
    """psi(k) = num(k) / den(k) with polynomial numerator and denominator."""

    num: UniPoly
    den: UniPoly
    kind = "rational"

    def __post_init__(self):
        if self.den.is_zero():
            raise PerturbationError("rational law with zero denominator")

    @classmethod
    def of(cls, num: Sequence, den: Sequence) -> "RationalLaw":
        return cls(UniPoly([exact(c) for c in num], "k"), UniPoly([exact(c) for c in den], "k"))

    def __call__(self, k):
        d = self.den(Fraction(k))
        if d == 0:
            raise PerturbationError(f"rational law has a pole at k={k}")
        return self.num(Fraction(k)) / d

    def tends_to_zero(self):
        return self.num.is_zero() or self.num.degree < self.den.degree

    def limit(self) -> Optional[Fraction]:
        if self.num.is_zero() or self.num.degree < self.den.degree:
            return Fraction(0)
        if self.num.degree == self.den.degree:
            return self.num.leading / self.den.leading
        return None

    def monotone_from(self, shift: Fraction = Fraction(0)) -> int:
        """An integer T beyond which shift + psi is monotone and sign-constant.

        Every real root of den, of the derivative numerator num'den - num den',
        and of shift*den + num lies below the Cauchy bound of that polynomial.
        """
        polys = [self.den, self.num.derivative() * self.den - self.num * self.den.derivative(),
                 self.den * shift + self.num]
        bound = max((cauchy_root_bound(p) for p in polys if p.degree >= 1), default=Fraction(0))
        T = math.floor(bound) + 1
        if T > MAX_TAIL_SCAN:
            raise UnboundedLawError(f"tail of rational law starts too late (T={T})")
        return T

    def _check_poles(self, lo, hi):
        for k in range(lo, hi):
            if self.den(Fraction(k)) == 0:
                raise PerturbationError(f"rational law has a pole at k={k}")

    def sup_abs(self, shift, start):
        shift = Fraction(shift)
        lim = self.limit()
        if lim is None:
            raise UnboundedLawError("rational law grows without bound")
        T = max(self.monotone_from(shift), start)
        self._check_poles(start, T)
        best = max((abs(shift + self(k)) for k in range(start, T + 1)), default=Fraction(0))
        return max(best, abs(shift + lim))

    def last_exceeding(self, threshold, start):
        if not self.tends_to_zero():
            raise UnboundedLawError("law does not tend to zero; no certifiable tail")
        T = max(self.monotone_from(), start)
        self._check_poles(start, T)
        # |psi| is non-increasing on [T, inf) and tends to 0
        if _exceeds(self(T), threshold):
            lo, hi = T, T + 1
            while _exceeds(self(hi), threshold):
                lo, hi = hi, 2 * hi
                if hi > 10**15:
                    raise UnboundedLawError("threshold too small to locate the tail")
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if _exceeds(self(mid), threshold):
                    lo = mid
                else:
                    hi = mid
            return lo
        for k in range(T - 1, start - 1, -1):
            if _exceeds(self(k), threshold):
                return k
        return None


@dataclass(frozen=True)
class GeometricLaw(CoefficientLaw):
    """psi(k) = coeff * base**k with |base| <= 1."""

    coeff: Fraction
    base: Fraction
    kind = "geometric"

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        object.__setattr__(self, "base", Fraction(self.base))

    def __call__(self, k):
        return self.coeff * self.base**k

    def tends_to_zero(self):
        return self.coeff == 0 or abs(self.base) < 1

    def sup_abs(self, shift, start):
        shift = Fraction(shift)
        if self.coeff == 0:
            return abs(shift)
        if abs(self.base) > 1:
            raise UnboundedLawError("geometric law with |base| > 1 is unbounded")
        lim = shift if abs(self.base) < 1 else None
        cands = [abs(shift + self(start)), abs(shift + self(start + 1))]
        if lim is not None:
            cands.append(abs(lim))
        return max(cands)

    def last_exceeding(self, threshold, start):
        if not self.tends_to_zero():
            raise UnboundedLawError("law does not tend to zero; no certifiable tail")
        if self.coeff == 0 or self.base == 0:
            return start if (self.coeff and start == 0 and _exceeds(self(0), threshold)) else None
        if not _exceeds(self(start), threshold):
            return None
        # |psi| strictly decreasing: estimate the crossing by logs, then fix up exactly
        thr = float(threshold) if threshold > 0 else 0.0
        if thr == 0.0:
            raise UnboundedLawError("zero threshold is never met by a nonzero geometric law")
        est = (math.log(thr) - log_abs(self.coeff)) / log_abs(self.base)
        k = max(start, int(est) - 2)
        while k > start and not _exceeds(self(k), threshold):
            k -= 1
        while _exceeds(self(k + 1), threshold):
            k += 1
        return k


@dataclass(frozen=True)
class TabulatedLaw(CoefficientLaw):
    """Explicit values psi(start), psi(start+1), ... plus a declared tail bound."""

    start: int
    values: tuple
    tail_bound: Optional[Fraction] = None
    kind = "tabulated"

    def __call__(self, k):
        i = k - self.start
        if 0 <= i < len(self.values):
            return self.values[i]
        raise PerturbationError(f"tabulated law undefined at k={k}")

    def tends_to_zero(self):
        return self.tail_bound == 0

    def sup_abs(self, shift, start):
        if self.tail_bound is None:
            raise UnboundedLawError("tabulated law without a declared tail bound")
        shift = Fraction(shift)
        vals = [abs(shift + v) for i, v in enumerate(self.values) if self.start + i >= start]
        return max(vals + [abs(shift) + self.tail_bound])

    def last_exceeding(self, threshold, start):
        if self.tail_bound is None or _exceeds(self.tail_bound, threshold):
            raise UnboundedLawError("tabulated tail not certified below the threshold")
        for i in range(len(self.values) - 1, -1, -1):
            k = self.start + i
            if k >= start and _exceeds(self.values[i], threshold):
                return k
        return None


ZERO = ZeroLaw()


# --------------------------------------------------------------------------
# recurrence specs


@dataclass(frozen=True)
class RecurrenceSpec:
    """a_k = sum_{j=1}^d (constant[j-1] + perturbation[j-1](k)) a_{k-j}, k >= d.

    ``declared_bounds`` is an optional pair (K, rho) claiming
    |c_j(k)| <= K rho^j; ``delta`` an optional law delta_k claiming
    |psi_j(k)| <= delta_k rho(R)^j.  Both are checked on generation.
    """

    constant: tuple
    perturbation: tuple = ()
    declared_bounds: Optional[tuple] = None
    delta: Optional[CoefficientLaw] = None

    def __post_init__(self):
        const = tuple(exact(c) for c in self.constant)
        if not const:
            raise ValueError("recurrence length d must be >= 1")
        pert = tuple(self.perturbation) or (ZERO,) * len(const)
        if len(pert) != len(const):
            raise ValueError("perturbation list must have length d")
        object.__setattr__(self, "constant", const)
        object.__setattr__(self, "perturbation", pert)
        if self.declared_bounds is not None:
            K, rho = (exact(x) for x in self.declared_bounds)
            if K < 0 or rho <= 0:
                raise ValueError("declared bounds need K >= 0 and rho > 0")
            object.__setattr__(self, "declared_bounds", (K, rho))

    @classmethod
    def constant_coefficients(cls, cs) -> "RecurrenceSpec":
        return cls(tuple(cs))

    @property
    def d(self) -> int:
        return len(self.constant)

    def coefficient(self, j: int, k: int) -> Fraction:
        """Effective coefficient c_j(k), j = 1..d."""
        return self.constant[j - 1] + self.perturbation[j - 1](k)

    def is_constant(self) -> bool:
        return all(isinstance(p, ZeroLaw) for p in self.perturbation)

    def is_poincare(self) -> bool:
        return all(p.tends_to_zero() for p in self.perturbation)

    def is_degenerate(self) -> bool:
        return all(c == 0 for c in self.constant) and all(
            isinstance(p, ZeroLaw) for p in self.perturbation
        )

    def characteristic_polynomial(self) -> UniPoly:
        # sigma^d - sum c_j sigma^(d-j), ascending coefficients
        return UniPoly([-c for c in reversed(self.constant)] + [Fraction(1)], "s")

    def uniform_bound(self, rho: Fraction) -> Fraction:
        """sup over j and k >= d of |c_j(k)| / rho^j (exact upper bound)."""
        rho = Fraction(rho)
        return max(
            law.sup_abs(c, self.d) / rho**j
            for j, (c, law) in enumerate(zip(self.constant, self.perturbation), start=1)
        )


@dataclass(frozen=True)
class CharacteristicData:
    roots: Optional[RootSet]
    rho: "mpmath.mpf"
    degenerate: bool


@lru_cache(maxsize=4096)
def _char_data(constant: tuple, prec: int) -> CharacteristicData:
    if all(c == 0 for c in constant):
        return CharacteristicData(None, mpmath.mpf(0), True)
    poly = UniPoly([-c for c in reversed(constant)] + [Fraction(1)], "s")
    rs = poly_roots(poly, prec)
    return CharacteristicData(rs, rs.max_modulus(), False)


def characteristic_data(spec: RecurrenceSpec, prec: int = DEFAULT_PRECISION) -> CharacteristicData:
    """Characteristic roots of the constant part and rho = max |sigma_j|.

    An all-zero constant part is flagged ``degenerate`` with rho = 0.
    """
    return _char_data(spec.constant, prec)


# --------------------------------------------------------------------------
# sequences


@dataclass(frozen=True)
class CoefficientSequence:
    values: tuple
    spec: Optional[RecurrenceSpec] = None
    init: Optional[tuple] = None
    mode: str = EXACT
    provenance: dict = field(default_factory=dict, compare=False, hash=False)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __iter__(self):
        return iter(self.values)

    @property
    def horizon(self) -> int:
        return len(self.values) - 1

    def shifted(self, m: int) -> "CoefficientSequence":
        return CoefficientSequence(self.values[m:], None, None, self.mode, {"shift_of": m})


def external_sequence(values, mode: str = EXACT) -> CoefficientSequence:
    vals = tuple(exact(v) for v in values) if mode == EXACT else tuple(values)
    return CoefficientSequence(vals, mode=mode, provenance={"source": "external"})


def check_declared_bounds(spec: RecurrenceSpec, K: int, prec: int = DEFAULT_PRECISION) -> None:
    """Raise DeclaredBoundError if a declared bound fails for d <= k <= K."""
    d = spec.d
    if spec.declared_bounds is not None:
        Kd, rho = spec.declared_bounds
        for k in range(d, K + 1):
            for j in range(1, d + 1):
                if abs(spec.coefficient(j, k)) > Kd * rho**j:
                    raise DeclaredBoundError(f"|c_{j}({k})| exceeds declared K rho^j")
    if spec.delta is not None:
        rho = characteristic_data(spec, prec).rho
        slack = 1 + mpmath.mpf(2) ** (-(prec - 16))
        with mpmath.workprec(prec):
            for k in range(d, K + 1):
                dk = to_mp(spec.delta(k), prec)
                for j in range(1, d + 1):
                    if to_mp(abs(spec.perturbation[j - 1](k)), prec) > dk * rho**j * slack:
                        raise DeclaredBoundError(f"|psi_{j}({k})| exceeds delta_k rho^j")


def generate(
    spec: RecurrenceSpec,
    init: Sequence,
    K: int,
    mode: str = EXACT,
    prec: int = DEFAULT_PRECISION,
    check_bounds: bool = True,
) -> CoefficientSequence:
    """a_0..a_K from the d initial values."""
    d = spec.d
    if len(init) != d:
        raise ValueError(f"need {d} initial values, got {len(init)}")
    if K < d - 1:
        raise ValueError("horizon must reach at least the initial data")
    if check_bounds:
        check_declared_bounds(spec, K, prec)
    a = [convert(v, mode, prec) for v in init]
    const = spec.constant
    pert = spec.perturbation
    zero_pert = [isinstance(p, ZeroLaw) for p in pert]
    with mpmath.workprec(prec):
        for k in range(d, K + 1):
            acc = Fraction(0) if mode == EXACT else mpmath.mpc(0)
            for j in range(1, d + 1):
                c = const[j - 1] if zero_pert[j - 1] else const[j - 1] + pert[j - 1](k)
                if c:
                    prev = a[k - j]
                    if prev:
                        acc += (c if mode == EXACT else to_mp(c, prec)) * prev
            a.append(acc)
    return CoefficientSequence(tuple(a[: K + 1]), spec, tuple(init), mode, {"source": "generate", "K": K})


# --------------------------------------------------------------------------
# radius of convergence


@dataclass(frozen=True)
class RadiusEstimate:
    estimate: Optional[float]       # growth rate from the envelope fit (raw when too few points)
    nearest_modulus: Optional[float]
    gap: Optional[float]            # relative distance to nearest_modulus
    eventually_zero: bool
    window: int
    raw: Optional[float] = None     # max |a_k|^(1/k) over the trailing window
    raw_gap: Optional[float] = None

    @property
    def radius(self) -> Optional[float]:
        if self.estimate is None or self.estimate == 0:
            return None
        return 1.0 / self.estimate


def _envelope_rate(values, K: int, block: int = 8) -> Optional[float]:
    """exp(lambda) from log|a_k| ~ lambda k + c log k + b on the upper envelope.

    The envelope takes the largest |a_k| in consecutive blocks of [K/2, K],
    which discards cancellation dips when several roots share the top
    modulus.  The log k column absorbs polynomial factors k^c that bias the
    raw k-th root by about c log(K) / K.
    """
    pts = []
    for end in range(K, K // 2, -block):
        best = None
        for k in range(max(1, end - block + 1), end + 1):
            if values[k] != 0:
                lv = log_abs(values[k])
                if best is None or lv > best[1]:
                    best = (k, lv)
        if best is not None:
            pts.append(best)
    if len(pts) < 6:
        return None
    ks = np.array([k for k, _ in pts], dtype=float)
    ys = np.array([y for _, y in pts])
    X = np.column_stack([ks / K, np.log(ks / K), np.ones_like(ks)])
    coef, *_ = np.linalg.lstsq(X, ys, rcond=None)
    return math.exp(coef[0] / K)


def _nearest(est, moduli):
    if est is None or not moduli:
        return None, None
    nearest = min((float(m) for m in moduli), key=lambda m: abs(m - est))
    return nearest, (abs(est - nearest) / nearest if nearest else math.inf)


def radius_estimate(seq, window: Optional[int] = None, moduli: Optional[Sequence] = None) -> RadiusEstimate:
    """Trailing-window estimates of limsup |a_k|^(1/k).

    ``raw`` is the plain k-th root maximum over the last ``window`` terms;
    ``estimate`` is the envelope fit over [K/2, K] (see ``_envelope_rate``).
    ``moduli`` are candidate characteristic moduli to match against; by
    default they come from the generating spec when available.
    """
    values = seq.values if isinstance(seq, CoefficientSequence) else tuple(seq)
    K = len(values) - 1
    if window is None:
        window = max(10, K // 10)
    if K < window or K < 1:
        raise ValueError("sequence too short for the requested window")
    if moduli is None and isinstance(seq, CoefficientSequence) and seq.spec is not None:
        cd = characteristic_data(seq.spec)
        moduli = [] if cd.degenerate else [float(m) for m in cd.roots.moduli()]
    ks = [k for k in range(K - window + 1, K + 1) if k > 0 and values[k] != 0]
    if not ks:
        return RadiusEstimate(None, None, None, True, window)
    raw = max(math.exp(log_abs(values[k]) / k) for k in ks)
    est = _envelope_rate(values, K) or raw
    nearest, gap = _nearest(est, moduli)
    _, raw_gap = _nearest(raw, moduli)
    return RadiusEstimate(est, nearest, gap, False, window, raw, raw_gap)


# --------------------------------------------------------------------------
# fitting a bounded recurrence to a given sequence


@dataclass(frozen=True)
class FittedRecurrence:
    spec: RecurrenceSpec
    coefficients: tuple     # per k >= start: tuple c_1(k)..c_d(k)
    start: int
    rho: Fraction
    profile: Fraction        # sup_k max_j |c_j(k)| / rho^j


def fit_bounded_recurrence(seq, d: int, rho=Fraction(1), rank_tol: float = 1e-10) -> FittedRecurrence:
    """Step-by-step coefficients c(k) with a_k = sum_j c_j(k) a_{k-j}.

    Each c(k) minimises the weighted sup norm max_j |c_j| / rho^j over the
    solutions of the single linear constraint.  The minimiser is explicit,
    c_j = t rho^j conj(v_j)/|v_j| with t = |a_k| / sum_j rho^j |v_j|, and is
    rational for rational data, so the fitted profile never exceeds the bound
    of any recurrence that actually produced the sequence.
    Fails when d consecutive zeros are followed by a nonzero term.
    """
    values = seq.values if isinstance(seq, CoefficientSequence) else tuple(seq)
    rho = exact(rho)
    if rho <= 0:
        raise ValueError("rho must be positive")
    if len(values) <= d:
        raise ValueError("sequence must be longer than d")
    exact_mode = all(isinstance(v, (int, Fraction)) for v in values)
    scale = max((abs(v) for v in values), default=0)
    rows = []
    profile = Fraction(0)
    for k in range(d, len(values)):
        window = [values[k - j] for j in range(1, d + 1)]
        if exact_mode:
            mass = sum(rho**j * abs(v) for j, v in enumerate(window, start=1))
            degenerate = mass == 0
        else:
            mass = sum(to_mp(rho) ** j * abs(v) for j, v in enumerate(window, start=1))
            degenerate = mass <= rank_tol * to_mp(scale) if scale else True
        if degenerate:
            if values[k] != 0 and (exact_mode or abs(values[k]) > rank_tol * to_mp(scale)):
                raise RecurrenceFitError(f"no recurrence step reaches a_{k} from a zero window")
            cs = tuple(Fraction(0) if exact_mode else mpmath.mpc(0) for _ in range(d))
            t = Fraction(0)
        elif exact_mode:
            t = abs(values[k]) / mass
            sgn = 1 if values[k] >= 0 else -1
            cs = tuple(
                sgn * t * rho**j * (1 if v > 0 else -1) if v else Fraction(0)
                for j, v in enumerate(window, start=1)
            )
        else:
            t = abs(values[k]) / mass
            phase = values[k] / abs(values[k]) if values[k] else 1
            cs = tuple(
                phase * t * to_mp(rho) ** j * mpmath.conj(v) / abs(v) if v else mpmath.mpc(0)
                for j, v in enumerate(window, start=1)
            )
            t = ceil_rational(t)
        rows.append(cs)
        profile = max(profile, t)
    laws = tuple(
        TabulatedLaw(d, tuple(row[j] for row in rows), profile * rho ** (j + 1))
        for j in range(d)
    )
    spec = RecurrenceSpec((0,) * d, laws, declared_bounds=(profile, rho) if profile > 0 else None)
    return FittedRecurrence(spec, tuple(rows), d, rho, profile)


# --------------------------------------------------------------------------
# nonlinear Lipschitz families


@dataclass(frozen=True)
class LipschitzFamilyConfig:
    """Maps phi_k: C^{d+1} -> C with |phi_k(w)| <= C^k |w| on the ball |w| <= delta.

    ``|w|`` is the sup norm of the initial vector.
    """

    d: int
    C: Fraction
    delta: Fraction
    phi: Callable[[int, tuple], object]

    def __post_init__(self):
        object.__setattr__(self, "C", exact(self.C))
        object.__setattr__(self, "delta", exact(self.delta))
        if self.d < 0 or self.delta <= 0:
            raise ValueError("need d >= 0 and delta > 0")

    def spot_check(self, rng, samples: int, K: int) -> None:
        """Sample rational w in the delta-ball and check the growth bound."""
        for _ in range(samples):
            w = tuple(
                self.delta * Fraction(rng.randint(-1000, 1000), 1000) for _ in range(self.d + 1)
            )
            generate_lipschitz(self, w, K)


def _sup_norm(w) -> Fraction:
    return max(abs(x) for x in w)


def generate_lipschitz(cfg: LipschitzFamilyConfig, w: Sequence, K: int) -> CoefficientSequence:
    """a_i = w_i for i <= d, a_j = phi_j(w) for j > d, bound asserted per term."""
    w = tuple(exact(x) if isinstance(x, (int, str)) else x for x in w)
    if len(w) != cfg.d + 1:
        raise ValueError("initial vector must have length d + 1")
    norm = _sup_norm(w)
    if norm > cfg.delta:
        raise ValueError("initial vector lies outside the delta-ball")
    values = list(w[: K + 1])
    for k in range(cfg.d + 1, K + 1):
        ak = cfg.phi(k, w)
        if abs(ak) > cfg.C**k * norm:
            raise LipschitzBoundError(k, f"|phi_{k}(w)| exceeds C^k |w| at k={k}")
        values.append(ak)
    return CoefficientSequence(tuple(values), None, w, EXACT, {"source": "lipschitz", "K": K})


__all__ = [
    "CharacteristicData",
    "CoefficientLaw",
    "CoefficientSequence",
    "DeclaredBoundError",
    "FittedRecurrence",
    "GeometricLaw",
    "LipschitzBoundError",
    "LipschitzFamilyConfig",
    "PerturbationError",
    "RadiusEstimate",
    "RationalLaw",
    "RecurrenceFitError",
    "RecurrenceSpec",
    "TabulatedLaw",
    "UnboundedLawError",
    "ZERO",
    "ZeroLaw",
    "characteristic_data",
    "check_declared_bounds",
    "external_sequence",
    "fit_bounded_recurrence",
    "generate",
    "generate_lipschitz",
    "radius_estimate",
]
