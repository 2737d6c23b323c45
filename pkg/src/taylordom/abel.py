"""Poincare coefficients of the Abel equation y' = p(x) y^2 + q(x) y^3.

The coefficients v_k(x) follow the differential recurrence
v_k' = -(k-1) p v_{k-1} - (k-2) q v_{k-2}, v_1 = 1, v_k(0) = 0, computed
exactly by antidifferentiation.  An interval [a, b] is translated to
[0, b - a] first.  ``ode_oracle`` integrates the equation numerically with
mpmath's Taylor-series solver so that the truncated return map can be
checked against the true flow.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from .core.poly import UniPoly
from .core.scalar import exact, to_mp
from .recurrence import CoefficientSequence
from .zeros import ZeroCount, count_zeros

DEFAULT_ORDER = 20

# which flow the truncated map sum_k v_k(x*) y^k reproduces; settled by
# ``orientation_probe`` (the map from x* back to the left endpoint)
ORIENTATION = "backward"


class DivergenceError(ArithmeticError):
    pass


class BlowUpError(ArithmeticError):
    pass


@dataclass(frozen=True)
class AbelEquation:
    p: UniPoly
    q: UniPoly
    a: Fraction = Fraction(0)
    b: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "a", exact(self.a))
        object.__setattr__(self, "b", exact(self.b))
        for name in ("p", "q"):
            v = getattr(self, name)
            if not isinstance(v, UniPoly):
                object.__setattr__(self, name, UniPoly(v))
        if self.b <= self.a:
            raise ValueError("need b > a")

    @property
    def length(self) -> Fraction:
        return self.b - self.a

    def normalized(self) -> "AbelEquation":
        """The same equation in t = x - a on [0, b - a]."""
        if self.a == 0:
            return self
        return AbelEquation(self.p.shift(self.a), self.q.shift(self.a), 0, self.b - self.a)


@dataclass(frozen=True)
class PoincareExpansion:
    v: tuple                    # v[k] for k = 0..K (v[0] = 0, v[1] = 1)
    equation: AbelEquation
    provenance: dict = field(default_factory=dict, compare=False)

    @property
    def K(self) -> int:
        return len(self.v) - 1

    def coefficients_at(self, x) -> list:
        """v_0(x)..v_K(x) with x in the original coordinate."""
        t = exact(x) - self.equation.a if isinstance(x, (int, Fraction)) else x - to_mp(self.equation.a)
        return [vk(t) for vk in self.v]

    def check(self) -> bool:
        """The defining recurrence, re-checked as polynomial identities."""
        eq = self.equation.normalized()
        if self.v[0] != 0 or self.v[1] != 1:
            return False
        for k in range(2, self.K + 1):
            rhs = eq.p * self.v[k - 1] * (-(k - 1)) + eq.q * self.v[k - 2] * (-(k - 2))
            if self.v[k].derivative() != rhs or self.v[k](Fraction(0)) != 0:
                return False
        return True


def poincare_coefficients(eq: AbelEquation, K: int = DEFAULT_ORDER) -> PoincareExpansion:
    if K < 2:
        raise ValueError("truncation order must be at least 2")
    n = eq.normalized()
    v = [UniPoly([]), UniPoly([1])]
    for k in range(2, K + 1):
        rhs = n.p * v[k - 1] * (-(k - 1)) + n.q * v[k - 2] * (-(k - 2))
        v.append(rhs.antiderivative())
    exp = PoincareExpansion(tuple(v), eq, {"translated_by": str(eq.a), "orientation": ORIENTATION})
    if not exp.check():
        raise AssertionError("stored coefficients violate the defining recurrence")
    return exp


def return_map_eval(exp: PoincareExpansion, x, y, tol: float = 1e-6):
    """sum_{k=1}^K v_k(x) y^k.

    Raises DivergenceError when the last term is not below ``tol`` times
    the running sum (a heuristic for y outside the convergence disk).
    """
    cs = exp.coefficients_at(x)
    if y == 0:
        return 0 * y
    total = 0 * y
    power = y
    for k in range(1, exp.K + 1):
        total += cs[k] * power
        power *= y
    last = abs(cs[exp.K] * y**exp.K)
    if last > tol * abs(total):
        raise DivergenceError(f"last term {float(last):.3g} is not small against the sum {float(abs(total)):.3g}")
    return total


# --------------------------------------------------------------------------
# numerical oracle


def ode_oracle(eq: AbelEquation, y_init, direction: str = "forward", x_end=None, x_start=None,
               dps: int = 30):
    """y at the far end of [x_start, x_end] (default [a, b]) by Taylor-series integration.

    ``direction`` "forward" starts at x_start and integrates to x_end;
    "backward" starts at x_end and integrates to x_start.
    """
    lo = eq.a if x_start is None else exact(x_start)
    hi = eq.b if x_end is None else exact(x_end)
    if direction not in ("forward", "backward"):
        raise ValueError("direction must be 'forward' or 'backward'")
    with mpmath.workdps(dps):
        y0 = mpmath.mpf(y_init) if not isinstance(y_init, Fraction) else to_mp(y_init, int(dps * 3.33) + 8)
        if y0 == 0:
            return mpmath.mpf(0)
        pc = [to_mp(c, int(dps * 3.33) + 8) for c in eq.p.coeffs]
        qc = [to_mp(c, int(dps * 3.33) + 8) for c in eq.q.coeffs]
        L = to_mp(hi - lo, int(dps * 3.33) + 8)
        x0 = to_mp(lo, int(dps * 3.33) + 8) if direction == "forward" else to_mp(hi, int(dps * 3.33) + 8)
        sign = 1 if direction == "forward" else -1

        def rhs(s, y):
            x = x0 + sign * s
            return sign * (mpmath.polyval(pc[::-1], x) * y**2 + mpmath.polyval(qc[::-1], x) * y**3) if pc or qc else 0 * y

        try:
            sol = mpmath.odefun(rhs, 0, y0)
            out = sol(L)
        except (ZeroDivisionError, OverflowError, ValueError) as err:
            raise BlowUpError(f"integration failed: {err}") from err
        if not mpmath.isfinite(out) or abs(out) > 10 ** (dps // 2):
            raise BlowUpError("solution blows up on the interval")
        return +out


def orientation_probe(eq: AbelEquation, y=Fraction(1, 1000), K: int = 12, dps: int = 60) -> dict:
    """Mismatch of the truncated map against the forward flow a -> b and the backward flow b -> a.

    The backward flow is the compositional inverse of the forward one, so
    these two cases cover the possible readings.  Used once to settle
    ``ORIENTATION``.
    """
    exp = poincare_coefficients(eq, K)
    with mpmath.workdps(dps):
        ym = to_mp(y, int(dps * 3.33))
        G = return_map_eval(exp, eq.b, ym, tol=1.0)
        out = {d: abs(G - ode_oracle(eq, ym, d, dps=dps)) for d in ("forward", "backward")}
    best = min(out, key=out.get)
    return {"mismatch": {k: float(v) for k, v in out.items()}, "best": best}


@dataclass(frozen=True)
class OracleAgreement:
    ys: tuple
    mismatches: tuple
    slope: Optional[float]      # least-squares slope of log mismatch against log y
    K: int
    exact_match: bool = False   # all mismatches below the oracle's resolution

    @property
    def passed(self) -> bool:
        return self.exact_match or (self.slope is not None and self.slope >= self.K + 1 - 0.5)


def oracle_agreement(eq: AbelEquation, K: int = DEFAULT_ORDER, ys: Sequence = (Fraction(1, 10**2), Fraction(1, 10**3), Fraction(1, 10**4)),
                     guard_digits: int = 25) -> OracleAgreement:
    """Compare the truncated map with the matching ODE flow at several y.

    The oracle runs at a precision chosen so that its error sits well below
    |y|^(K+1), the size of the expected truncation mismatch.
    """
    exp = poincare_coefficients(eq, K)
    direction = "backward" if ORIENTATION == "backward" else "forward"
    mism, logs = [], []
    floors = []
    for y in ys:
        y = exact(y)
        dps = int((K + 1) * -math.log10(abs(y))) + guard_digits
        with mpmath.workdps(dps):
            ym = to_mp(y, int(dps * 3.33) + 8)
            G = return_map_eval(exp, eq.b, ym, tol=1.0)
            ref = ode_oracle(eq, ym, direction, dps=dps)
            m = abs(G - ref)
            floor = abs(ym) * mpmath.mpf(10) ** (-(dps - 5))
        mism.append(float(m) if m > 0 else 0.0)
        floors.append(m <= floor)
        if m > floor:
            logs.append((math.log(abs(float(y))), float(mpmath.log(m))))
    if all(floors):
        return OracleAgreement(tuple(ys), tuple(mism), None, K, exact_match=True)
    if len(logs) < 2:
        return OracleAgreement(tuple(ys), tuple(mism), None, K)
    xs, ls = zip(*logs)
    mx, my = sum(xs) / len(xs), sum(ls) / len(ls)
    slope = sum((a - mx) * (b - my) for a, b in zip(xs, ls)) / sum((a - mx) ** 2 for a in xs)
    return OracleAgreement(tuple(ys), tuple(mism), slope, K)


def group_property_probe(eq: AbelEquation, c, y, dps: int = 40) -> float:
    """|flow[c, b](flow[a, c](y)) - flow[a, b](y)| for the numeric oracle."""
    c = exact(c)
    if not eq.a < c < eq.b:
        raise ValueError("need a < c < b")
    with mpmath.workdps(dps):
        mid = ode_oracle(eq, y, "forward", x_start=eq.a, x_end=c, dps=dps)
        two = ode_oracle(eq, mid, "forward", x_start=c, x_end=eq.b, dps=dps)
        one = ode_oracle(eq, y, "forward", dps=dps)
        return float(abs(two - one))


# --------------------------------------------------------------------------
# moments and fixed points


def moment_like(eq: AbelEquation, K: int) -> CoefficientSequence:
    """m_k = int_a^b P(x)^k q(x) dx with P the antiderivative of p vanishing at a."""
    P = eq.p.antiderivative()
    P = P - P(eq.a)
    vals = []
    power = UniPoly([1])
    for _ in range(K + 1):
        vals.append((power * eq.q).integrate(eq.a, eq.b))
        power = power * P
    return CoefficientSequence(tuple(vals), mode="exact", provenance={"source": "abel-moments", "P(a)": 0})


@dataclass(frozen=True)
class FixedPointCount:
    count: Optional[ZeroCount]
    K: int
    center: bool                # G(y) - y vanishes identically up to order K
    leading_order: Optional[int]


def fixed_point_count(exp: PoincareExpansion, x, r) -> FixedPointCount:
    """Zeros of the truncated G(y) - y in |y| < r."""
    cs = exp.coefficients_at(x)
    coeffs = [Fraction(0), Fraction(0)] + list(cs[2:])
    nz = [k for k, c in enumerate(coeffs) if c != 0]
    if not nz:
        return FixedPointCount(None, exp.K, True, None)
    return FixedPointCount(count_zeros(coeffs, r), exp.K, False, nz[0])


def random_equation(rng: random.Random, max_degree: int = 3, coeff: int = 2, den: int = 2) -> AbelEquation:
    def poly():
        deg = rng.randint(0, max_degree)
        return UniPoly([Fraction(rng.randint(-coeff * den, coeff * den), den) for _ in range(deg + 1)])

    return AbelEquation(poly(), poly(), 0, 1)


__all__ = [
    "AbelEquation",
    "BlowUpError",
    "DivergenceError",
    "FixedPointCount",
    "ORIENTATION",
    "OracleAgreement",
    "PoincareExpansion",
    "fixed_point_count",
    "group_property_probe",
    "moment_like",
    "ode_oracle",
    "oracle_agreement",
    "orientation_probe",
    "poincare_coefficients",
    "random_equation",
    "return_map_eval",
]
