"""Parametric series from non-stationary polynomial recurrences.

a_k(lambda) = P_k(a_{k-1}, ..., a_{k-d}) with P_k a polynomial in u whose
coefficients A_{k,alpha}(lambda) are polynomials in the parameters.  The
recurrence itself is a constructive proof that every a_k lies in the ideal
generated by a_0..a_{d-1}; ``ideal_witness`` records the cofactors.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence

from .core.multipoly import MultiPoly
from .domination import DominationCertificate, TabulatedRule
from .recurrence import RecurrenceSpec, TabulatedLaw, generate

WITNESS_CAP = 10**6


class ConstantTermError(ValueError):
    """P_k has a u-free term, so the ideal of a_0..a_{d-1} need not be preserved."""


class NonLinearError(ValueError):
    pass


class WitnessSizeError(RuntimeError):
    pass


Rule = Mapping[tuple, MultiPoly]    # u-exponent alpha (length d) -> A_{k,alpha}(lambda)


@dataclass(frozen=True)
class ParametricRecurrence:
    """P_k for k >= d, given as explicit rules (cycled) or a callable k -> rule."""

    d: int
    nvars: int
    rules: tuple = ()
    rule_fn: Optional[Callable[[int], Rule]] = None
    coefficient_bound: Optional[Fraction] = None
    names: Optional[tuple] = None

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("recurrence length must be positive")
        if not self.rules and self.rule_fn is None:
            raise ValueError("need rules or a rule function")

    def P(self, k: int) -> dict:
        if k < self.d:
            raise ValueError("P_k is defined for k >= d")
        rule = self.rule_fn(k) if self.rule_fn is not None else self.rules[(k - self.d) % len(self.rules)]
        out = {}
        for alpha, A in rule.items():
            alpha = tuple(alpha)
            if len(alpha) != self.d:
                raise ValueError(f"u-exponent {alpha} has wrong length for d={self.d}")
            A = A if isinstance(A, MultiPoly) else MultiPoly.constant(A, self.nvars, self.names)
            if A.is_zero():
                continue
            if sum(alpha) == 0:
                raise ConstantTermError(f"P_{k} has a u-constant term {A.to_str()}")
            out[alpha] = A
        return out

    def is_linear(self, K: int) -> bool:
        """Linear subclass up to step K: only u_j terms, coefficients homogeneous of degree 1."""
        for k in range(self.d, K + 1):
            for alpha, A in self.P(k).items():
                if sum(alpha) != 1 or any(sum(b) != 1 for b in A.terms):
                    return False
        return True

    def linear_coefficients(self, k: int) -> list:
        """A_{k,j,i} as a d x n table (linear subclass only)."""
        table = [[Fraction(0)] * self.nvars for _ in range(self.d)]
        for alpha, A in self.P(k).items():
            if sum(alpha) != 1 or any(sum(b) != 1 for b in A.terms):
                raise NonLinearError(f"P_{k} is outside the linear subclass")
            j = alpha.index(1)
            for beta, c in A.terms.items():
                table[j][beta.index(1)] = c
        return table

    @classmethod
    def linear(cls, tables: Sequence, nvars: int, **kw) -> "ParametricRecurrence":
        """From per-step d x n tables A_{k,j,i}, k = d, d+1, ... (cycled)."""
        rules = []
        d = len(tables[0])
        for table in tables:
            rule = {}
            for j, row in enumerate(table):
                A = sum((MultiPoly.var(i, nvars) * c for i, c in enumerate(row) if c), MultiPoly.zero(nvars))
                alpha = tuple(int(t == j) for t in range(d))
                rule[alpha] = A
            rules.append(rule)
        return cls(d, nvars, tuple(rules), **kw)


@dataclass(frozen=True)
class ParametricSeries:
    values: tuple               # a_0(lambda)..a_K(lambda)
    recurrence: Optional[ParametricRecurrence] = None
    provenance: dict = field(default_factory=dict, compare=False)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, k):
        return self.values[k]

    @property
    def degrees(self) -> tuple:
        return tuple(a.degree for a in self.values)

    @property
    def horizon(self) -> int:
        return len(self.values) - 1

    def specialize(self, point: Sequence) -> list:
        return [a(point) for a in self.values]


def _check_init(rec: ParametricRecurrence, init: Sequence) -> list:
    if len(init) != rec.d:
        raise ValueError(f"need {rec.d} initial polynomials, got {len(init)}")
    out = []
    for a in init:
        a = a if isinstance(a, MultiPoly) else MultiPoly.constant(a, rec.nvars, rec.names)
        if a.nvars != rec.nvars:
            raise ValueError("initial polynomial has the wrong number of parameters")
        out.append(a)
    return out


def _monomial(values: Sequence, k: int, alpha: tuple, skip: Optional[int], cache: dict) -> MultiPoly:
    """prod_j a_{k-j}^{alpha_j}, with one factor of u_skip removed."""
    nv = values[0].nvars
    acc = MultiPoly.constant(1, nv)
    for j, e in enumerate(alpha, start=1):
        if j == skip:
            e -= 1
        if e:
            key = (k - j, e)
            if key not in cache:
                cache[key] = values[k - j] ** e
            acc = acc * cache[key]
    return acc


def generate_parametric(rec: ParametricRecurrence, init: Sequence, K: int) -> ParametricSeries:
    a = _check_init(rec, init)
    cache: dict = {}
    for k in range(rec.d, K + 1):
        acc = MultiPoly.zero(rec.nvars, rec.names)
        for alpha, A in rec.P(k).items():
            acc = acc + A * _monomial(a, k, alpha, None, cache)
        a.append(acc)
    return ParametricSeries(tuple(a[: K + 1]), rec, {"source": "generate_parametric", "K": K})


def degree_bounds(rec: ParametricRecurrence, init: Sequence, K: int) -> list:
    """D_k = max_alpha (deg A_{k,alpha} + sum_j alpha_j D_{k-j}), an a-priori bound on deg a_k."""
    D = [a.degree if isinstance(a, MultiPoly) else (0 if a else -1) for a in init]
    for k in range(rec.d, K + 1):
        best = -1
        for alpha, A in rec.P(k).items():
            parts = [D[k - j] for j, e in enumerate(alpha, start=1) if e]
            if any(p < 0 for p in parts):
                continue  # a factor is identically zero
            best = max(best, A.degree + sum(e * D[k - j] for j, e in enumerate(alpha, start=1)))
        D.append(best)
    return D


# --------------------------------------------------------------------------
# ideal membership witnesses


@dataclass(frozen=True)
class IdealWitness:
    generators: tuple           # a_0..a_{d-1}
    cofactors: tuple            # cofactors[k] = (psi_0^k, ..., psi_{d-1}^k)
    index_bound: int            # the ideal is generated by the first index_bound coefficients
    verified: bool
    monomials: int              # total stored cofactor size

    def combination(self, k: int) -> MultiPoly:
        return sum((p * g for p, g in zip(self.cofactors[k], self.generators)),
                   MultiPoly.zero(self.generators[0].nvars))


def ideal_witness(rec: ParametricRecurrence, init: Sequence, K: int,
                  series: Optional[ParametricSeries] = None, cap: int = WITNESS_CAP) -> IdealWitness:
    """Cofactors psi_i^k with a_k = sum_{i<d} psi_i^k a_i for k <= K, checked exactly.

    Each monomial A u^alpha of P_k keeps one factor u_j = a_{k-j} as
    sum_i psi_i^{k-j} a_i and multiplies the rest into the cofactors.
    """
    d, nv = rec.d, rec.nvars
    ps = series or generate_parametric(rec, init, K)
    a = list(ps.values)
    zero = MultiPoly.zero(nv, rec.names)
    one = MultiPoly.constant(1, nv, rec.names)
    psi = [tuple(one if i == s else zero for i in range(d)) for s in range(d)]
    cache: dict = {}
    size = 0
    for k in range(d, K + 1):
        row = [zero] * d
        for alpha, A in rec.P(k).items():
            j = next(t for t, e in enumerate(alpha, start=1) if e)
            rest = A * _monomial(a, k, alpha, j, cache)
            row = [r + rest * p for r, p in zip(row, psi[k - j])]
        size += sum(len(r) for r in row)
        if size > cap:
            raise WitnessSizeError(f"cofactors exceed {cap} monomials at k={k}")
        psi.append(tuple(row))
    gens = tuple(a[:d])
    witness = IdealWitness(gens, tuple(psi), d, False, size)
    for k in range(K + 1):
        if witness.combination(k) != a[k]:
            raise AssertionError(f"witness identity fails at k={k}")
    return IdealWitness(gens, tuple(psi), d, True, size)


# --------------------------------------------------------------------------
# A_0 profile


@dataclass(frozen=True)
class A0Profile:
    K1: Fraction
    K2: Fraction
    K3: float
    K4: float
    norm: str = "max-coefficient"
    degree_at_most_k: Optional[bool] = None     # linear subclass with deg a_i = i initial data

    def holds(self, ps: ParametricSeries) -> bool:
        for k, a in enumerate(ps.values):
            if a.is_zero():
                continue
            if a.degree > self.K1 * k + self.K2:
                return False
            if math.log(a.norm_max()) > math.log(self.K3) + k * math.log(self.K4) + 1e-9 * (k + 1):
                return False
        return True


def _final_hull_slope(points: list):
    """Slope of the last edge of the upper convex hull (points sorted by x)."""
    hull: list = []
    for p in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (p[0] - x1) <= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    if len(hull) < 2:
        return 0
    (x1, y1), (x2, y2) = hull[-2], hull[-1]
    return (y2 - y1) / (x2 - x1)


def a0_profile(ps: ParametricSeries) -> A0Profile:
    """Degree line K1 k + K2 and norm growth K3 K4^k fitted to the generated terms.

    K1 and K4 come from the last edge of the upper hull of the data, K2 and
    K3 are then the least constants making both bounds hold for every k.
    """
    if ps.horizon < 4:
        raise ValueError("need at least a_0..a_4")
    nz = [(k, a) for k, a in enumerate(ps.values) if not a.is_zero()]
    if not nz:
        return A0Profile(Fraction(0), Fraction(0), 1.0, 1.0)
    K1 = max(Fraction(_final_hull_slope([(Fraction(k), Fraction(a.degree)) for k, a in nz])), Fraction(0))
    K2 = max(Fraction(a.degree) - K1 * k for k, a in nz)
    logs = [(float(k), math.log(a.norm_max())) for k, a in nz]
    log_k4 = max(_final_hull_slope(logs), 0.0)
    log_k3 = max(y - log_k4 * x for x, y in logs)
    rec = ps.recurrence
    prop3 = None
    if rec is not None and rec.is_linear(ps.horizon) and all(
        ps.values[i].degree <= i for i in range(rec.d)
    ):
        prop3 = all(a.degree <= k for k, a in enumerate(ps.values))
        if not prop3:
            raise AssertionError("linear recurrence produced deg a_k > k")
    return A0Profile(K1, K2, math.exp(log_k3), math.exp(log_k4), "max-coefficient", prop3)


# --------------------------------------------------------------------------
# coefficient recurrence


@dataclass(frozen=True)
class CoefficientCheck:
    checked: int
    max_residual: Fraction
    ok: bool


def coefficient_recurrence_check(ps: ParametricSeries, rec: Optional[ParametricRecurrence] = None) -> CoefficientCheck:
    """a_{k,beta} = sum_j sum_i A_{k,j,i} a_{k-j,beta[i]} for every k >= d and beta in play."""
    rec = rec or ps.recurrence
    if rec is None:
        raise ValueError("series carries no recurrence")
    if not rec.is_linear(ps.horizon):
        raise NonLinearError("coefficient recurrence needs the linear subclass")
    checked, worst = 0, Fraction(0)
    for k in range(rec.d, ps.horizon + 1):
        A = rec.linear_coefficients(k)
        betas = set(ps.values[k].terms)
        for j in range(1, rec.d + 1):
            for beta in ps.values[k - j].terms:
                for i in range(rec.nvars):
                    betas.add(beta[:i] + (beta[i] + 1,) + beta[i + 1:])
        for beta in betas:
            rhs = 0
            for j in range(1, rec.d + 1):
                prev = ps.values[k - j]
                for i in range(rec.nvars):
                    if beta[i] and A[j - 1][i]:
                        rhs += A[j - 1][i] * prev.coefficient(beta[:i] + (beta[i] - 1,) + beta[i + 1:])
            res = abs(ps.values[k].coefficient(beta) - rhs)
            worst = max(worst, res)
            checked += 1
    return CoefficientCheck(checked, worst, worst == 0)


# --------------------------------------------------------------------------
# specialization


def specialized_spec(rec: ParametricRecurrence, point: Sequence, K: int) -> RecurrenceSpec:
    """The numeric recurrence a_k = sum_j A_{k,j}(point) a_{k-j} for k <= K (linear subclass)."""
    d = rec.d
    cols = [[] for _ in range(d)]
    for k in range(d, K + 1):
        row = [Fraction(0)] * d
        for alpha, A in rec.P(k).items():
            if sum(alpha) != 1:
                raise NonLinearError(f"P_{k} is not linear in u")
            row[alpha.index(1)] = A(point)
        for j in range(d):
            cols[j].append(row[j])
    laws = tuple(TabulatedLaw(d, tuple(c)) for c in cols)
    return RecurrenceSpec((Fraction(0),) * d, laws)


@dataclass(frozen=True)
class UniformReport:
    N: int
    R: Fraction
    horizon: int
    constants: tuple            # per usable sample: max_{N<k<=h} |a_k| R^k / max_{i<=N} |a_i| R^i
    excluded: int               # samples on the zero locus of a_0..a_{d-1} with a nonzero tail
    identically_zero: int       # samples where the whole prefix vanishes
    profiles: tuple = field(default=(), compare=False)   # running maxima per sample

    @property
    def sup_C(self):
        return max(self.constants, default=Fraction(0))

    def sup_C_at(self, h: int):
        """sup over samples of the constant computed up to horizon h <= horizon."""
        idx = h - self.N - 1
        if idx < 0:
            return Fraction(0)
        return max((p[min(idx, len(p) - 1)] for p in self.profiles if p), default=Fraction(0))

    def certificate(self) -> DominationCertificate:
        """The empirical (N, R, sup C) as a constant-rule certificate."""
        from .domination import ConstantRule

        return DominationCertificate(self.N, self.R, ConstantRule(max(self.sup_C, Fraction(1))),
                                     {"method": "bautin-empirical", "samples": len(self.constants)})


def specialize_and_certify(ps: ParametricSeries, samples: Sequence, R, N: Optional[int] = None) -> UniformReport:
    """Smallest C making (N, R, C) hold on each sample over the series horizon.

    N defaults to d - 1 (the ideal is generated by a_0..a_{d-1}).  The sup
    over samples is a lower bound on any uniform constant.
    """
    R = Fraction(R)
    if N is None:
        if ps.recurrence is None:
            raise ValueError("pass N when the series has no recurrence")
        N = ps.recurrence.d - 1
    consts, profiles = [], []
    excluded = zero = 0
    for point in samples:
        vals = ps.specialize(point)
        M = max(abs(vals[i]) * R**i for i in range(N + 1))
        if M == 0:
            if any(v != 0 for v in vals[N + 1:]):
                excluded += 1
            else:
                zero += 1
            continue
        run, prof = Fraction(0), []
        for k in range(N + 1, len(vals)):
            run = max(run, abs(vals[k]) * R**k / M)
            prof.append(run)
        consts.append(run)
        profiles.append(tuple(prof))
    return UniformReport(N, R, ps.horizon, tuple(consts), excluded, zero, tuple(profiles))


# --------------------------------------------------------------------------
# random recurrences


def _random_poly(rng: random.Random, nvars: int, max_deg: int, coeff: int, exact_deg: Optional[int] = None,
                 homogeneous: bool = False) -> MultiPoly:
    terms = {}
    degs = [exact_deg] if homogeneous and exact_deg is not None else range((exact_deg if exact_deg is not None else max_deg) + 1)
    for _ in range(rng.randint(1, 3)):
        deg = rng.choice(list(degs))
        beta = [0] * nvars
        for _ in range(deg):
            beta[rng.randrange(nvars)] += 1
        terms[tuple(beta)] = rng.choice([c for c in range(-coeff, coeff + 1) if c])
    if exact_deg is not None and max((sum(b) for b in terms), default=-1) < exact_deg:
        beta = [0] * nvars
        beta[0] = exact_deg
        terms[tuple(beta)] = rng.choice([c for c in range(-coeff, coeff + 1) if c])
    return MultiPoly(terms, nvars)


def random_parametric(rng: random.Random, K: int, d: Optional[int] = None, nvars: Optional[int] = None,
                      linear: bool = False, u_degree: int = 2, nonlinear_steps: int = 2,
                      nonlinear_window: int = 6, coeff: int = 3):
    """(recurrence, init) with fully non-stationary P_d..P_K.

    Nonlinear u-monomials appear in at most ``nonlinear_steps`` steps, all
    within the first ``nonlinear_window`` steps; otherwise the degree in lambda
    doubles at every quadratic step and the sizes explode.
    """
    d = d or rng.randint(1, 3)
    nvars = nvars or rng.randint(1, 3)
    quad_steps = set()
    if not linear and u_degree >= 2:
        window = list(range(d, d + nonlinear_window))
        quad_steps = set(rng.sample(window, min(nonlinear_steps, len(window))))
    rules = []
    for k in range(d, K + 1):
        rule = {}
        for j in range(d):
            if rng.random() < 0.8 or j == 0:
                alpha = tuple(int(t == j) for t in range(d))
                if linear:
                    rule[alpha] = _random_poly(rng, nvars, 1, coeff, exact_deg=1, homogeneous=True)
                else:
                    rule[alpha] = _random_poly(rng, nvars, 1, coeff)
        if k in quad_steps:
            for _ in range(rng.randint(1, 2)):
                alpha = [0] * d
                for _ in range(rng.randint(2, u_degree)):
                    alpha[rng.randrange(d)] += 1
                rule[tuple(alpha)] = _random_poly(rng, nvars, 1, coeff)
        rules.append(rule)
    if linear:
        init = [_random_poly(rng, nvars, i, coeff, exact_deg=i) for i in range(d)]
    else:
        init = [_random_poly(rng, nvars, 2, coeff) for _ in range(d)]
    return ParametricRecurrence(d, nvars, tuple(rules)), init


__all__ = [
    "A0Profile",
    "CoefficientCheck",
    "ConstantTermError",
    "IdealWitness",
    "NonLinearError",
    "ParametricRecurrence",
    "ParametricSeries",
    "UniformReport",
    "WitnessSizeError",
    "a0_profile",
    "coefficient_recurrence_check",
    "degree_bounds",
    "generate_parametric",
    "ideal_witness",
    "random_parametric",
    "specialize_and_certify",
    "specialized_spec",
]
