"""Randomized acceptance batteries, one per acceptance criterion.

Each battery returns a ``BatteryResult`` with a pass flag, the counts
behind it and a one-line summary.  Runs are deterministic for a given seed.
"""

from __future__ import annotations

import functools
import inspect
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .abel import AbelEquation, oracle_agreement, poincare_coefficients, random_equation
from .bautin import (
    WitnessSizeError,
    coefficient_recurrence_check,
    degree_bounds,
    generate_parametric,
    ideal_witness,
    random_parametric,
)
from .core.poly import UniPoly
from .core.scalar import FLOAT, floor_rational
from .dfinite import (
    analyze_operator,
    builtin_family,
    companion_growth,
    companion_system,
    direct_moments,
    epsilon_sequence,
    moment_recurrence,
    scaled_family,
    spectrum_check,
    stieltjes_certificate,
    stieltjes_radius,
    vanishing_family_check,
)
from .domination import CertificateError, bounded_certificate_for, cert_poincare, cert_turan, verify
from .recurrence import (
    DeclaredBoundError,
    GeometricLaw,
    RationalLaw,
    RecurrenceSpec,
    TabulatedLaw,
    ZERO,
    characteristic_data,
    generate,
    radius_estimate,
)
from .zeros import NearContourZeroError, count_zeros, zero_bound

F = Fraction


@dataclass
class BatteryResult:
    criterion: int
    title: str
    passed: bool
    counts: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        detail = ", ".join(f"{k}={v}" for k, v in self.counts.items())
        return f"[{status}] criterion {self.criterion}: {self.title} ({detail}; {self.seconds:.1f}s)"

    def to_doc(self) -> dict:
        return {"criterion": self.criterion, "title": self.title, "passed": self.passed,
                "counts": {k: (str(v) if isinstance(v, Fraction) else v) for k, v in self.counts.items()},
                "failures": [str(f) for f in self.failures[:20]]}


# --------------------------------------------------------------------------
# random specs


def _rat(rng: random.Random, lo, hi, den: int = 4) -> Fraction:
    q = rng.randint(1, den)
    return F(rng.randint(math.ceil(lo * q), math.floor(hi * q)), q)


def random_constant_spec(rng: random.Random, max_d: int = 5, bound=5):
    d = rng.randint(1, max_d)
    cs = [_rat(rng, -bound, bound) for _ in range(d)]
    while cs[-1] == 0:
        cs[-1] = _rat(rng, -bound, bound)
    init = [_rat(rng, -5, 5) for _ in range(d)]
    if not any(init):
        init[0] = F(1)
    return RecurrenceSpec(tuple(cs)), init


def random_bounded_spec(rng: random.Random, K_max: int = 300, max_d: int = 5):
    """A spec in S with a declared pair (K, rho) that holds for k <= K_max."""
    d = rng.randint(1, max_d)
    rho = rng.choice([F(1, 2), F(1), F(3, 2), F(2)])
    Kd = rng.choice([F(1, 2), F(1), F(2), F(3)])
    if rng.random() < 0.5:
        # fully non-stationary coefficients drawn inside the declared box
        laws = []
        for j in range(1, d + 1):
            top = Kd * rho**j
            laws.append(TabulatedLaw(d, tuple(_rat(rng, -top, top, 8) for _ in range(K_max - d + 1)), top))
        spec = RecurrenceSpec((F(0),) * d, tuple(laws), declared_bounds=(Kd, rho))
    else:
        cs, laws = [], []
        for j in range(1, d + 1):
            top = Kd * rho**j
            c = _rat(rng, -top / 2, top / 2, 8)
            amp = _rat(rng, -top / 2, top / 2, 8)
            cs.append(c)
            laws.append(rng.choice([ZERO, RationalLaw.of([amp], [0, 1]), GeometricLaw(amp, F(1, 2)),
                                    GeometricLaw(amp, F(-1))]))
        spec = RecurrenceSpec(tuple(cs), tuple(laws), declared_bounds=(Kd, rho))
    init = [_rat(rng, -5, 5) for _ in range(d)]
    if not any(init):
        init[0] = F(1)
    return spec, init


def random_poincare_spec(rng: random.Random, max_d: int = 5, delta: bool = False):
    """S_P spec with psi_j in {c/k, c 2^-k}; with ``delta`` the Delta = {1/k} class."""
    spec, init = random_constant_spec(rng, max_d)
    d = spec.d
    if delta:
        rho_lo = floor_rational(characteristic_data(spec).rho, 20)
        laws = tuple(RationalLaw.of([_rat(rng, -1, 1, 4) * rho_lo**j], [0, 1]) for j in range(1, d + 1))
        return RecurrenceSpec(spec.constant, laws, delta=RationalLaw.of([1], [0, 1])), init
    laws = []
    for _ in range(d):
        c = rng.randint(-5, 5)
        laws.append(rng.choice([RationalLaw.of([c], [0, 1]), GeometricLaw(c, F(1, 2))]))
    return RecurrenceSpec(spec.constant, tuple(laws)), init


# --------------------------------------------------------------------------
# batteries


def _timed(fn: Callable[..., BatteryResult]) -> Callable[..., BatteryResult]:
    @functools.wraps(fn)
    def run(*args, **kw):
        t0 = time.perf_counter()
        res = fn(*args, **kw)
        res.seconds = time.perf_counter() - t0
        return res

    return run


@_timed
def battery_turan(seed: int = 1, runs: int = 500, K: int = 300) -> BatteryResult:
    """Turan certificates on random constant-coefficient specs."""
    rng = random.Random(seed)
    fails = []
    worst = 0.0
    for i in range(runs):
        spec, init = random_constant_spec(rng)
        rep = verify(generate(spec, init, K), cert_turan(spec), K)
        worst = max(worst, rep.worst_ratio)
        if not rep.passed:
            fails.append((i, spec.constant, rep.worst_k))
    return BatteryResult(1, "Turan soundness", not fails,
                         {"runs": runs, "failures": len(fails), "max_ratio": round(worst, 6)}, fails)


@_timed
def battery_bounded(seed: int = 2, runs: int = 500, K: int = 300) -> BatteryResult:
    """Bounded-class certificates with the declared (K, rho)."""
    rng = random.Random(seed)
    fails = []
    for i in range(runs):
        spec, init = random_bounded_spec(rng, K)
        Kd, rho = spec.declared_bounds
        rep = verify(generate(spec, init, K), bounded_certificate_for(spec, Kd, rho), K)
        if not rep.passed:
            fails.append((i, rep.worst_k))
    return BatteryResult(2, "Bounded-class soundness", not fails, {"runs": runs, "failures": len(fails)}, fails)


@_timed
def battery_poincare(seed: int = 3, runs: int = 300, K: int = 300) -> BatteryResult:
    """Poincare-class certificates, one third of them in the Delta = {1/k} variant."""
    rng = random.Random(seed)
    fails = []
    n_delta = 0
    for i in range(runs):
        use_delta = i % 3 == 2
        spec, init = random_poincare_spec(rng, delta=use_delta)
        n_delta += use_delta
        try:
            seq = generate(spec, init, K)
            cert = cert_poincare(spec, use_delta=use_delta)
        except (DeclaredBoundError, CertificateError) as exc:
            fails.append((i, f"setup: {exc}"))
            continue
        rep = verify(seq, cert, K)
        if not rep.passed:
            fails.append((i, rep.worst_k))
    return BatteryResult(3, "Poincare-class soundness", not fails,
                         {"runs": runs, "delta_runs": n_delta, "failures": len(fails)}, fails)


@_timed
def battery_radius(seed: int = 4, runs: int = 100, systems: int = 20, K: int = 500, tol: float = 0.02) -> BatteryResult:
    """Radius law: growth rate at K within tol of a characteristic modulus or |eig A|."""
    rng = random.Random(seed)
    fails, raw_fails, zero = [], 0, 0
    worst = 0.0
    for i in range(runs):
        spec, init = random_poincare_spec(rng)
        # the estimator is numeric, so 256-bit floats avoid exact denominator growth
        est = radius_estimate(generate(spec, init, K, mode=FLOAT))
        if est.eventually_zero:
            zero += 1
            continue
        worst = max(worst, est.gap)
        raw_fails += est.raw_gap > tol
        if est.gap > tol:
            fails.append(("spec", i, est.gap))
    members = (builtin_family() + scaled_family())[:systems]
    for m in members:
        system = companion_system(m.op, m.g.data(m.op.n))
        est = companion_growth(system, direct_moments(m.g, K + m.op.alpha + 2), K)
        if est.eventually_zero:
            zero += 1
            continue
        worst = max(worst, est.gap)
        raw_fails += est.raw_gap > tol
        if est.gap > tol:
            fails.append(("system", m.name, est.gap))
    return BatteryResult(4, "Radius law", not fails,
                         {"specs": runs, "systems": len(members), "eventually_zero": zero, "failures": len(fails),
                          "worst_gap": round(worst, 5), "raw_kth_root_misses": raw_fails}, fails)


@_timed
def battery_master_oracle(K: int = 100, tol: float = 1e-8) -> BatteryResult:
    """Moment recurrence, companion residual and spectrum on the built-in family."""
    fails = []
    family = builtin_family()
    worst_gap = 0.0
    for m in family:
        data = m.g.data(m.op.n)
        rec = moment_recurrence(m.op)
        mom = direct_moments(m.g, K + m.op.alpha + 2)
        if any(rec.residual(k, mom, data) != 0 for k in range(K + 1)):
            fails.append((m.name, "moment recurrence"))
        system = companion_system(m.op, data)
        eps = epsilon_sequence(rec, data, K + system.tau + 1)
        if any(any(v != 0 for v in system.step_residual(k, mom, eps)) for k in range(K)):
            fails.append((m.name, "companion residual"))
        ok, gap = spectrum_check(system, tol)
        worst_gap = max(worst_gap, float(gap))
        if not ok:
            fails.append((m.name, f"spectrum gap {float(gap):.3g}"))
    with_jumps = sum(1 for m in family if m.g.breaks)
    return BatteryResult(5, "D-finite master oracle", not fails and len(family) >= 10,
                         {"functions": len(family), "with_interior_jumps": with_jumps,
                          "failures": len(fails), "worst_spectrum_gap": f"{worst_gap:.2e}"}, fails)


@_timed
def battery_vanishing() -> BatteryResult:
    """Vanishing-moment bound against exact rank of the solution family's moment map."""
    fails = []
    members = [m for m in builtin_family() + scaled_family() if len(m.g.breaks) <= 1]
    for m in members:
        ok, bound, r, dim = vanishing_family_check(m.op, m.basis, m.g.points)
        if not ok:
            fails.append((m.name, bound, r, dim))
    return BatteryResult(6, "Vanishing-moment bound", not fails, {"operators": len(members), "failures": len(fails)}, fails)


@_timed
def battery_stieltjes(K_est: int = 500, K: int = 300, tol: float = 0.02) -> BatteryResult:
    """Stieltjes certificates and radius agreement with R*."""
    fails = []
    members = builtin_family()
    worst = 0.0
    for m in members:
        data = m.g.data(m.op.n)
        mom = direct_moments(m.g, K_est)
        cert = stieltjes_certificate(m.op, data, mom)
        R_star, _ = stieltjes_radius(analyze_operator(m.op, data))
        est = radius_estimate(mom, moduli=[1 / float(R_star)])
        gap = abs(est.radius - float(R_star)) / float(R_star) if est.radius else math.inf
        worst = max(worst, gap)
        if gap > tol:
            fails.append((m.name, "radius", gap))
        if not verify(mom, cert, K).passed:
            fails.append((m.name, "verify"))
    return BatteryResult(7, "Stieltjes certificate", not fails and len(members) >= 5,
                         {"functions": len(members), "failures": len(fails), "worst_radius_gap": round(worst, 5)}, fails)


@_timed
def battery_bautin(seed: int = 8, runs: int = 200, K: int = 30) -> BatteryResult:
    """Witness identities, degree bounds and the coefficient recurrence."""
    rng = random.Random(seed)
    fails = []
    n_linear = checked = 0
    for i in range(runs):
        linear = i % 2 == 0
        rec, init = random_parametric(rng, K, linear=linear)
        try:
            ps = generate_parametric(rec, init, K)
            ideal_witness(rec, init, K, series=ps)
        except (AssertionError, WitnessSizeError) as exc:
            fails.append((i, str(exc)))
            continue
        bounds = degree_bounds(rec, init, K)
        if any(a.degree > b for a, b in zip(ps.values, bounds)):
            fails.append((i, "degree bound"))
        if linear:
            n_linear += 1
            if any(a.degree > k for k, a in enumerate(ps.values)):
                fails.append((i, "deg a_k > k"))
            chk = coefficient_recurrence_check(ps)
            checked += chk.checked
            if not chk.ok:
                fails.append((i, "coefficient recurrence"))
    return BatteryResult(8, "Bautin witnesses", not fails,
                         {"runs": runs, "linear": n_linear, "coefficient_identities": checked, "failures": len(fails)},
                         fails)


@_timed
def battery_abel(seed: int = 9, runs: int = 50, K: int = 20) -> BatteryResult:
    """Truncated return map against the ODE oracle, plus the Riccati closed form."""
    rng = random.Random(seed)
    fails = []
    slopes = []
    riccati = poincare_coefficients(AbelEquation(UniPoly([1]), UniPoly([])), K)
    if any(riccati.v[k] != UniPoly([0, -1]) ** (k - 1) for k in range(1, K + 1)):
        fails.append(("riccati", "closed form"))
    exact_matches = 0
    for i in range(runs):
        eq = random_equation(rng)
        ag = oracle_agreement(eq, K)
        if ag.exact_match:
            exact_matches += 1
        elif ag.slope is not None:
            slopes.append(ag.slope)
        if not ag.passed:
            fails.append((i, ag.slope, ag.mismatches))
    return BatteryResult(9, "Abel consistency", not fails,
                         {"runs": runs, "min_slope": round(min(slopes), 3) if slopes else None,
                          "threshold": K + 0.5, "exact_matches": exact_matches, "failures": len(fails)}, fails)


@_timed
def battery_zero_bound(seed: int = 10, runs: int = 60, K: int = 100) -> BatteryResult:
    """Certified zero bounds never undercount the truncation; geometric-series limits."""
    rng = random.Random(seed)
    fails = []
    certified = skipped = 0
    for i in range(runs):
        spec, init = random_constant_spec(rng, max_d=4)
        seq = generate(spec, init, K)
        cert = cert_turan(spec)
        for frac in (F(1, 100), F(1, 20), F(1, 5)):
            Rp = cert.R * frac
            zb = zero_bound(cert, seq, Rp)
            if not zb.certified:
                continue
            certified += 1
            try:
                zc = count_zeros(list(seq), Rp)
            except NearContourZeroError:
                skipped += 1
                continue
            if zc.count > zb.N:
                fails.append((i, float(frac), zc.count, zb.N))
    geo = RecurrenceSpec((1,))
    gseq = generate(geo, [1], K)
    gcert = cert_turan(geo)
    near = zero_bound(gcert, gseq, gcert.R * F(1, 100))
    far = zero_bound(gcert, gseq, gcert.R * F(9, 10))
    if not near.certified:
        fails.append(("geometric", "0.01 not certified"))
    if far.certified:
        fails.append(("geometric", "0.9 claimed"))
    return BatteryResult(10, "Zero-bound soundness", not fails,
                         {"certified_runs": certified, "contour_skips": skipped, "geometric_0.01": near.certified,
                          "geometric_0.9": far.certified, "failures": len(fails)}, fails)


BATTERIES = {
    1: battery_turan,
    2: battery_bounded,
    3: battery_poincare,
    4: battery_radius,
    5: battery_master_oracle,
    6: battery_vanishing,
    7: battery_stieltjes,
    8: battery_bautin,
    9: battery_abel,
    10: battery_zero_bound,
}


def run_suite(only: Optional[list] = None, seed: Optional[int] = None, echo: Optional[Callable[[str], None]] = None) -> list:
    results = []
    for n, fn in BATTERIES.items():
        if only and n not in only:
            continue
        kwargs = {}
        if seed is not None and "seed" in inspect.signature(fn.__wrapped__).parameters:
            kwargs["seed"] = seed + n
        res = fn(**kwargs)
        results.append(res)
        if echo:
            echo(res.line())
    return results
