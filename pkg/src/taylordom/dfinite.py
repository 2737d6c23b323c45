"""Moments of piecewise D-finite functions.

For g annihilated by Op = sum_j p_j(x) D^j between jump points, integrating
x^k Op g by parts on every piece gives

    sum_{l=-n}^{alpha} q_l(k) m_{k+l} = eps_k,
    q_l(k) = sum_{i-j=l} a_{i,j} (-1)^j (k+i)_j,
    eps_k = sum_s sum_{i,j} a_{i,j} sum_{t<j} (-1)^t (k+i)_t x_s^{k+i-t} J_s^(j-1-t),

where (m)_j is the falling factorial and J_s^(r) = g^(r)(x_s+) - g^(r)(x_s-)
with g taken as 0 outside [a, b].  Everything here is exact over the
rationals except root finding and the exponential-polynomial quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

import mpmath

from .core.linalg import rank
from .core.poly import UniPoly, cauchy_root_bound, falling_factorial
from .core.roots import eigenvalues, match_multisets, poly_roots
from .core.scalar import DEFAULT_PRECISION, exact, floor_rational, to_mp
from .domination import CertificateError, DominationCertificate, tabulated_certificate
from .recurrence import CoefficientSequence, RadiusEstimate, radius_estimate

K_POLY = UniPoly([0, 1], "k")


class OperatorError(ValueError):
    pass


# --------------------------------------------------------------------------
# operators


@dataclass(frozen=True)
class DifferentialOperator:
    """Op = sum_j p_j(x) (d/dx)^j with polynomial p_j (index = order)."""

    coeffs: tuple

    def __post_init__(self):
        cs = tuple(c if isinstance(c, UniPoly) else UniPoly([exact(x) for x in c]) for c in self.coeffs)
        while cs and cs[-1].is_zero():
            cs = cs[:-1]
        if not cs:
            raise OperatorError("operator has no nonzero coefficient")
        object.__setattr__(self, "coeffs", cs)

    @property
    def n(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> UniPoly:
        return self.coeffs[-1]

    def degrees(self) -> dict:
        """d_j for every present (nonzero) p_j."""
        return {j: p.degree for j, p in enumerate(self.coeffs) if not p.is_zero()}

    def alphas(self) -> dict:
        return {j: d - j for j, d in self.degrees().items()}

    @property
    def alpha(self) -> int:
        return max(self.alphas().values())

    def a(self, i: int, j: int) -> Fraction:
        return self.coeffs[j].coeff(i) if j < len(self.coeffs) else Fraction(0)

    def apply(self, g: UniPoly) -> UniPoly:
        return sum((p * g.derivative(j) for j, p in enumerate(self.coeffs)), UniPoly([]))

    def rescaled(self, c) -> "DifferentialOperator":
        """Operator annihilating x -> g(x/c) when self annihilates g."""
        c = exact(c)
        inv = UniPoly([0, 1 / c])
        return DifferentialOperator(tuple(p.compose(inv) * c**j for j, p in enumerate(self.coeffs)))

    def __str__(self):
        return " + ".join(f"({p})D^{j}" for j, p in enumerate(self.coeffs) if not p.is_zero())


# --------------------------------------------------------------------------
# piecewise test functions


@dataclass(frozen=True)
class PolyPiece:
    poly: UniPoly

    def derivative_at(self, r: int, x):
        return self.poly.derivative(r)(x) if r else self.poly(x)

    def rescaled(self, c) -> "PolyPiece":
        return PolyPiece(self.poly.compose(UniPoly([0, 1 / exact(c)])))


@dataclass(frozen=True)
class ExpPolyPiece:
    """poly(x) * exp(rate * x) with rational rate."""

    poly: UniPoly
    rate: Fraction

    def derivative_at(self, r: int, x, prec: int = DEFAULT_PRECISION):
        # (d/dx)^r [P e^{cx}] = e^{cx} sum_i C(r,i) c^(r-i) P^(i)
        s = sum(
            (math.comb(r, i) * self.rate ** (r - i) * self.poly.derivative(i)(Fraction(x)) for i in range(r + 1)),
            Fraction(0),
        )
        with mpmath.workprec(prec):
            return to_mp(s, prec) * mpmath.exp(to_mp(self.rate * Fraction(x), prec))


@dataclass(frozen=True)
class PiecewiseData:
    """Jump points a = x_0 < ... < x_{p+1} = b and derivative jumps there.

    ``jumps[s][r]`` is g^(r)(x_s+) - g^(r)(x_s-) with g = 0 outside [a, b];
    ``left``/``right`` hold the one-sided values themselves.
    """

    points: tuple
    left: tuple
    right: tuple

    @property
    def a(self):
        return self.points[0]

    @property
    def b(self):
        return self.points[-1]

    @property
    def p(self) -> int:
        return len(self.points) - 2

    @cached_property
    def jumps(self) -> tuple:
        return tuple(tuple(r - l for l, r in zip(ls, rs)) for ls, rs in zip(self.left, self.right))

    def is_exact(self) -> bool:
        return all(isinstance(v, Fraction) for row in self.left + self.right for v in row)


@dataclass(frozen=True)
class PiecewiseFunction:
    a: Fraction
    b: Fraction
    breaks: tuple     # interior jump points
    pieces: tuple     # len(breaks) + 1 pieces

    def __post_init__(self):
        object.__setattr__(self, "a", exact(self.a))
        object.__setattr__(self, "b", exact(self.b))
        br = tuple(exact(x) for x in self.breaks)
        object.__setattr__(self, "breaks", br)
        pts = (self.a,) + br + (self.b,)
        if any(u >= v for u, v in zip(pts, pts[1:])):
            raise ValueError("jump points must be strictly increasing inside [a, b]")
        if len(self.pieces) != len(br) + 1:
            raise ValueError("need one piece per subinterval")

    @classmethod
    def polynomial(cls, a, b, breaks, polys) -> "PiecewiseFunction":
        return cls(a, b, tuple(breaks), tuple(PolyPiece(p if isinstance(p, UniPoly) else UniPoly(p)) for p in polys))

    @property
    def points(self) -> tuple:
        return (self.a,) + self.breaks + (self.b,)

    def data(self, n: int) -> PiecewiseData:
        pts = self.points
        left, right = [], []
        for s, x in enumerate(pts):
            lp = self.pieces[s - 1] if s > 0 else None
            rp = self.pieces[s] if s < len(self.pieces) else None
            left.append(tuple(lp.derivative_at(r, x) if lp else Fraction(0) for r in range(n)))
            right.append(tuple(rp.derivative_at(r, x) if rp else Fraction(0) for r in range(n)))
        return PiecewiseData(pts, tuple(left), tuple(right))

    def is_polynomial(self) -> bool:
        return all(isinstance(pc, PolyPiece) for pc in self.pieces)

    def rescaled(self, c) -> "PiecewiseFunction":
        c = exact(c)
        if c <= 0:
            raise ValueError("scale must be positive")
        return PiecewiseFunction(self.a * c, self.b * c, tuple(x * c for x in self.breaks),
                                 tuple(pc.rescaled(c) for pc in self.pieces))


# --------------------------------------------------------------------------
# the moment recurrence


@dataclass(frozen=True)
class MomentRecurrence:
    op: DifferentialOperator
    q: dict                 # l -> UniPoly in k, for l = -n..alpha
    template: tuple         # (i, j, t, a_ij): weight a_ij (-1)^t (k+i)_t x^(k+i-t) J^(j-1-t)

    @property
    def lo(self) -> int:
        return -self.op.n

    @property
    def hi(self) -> int:
        return self.op.alpha

    def epsilon(self, k: int, data: PiecewiseData):
        total = Fraction(0) if data.is_exact() else mpmath.mpf(0)
        for i, j, t, aij in self.template:
            e = k + i - t
            if e < 0:
                continue  # the falling factorial (k+i)_t vanishes here
            ff = falling_factorial(Fraction(k + i), t)
            if ff == 0:
                continue
            w = aij * (-1) ** t * ff
            for x, J in zip(data.points, data.jumps):
                jv = J[j - 1 - t]
                if jv:
                    total += w * Fraction(x) ** e * jv
        return total

    def residual(self, k: int, moments: Sequence, data: PiecewiseData):
        """sum_l q_l(k) m_{k+l} - eps_k with m_i = 0 for i < 0."""
        acc = Fraction(0) if data.is_exact() else mpmath.mpf(0)
        for l, ql in self.q.items():
            idx = k + l
            if idx < 0:
                continue
            c = ql(Fraction(k))
            if c:
                acc += c * moments[idx]
        return acc - self.epsilon(k, data)


def moment_recurrence(op: DifferentialOperator) -> MomentRecurrence:
    n = op.n
    q = {l: UniPoly([], "k") for l in range(-n, op.alpha + 1)}
    template = []
    for j, p in enumerate(op.coeffs):
        for i, aij in enumerate(p.coeffs):
            if aij == 0:
                continue
            q[i - j] = q[i - j] + falling_factorial(K_POLY + i, j) * (aij * (-1) ** j)
            for t in range(j):
                template.append((i, j, t, aij))
    return MomentRecurrence(op, q, tuple(template))


# --------------------------------------------------------------------------
# analysis


@dataclass(frozen=True)
class OperatorAnalysis:
    poincare_ok: bool
    fuchsian: bool
    fuchsian_detail: str
    Z_A: tuple              # (value, multiplicity) pairs; jump points then roots of p_n
    tau: int
    alpha: int
    indicial: UniPoly
    Lambda: int
    d_n: int
    n: int


def _integer_roots(poly: UniPoly) -> list:
    if poly.degree < 1:
        return []
    bound = math.floor(cauchy_root_bound(poly))
    return [m for m in range(-bound, bound + 1) if poly(Fraction(m)) == 0]


def _vanishing_order(p: UniPoly, xi, prec: int, limit: int) -> int:
    """Order of vanishing of p at a numerically known root xi (capped at ``limit``)."""
    scale = sum(abs(to_mp(c, prec)) for c in p.coeffs) * (1 + abs(xi)) ** max(p.degree, 0)
    tol = mpmath.mpf(10) ** -30 * scale
    for r in range(limit):
        v = p.derivative(r)
        val = sum(to_mp(c, prec) * xi**i for i, c in enumerate(v.coeffs)) if not v.is_zero() else 0
        if abs(val) / math.factorial(r) > tol:
            return r
    return limit


def fuchsian_check(op: DifferentialOperator, prec: int = DEFAULT_PRECISION) -> tuple:
    """(is_fuchsian, detail): regular singular at every root of p_n and at infinity."""
    alphas = op.alphas()
    n = op.n
    if any(a > alphas[n] for a in alphas.values()):
        return False, "irregular singularity at infinity"
    if op.leading.degree >= 1:
        with mpmath.workprec(prec):
            for root in poly_roots(op.leading, prec).roots:
                for j, p in enumerate(op.coeffs[:-1]):
                    need = root.multiplicity - (n - j)
                    if need > 0 and not p.is_zero():
                        if _vanishing_order(p, root.value, prec, need) < need:
                            return False, f"irregular singularity at x = {mpmath.nstr(root.value, 12)}"
    return True, "regular singular points only"


def analyze_operator(op: DifferentialOperator, data: PiecewiseData, prec: int = DEFAULT_PRECISION) -> OperatorAnalysis:
    alphas = op.alphas()
    n = op.n
    poincare_ok = all(alphas[n] >= a for a in alphas.values())
    fuchs, detail = fuchsian_check(op, prec)
    rec = moment_recurrence(op)
    indicial = rec.q[op.alpha]
    positive = [m for m in _integer_roots(indicial) if m > 0]
    zs = [(Fraction(x), n) for x in data.points]
    if op.leading.degree >= 1:
        zs += [(r.value, r.multiplicity) for r in poly_roots(op.leading, prec).roots]
    return OperatorAnalysis(
        poincare_ok, fuchs, detail, tuple(zs), n * (data.p + 2), op.alpha,
        indicial, max(positive, default=0), op.leading.degree, n,
    )


# --------------------------------------------------------------------------
# companion system


def _poly_limit_ratio(num: UniPoly, den: UniPoly) -> Optional[Fraction]:
    if num.is_zero() or num.degree < den.degree:
        return Fraction(0)
    if num.degree == den.degree:
        return num.leading / den.leading
    return None


def annihilator(points: Sequence, n: int) -> list:
    """c_0..c_{tau-1} with eps_{k+tau} = sum_i c_i eps_{k+i}, from prod (E - x_s)^n."""
    poly = UniPoly([1], "E")
    for x in points:
        poly = poly * UniPoly([-Fraction(x), 1], "E") ** n
    tau = poly.degree
    return [-poly.coeff(i) for i in range(tau)]


@dataclass(frozen=True)
class MomentSystem:
    """L(k) w(k+1) = M(k) w(k) with w(k) = (m_{k-n}..m_{k+alpha-1}, eps_k..eps_{k+tau-1}).

    L is the identity except for q_alpha(k) in the last moment row, so no
    division is needed even where q_alpha(k) vanishes.  ``A`` is the limit of
    L(k)^-1 M(k) (None when the coefficients do not converge).
    """

    recurrence: MomentRecurrence
    data: PiecewiseData
    m_dim: int
    tau: int
    ann: tuple
    A: Optional[tuple]
    poincare_ok: bool

    @property
    def dim(self) -> int:
        return self.m_dim + self.tau

    def L_M(self, k: int):
        D, md = self.dim, self.m_dim
        n = self.recurrence.op.n
        alpha = self.recurrence.hi
        Ldiag = [Fraction(1)] * D
        M = [[Fraction(0)] * D for _ in range(D)]
        for u in range(md - 1):
            M[u][u + 1] = Fraction(1)
        if md:
            last = md - 1
            Ldiag[last] = self.recurrence.q[alpha](Fraction(k))
            for l in range(-n, alpha):
                M[last][l + n] = -self.recurrence.q[l](Fraction(k))
            M[last][md] = Fraction(1)
        for v in range(self.tau - 1):
            M[md + v][md + v + 1] = Fraction(1)
        for i, c in enumerate(self.ann):
            M[md + self.tau - 1][md + i] = c
        return Ldiag, M

    def state(self, k: int, moments: Sequence, eps: Sequence) -> list:
        n = self.recurrence.op.n
        ms = [moments[k - n + u] if k - n + u >= 0 else Fraction(0) for u in range(self.m_dim)]
        return ms + [eps[k + v] for v in range(self.tau)]

    def step_residual(self, k: int, moments, eps) -> list:
        Ldiag, M = self.L_M(k)
        w0, w1 = self.state(k, moments, eps), self.state(k + 1, moments, eps)
        return [Ldiag[r] * w1[r] - sum(M[r][c] * w0[c] for c in range(self.dim) if M[r][c]) for r in range(self.dim)]

    def B(self, k: int) -> Optional[list]:
        """B(k) = L(k)^-1 M(k) - A, or None where q_alpha(k) = 0 or A is undefined."""
        if self.A is None:
            return None
        Ldiag, M = self.L_M(k)
        if any(d == 0 for d in Ldiag):
            return None
        return [[M[r][c] / Ldiag[r] - self.A[r][c] for c in range(self.dim)] for r in range(self.dim)]

    def eigenvalues(self, prec: int = DEFAULT_PRECISION) -> list:
        if self.A is None:
            raise OperatorError("no limit matrix for a non-Poincare system")
        return eigenvalues([list(row) for row in self.A], prec)

    def expected_spectrum(self, prec: int = DEFAULT_PRECISION) -> list:
        """Roots of p_n (with multiplicity) and each jump point n times."""
        out = []
        lead = self.recurrence.op.leading
        if lead.degree >= 1:
            out += poly_roots(lead, prec).values()
        n = self.recurrence.op.n
        for x in self.data.points:
            out += [mpmath.mpc(to_mp(x, prec))] * n
        return out


def companion_system(op: DifferentialOperator, data: PiecewiseData) -> MomentSystem:
    rec = moment_recurrence(op)
    n, alpha = op.n, op.alpha
    md = alpha + n
    ann = tuple(annihilator(data.points, n))
    tau = len(ann)
    alphas = op.alphas()
    ok = all(alphas[n] >= a for a in alphas.values())
    D = md + tau
    A = None
    limits = {}
    for l in range(-n, alpha):
        limits[l] = _poly_limit_ratio(rec.q[l], rec.q[alpha])
    eps_lim = _poly_limit_ratio(UniPoly([1], "k"), rec.q[alpha])
    if all(v is not None for v in limits.values()):
        rows = [[Fraction(0)] * D for _ in range(D)]
        for u in range(md - 1):
            rows[u][u + 1] = Fraction(1)
        if md:
            for l, v in limits.items():
                rows[md - 1][l + n] = -v
            rows[md - 1][md] = eps_lim
        for v in range(tau - 1):
            rows[md + v][md + v + 1] = Fraction(1)
        for i, c in enumerate(ann):
            rows[md + tau - 1][md + i] = c
        A = tuple(tuple(r) for r in rows)
    return MomentSystem(rec, data, md, tau, ann, A, ok)


def spectrum_check(system: MomentSystem, tol: float = 1e-8, prec: int = DEFAULT_PRECISION) -> tuple:
    """(ok, worst gap) between eig(A) and the expected spectrum."""
    return match_multisets(system.eigenvalues(prec), system.expected_spectrum(prec), tol)


def companion_growth(system: MomentSystem, moments: Sequence, K: int,
                     prec: int = DEFAULT_PRECISION) -> RadiusEstimate:
    """Growth rate of the max norm of w(k), k <= K, matched against |eig(A)|."""
    eps = epsilon_sequence(system.recurrence, system.data, K + system.tau)
    norms = [max((abs(v) for v in system.state(k, moments, eps)), default=0) for k in range(K + 1)]
    mods = [float(abs(z)) for z in system.eigenvalues(prec)]
    return radius_estimate(norms, moduli=mods)


# --------------------------------------------------------------------------
# direct moments


def _poly_moment(poly: UniPoly, u: Fraction, v: Fraction, k: int) -> Fraction:
    return sum(
        (c * (v ** (k + i + 1) - u ** (k + i + 1)) / (k + i + 1) for i, c in enumerate(poly.coeffs)),
        Fraction(0),
    )


@dataclass(frozen=True)
class MomentSequence(CoefficientSequence):
    error_bound: Optional[float] = None


def direct_moments(g: PiecewiseFunction, K: int, prec: int = DEFAULT_PRECISION) -> MomentSequence:
    """m_k = int_a^b x^k g(x) dx for k = 0..K.

    Exact for polynomial pieces; exponential-polynomial pieces use
    high-precision quadrature and report an error estimate.
    """
    pts = g.points
    if g.is_polynomial():
        vals = tuple(
            sum((_poly_moment(pc.poly, pts[s], pts[s + 1], k) for s, pc in enumerate(g.pieces)), Fraction(0))
            for k in range(K + 1)
        )
        return MomentSequence(vals, mode="exact", provenance={"source": "direct-moments"}, error_bound=0.0)
    vals, err = [], 0.0
    with mpmath.workprec(prec):
        for k in range(K + 1):
            total = mpmath.mpf(0)
            for s, pc in enumerate(g.pieces):
                u, v = to_mp(pts[s], prec), to_mp(pts[s + 1], prec)
                if isinstance(pc, PolyPiece):
                    total += to_mp(_poly_moment(pc.poly, pts[s], pts[s + 1], k), prec)
                elif isinstance(pc, ExpPolyPiece):
                    cs = [to_mp(c, prec) for c in pc.poly.coeffs]
                    rate = to_mp(pc.rate, prec)

                    def f(x, cs=cs, rate=rate):
                        return x**k * mpmath.polyval(cs[::-1], x) * mpmath.exp(rate * x)

                    val, e = mpmath.quad(f, [u, v], error=True)
                    total += val
                    err = max(err, float(e))
                else:
                    raise ValueError(f"unsupported piece type {type(pc).__name__}")
            vals.append(total)
    return MomentSequence(tuple(vals), mode="float", provenance={"source": "direct-moments-quadrature"},
                          error_bound=err)


def epsilon_sequence(rec: MomentRecurrence, data: PiecewiseData, K: int) -> list:
    return [rec.epsilon(k, data) for k in range(K + 1)]


# --------------------------------------------------------------------------
# vanishing moments and Stieltjes certificates


@dataclass(frozen=True)
class VanishingBound:
    bound: int
    case: str           # "jump-regular" or "indicial"
    witness: Optional[Fraction]


def vanishing_bound(op: DifferentialOperator, data: PiecewiseData, include_endpoints: bool = True,
                    prec: int = DEFAULT_PRECISION) -> VanishingBound:
    """How many leading vanishing moments force g = 0.

    Case 1 applies when p_n does not vanish at some discontinuity; case 2
    falls back on the largest positive integer root of the indicial
    polynomial.
    """
    info = analyze_operator(op, data, prec)
    if not info.fuchsian:
        raise OperatorError(f"operator is not Fuchsian: {info.fuchsian_detail}")
    pts = data.points if include_endpoints else data.points[1:-1]
    for x in pts:
        if op.leading(Fraction(x)) != 0:
            return VanishingBound(info.tau + info.d_n - info.n, "jump-regular", Fraction(x))
    return VanishingBound(info.Lambda + 1 + info.d_n - info.n, "indicial", None)


def stieltjes_radius(info: OperatorAnalysis, prec: int = DEFAULT_PRECISION) -> tuple:
    """(R* rounded down to a rational, nominal mpf): min over nonzero xi of 1/|xi|."""
    with mpmath.workprec(prec):
        mods = [abs(to_mp(z, prec)) if isinstance(z, Fraction) else abs(z) for z, _ in info.Z_A]
        mods = [m for m in mods if m > mpmath.mpf(10) ** -40]
        if not mods:
            raise CertificateError("Z_A has no nonzero point; no finite R*")
        top = max(mods)
        exact_top = [abs(z) for z, _ in info.Z_A if isinstance(z, Fraction) and to_mp(abs(z), prec) == top]
        if exact_top:
            return 1 / exact_top[0], 1 / top
        return floor_rational(1 / top), 1 / top


def stieltjes_certificate(op: DifferentialOperator, data: PiecewiseData, moments,
                          prec: int = DEFAULT_PRECISION) -> DominationCertificate:
    """(max{tau-1, Lambda} + d_n - n, R*, S) with S tabulated from the moments."""
    info = analyze_operator(op, data, prec)
    if not info.fuchsian:
        raise OperatorError(f"operator is not Fuchsian: {info.fuchsian_detail}")
    N = max(info.tau - 1, info.Lambda) + info.d_n - info.n
    if N < 0:
        raise CertificateError(f"cutoff formula gives N = {N} < 0")
    R, nominal = stieltjes_radius(info, prec)
    cert = tabulated_certificate(moments, R, N, "stieltjes")
    cert.provenance.update({"tau": info.tau, "Lambda": info.Lambda, "d_n": info.d_n, "n": info.n,
                            "R_nominal": mpmath.nstr(nominal, 20)})
    return cert


def moment_matrix(g_basis: Sequence, op: DifferentialOperator, points: Sequence, rows: int) -> list:
    """Moments m_0..m_{rows-1} of every (piece, basis function) pair.

    Columns index the solution family sum_{s,b} c_{s,b} phi_b 1_{piece s}.
    """
    cols = []
    for s in range(len(points) - 1):
        for phi in g_basis:
            cols.append([_poly_moment(phi, Fraction(points[s]), Fraction(points[s + 1]), k) for k in range(rows)])
    return [[cols[c][r] for c in range(len(cols))] for r in range(rows)]


def vanishing_family_check(op: DifferentialOperator, basis: Sequence, points: Sequence,
                           include_endpoints: bool = True) -> tuple:
    """(ok, bound, rank, dimension): the first `bound` moments determine the family member."""
    for phi in basis:
        if not op.apply(phi).is_zero():
            raise OperatorError(f"basis function {phi} is not annihilated by the operator")
    g = PiecewiseFunction.polynomial(points[0], points[-1], points[1:-1], [basis[0]] * (len(points) - 1))
    vb = vanishing_bound(op, g.data(op.n), include_endpoints)
    mat = moment_matrix(basis, op, points, vb.bound)
    dim = len(basis) * (len(points) - 1)
    r = rank(mat) if mat else 0
    return r == dim, vb.bound, r, dim


# --------------------------------------------------------------------------
# built-in test family


@dataclass(frozen=True)
class FamilyMember:
    name: str
    op: DifferentialOperator
    g: PiecewiseFunction
    basis: tuple            # polynomial solutions of op spanning its (polynomial) kernel

    def rescaled(self, c) -> "FamilyMember":
        c = exact(c)
        inv = UniPoly([0, 1 / c])
        return FamilyMember(f"{self.name}@x{c}", self.op.rescaled(c), self.g.rescaled(c),
                        tuple(b.compose(inv) for b in self.basis))


def _P(*cs) -> UniPoly:
    return UniPoly([exact(c) for c in cs])


def builtin_family() -> list:
    """Piecewise-polynomial functions with known annihilating operators."""
    F = Fraction
    D = lambda *ps: DifferentialOperator(tuple(_P(*p) for p in ps))  # noqa: E731
    pw = PiecewiseFunction.polynomial
    return [
        FamilyMember("constant", D([0], [1]), pw(0, 1, [], [_P(1)]), (_P(1),)),
        FamilyMember("step", D([0], [1]), pw(0, 1, [F(1, 2)], [_P(0), _P(1)]), (_P(1),)),
        FamilyMember("linear", D([-1], [0, 1]), pw(0, 1, [], [_P(0, 1)]), (_P(0, 1),)),
        FamilyMember("linear-jump", D([-1], [0, 1]), pw(0, 1, [F(1, 2)], [_P(0, 1), _P(0, -2)]), (_P(0, 1),)),
        FamilyMember("broken-line", D([0], [0], [1]), pw(0, 1, [F(1, 3)], [_P(1, 1), _P(2, -1)]), (_P(1), _P(0, 1))),
        FamilyMember("euler", D([2], [0, -2], [0, 0, 1]), pw(-1, 1, [0], [_P(0, 1), _P(0, 0, 1)]),
                 (_P(0, 1), _P(0, 0, 1))),
        FamilyMember("even-quadratic", D([0], [-1], [0, 1]), pw(0, 2, [], [_P(1, 0, 1)]), (_P(1), _P(0, 0, 1))),
        FamilyMember("shifted-square", D([-2], [1, 1]), pw(0, 1, [], [_P(1, 2, 1)]), (_P(1, 2, 1),)),
        FamilyMember("singular-jump", D([-2], [-1, 2]), pw(0, 1, [F(1, 2)], [_P(-1, 2), _P(-3, 6)]), (_P(-1, 2),)),
        FamilyMember("cubic-jump", D([3], [0, -3], [0, 0, 1]), pw(-1, 1, [0], [_P(0, 1), _P(0, 1, 0, 1)]),
                 (_P(0, 1), _P(0, 0, 0, 1))),
        FamilyMember("offset-square", D([-2], [0, 1]), pw(1, 3, [], [_P(0, 0, 1)]), (_P(0, 0, 1),)),
        FamilyMember("half-support", D([0], [1]), pw(0, F(1, 2), [], [_P(2)]), (_P(1),)),
        FamilyMember("bridge", D([1, -2], [0, -1, 1]), pw(0, 1, [], [_P(0, -1, 1)]), (_P(0, -1, 1),)),
    ]


def scaled_family(scales: Sequence = (Fraction(1, 2), Fraction(3, 2))) -> list:
    """The built-in family rescaled to other intervals."""
    return [case.rescaled(c) for c in scales for case in builtin_family()]


__all__ = [
    "DifferentialOperator",
    "ExpPolyPiece",
    "MomentRecurrence",
    "MomentSequence",
    "MomentSystem",
    "OperatorAnalysis",
    "OperatorError",
    "PiecewiseData",
    "PiecewiseFunction",
    "PolyPiece",
    "FamilyMember",
    "VanishingBound",
    "analyze_operator",
    "annihilator",
    "builtin_family",
    "companion_growth",
    "companion_system",
    "direct_moments",
    "epsilon_sequence",
    "fuchsian_check",
    "moment_matrix",
    "moment_recurrence",
    "scaled_family",
    "spectrum_check",
    "stieltjes_certificate",
    "stieltjes_radius",
    "vanishing_bound",
    "vanishing_family_check",
]
