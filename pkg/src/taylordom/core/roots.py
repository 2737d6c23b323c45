"""Polynomial root finding by companion-matrix eigenvalues.

Eigenvalues are computed at high precision, clustered into multiple roots
and then certified by a residual check against the coefficient scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .poly import UniPoly
from .scalar import DEFAULT_PRECISION, to_mp

CLUSTER_TOL = 1e-8


class RootFindingError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Root:
    value: "mpmath.mpc"
    multiplicity: int
    radius: "mpmath.mpf"

    @property
    def modulus(self):
        return abs(self.value)


@dataclass(frozen=True)
class RootSet:
    roots: tuple
    degree: int
    precision: int

    def values(self) -> list:
        """Roots repeated by multiplicity."""
        out = []
        for r in self.roots:
            out.extend([r.value] * r.multiplicity)
        return out

    def moduli(self) -> list:
        return [abs(r.value) for r in self.roots]

    def max_modulus(self):
        return max((abs(r.value) for r in self.roots), default=mpmath.mpf(0))

    def __len__(self):
        return len(self.roots)


def _companion(monic: list) -> "mpmath.matrix":
    # monic: ascending coefficients c_0..c_{n-1} of x^n + ...
    n = len(monic)
    A = mpmath.matrix(n, n)
    for i in range(1, n):
        A[i, i - 1] = 1
    for i in range(n):
        A[i, n - 1] = -monic[i]
    return A


def poly_roots(p: UniPoly, prec: int = DEFAULT_PRECISION, cluster_tol: float = CLUSTER_TOL) -> RootSet:
    """All complex roots of ``p`` with multiplicities.

    Exact zero roots are split off first; the rest come from the companion
    matrix spectrum at ``prec`` bits.  Raises :class:`RootFindingError` if a
    root fails the residual check and ``ValueError`` for constant input.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has no finite root set")
    if p.degree < 1:
        raise ValueError("poly_roots needs degree >= 1")

    with mpmath.workprec(prec):
        zero_mult = p.valuation()
        core = [to_mp(c, prec) for c in p.coeffs[zero_mult:]]
        n = len(core) - 1
        raw = []
        if n == 1:
            raw = [mpmath.mpc(-core[0] / core[1])]
        elif n > 1:
            lead = core[-1]
            monic = [c / lead for c in core[:-1]]
            raw = [mpmath.mpc(z) for z in mpmath.eig(_companion(monic), left=False, right=False)]

        clusters: list[list] = []
        for z in raw:
            for cl in clusters:
                ref = cl[0]
                if abs(z - ref) <= cluster_tol * max(1, abs(ref)):
                    cl.append(z)
                    break
            else:
                clusters.append([z])

        scale_coeffs = [abs(to_mp(c, prec)) for c in p.coeffs]
        deg = p.degree
        dp = p.derivative()
        eps = mpmath.mpf(2) ** (-(prec // 2))
        roots = []
        if zero_mult:
            roots.append(Root(mpmath.mpc(0), zero_mult, mpmath.mpf(0)))
        for cl in clusters:
            centre = sum(cl) / len(cl)
            m = len(cl)
            val = _eval_mp(p.coeffs, centre, prec)
            scale = sum(c * abs(centre) ** i for i, c in enumerate(scale_coeffs))
            if abs(val) > eps * scale:
                raise RootFindingError(f"root {mpmath.nstr(centre, 15)} failed residual check")
            if m == 1:
                dval = _eval_mp(dp.coeffs, centre, prec)
                radius = deg * abs(val) / abs(dval) if dval != 0 else eps
            else:
                spread = max(abs(z - centre) for z in cl)
                radius = 2 * spread + eps
            roots.append(Root(centre, m, radius))
        roots.sort(key=lambda r: (-abs(r.value), float(r.value.imag)))
        return RootSet(tuple(roots), deg, prec)


def _eval_mp(coeffs, z, prec):
    acc = mpmath.mpc(0)
    for c in reversed(coeffs):
        acc = acc * z + (to_mp(c, prec) if isinstance(c, Fraction) else c)
    return acc


def monic_from_roots(values: list, var: str = "x") -> UniPoly:
    """prod (x - r) over ``values`` (with repetition)."""
    acc = UniPoly([mpmath.mpc(1)], var)
    for r in values:
        acc = acc * UniPoly([-r, mpmath.mpc(1)], var)
    return acc


def eigenvalues(rows: list, prec: int = DEFAULT_PRECISION) -> list:
    """Eigenvalues of a small dense matrix given as a list of rows."""
    n = len(rows)
    if n == 0:
        return []
    with mpmath.workprec(prec):
        A = mpmath.matrix(n, n)
        for i in range(n):
            for j in range(n):
                A[i, j] = to_mp(rows[i][j], prec)
        return [mpmath.mpc(z) for z in mpmath.eig(A, left=False, right=False)]


def match_multisets(found: list, expected: list, tol: float) -> tuple[bool, float]:
    """Greedy nearest matching of two complex multisets; returns (ok, worst gap)."""
    if len(found) != len(expected):
        return False, float("inf")
    remaining = list(found)
    worst = 0.0
    for e in sorted(expected, key=lambda z: (float(mpmath.re(z)), float(mpmath.im(z)))):
        idx = min(range(len(remaining)), key=lambda i: abs(remaining[i] - e))
        gap = float(abs(remaining[idx] - e))
        worst = max(worst, gap)
        remaining.pop(idx)
    return worst <= tol, worst
