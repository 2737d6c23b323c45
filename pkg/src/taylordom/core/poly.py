"""Dense univariate polynomials over Fractions or mpmath numbers."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .scalar import exact


def _strip(coeffs: list) -> tuple:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class UniPoly:
    """Immutable polynomial, coefficients in ascending degree.

    Coefficients may be ints, Fractions or mpmath numbers; ints are promoted
    to Fractions so that exact inputs stay exact.
    """

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable = (), var: str = "x"):
        cs = [Fraction(c) if isinstance(c, int) else c for c in coeffs]
        object.__setattr__(self, "coeffs", _strip(cs))
        object.__setattr__(self, "var", var)

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    @classmethod
    def constant(cls, c, var: str = "x") -> "UniPoly":
        return cls([c], var)

    @classmethod
    def monomial(cls, degree: int, c=1, var: str = "x") -> "UniPoly":
        return cls([0] * degree + [c], var)

    @classmethod
    def from_strings(cls, coeffs: Sequence[str], var: str = "x") -> "UniPoly":
        return cls([exact(c) for c in coeffs], var)

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def _lift(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return other
        return UniPoly([other], self.var)

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly([self.coeff(i) + other.coeff(i) for i in range(n)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            return UniPoly([c * other for c in self.coeffs], self.var)
        if self.is_zero() or other.is_zero():
            return UniPoly((), self.var)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = UniPoly([1], self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, z):
        """Horner evaluation."""
        acc = Fraction(0) if isinstance(z, (int, Fraction)) else 0 * z
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if self.degree <= 0:
            return self.coeff(0) == other
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({[str(c) for c in self.coeffs]}, var={self.var!r})"

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            terms.append(f"{c}" if not mono else (mono if c == 1 else f"{c}*{mono}"))
        return " + ".join(terms)

    def derivative(self, times: int = 1) -> "UniPoly":
        cs = list(self.coeffs)
        for _ in range(times):
            cs = [i * cs[i] for i in range(1, len(cs))]
        return UniPoly(cs, self.var)

    def antiderivative(self) -> "UniPoly":
        """Antiderivative vanishing at 0."""
        return UniPoly([0] + [c / (i + 1) for i, c in enumerate(self.coeffs)], self.var)

    def integrate(self, lo, hi):
        anti = self.antiderivative()
        return anti(hi) - anti(lo)

    def shift(self, a) -> "UniPoly":
        """p(x + a), by synthetic Taylor shift."""
        cs = list(self.coeffs)
        n = len(cs)
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                cs[j] += a * cs[j + 1]
        return UniPoly(cs, self.var)

    def compose(self, other: "UniPoly") -> "UniPoly":
        acc = UniPoly((), other.var)
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def monic(self) -> "UniPoly":
        if self.is_zero():
            raise ZeroDivisionError("zero polynomial has no monic form")
        lead = self.leading
        return UniPoly([c / lead for c in self.coeffs], self.var)

    def with_var(self, var: str) -> "UniPoly":
        return UniPoly(self.coeffs, var)

    def valuation(self) -> int:
        """Index of the lowest nonzero coefficient (order of vanishing at 0)."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        raise ValueError("zero polynomial has infinite valuation")


def poly_eval(p: UniPoly, z):
    return p(z)


def falling_factorial(m, j: int):
    """m (m-1) ... (m-j+1); ``m`` may be a scalar or a UniPoly."""
    if j < 0:
        raise ValueError("falling factorial needs j >= 0")
    if isinstance(m, UniPoly):
        acc = UniPoly([1], m.var)
        for i in range(j):
            acc = acc * (m - i)
        return acc
    acc = Fraction(1) if isinstance(m, (int, Fraction)) else 1
    for i in range(j):
        acc = acc * (m - i)
    return acc


def cauchy_root_bound(p: UniPoly) -> Fraction:
    """1 + max|c_i/c_n|: every complex root has modulus below this."""
    if p.degree < 1:
        return Fraction(0)
    lead = abs(exact(p.leading))
    return 1 + max(abs(exact(c)) for c in p.coeffs[:-1]) / lead
