"""Sparse multivariate polynomials with exact coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence


class MultiPoly:
    """Immutable sparse polynomial: exponent tuple -> coefficient.

    Zero coefficients are never stored, so ``len(p.terms) == 0`` exactly
    when ``p`` is the zero polynomial.  Integer coefficients stay ``int``
    (much faster than Fraction in long recurrences); other exact values
    are kept as given.
    """

    __slots__ = ("terms", "nvars", "names", "_hash")

    def __init__(self, terms: Mapping[tuple, object], nvars: int, names: Sequence[str] | None = None):
        clean = {}
        for beta, c in terms.items():
            if c != 0:
                if len(beta) != nvars:
                    raise ValueError(f"exponent {beta} has wrong length for {nvars} variables")
                clean[tuple(beta)] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "names", tuple(names) if names else tuple(f"l{i + 1}" for i in range(nvars)))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    @classmethod
    def zero(cls, nvars: int, names=None) -> "MultiPoly":
        return cls({}, nvars, names)

    @classmethod
    def constant(cls, c, nvars: int, names=None) -> "MultiPoly":
        return cls({(0,) * nvars: c}, nvars, names)

    @classmethod
    def var(cls, i: int, nvars: int, names=None) -> "MultiPoly":
        beta = [0] * nvars
        beta[i] = 1
        return cls({tuple(beta): 1}, nvars, names)

    def _new(self, terms) -> "MultiPoly":
        return MultiPoly(terms, self.nvars, self.names)

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return MultiPoly.constant(other, self.nvars, self.names)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    @property
    def degree(self) -> int:
        """Total degree; -1 for zero."""
        return max((sum(b) for b in self.terms), default=-1)

    def coefficient(self, beta: tuple):
        return self.terms.get(tuple(beta), Fraction(0))

    def norm_max(self):
        """Largest coefficient modulus (0 for the zero polynomial)."""
        return max((abs(c) for c in self.terms.values()), default=Fraction(0))

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for b, c in other.terms.items():
            out[b] = out.get(b, 0) + c
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({b: -c for b, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            if other == 0:
                return MultiPoly.zero(self.nvars, self.names)
            return self._new({b: c * other for b, c in self.terms.items()})
        other = self._lift(other)
        out: dict = {}
        get = out.get
        small, big = sorted((self.terms, other.terms), key=len)
        big_items = list(big.items())
        if self.nvars == 1:
            for (e1,), c1 in small.items():
                for (e2,), c2 in big_items:
                    key = (e1 + e2,)
                    out[key] = get(key, 0) + c1 * c2
        else:
            for b1, c1 in small.items():
                for b2, c2 in big_items:
                    key = tuple(map(int.__add__, b1, b2))
                    out[key] = get(key, 0) + c1 * c2
        return self._new(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(1, self.nvars, self.names)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.constant(other, self.nvars)
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.nvars, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __call__(self, point: Sequence):
        """Evaluate at a point (exact when the point is rational)."""
        if len(point) != self.nvars:
            raise ValueError("point has wrong dimension")
        total = Fraction(0)
        for beta, c in self.terms.items():
            term = c
            for x, e in zip(point, beta):
                if e:
                    term = term * x**e
            total = total + term
        return total

    specialize = __call__

    def __repr__(self):
        return f"MultiPoly({self.to_str()})"

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for beta in sorted(self.terms, reverse=True):
            c = self.terms[beta]
            mono = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(self.names, beta) if e
            )
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(parts)
