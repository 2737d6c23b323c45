"""Scalar helpers.

Two kinds of numbers flow through the package: exact rationals
(:class:`fractions.Fraction`) and complex floating values
(:class:`mpmath.mpc`) carrying a working precision in bits.  Rather than
wrapping both in a new class, the kernels accept either and these helpers
do conversion, formatting and parsing.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

import mpmath

DEFAULT_PRECISION = 256

EXACT = "exact"
FLOAT = "float"
MODES = (EXACT, FLOAT)

Number = Union[int, Fraction, "mpmath.mpf", "mpmath.mpc"]


class ScalarParseError(ValueError):
    pass


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction))


def exact(x) -> Fraction:
    """Coerce ints, Fractions and rational strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ScalarParseError(f"not a rational literal: {text!r}") from exc


def format_rational(x) -> str:
    x = exact(x)
    return f"{x.numerator}/{x.denominator}"


def to_mp(x, prec: int = DEFAULT_PRECISION):
    """Convert to an mpmath number at ``prec`` bits (real stays real)."""
    with mpmath.workprec(prec):
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / x.denominator
        if isinstance(x, (mpmath.mpf, mpmath.mpc)):
            return +x
        if isinstance(x, complex):
            return mpmath.mpc(x)
        return mpmath.mpf(x)


def convert(x, mode: str, prec: int = DEFAULT_PRECISION):
    if mode == EXACT:
        return exact(x)
    if mode == FLOAT:
        return mpmath.mpc(to_mp(x, prec))
    raise ValueError(f"unknown arithmetic mode {mode!r}")


def magnitude(x):
    """|x| as Fraction for exact input, mpf otherwise."""
    if is_exact(x):
        return abs(Fraction(x))
    return abs(x)


def log_abs(x) -> float:
    """log|x| computed without overflow for huge rationals; -inf at zero."""
    if x == 0:
        return -math.inf
    if is_exact(x):
        x = Fraction(x)
        return _log_int(abs(x.numerator)) - _log_int(x.denominator)
    return float(mpmath.log(abs(x)))


def _log_int(n: int) -> float:
    bits = n.bit_length()
    if bits < 1000:
        return math.log(n)
    shift = bits - 60
    return math.log(n >> shift) + shift * math.log(2)


def floor_rational(x, bits: int = 40) -> Fraction:
    """Largest multiple of 2**-bits (relative to x's scale) not above x.

    ``x`` is a positive mpf.  A few guard ulps are subtracted so that the
    result stays below the true value even after the working-precision
    rounding that produced ``x``.
    """
    x = mpmath.mpf(x)
    if x <= 0:
        raise ValueError("floor_rational expects a positive value")
    e = int(mpmath.floor(mpmath.log(x, 2)))
    scale = bits - e
    scaled = mpmath.ldexp(x, scale) * (1 - mpmath.mpf(2) ** (-(mpmath.mp.prec - 8)))
    num = int(mpmath.floor(scaled))
    if num <= 0:
        num = 1
        scale += 1
    return Fraction(num, 1 << scale) if scale >= 0 else Fraction(num << -scale)


def ceil_rational(x, bits: int = 40) -> Fraction:
    x = mpmath.mpf(x)
    if x <= 0:
        raise ValueError("ceil_rational expects a positive value")
    e = int(mpmath.floor(mpmath.log(x, 2)))
    scale = bits - e
    scaled = mpmath.ldexp(x, scale) * (1 + mpmath.mpf(2) ** (-(mpmath.mp.prec - 8)))
    num = int(mpmath.ceil(scaled))
    return Fraction(num, 1 << scale) if scale >= 0 else Fraction(num << -scale)


def format_float(x, digits: int = 30) -> str:
    return mpmath.nstr(mpmath.mpf(x), digits, strip_zeros=True)


def format_complex(z, digits: int = 30) -> dict:
    z = mpmath.mpc(z)
    return {"re": format_float(z.real, digits), "im": format_float(z.imag, digits)}


def format_scalar(x, digits: int = 30):
    if is_exact(x):
        return format_rational(x)
    return format_complex(x, digits)


def parse_scalar(obj, prec: int = DEFAULT_PRECISION):
    """Inverse of :func:`format_scalar`: ``"p/q"`` or ``{"re","im"}``."""
    if isinstance(obj, bool):
        raise ScalarParseError("booleans are not scalars")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        return parse_rational(obj)
    if isinstance(obj, dict) and set(obj) == {"re", "im"}:
        try:
            with mpmath.workprec(prec):
                return mpmath.mpc(mpmath.mpf(obj["re"]), mpmath.mpf(obj["im"]))
        except (ValueError, TypeError) as exc:
            raise ScalarParseError(f"bad complex literal {obj!r}") from exc
    raise ScalarParseError(f"not a scalar literal: {obj!r}")
