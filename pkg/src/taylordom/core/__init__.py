"""Numeric substrate: scalars, polynomials and root finding."""

from .multipoly import MultiPoly
from .poly import UniPoly, cauchy_root_bound, falling_factorial, poly_eval
from .roots import Root, RootFindingError, RootSet, poly_roots
from .scalar import DEFAULT_PRECISION, EXACT, FLOAT

__all__ = [
    "DEFAULT_PRECISION",
    "EXACT",
    "FLOAT",
    "MultiPoly",
    "Root",
    "RootFindingError",
    "RootSet",
    "UniPoly",
    "cauchy_root_bound",
    "falling_factorial",
    "poly_eval",
    "poly_roots",
]
