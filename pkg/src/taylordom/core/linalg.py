"""Small exact linear algebra over Fractions."""

from __future__ import annotations

from fractions import Fraction


def rank(rows: list) -> int:
    """Row rank by Gaussian elimination, exact for Fraction entries."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        pv = m[r][col]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col] / pv
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def matvec(A: list, v: list) -> list:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def max_norm(v) -> object:
    return max((abs(x) for x in v), default=Fraction(0))


def matrix_max_norm(A: list):
    """Induced infinity norm (max absolute row sum)."""
    return max((sum(abs(x) for x in row) for row in A), default=Fraction(0))
