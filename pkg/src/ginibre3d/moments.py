"""Exact scalar products of monomials on pure quaternions.

For the Gaussian background measure on R^3,

    <z^m, z^n> = (-1)^((n-m)/2) (m+n+1)!!   if n - m is even, else 0.

Everything here is exact integer or rational arithmetic.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import DomainError


@lru_cache(maxsize=None)
def double_factorial(k: int) -> int:
    """``k!!`` for odd ``k >= -1``; ``(-1)!! = 1``."""
    if k % 2 == 0:
        raise DomainError(f"double factorial is only defined here for odd k, got {k}")
    if k < -1:
        raise DomainError(f"k must be >= -1, got {k}")
    out = 1
    for j in range(3, k + 1, 2):
        out *= j
    return out


def monomial_inner(m: int, n: int) -> int:
    if m < 0 or n < 0:
        raise DomainError("exponents must be nonnegative")
    if (n - m) % 2:
        return 0
    sign = -1 if ((n - m) // 2) % 2 else 1
    return sign * double_factorial(m + n + 1)


def moment_matrix(n: int) -> list[list[int]]:
    """The (n+1) x (n+1) matrix ``[<z^i, z^j>]``."""
    return [[monomial_inner(i, j) for j in range(n + 1)] for i in range(n + 1)]


def bareiss_det(M) -> int:
    """Determinant of an integer matrix by fraction-free elimination."""
    a = [list(row) for row in M]
    size = len(a)
    if size == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(size - 1):
        if a[k][k] == 0:
            for r in range(k + 1, size):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                # exact division is guaranteed by Sylvester's identity
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = pivot
    return sign * a[-1][-1]


@lru_cache(maxsize=None)
def det_D(n: int) -> int:
    """``|D_n|``, the determinant of ``moment_matrix(n)``."""
    if n < 0:
        return 1
    return bareiss_det(moment_matrix(n))


def inner(p, q) -> Fraction:
    """Scalar product of two real-coefficient polynomials (ascending coefficients)."""
    total = Fraction(0)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            if b != 0 and (i + j) % 2 == 0:
                total += a * b * monomial_inner(i, j)
    return total


def gram_schmidt_monic(n: int) -> list[list[Fraction]]:
    """Monic orthogonal polynomials of degrees 0..n as ascending coefficient lists."""
    polys: list[list[Fraction]] = []
    norms: list[Fraction] = []
    for d in range(n + 1):
        p = [Fraction(0)] * d + [Fraction(1)]
        mono = list(p)
        for q, hq in zip(polys, norms):
            c = inner(q, mono) / hq
            if c:
                for i, qi in enumerate(q):
                    p[i] -= c * qi
        polys.append(p)
        norms.append(inner(p, p))
    return polys
