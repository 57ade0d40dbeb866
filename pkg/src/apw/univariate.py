"""Univariate helpers over Q: minimal polynomials, squarefreeness, rational roots.

Polynomials are coefficient lists, highest degree first. Factorisation is
delegated to sympy; everything else is done here on Fractions.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import sympy

from .linalg import Matrix, kernel_basis


def minimal_polynomial(M: Matrix) -> list[Fraction]:
    """Monic minimal polynomial of a square matrix, via the first linear
    dependence among I, M, M^2, ... (flattened)."""
    n = M.rows
    powers = [Matrix.identity(n)]
    while True:
        k = len(powers) - 1
        cols = [P.entries for P in powers]
        ker = kernel_basis(Matrix.from_columns(cols, n * n))
        if ker:
            c = ker[0]
            lead = c[k]
            return [c[i] / lead for i in range(k, -1, -1)]
        powers.append(powers[-1] @ M)


def _trim(p: list[Fraction]) -> list[Fraction]:
    i = 0
    while i < len(p) and p[i] == 0:
        i += 1
    return p[i:]


def _rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    while len(a) >= len(b) and a:
        q = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= q * b[i]
        a = _trim(a)
    return a


def poly_gcd(a: Sequence, b: Sequence) -> list[Fraction]:
    a = _trim([Fraction(x) for x in a])
    b = _trim([Fraction(x) for x in b])
    while b:
        a, b = b, _rem(a, b)
    return [x / a[0] for x in a] if a else a


def derivative(p: Sequence) -> list[Fraction]:
    n = len(p) - 1
    return [Fraction(c) * (n - i) for i, c in enumerate(p[:-1])]


def is_squarefree(p: Sequence) -> bool:
    if len(p) <= 2:
        return True
    return len(poly_gcd(p, derivative(p))) == 1


def rational_roots(p: Sequence) -> list[Fraction]:
    """Distinct rational roots, in increasing order."""
    t = sympy.Symbol("t")
    P = sympy.Poly([sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) for c in p],
                   t, domain="QQ")
    roots = set()
    for fac, _ in P.factor_list()[1]:
        if fac.degree() == 1:
            a, b = fac.all_coeffs()
            r = -b / a
            roots.add(Fraction(int(r.p), int(r.q)))
    return sorted(roots)
