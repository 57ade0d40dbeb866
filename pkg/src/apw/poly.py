"""Sparse multivariate polynomials, the contraction action and catalecticants.

Two rings share one representation: the point ring S = Q[x0..xN] (``ring='x'``)
and the operator ring T = Q[d0..dN] (``ring='d'``). An operator monomial
d^a acts on a point monomial x^b by

    d^a . x^b = b!/(b-a)! x^(b-a)   if b >= a componentwise, else 0,

extended bilinearly. Any other ring tag (``'y'`` is used for Cox rings) gets
the ordinary ring operations only.

Monomials are exponent tuples. Within a degree they are ordered graded
lexicographically, largest power of the first variable first; this order
fixes the coordinates of every matrix built here.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import factorial, prod
from typing import Mapping, Sequence

from .linalg import InputError, Matrix, as_fraction

Monomial = tuple


# -- monomial bases ---------------------------------------------------------

@lru_cache(maxsize=None)
def monomials(nvars: int, degree: int) -> tuple[Monomial, ...]:
    """All exponent vectors of the given degree, in graded-lex order."""
    if degree < 0:
        return ()
    if nvars == 0:
        return ((),) if degree == 0 else ()
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(nvars: int, degree: int) -> dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomials(nvars, degree))}


class GradedBasis:
    """Monomial coordinates for the degree-d piece of a polynomial ring."""

    __slots__ = ("nvars", "degree", "monomials", "index")

    def __init__(self, nvars: int, degree: int):
        self.nvars = nvars
        self.degree = degree
        self.monomials = monomials(nvars, degree)
        self.index = monomial_index(nvars, degree)

    def __len__(self):
        return len(self.monomials)

    def coordinates(self, p: "Poly") -> list[Fraction]:
        v = [Fraction(0)] * len(self.monomials)
        for m, c in p.terms.items():
            try:
                v[self.index[m]] = c
            except KeyError:
                raise InputError(f"monomial {m} not of degree {self.degree}") from None
        return v

    def poly(self, coords: Sequence, ring: str = "x") -> "Poly":
        return Poly(self.nvars, {m: c for m, c in zip(self.monomials, coords) if c}, ring)


def multifactorial(a: Monomial) -> int:
    return prod(factorial(x) for x in a)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_sort_key(m: Monomial):
    # graded-lex, descending: higher degree first, then larger leading exponents
    return (-sum(m), tuple(-x for x in m))


# -- polynomials ------------------------------------------------------------

class Poly:
    """A polynomial as a map from exponent tuples to nonzero Fractions."""

    __slots__ = ("nvars", "terms", "ring")

    def __init__(self, nvars: int, terms: Mapping[Monomial, object] | None = None, ring: str = "x"):
        self.nvars = nvars
        self.ring = ring
        clean = {}
        for m, c in (terms or {}).items():
            m = tuple(m)
            if len(m) != nvars:
                raise InputError(f"monomial {m} does not have {nvars} variables")
            c = as_fraction(c)
            if c:
                clean[m] = c
        self.terms = clean

    @classmethod
    def variable(cls, nvars: int, i: int, ring: str = "x") -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1}, ring)

    @classmethod
    def constant(cls, nvars: int, c, ring: str = "x") -> "Poly":
        return cls(nvars, {(0,) * nvars: c}, ring)

    @classmethod
    def linear(cls, coeffs: Sequence, ring: str = "x") -> "Poly":
        n = len(coeffs)
        return cls(n, {tuple(int(i == j) for j in range(n)): c for i, c in enumerate(coeffs)}, ring)

    # structure
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def coeff(self, m: Monomial) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: mono_sort_key(t[0]))

    def leading_coefficient(self) -> Fraction:
        return self.sorted_terms()[0][1] if self.terms else Fraction(0)

    def normalized(self) -> "Poly":
        """Scale so that the first coefficient in monomial order is 1."""
        lc = self.leading_coefficient()
        return self if not lc else self * (1 / lc)

    def _check(self, other: "Poly"):
        if self.nvars != other.nvars:
            raise InputError(f"variable-count mismatch: {self.nvars} vs {other.nvars}")
        if self.ring != other.ring:
            raise InputError(f"ring mismatch: {self.ring} vs {other.ring}")

    # arithmetic
    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return Poly(self.nvars, t, self.ring)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {m: -c for m, c in self.terms.items()}, self.ring)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            t: dict = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    m = mono_mul(m1, m2)
                    t[m] = t.get(m, 0) + c1 * c2
            return Poly(self.nvars, t, self.ring)
        c = as_fraction(other)
        return Poly(self.nvars, {m: c * v for m, v in self.terms.items()}, self.ring)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        out = Poly.constant(self.nvars, 1, self.ring)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return (isinstance(other, Poly) and self.nvars == other.nvars
                and self.ring == other.ring and self.terms == other.terms)

    def __hash__(self):
        return hash((self.nvars, self.ring, frozenset(self.terms.items())))

    def evaluate(self, point: Sequence) -> Fraction:
        point = [as_fraction(x) for x in point]
        if len(point) != self.nvars:
            raise InputError("point has wrong dimension")
        return sum((c * prod(p ** e for p, e in zip(point, m)) for m, c in self.terms.items()), Fraction(0))

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Replace variable i by images[i] (all images in one common ring)."""
        if len(images) != self.nvars:
            raise InputError("need one image per variable")
        target = images[0]
        out = Poly(target.nvars, {}, target.ring)
        powers: dict = {}
        for m, c in self.terms.items():
            term = Poly.constant(target.nvars, c, target.ring)
            for i, e in enumerate(m):
                if e:
                    key = (i, e)
                    if key not in powers:
                        powers[key] = images[i] ** e
                    term = term * powers[key]
            out = out + term
        return out

    def with_ring(self, ring: str) -> "Poly":
        return Poly(self.nvars, self.terms, ring)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"


# -- text grammar -----------------------------------------------------------

def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for m, c in p.sorted_terms():
        factors = []
        for i, e in enumerate(m):
            if e == 1:
                factors.append(f"{p.ring}{i}")
            elif e > 1:
                factors.append(f"{p.ring}{i}^{e}")
        mono = "*".join(factors)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = _format_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_coeff(a)}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += sign + body
    return out


_TERM_SPLIT = re.compile(r"([+-])")
_COEFF = re.compile(r"^\d+(/\d+)?$")
_FACTOR = re.compile(r"^([xd])(\d+)(?:\^(\d+))?$")


class ParseError(InputError):
    pass


def parse_poly(text: str, nvars: int | None = None) -> Poly:
    """Parse ``coeff*mono`` terms joined by + and -; see :func:`format_poly`.

    The ring is taken from the variable prefix (``x`` or ``d``). ``nvars``
    defaults to one more than the largest variable index mentioned.
    """
    s = re.sub(r"\s+", "", text)
    if not s:
        raise ParseError("empty polynomial")
    tokens = _TERM_SPLIT.split(s)
    if tokens[0] == "":
        tokens = tokens[1:]
    else:
        tokens = ["+"] + tokens
    if len(tokens) % 2:
        raise ParseError(f"dangling sign in {text!r}")
    raw_terms = []
    ring = None
    maxvar = -1
    for sign, body in zip(tokens[0::2], tokens[1::2]):
        if not body:
            raise ParseError(f"empty term in {text!r}")
        coeff = Fraction(1)
        exps: dict[int, int] = {}
        for k, factor in enumerate(body.split("*")):
            if _COEFF.match(factor):
                if k != 0:
                    raise ParseError(f"coefficient must lead the term: {body!r}")
                try:
                    coeff = Fraction(factor)
                except ZeroDivisionError:
                    raise ParseError(f"zero denominator in {body!r}") from None
                continue
            mt = _FACTOR.match(factor)
            if not mt:
                raise ParseError(f"bad factor {factor!r}")
            r, idx, e = mt.group(1), int(mt.group(2)), int(mt.group(3) or 1)
            if ring is None:
                ring = r
            elif ring != r:
                raise ParseError("mixes point (x) and operator (d) variables")
            exps[idx] = exps.get(idx, 0) + e
            maxvar = max(maxvar, idx)
        if sign == "-":
            coeff = -coeff
        raw_terms.append((coeff, exps))
    n = maxvar + 1 if nvars is None else nvars
    if maxvar >= n:
        raise ParseError(f"variable index {maxvar} exceeds nvars={n}")
    n = max(n, 1)
    terms: dict = {}
    for coeff, exps in raw_terms:
        m = tuple(exps.get(i, 0) for i in range(n))
        terms[m] = terms.get(m, 0) + coeff
    return Poly(n, terms, ring or "x")


# -- apolarity --------------------------------------------------------------

def _contract_mono(a: Monomial, b: Monomial) -> tuple[int, Monomial] | None:
    c = 1
    out = []
    for ai, bi in zip(a, b):
        if ai > bi:
            return None
        for k in range(bi - ai + 1, bi + 1):
            c *= k
        out.append(bi - ai)
    return c, tuple(out)


def apolar_apply(D: Poly, f: Poly) -> Poly:
    """Contraction D . f of a point-ring polynomial by an operator."""
    if D.nvars != f.nvars:
        raise InputError(f"variable-count mismatch: {D.nvars} vs {f.nvars}")
    t: dict = {}
    for a, ca in D.terms.items():
        for b, cb in f.terms.items():
            r = _contract_mono(a, b)
            if r is not None:
                k, m = r
                t[m] = t.get(m, 0) + k * ca * cb
    return Poly(f.nvars, t, "x")


def pairing(f: Poly, D: Poly) -> Fraction:
    """The perfect pairing S_d x T_d -> Q."""
    if f.nvars != D.nvars:
        raise InputError("variable-count mismatch")
    if not f.is_zero() and not D.is_zero() and (f.degree() != D.degree()
                                                  or not f.is_homogeneous() or not D.is_homogeneous()):
        raise InputError(f"pairing needs equal degrees, got {f.degree()} and {D.degree()}")
    return sum((c * multifactorial(m) * D.coeff(m) for m, c in f.terms.items()), Fraction(0))


def catalecticant(f: Poly, e: int) -> Matrix:
    """Matrix of D -> D.f from T_e (columns) to S_{d-e} (rows)."""
    d = f.degree()
    if not f.is_homogeneous():
        raise InputError("catalecticant needs a homogeneous form")
    if e < 0 or e > d:
        raise InputError(f"degree {e} outside 0..{d}")
    n = f.nvars
    src = monomials(n, e)
    tgt = monomial_index(n, d - e)
    cols = []
    for a in src:
        col = [Fraction(0)] * len(tgt)
        for b, cb in f.terms.items():
            r = _contract_mono(a, b)
            if r is not None:
                k, m = r
                col[tgt[m]] += k * cb
        cols.append(col)
    return Matrix.from_columns(cols, len(tgt))


class LinearFormPoint:
    """A point of the dual projective space, i.e. a linear form up to scale.

    Stored with the first nonzero coordinate equal to 1.
    """

    __slots__ = ("coords",)

    def __init__(self, coords: Sequence):
        c = [as_fraction(x) for x in coords]
        lead = next((x for x in c if x), None)
        if lead is None:
            raise InputError("a point needs a nonzero coordinate")
        self.coords = tuple(x / lead for x in c)

    @property
    def nvars(self) -> int:
        return len(self.coords)

    def linear_form(self, ring: str = "x") -> Poly:
        return Poly.linear(self.coords, ring)

    def __eq__(self, other):
        return isinstance(other, LinearFormPoint) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return "(" + ":".join(_format_coeff(x) for x in self.coords) + ")"


def power_of_linear_form(c: LinearFormPoint | Sequence, d: int) -> Poly:
    """(sum c_i x_i)^d expanded by the multinomial theorem."""
    if d < 1:
        raise InputError("exponent must be positive")
    coords = c.coords if isinstance(c, LinearFormPoint) else tuple(as_fraction(x) for x in c)
    n = len(coords)
    dfact = factorial(d)
    terms = {}
    for m in monomials(n, d):
        coef = Fraction(dfact, multifactorial(m))
        for ci, e in zip(coords, m):
            if e:
                coef *= ci ** e
        if coef:
            terms[m] = coef
    return Poly(n, terms, "x")
