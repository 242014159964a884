"""Exact univariate polynomials over the rationals.

This is the machine-independent oracle for the polynomial identities behind
the cubic solution families.  Coefficients are :class:`fractions.Fraction`
(arbitrary-precision), so nothing overflows or rounds.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

from .errors import NonRationalInput

Rational = Fraction


def to_rational(value) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string.  Floats are refused."""
    if isinstance(value, bool):
        raise NonRationalInput(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise NonRationalInput(f"not a rational: {value!r}") from exc
    raise NonRationalInput(f"not a rational: {value!r} ({type(value).__name__})")


def is_rational(value) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def rational_sqrt(q: Fraction):
    """Exact square root of a non-negative rational, or None if irrational."""
    q = Fraction(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


class RationalPoly:
    """Immutable polynomial with Fraction coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def monomial(cls, n, c=1):
        return cls([0] * n + [c])

    @property
    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self):
        return not self.coeffs

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __eq__(self, other):
        if not isinstance(other, RationalPoly):
            other = RationalPoly([other])
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return RationalPoly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return RationalPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if self.is_zero() or other.is_zero():
            return RationalPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def __call__(self, z):
        acc = Fraction(0) if isinstance(z, (int, Fraction)) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def diff(self, k=1):
        cs = list(self.coeffs)
        for _ in range(k):
            cs = [i * c for i, c in enumerate(cs)][1:]
        return RationalPoly(cs)

    def __repr__(self):
        return f"RationalPoly([{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"({c})" + ("*" + mono if mono else ""))
        return " + ".join(terms)


def _coerce(p):
    return p if isinstance(p, RationalPoly) else RationalPoly([p])


def poly_arith(p: RationalPoly, q: RationalPoly, op: str) -> RationalPoly:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown op {op!r}")


def poly_diff(p: RationalPoly, k: int = 1) -> RationalPoly:
    if k < 1:
        raise ValueError("derivative order must be >= 1")
    return p.diff(k)


def reduction_residual_poly(V, h1, alpha, beta, mu=0) -> RationalPoly:
    """alpha V'''' + (V' - mu) V'' - beta V - h1, computed exactly.

    ``mu = 0`` gives the Galilean-boost reduction; nonzero ``mu`` the
    travelling-wave reduction (then ``h1`` is normally zero).
    """
    V, h1 = _coerce(V), _coerce(h1)
    alpha, beta, mu = Fraction(alpha), Fraction(beta), Fraction(mu)
    return alpha * V.diff(4) + (V.diff(1) - mu) * V.diff(2) - beta * V - h1


def balance_exponents(n_max: int) -> set:
    """Degrees n in 1..n_max where two terms of the ODE balance for V = z^n.

    V'''' contributes z^(n-4) when n >= 4, V'V'' contributes z^(2n-3) when
    n >= 2, and V itself z^n.  A balance is a coincidence of two surviving
    exponents.
    """
    found = set()
    for n in range(1, n_max + 1):
        exps = [n]
        if n >= 4:
            exps.append(n - 4)
        if n >= 2:
            exps.append(2 * n - 3)
        if len(set(exps)) < len(exps):
            found.add(n)
    return found


def cubic_polys(coeffs):
    """(V, h1) as RationalPolys from a CubicCoeffs-like record."""
    V = RationalPoly([coeffs.c0, coeffs.c1, coeffs.c2, coeffs.c3])
    h1 = RationalPoly([coeffs.a0, coeffs.a1, coeffs.a2, coeffs.a3])
    return V, h1


def family_brute_check(coeffs, alpha, beta) -> bool:
    """True iff the cubic pair solves the reduction ODE identically."""
    fields = [coeffs.c3, coeffs.c2, coeffs.c1, coeffs.c0,
              coeffs.a3, coeffs.a2, coeffs.a1, coeffs.a0, alpha, beta]
    for f in fields:
        if not is_rational(f):
            raise NonRationalInput(f"family_brute_check needs rational entries, got {f!r}")
    V, h1 = cubic_polys(coeffs)
    return reduction_residual_poly(V, h1, alpha, beta).is_zero()
