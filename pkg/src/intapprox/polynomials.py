"""Dense univariate polynomials over the rationals or Gaussian rationals.

Coefficients are stored ascending by degree.  The zero polynomial has an
empty coefficient list and degree -1.  All arithmetic is exact; there is no
floating point anywhere in this module.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .scalars import (
    Enclosure,
    GaussianRational,
    as_fraction,
    format_rational,
    nearest_int,
    parse_rational,
    sqrt_enclosure,
    to_gaussian,
)

Coef = Fraction | GaussianRational


def _coerce(c) -> Coef:
    if isinstance(c, GaussianRational):
        return c
    return as_fraction(c)


class Poly:
    """Univariate polynomial, exact coefficients, ascending-degree layout."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        cs = [_coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    # ---- constructors ------------------------------------------------
    @staticmethod
    def zero() -> "Poly":
        return Poly(())

    @staticmethod
    def const(c) -> "Poly":
        return Poly((c,))

    @staticmethod
    def x() -> "Poly":
        return Poly((0, 1))

    @staticmethod
    def monomial(c, k: int) -> "Poly":
        return Poly((0,) * k + (c,))

    # ---- structure ---------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, k: int):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def is_real(self) -> bool:
        return all(not isinstance(c, GaussianRational) or c.is_real() for c in self.coeffs)

    def is_integer(self) -> bool:
        """Exact predicate: every coefficient in Z (or Z+iZ)."""
        for c in self.coeffs:
            if isinstance(c, GaussianRational):
                if not c.is_integer():
                    return False
            elif c.denominator != 1:
                return False
        return True

    def real_coeffs(self) -> list[Fraction]:
        """Coefficients as Fractions; raises if any has an imaginary part."""
        out = []
        for c in self.coeffs:
            if isinstance(c, GaussianRational):
                if c.im != 0:
                    raise ValueError("polynomial has non-real coefficients")
                out.append(c.re)
            else:
                out.append(c)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            try:
                other = Poly.const(other)
            except TypeError:
                return NotImplemented
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "Poly(0)"
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            cs = repr(c) if isinstance(c, GaussianRational) else format_rational(c)
            terms.append(f"{cs}*x^{k}" if k else cs)
        return "Poly(" + " + ".join(terms) + ")"

    # ---- arithmetic ----------------------------------------------------
    def __add__(self, other) -> "Poly":
        o = other if isinstance(other, Poly) else Poly.const(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly([self[k] + o[k] for k in range(n)])

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        o = other if isinstance(other, Poly) else Poly.const(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly([self[k] - o[k] for k in range(n)])

    def __rsub__(self, other) -> "Poly":
        return Poly.const(other) - self

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = _coerce(other)
            return Poly([a * c for a in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return Poly.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, x):
        """Exact Horner evaluation (x rational, Gaussian rational, or Poly)."""
        if isinstance(x, Poly):
            return self.compose(x)
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        if acc is None:
            return Fraction(0)
        return acc

    def compose(self, inner: "Poly") -> "Poly":
        acc = Poly.zero()
        for c in reversed(self.coeffs):
            acc = acc * inner + Poly.const(c)
        return acc

    def derivative(self) -> "Poly":
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:])

    def antiderivative(self) -> "Poly":
        return Poly([Fraction(0)] + [c / (k + 1) for k, c in enumerate(self.coeffs)])

    def divmod(self, divisor: "Poly") -> tuple["Poly", "Poly"]:
        """Exact polynomial division over the coefficient field."""
        if not divisor:
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        dlead = divisor.coeffs[-1]
        ddeg = divisor.degree
        q = [Fraction(0)] * max(0, len(rem) - ddeg)
        for k in range(len(rem) - 1, ddeg - 1, -1):
            if not rem[k]:
                continue
            factor = rem[k] / dlead
            q[k - ddeg] = factor
            for j, dc in enumerate(divisor.coeffs):
                rem[k - ddeg + j] = rem[k - ddeg + j] - factor * dc
        return Poly(q), Poly(rem[:ddeg])

    def conj_coeffs(self) -> "Poly":
        return Poly([c.conj() if isinstance(c, GaussianRational) else c for c in self.coeffs])

    def map_coeffs(self, f: Callable) -> "Poly":
        return Poly([f(c) for c in self.coeffs])

    # ---- serialization -------------------------------------------------
    def serialize(self) -> list[str]:
        """JSON-ready list of coefficient strings, ascending degree."""
        out = []
        for c in self.coeffs:
            if isinstance(c, GaussianRational):
                out.append(c.serialize())
            else:
                out.append(format_rational(c))
        return out

    def to_json(self) -> str:
        return json.dumps(self.serialize())

    @staticmethod
    def parse(items: Sequence[str]) -> "Poly":
        coeffs = []
        for s in items:
            if "," in s:
                coeffs.append(GaussianRational.parse(s))
            else:
                coeffs.append(parse_rational(s))
        return Poly(coeffs)


# ----------------------------------------------------------------------
# Chebyshev polynomials for an interval
# ----------------------------------------------------------------------

def cheb(n: int, a, b) -> Poly:
    """Degree-n Chebyshev polynomial for [a, b], exact rational coefficients.

    Normalized so that max over [a,b] of |value| is 1, attained with
    alternating signs at n+1 points.
    """
    a, b = as_fraction(a), as_fraction(b)
    if a >= b:
        raise ValueError("need a < b")
    if n < 0:
        raise ValueError("degree must be >= 0")
    # classical T_n composed with the affine map of [a,b] onto [-1,1]
    u = Poly([Fraction(-(a + b), b - a), Fraction(2, b - a)])
    if n == 0:
        return Poly.const(1)
    t_prev, t_cur = Poly.const(1), u
    for _ in range(n - 1):
        t_prev, t_cur = t_cur, 2 * u * t_cur - t_prev
    return t_cur


def cheb_at_zero(n: int, a, b) -> Fraction:
    """C_n(0; a, b) as an exact rational (cheap scalar recurrence)."""
    a, b = as_fraction(a), as_fraction(b)
    u0 = Fraction(-(a + b), b - a)
    if n == 0:
        return Fraction(1)
    t_prev, t_cur = Fraction(1), u0
    for _ in range(n - 1):
        t_prev, t_cur = t_cur, 2 * u0 * t_cur - t_prev
    return t_cur


def cheb_growth_base(a, b, rel_tol: Fraction = Fraction(1, 10**30)) -> Enclosure:
    """(sqrt(b)+sqrt(a)) / (sqrt(b)-sqrt(a)) as a rational enclosure (a > 0)."""
    a, b = as_fraction(a), as_fraction(b)
    if not (0 < a < b):
        raise ValueError("need 0 < a < b")
    sa = sqrt_enclosure(a, rel_tol)
    sb = sqrt_enclosure(b, rel_tol)
    return (sb + sa) / (sb - sa)


def shifted_power_expand(z0, m: int) -> Poly:
    """((z - z0)/(-z0))**m = (1 - z/z0)**m in monomial form; constant term 1."""
    z0g = to_gaussian(z0) if not isinstance(z0, GaussianRational) else z0
    if not z0g:
        raise ValueError("z0 must be nonzero")
    if m < 0:
        raise ValueError("power must be >= 0")
    base = Poly([GaussianRational(1), -(GaussianRational(1) / z0g)])
    if z0g.is_real():
        base = Poly([Fraction(1), -(Fraction(1) / z0g.re)])
    return base**m


def round_coeffs(f: Poly) -> tuple[Poly, Poly]:
    """Round each coefficient to the nearest (Gaussian) integer, ties toward zero.

    Returns (q, residual) with residual = f - q; every residual coefficient
    has modulus <= 1/2 (<= sqrt(2)/2 in the Gaussian case).
    """
    q_coeffs = []
    for c in f.coeffs:
        if isinstance(c, GaussianRational):
            q_coeffs.append(c.nearest_gaussian_int())
        else:
            q_coeffs.append(Fraction(nearest_int(c)))
    q = Poly(q_coeffs)
    return q, f - q
