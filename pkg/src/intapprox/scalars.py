"""Exact scalar arithmetic: rationals, Gaussian rationals, and rational enclosures.

Rationals are plain ``fractions.Fraction`` (already normalized: positive
denominator, lowest terms).  Complex work uses :class:`GaussianRational`,
a pair of Fractions, so that all disk constructions stay exact.  Irrational
quantities (square roots, pi powers) are handled through :class:`Enclosure`,
a closed rational interval [lo, hi] guaranteed to contain the true value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rat = Union[int, Fraction]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, float):
        # floats convert exactly (they are dyadic rationals)
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def parse_rational(s: str) -> Fraction:
    """Parse 'p/q' or 'p' (also tolerates a decimal like '0.25')."""
    s = s.strip()
    if "/" in s:
        num, den = s.split("/")
        return Fraction(int(num), int(den))
    if "." in s or "e" in s or "E" in s:
        return Fraction(s)
    return Fraction(int(s))


def format_rational(x: Fraction) -> str:
    """Serialize a rational as 'p/q' (or 'p' when integral)."""
    x = as_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def nearest_int(x: Fraction) -> int:
    """Nearest integer to x, ties toward zero."""
    x = as_fraction(x)
    fl = x.numerator // x.denominator
    frac = x - fl
    if frac > Fraction(1, 2):
        return fl + 1
    if frac < Fraction(1, 2):
        return fl
    # tie: the two candidates are fl and fl+1; pick the one closer to 0
    return fl + 1 if fl + 1 <= 0 else fl


def dist_to_int(x: Fraction) -> Fraction:
    x = as_fraction(x)
    fl = x.numerator // x.denominator
    frac = x - fl
    return min(frac, 1 - frac)


def decimal_str(x: Fraction, sig: int = 20) -> str:
    """Deterministic decimal rendering with `sig` significant digits.

    Pure integer arithmetic (no float round-trip), so output is
    platform-independent and reproducible byte for byte.
    """
    x = as_fraction(x)
    if x == 0:
        return "0"
    sign = "-" if x < 0 else ""
    x = abs(x)
    # find exponent e with 10^e <= x < 10^(e+1)
    e = 0
    if x >= 1:
        ip = x.numerator // x.denominator
        e = len(str(ip)) - 1
    else:
        y = x
        while y < 1:
            y *= 10
            e -= 1
    # digits = round(x / 10^(e - sig + 1))
    shift = sig - 1 - e
    scaled = x * Fraction(10) ** shift
    digits = scaled.numerator // scaled.denominator
    if 2 * (scaled - digits) >= 1:
        digits += 1
    ds = str(digits)
    if len(ds) > sig:  # rounding bumped a digit (e.g. 999.. -> 1000..)
        ds = ds[:sig]
        e += 1
    mantissa = ds[0] + "." + ds[1:]
    return f"{sign}{mantissa}e{e:+03d}"


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex number with rational real and imaginary parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", as_fraction(self.re))
        object.__setattr__(self, "im", as_fraction(self.im))

    # ---- arithmetic -------------------------------------------------
    def __add__(self, other) -> "GaussianRational":
        o = to_gaussian(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other) -> "GaussianRational":
        o = to_gaussian(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other) -> "GaussianRational":
        return to_gaussian(other) - self

    def __mul__(self, other) -> "GaussianRational":
        o = to_gaussian(other)
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "GaussianRational":
        o = to_gaussian(other)
        d = o.abs2()
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )

    def __rtruediv__(self, other) -> "GaussianRational":
        return to_gaussian(other) / self

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __pow__(self, n: int) -> "GaussianRational":
        if n < 0:
            return GaussianRational(1) / (self ** (-n))
        result = GaussianRational(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        try:
            o = to_gaussian(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    # ---- structure --------------------------------------------------
    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        """|z|^2, exact."""
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def is_integer(self) -> bool:
        return self.re.denominator == 1 and self.im.denominator == 1

    def nearest_gaussian_int(self) -> "GaussianRational":
        """Nearest point of Z+iZ, ties toward zero componentwise."""
        return GaussianRational(nearest_int(self.re), nearest_int(self.im))

    def dist2_to_gaussian_int(self) -> Fraction:
        g = self.nearest_gaussian_int()
        return (self - g).abs2()

    def __repr__(self):
        if self.im == 0:
            return f"G({format_rational(self.re)})"
        return f"G({format_rational(self.re)}, {format_rational(self.im)})"

    def serialize(self) -> str:
        return f"{format_rational(self.re)},{format_rational(self.im)}"

    @staticmethod
    def parse(s: str) -> "GaussianRational":
        parts = s.split(",")
        if len(parts) == 1:
            return GaussianRational(parse_rational(parts[0]))
        if len(parts) == 2:
            return GaussianRational(parse_rational(parts[0]), parse_rational(parts[1]))
        raise ValueError(f"cannot parse Gaussian rational from {s!r}")


def to_gaussian(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(as_fraction(x))
    raise TypeError(f"cannot interpret {x!r} as a Gaussian rational")


# ----------------------------------------------------------------------
# Rational enclosures of real quantities
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Enclosure:
    """Closed rational interval certified to contain a real value."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_fraction(self.lo))
        object.__setattr__(self, "hi", as_fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty enclosure [{self.lo}, {self.hi}]")

    @staticmethod
    def exact(x) -> "Enclosure":
        x = as_fraction(x)
        return Enclosure(x, x)

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def rel_width(self) -> Fraction:
        m = min(abs(self.lo), abs(self.hi))
        if m == 0:
            return Fraction(0) if self.width == 0 else Fraction(10**30)
        return self.width / m

    # interval arithmetic (outward by exactness: rational ops are exact)
    def __add__(self, other) -> "Enclosure":
        o = _to_enc(other)
        return Enclosure(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __sub__(self, other) -> "Enclosure":
        o = _to_enc(other)
        return Enclosure(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other) -> "Enclosure":
        return _to_enc(other) - self

    def __mul__(self, other) -> "Enclosure":
        o = _to_enc(other)
        cands = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Enclosure(min(cands), max(cands))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Enclosure":
        o = _to_enc(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("enclosure divisor straddles zero")
        cands = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return Enclosure(min(cands), max(cands))

    def __pow__(self, n: int) -> "Enclosure":
        if n == 0:
            return Enclosure.exact(1)
        if n < 0:
            raise ValueError("negative powers of enclosures not supported")
        if self.lo >= 0 or n % 2 == 1:
            return Enclosure(self.lo**n, self.hi**n)
        # even power of sign-straddling interval
        return Enclosure(Fraction(0), max(self.lo**n, self.hi**n))

    def __neg__(self) -> "Enclosure":
        return Enclosure(-self.hi, -self.lo)

    def contains(self, x) -> bool:
        x = as_fraction(x)
        return self.lo <= x <= self.hi

    # certain comparisons (True only when provable)
    def certainly_le(self, x) -> bool:
        return self.hi <= _to_enc(x).lo

    def certainly_ge(self, x) -> bool:
        return self.lo >= _to_enc(x).hi

    def certainly_lt(self, x) -> bool:
        return self.hi < _to_enc(x).lo

    def __repr__(self):
        if self.is_exact:
            return f"Enc({format_rational(self.lo)})"
        return f"Enc[{format_rational(self.lo)}, {format_rational(self.hi)}]"


def _to_enc(x) -> Enclosure:
    if isinstance(x, Enclosure):
        return x
    return Enclosure.exact(as_fraction(x))


def rational_sqrt(x: Fraction):
    """Exact square root when x is a perfect rational square, else None."""
    x = as_fraction(x)
    if x < 0:
        raise ValueError("sqrt of a negative rational")
    rn = math.isqrt(x.numerator)
    rd = math.isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


def sqrt_enclosure(x, rel_tol: Fraction = Fraction(1, 10**30)) -> Enclosure:
    """Rational enclosure of sqrt(x) with relative width <= rel_tol."""
    x = as_fraction(x)
    if x < 0:
        raise ValueError("sqrt of a negative rational")
    if x == 0:
        return Enclosure.exact(0)
    exact = rational_sqrt(x)
    if exact is not None:
        return Enclosure.exact(exact)
    # scale by 4^k so that integer sqrt has enough precision
    rel_tol = as_fraction(rel_tol)
    bits = max(4, int(1 / rel_tol).bit_length() + 4)
    scale = 1 << bits
    num = x.numerator * scale * scale
    lo_n = math.isqrt(num * x.denominator)  # floor(sqrt(num*den))
    lo = Fraction(lo_n, x.denominator * scale)
    hi = Fraction(lo_n + 1, x.denominator * scale)
    return Enclosure(lo, hi)


def nth_root_enclosure(x, p: int, rel_tol: Fraction = Fraction(1, 10**24)) -> Enclosure:
    """Rational enclosure of x**(1/p) for x >= 0 and integer p >= 1."""
    x = as_fraction(x)
    if p == 1:
        return Enclosure.exact(x)
    if p == 2:
        return sqrt_enclosure(x, rel_tol)
    if x < 0:
        raise ValueError("nth root of a negative rational")
    if x == 0:
        return Enclosure.exact(0)
    rel_tol = as_fraction(rel_tol)
    bits = max(8, int(1 / rel_tol).bit_length() + 8)
    scale = 1 << bits
    # want floor((x * scale^p)^(1/p)) via integer nth root
    target = x.numerator * scale**p
    den = x.denominator

    def inth_root(n: int, k: int) -> int:
        if n == 0:
            return 0
        r = 1 << (-(-n.bit_length() // k))
        while True:
            nr = ((k - 1) * r + n // r ** (k - 1)) // k
            if nr >= r:
                break
            r = nr
        while r**k > n:
            r -= 1
        return r

    # floor of (target/den)^(1/p) * (1/scale): bound num root and den root outward
    lo_n = inth_root(target // den, p)
    lo = Fraction(lo_n, scale)
    hi = Fraction(lo_n + 1, scale)
    # correction: target//den underestimates; hi covers it since
    # (lo_n+1)^p > target/den  =>  hi^p > x
    return Enclosure(lo, hi)


def pow_enclosure(base: Enclosure, n: int) -> Enclosure:
    return _to_enc(base) ** n


def fraction_from_mpf(x) -> Fraction:
    """Exact rational value of an mpmath float (which is a dyadic rational)."""
    sign, man, exp, _ = (+x)._mpf_
    if man == 0:
        return Fraction(0)
    v = Fraction(-man if sign else man)
    return v * (1 << exp) if exp >= 0 else v / (1 << -exp)


_PI_CACHE: dict[int, Enclosure] = {}


def pi_enclosure(bits: int = 128) -> Enclosure:
    """Rational enclosure of pi with ~bits of precision (via mpmath)."""
    if bits in _PI_CACHE:
        return _PI_CACHE[bits]
    from mpmath import mp

    old = mp.prec
    try:
        mp.prec = bits + 10
        v = fraction_from_mpf(+mp.pi)
    finally:
        mp.prec = old
    eps = Fraction(1, 2 ** (bits - 2))
    enc = Enclosure(v - eps, v + eps)
    _PI_CACHE[bits] = enc
    return enc
