"""Certified norm evaluation for exact polynomials.

Sup norms are enclosed by branch-and-bound on exact Bernstein coefficient
ranges: the Bernstein coefficients of a polynomial on a box bound its range,
endpoint coefficients are exact values, and midpoint subdivision tightens the
enclosure quadratically.  All of this runs in integer arithmetic (coefficients
are scaled by a common denominator), so the returned enclosures are rigorous.

Disk sup norms use the maximum-modulus principle: |f|^2 on the boundary
circle is a rational function N(t)/(1+t^2)^(2n) under the tan-half-angle
substitution, handled by the same engine on two charts covering the circle.

Weighted L_p integrals use exact antiderivatives where the exponent
arithmetic permits (p even, or p odd with sign-splitting at isolated real
roots), and adaptive Gauss-Legendre only as a fallback for irrational cases.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

from .polynomials import Poly
from .scalars import (
    Enclosure,
    GaussianRational,
    as_fraction,
    nth_root_enclosure,
    sqrt_enclosure,
)


class PrecisionError(Exception):
    """Requested tolerance could not be certified; raise the precision knobs."""


class DomainError(Exception):
    pass


# ----------------------------------------------------------------------
# Domains
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", as_fraction(self.a))
        object.__setattr__(self, "b", as_fraction(self.b))
        if self.a >= self.b:
            raise DomainError("interval needs a < b")


@dataclass(frozen=True)
class Disk:
    center: GaussianRational
    radius: Fraction

    def __post_init__(self):
        object.__setattr__(self, "radius", as_fraction(self.radius))
        if self.radius <= 0:
            raise DomainError("disk needs radius > 0")


@dataclass(frozen=True)
class Cube:
    a: Fraction
    b: Fraction
    d: int

    def __post_init__(self):
        object.__setattr__(self, "a", as_fraction(self.a))
        object.__setattr__(self, "b", as_fraction(self.b))
        if self.a >= self.b:
            raise DomainError("cube needs a < b")
        if self.d < 1:
            raise DomainError("cube needs d >= 1")


@dataclass(frozen=True)
class Ball:
    r: Fraction
    d: int

    def __post_init__(self):
        object.__setattr__(self, "r", as_fraction(self.r))
        if self.r <= 0 or self.d < 1:
            raise DomainError("ball needs r > 0 and d >= 1")


@dataclass(frozen=True)
class NormRequest:
    tolerance: Fraction = Fraction(1, 10**6)
    precision_bits: int = 128
    max_boxes: int = 200_000

    def __post_init__(self):
        object.__setattr__(self, "tolerance", as_fraction(self.tolerance))
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")


DEFAULT_REQUEST = NormRequest()


# ----------------------------------------------------------------------
# Bernstein form with integer-scaled coefficients
# ----------------------------------------------------------------------

class _Bern:
    """Bernstein coefficients on a parameter box, scaled to integers.

    True coefficients are coeffs[j] / den.  b[0] and b[-1] are exact values
    of the polynomial at the box endpoints.
    """

    __slots__ = ("coeffs", "den")

    def __init__(self, coeffs: list[int], den: int):
        self.coeffs = coeffs
        self.den = den

    @staticmethod
    def from_poly(f: Poly, lo: Fraction, hi: Fraction) -> "_Bern":
        # map [lo,hi] to [0,1], then monomial -> Bernstein
        g = f.compose(Poly([lo, hi - lo]))
        a = g.real_coeffs()
        n = max(len(a) - 1, 0)
        bs = []
        for j in range(n + 1):
            s = Fraction(0)
            for k in range(j + 1):
                if k < len(a) and a[k]:
                    s += a[k] * Fraction(comb(j, k), comb(n, k))
            bs.append(s)
        den = 1
        for b in bs:
            den = den * b.denominator // _gcd(den, b.denominator)
        ints = [int(b * den) for b in bs]
        return _Bern(ints, den)

    def subdivide(self) -> tuple["_Bern", "_Bern"]:
        cs = self.coeffs
        n = len(cs) - 1
        left = [cs[0] << n]
        right = [cs[-1] << n]
        row = cs
        for r in range(1, n + 1):
            row = [row[i] + row[i + 1] for i in range(len(row) - 1)]
            sh = n - r
            left.append(row[0] << sh)
            right.append(row[-1] << sh)
        right.reverse()
        d = self.den << n
        return _Bern(left, d), _Bern(right, d)

    def upper(self) -> Fraction:
        return Fraction(max(self.coeffs), self.den)

    def lower(self) -> Fraction:
        return Fraction(min(self.coeffs), self.den)

    def abs_upper(self) -> Fraction:
        return Fraction(max(max(self.coeffs), -min(self.coeffs)), self.den)

    def end_values(self) -> tuple[Fraction, Fraction]:
        return Fraction(self.coeffs[0], self.den), Fraction(self.coeffs[-1], self.den)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _bnb_max(
    roots: Sequence[tuple[Fraction, _Bern]],
    upper_of,
    lowers_of,
    rel_tol: Fraction,
    max_boxes: int,
    decide: Optional[Fraction] = None,
) -> Enclosure:
    """Generic branch-and-bound maximization over subdividable boxes.

    `upper_of(box)` bounds the box max from above, `lowers_of(box)` yields
    certified attained values.  With `decide`, stops early once the global
    max is provably on one side of that threshold.
    """
    best = None
    counter = itertools.count()
    heap = []
    for _, box in roots:
        for v in lowers_of(box):
            if best is None or v > best:
                best = v
        u = upper_of(box)
        if best is None or u > best:
            heapq.heappush(heap, (-u, next(counter), box))
    if best is None:
        best = Fraction(0)
    boxes = 0
    while heap:
        nu, _, box = heapq.heappop(heap)
        u = -nu
        if u <= best:
            continue
        gap = u - best
        if gap <= rel_tol * max(abs(best), abs(u)):
            return Enclosure(best, u)
        if decide is not None and (best > decide or u < decide):
            return Enclosure(best, u)
        boxes += 1
        if boxes > max_boxes:
            raise PrecisionError(
                "sup-norm enclosure did not reach the requested tolerance; "
                "raise max_boxes or loosen the tolerance"
            )
        for child in box.split():
            for v in child.lowers():
                if v > best:
                    best = v
            cu = child.upper_bound()
            if cu > best:
                heapq.heappush(heap, (-cu, next(counter), child))
    return Enclosure(best, best)


class _AbsBox:
    """Box maximizing |p| on an interval (single Bernstein form)."""

    __slots__ = ("bern",)

    def __init__(self, bern: _Bern):
        self.bern = bern

    def upper_bound(self) -> Fraction:
        return self.bern.abs_upper()

    def lowers(self):
        l, r = self.bern.end_values()
        return (abs(l), abs(r))

    def split(self):
        a, b = self.bern.subdivide()
        return (_AbsBox(a), _AbsBox(b))


class _SignedBox:
    """Box maximizing p itself."""

    __slots__ = ("bern",)

    def __init__(self, bern: _Bern):
        self.bern = bern

    def upper_bound(self) -> Fraction:
        return self.bern.upper()

    def lowers(self):
        return self.bern.end_values()

    def split(self):
        a, b = self.bern.subdivide()
        return (_SignedBox(a), _SignedBox(b))


class _RatioBox:
    """Box maximizing N/D with D > 0 (disk boundary charts).

    When all denominator Bernstein coefficients are positive, N/D is a
    weighted mediant of the coefficient ratios N_j/D_j (the Bernstein basis
    is nonnegative), so max_j N_j/D_j is a valid upper bound that inherits
    the enclosure's quadratic tightening.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: _Bern, den: _Bern):
        self.num = num
        self.den = den

    def upper_bound(self) -> Fraction:
        if min(self.den.coeffs) <= 0:
            # denominator range not yet certified positive: force a split
            return Fraction(10**30)
        # scale factors cancel in the ratio of integer coefficient lists
        best_n, best_d = None, None
        for nj, dj in zip(self.num.coeffs, self.den.coeffs):
            if best_n is None or nj * best_d > best_n * dj:
                best_n, best_d = nj, dj
        val = Fraction(best_n * self.den.den, best_d * self.num.den)
        return max(val, Fraction(0))

    def lowers(self):
        nl, nr = self.num.end_values()
        dl, dr = self.den.end_values()
        return (max(nl, 0) / dl, max(nr, 0) / dr)

    def split(self):
        n1, n2 = self.num.subdivide()
        d1, d2 = self.den.subdivide()
        return (_RatioBox(n1, d1), _RatioBox(n2, d2))


def sup_abs_on_interval(
    f: Poly,
    a,
    b,
    request: NormRequest = DEFAULT_REQUEST,
    decide: Optional[Fraction] = None,
) -> Enclosure:
    """Certified enclosure of max over [a,b] of |f|, f with real coefficients."""
    a, b = as_fraction(a), as_fraction(b)
    if f.degree <= 0:
        v = abs(f[0]) if f else Fraction(0)
        if isinstance(v, GaussianRational):
            raise ValueError("complex constant on a real interval")
        return Enclosure.exact(v)
    if not f.is_real():
        # |f|^2 = re^2 + im^2 is a real polynomial
        fre = Poly([c.re if isinstance(c, GaussianRational) else c for c in f.coeffs])
        fim = Poly([c.im if isinstance(c, GaussianRational) else Fraction(0) for c in f.coeffs])
        sq = sup_abs_on_interval(fre * fre + fim * fim, a, b, request, decide=None)
        return _sqrt_enc(sq, request.tolerance)
    box = _AbsBox(_Bern.from_poly(f, a, b))
    return _bnb_max([(Fraction(0), box)], _AbsBox.upper_bound, _AbsBox.lowers,
                    request.tolerance, request.max_boxes, decide)


def range_on_interval(f: Poly, a, b, request: NormRequest = DEFAULT_REQUEST) -> tuple[Enclosure, Enclosure]:
    """(min, max) enclosures of a real polynomial on [a,b]."""
    a, b = as_fraction(a), as_fraction(b)
    if f.degree <= 0:
        v = f[0] if f else Fraction(0)
        return Enclosure.exact(v), Enclosure.exact(v)
    bern = _Bern.from_poly(f, a, b)
    hi = _bnb_max([(Fraction(0), _SignedBox(bern))], _SignedBox.upper_bound,
                  _SignedBox.lowers, request.tolerance, request.max_boxes)
    bern_neg = _Bern.from_poly(-f, a, b)
    lo_neg = _bnb_max([(Fraction(0), _SignedBox(bern_neg))], _SignedBox.upper_bound,
                      _SignedBox.lowers, request.tolerance, request.max_boxes)
    return Enclosure(-lo_neg.hi, -lo_neg.lo), hi


def _sqrt_enc(sq: Enclosure, rel_tol: Fraction) -> Enclosure:
    lo = sqrt_enclosure(max(sq.lo, Fraction(0)), rel_tol / 4).lo
    hi = sqrt_enclosure(sq.hi, rel_tol / 4).hi
    return Enclosure(lo, hi)


# ----------------------------------------------------------------------
# Disk boundary: |f|^2 as a rational function of t = tan(theta/2)
# ----------------------------------------------------------------------

def _complex_poly_parts(f: Poly) -> tuple[list[Fraction], list[Fraction]]:
    re, im = [], []
    for c in f.coeffs:
        if isinstance(c, GaussianRational):
            re.append(c.re)
            im.append(c.im)
        else:
            re.append(as_fraction(c))
            im.append(Fraction(0))
    return re, im


def _cpoly_mul(a: tuple[Poly, Poly], b: tuple[Poly, Poly]) -> tuple[Poly, Poly]:
    ar, ai = a
    br, bi = b
    return (ar * br - ai * bi, ar * bi + ai * br)


def circle_abs2_charts(f: Poly, center: GaussianRational, radius: Fraction) -> list[tuple[Poly, Poly]]:
    """Charts [(N, D)] with |f(z0 + r e^{i theta})|^2 = N(t)/D(t), t in [-1,1].

    Chart 1 covers theta in (-pi/2, pi/2] via t = tan(theta/2); chart 2 is
    the reciprocal substitution covering the rest of the circle.
    """
    n = max(f.degree, 0)
    r = as_fraction(radius)
    one_t2 = Poly([Fraction(1), Fraction(0), Fraction(1)])  # 1 + t^2
    a_re = Poly([center.re + r, Fraction(0), center.re - r])
    a_im = Poly([center.im, 2 * r, center.im])
    fre, fim = _complex_poly_parts(f)
    acc = (Poly.zero(), Poly.zero())
    apow = (Poly.const(1), Poly.zero())
    one_pows = [Poly.const(1)]
    for _ in range(n):
        one_pows.append(one_pows[-1] * one_t2)
    for k in range(n + 1):
        ck = (Poly.const(fre[k]) if k < len(fre) else Poly.zero(),
              Poly.const(fim[k]) if k < len(fim) else Poly.zero())
        if fre[k] or fim[k]:
            term = _cpoly_mul(ck, apow)
            scale = one_pows[n - k]
            acc = (acc[0] + term[0] * scale, acc[1] + term[1] * scale)
        if k < n:
            apow = _cpoly_mul(apow, (a_re, a_im))
    big_n = acc[0] * acc[0] + acc[1] * acc[1]
    big_d = one_pows[n] * one_pows[n]
    # second chart: t -> 1/s; multiply through by s^(4n)
    deg = 4 * n
    n2 = Poly([big_n[deg - k] for k in range(deg + 1)])
    d2 = Poly([big_d[deg - k] for k in range(deg + 1)])
    return [(big_n, big_d), (n2, d2)]


def sup_abs_on_circle(
    f: Poly,
    center: GaussianRational,
    radius,
    request: NormRequest = DEFAULT_REQUEST,
    decide: Optional[Fraction] = None,
) -> Enclosure:
    """Certified enclosure of max over |z - z0| = r of |f(z)|.

    By the maximum-modulus principle this equals the sup over the closed disk.
    """
    radius = as_fraction(radius)
    if f.degree <= 0:
        c = f[0] if f else Fraction(0)
        if isinstance(c, GaussianRational):
            return _sqrt_enc(Enclosure.exact(c.abs2()), request.tolerance)
        return Enclosure.exact(abs(c))
    charts = circle_abs2_charts(f, center, radius)
    boxes = []
    for num, den in charts:
        bn = _Bern.from_poly(num, Fraction(-1), Fraction(1))
        bd = _Bern.from_poly(den, Fraction(-1), Fraction(1))
        # equalize degree so the coefficient-wise ratio bound applies
        target = max(len(bn.coeffs), len(bd.coeffs))
        bn = _degree_raise(bn, target - len(bn.coeffs))
        bd = _degree_raise(bd, target - len(bd.coeffs))
        boxes.append((Fraction(0), _RatioBox(bn, bd)))
    decide2 = decide * decide if decide is not None else None
    sq = _bnb_max(boxes, _RatioBox.upper_bound, _RatioBox.lowers,
                  request.tolerance, request.max_boxes, decide2)
    return _sqrt_enc(sq, request.tolerance)


def _degree_raise(b: _Bern, extra: int) -> _Bern:
    """Raise Bernstein degree by `extra` (exact, standard averaging formula)."""
    if extra <= 0:
        return b
    coeffs = [Fraction(c, b.den) for c in b.coeffs]
    for _ in range(extra):
        n = len(coeffs) - 1
        new = [coeffs[0]]
        for j in range(1, n + 1):
            new.append(Fraction(j, n + 1) * coeffs[j - 1] + Fraction(n + 1 - j, n + 1) * coeffs[j])
        new.append(coeffs[-1])
        coeffs = new
    den = 1
    for c in coeffs:
        den = den * c.denominator // _gcd(den, c.denominator)
    return _Bern([int(c * den) for c in coeffs], den)


# ----------------------------------------------------------------------
# Public sup-norm dispatch
# ----------------------------------------------------------------------

def sup_norm(f, domain, request: NormRequest = DEFAULT_REQUEST,
             decide: Optional[Fraction] = None) -> Enclosure:
    """Certified enclosure of the sup norm of f on the domain.

    f is a Poly for Interval/Disk domains, a MultiPoly (or Poly when d = 1)
    for Cube domains.
    """
    if isinstance(domain, Interval):
        return sup_abs_on_interval(f, domain.a, domain.b, request, decide)
    if isinstance(domain, Disk):
        return sup_abs_on_circle(f, domain.center, domain.radius, request, decide)
    if isinstance(domain, Cube):
        from .multipoly import MultiPoly, sup_abs_on_cube

        if isinstance(f, Poly):
            if domain.d != 1:
                f = MultiPoly.from_poly(f, domain.d, axis=0)
            else:
                return sup_abs_on_interval(f, domain.a, domain.b, request, decide)
        return sup_abs_on_cube(f, domain, request, decide)
    raise DomainError(f"sup_norm does not support domain {domain!r}")


# ----------------------------------------------------------------------
# Real root isolation (Sturm)
# ----------------------------------------------------------------------

def _poly_gcd(a: Poly, b: Poly) -> Poly:
    while b:
        _, r = a.divmod(b)
        a, b = b, r
        if a.degree >= 1:
            lead = a.coeffs[-1]
            a = a.map_coeffs(lambda c: c / lead)
    return a


def sturm_chain(f: Poly) -> list[Poly]:
    g = _poly_gcd(f, f.derivative())
    if g.degree >= 1:
        f, _ = f.divmod(g)  # square-free part
    chain = [f, f.derivative()]
    while chain[-1]:
        _, r = chain[-2].divmod(chain[-1])
        if not r:
            break
        chain.append(-r)
    return chain


def _sign_variations(chain: list[Poly], x: Fraction) -> int:
    signs = []
    for p in chain:
        v = p(x)
        if v > 0:
            signs.append(1)
        elif v < 0:
            signs.append(-1)
    return sum(1 for s1, s2 in zip(signs, signs[1:]) if s1 != s2)


def count_roots(chain: list[Poly], a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots of the chain's polynomial in (a, b]."""
    return _sign_variations(chain, a) - _sign_variations(chain, b)


def isolate_roots(f: Poly, a, b, max_width: Fraction) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals inside (a, b), each containing exactly one real root
    of f, each of width <= max_width.  Roots exactly at a or b are nudged
    inward by the caller's framing (we count on (a, b])."""
    a, b = as_fraction(a), as_fraction(b)
    chain = sturm_chain(f)
    sq = chain[0]

    out: list[tuple[Fraction, Fraction]] = []

    def rec(lo: Fraction, hi: Fraction, k: int):
        if k == 0:
            return
        if k == 1 and hi - lo <= max_width:
            out.append((lo, hi))
            return
        mid = (lo + hi) / 2
        if sq(mid) == 0:
            eps = min(max_width, hi - lo) / 4
            out_mid_lo, out_mid_hi = mid - eps, mid + eps
            kl = count_roots(chain, lo, out_mid_lo)
            kr = count_roots(chain, out_mid_hi, hi)
            rec(lo, out_mid_lo, kl)
            out.append((out_mid_lo, out_mid_hi))
            rec(out_mid_hi, hi, kr)
            return
        kl = count_roots(chain, lo, mid)
        rec(lo, mid, kl)
        rec(mid, hi, k - kl)

    total = count_roots(chain, a, b)
    rec(a, b, total)
    out.sort()
    return out


# ----------------------------------------------------------------------
# Weighted integrals
# ----------------------------------------------------------------------

def _power_integral(j_exp: Fraction, a: Fraction, b: Fraction):
    """Exact value of integral of t^j over [a,b] when expressible; else None."""
    e = j_exp + 1
    if e == 0:
        return None
    if e.denominator == 1:
        return (b ** int(e) - a ** int(e)) / e
    if e.denominator == 2:
        sa, sb = sqrt_enclosure(a), sqrt_enclosure(b)
        if sa.is_exact and sb.is_exact:
            k = int(2 * e)
            return (sb.lo**k - sa.lo**k) / e
    return None


def weighted_monomial_moments(alpha: Fraction, a: Fraction, b: Fraction, degree: int):
    """[integral of t^(alpha+j) over [a,b] for j = 0..degree] or None if irrational."""
    out = []
    for j in range(degree + 1):
        v = _power_integral(alpha + j, a, b)
        if v is None:
            return None
        out.append(v)
    return out


def weighted_lp_integral(
    f: Poly,
    a,
    b,
    alpha,
    p: int,
    request: NormRequest = DEFAULT_REQUEST,
) -> Enclosure:
    """Enclosure of integral over [a,b] of t^alpha * |f(t)|^p dt (p integer >= 1).

    Exact when p is even and the weighted monomial moments are rational;
    exact up to root-enclosure width when p is odd (sign-splitting at the
    isolated real roots of f); Gauss-Legendre fallback otherwise.
    """
    a, b = as_fraction(a), as_fraction(b)
    alpha = as_fraction(alpha)
    if alpha <= -1:
        raise ValueError("need alpha > -1")
    if a < 0 and alpha != 0:
        raise ValueError("need a >= 0 when alpha != 0")
    if p < 1:
        raise ValueError("need p >= 1")
    if not f:
        return Enclosure.exact(0)
    if p % 2 == 0:
        g = f**p
        moments = weighted_monomial_moments(alpha, a, b, g.degree)
        if moments is not None:
            total = sum((c * m for c, m in zip(g.real_coeffs(), moments)), Fraction(0))
            return Enclosure.exact(total)
        return _quadrature_integral(f, a, b, alpha, p, request)
    # odd p: |f|^p = |f^p|, split at roots of f
    g = f**p
    if alpha.denominator == 1:
        h = Poly.monomial(Fraction(1), int(alpha)) * g if alpha else g
        return _abs_poly_integral(f, h, a, b, request)
    if alpha.denominator == 2 and a >= 0:
        # t = v^2: dt = 2v dv, weight t^alpha -> v^(2 alpha); 2*alpha+1 is even
        k = int(2 * alpha + 1)
        fv = f.compose(Poly([0, 0, 1]))
        hv = Poly.monomial(Fraction(2), k) * g.compose(Poly([0, 0, 1]))
        sa, sb = sqrt_enclosure(a), sqrt_enclosure(b)
        if sa.is_exact and sb.is_exact:
            return _abs_poly_integral(fv, hv, sa.lo, sb.lo, request)
        return _abs_poly_integral_enclosed_ends(fv, hv, sa, sb, request)
    return _quadrature_integral(f, a, b, alpha, p, request)


def weighted_lp_norm(f: Poly, a, b, alpha, p: int,
                     request: NormRequest = DEFAULT_REQUEST) -> Enclosure:
    """Enclosure of the weighted L_p norm (integral^(1/p))."""
    integ = weighted_lp_integral(f, a, b, alpha, p, request)
    lo = nth_root_enclosure(max(integ.lo, Fraction(0)), p, request.tolerance / 4).lo
    hi = nth_root_enclosure(integ.hi, p, request.tolerance / 4).hi
    return Enclosure(lo, hi)


def _abs_poly_integral(f_sign: Poly, h: Poly, a: Fraction, b: Fraction,
                       request: NormRequest) -> Enclosure:
    """Enclosure of integral |h| where sign(h) = sign(f_sign)^odd on [a,b].

    h = t^alpha * f^p with p odd, so h's sign pattern equals f_sign's except
    possibly at t = 0 (the weight vanishes there, harmless for integration).
    """
    big_h = h.antiderivative()
    width0 = (b - a) / 4096
    crude = sum(abs(c) * max(abs(a), abs(b), Fraction(1)) ** k for k, c in enumerate(h.coeffs))
    width = width0
    for _ in range(6):
        pieces = isolate_roots(f_sign, a, b, width)
        lo_total = Fraction(0)
        hi_total = Fraction(0)
        cur = a
        breaks = [iv for iv in pieces if iv[0] > a and iv[1] < b]
        for (rl, rh) in breaks:
            seg = _signed_piece(big_h, f_sign, cur, rl)
            lo_total += seg
            hi_total += seg
            hi_total += (rh - rl) * crude  # transition strip
            cur = rh
        seg = _signed_piece(big_h, f_sign, cur, b)
        lo_total += seg
        hi_total += seg
        enc = Enclosure(lo_total, hi_total)
        if enc.width <= request.tolerance * max(abs(enc.hi), Fraction(1, 10**30)):
            return enc
        width /= 2**10
    return enc


def _signed_piece(big_h: Poly, f_sign: Poly, lo: Fraction, hi: Fraction) -> Fraction:
    if hi <= lo:
        return Fraction(0)
    mid = (lo + hi) / 2
    s = f_sign(mid)
    val = big_h(hi) - big_h(lo)
    if s < 0:
        return -val
    return val


def _abs_poly_integral_enclosed_ends(f_sign: Poly, h: Poly, sa: Enclosure, sb: Enclosure,
                                     request: NormRequest) -> Enclosure:
    """Same as _abs_poly_integral but with irrational endpoints given as enclosures."""
    inner = _abs_poly_integral(f_sign, h, sa.hi, sb.lo, request)
    crude = sum(abs(c) * max(abs(sb.hi), Fraction(1)) ** k for k, c in enumerate(h.coeffs))
    pad = (sa.width + sb.width) * crude
    return Enclosure(inner.lo, inner.hi + pad)


def _quadrature_integral(f: Poly, a: Fraction, b: Fraction, alpha: Fraction,
                         p, request: NormRequest) -> Enclosure:
    """Adaptive Gauss-Legendre fallback for irrational weight/exponent combos.

    Splits at the real roots of f so the integrand is smooth per piece;
    node counts double until two successive values agree to tolerance.  The
    returned enclosure is widened by 4x the last correction (heuristic).
    """
    from mpmath import mp, mpf, gauss_legendre  # noqa: F401  (gauss via mp.quad)

    old = mp.prec
    try:
        mp.prec = request.precision_bits
        roots = isolate_roots(f, a, b, (b - a) / 2**40) if f.degree >= 1 else []
        pts = [mpf(a.numerator) / a.denominator]
        for (rl, rh) in roots:
            m = (rl + rh) / 2
            pts.append(mpf(m.numerator) / m.denominator)
        pts.append(mpf(b.numerator) / b.denominator)
        coeffs = [mpf(c.numerator) / c.denominator for c in f.real_coeffs()]
        al = mpf(alpha.numerator) / alpha.denominator
        pp = mpf(as_fraction(p).numerator) / as_fraction(p).denominator

        def integrand(t):
            acc = mpf(0)
            for c in reversed(coeffs):
                acc = acc * t + c
            w = t**al if alpha != 0 else mpf(1)
            return w * abs(acc) ** pp

        prev = None
        val = None
        for maxdegree in (6, 8, 10, 12):
            val = mp.quad(integrand, pts, maxdegree=maxdegree)
            if prev is not None and abs(val - prev) <= abs(val) * 10**-10:
                break
            prev = val
        from .scalars import fraction_from_mpf

        err = abs(val - prev) if prev is not None else abs(val) * mpf(10) ** -8
        lo = fraction_from_mpf(val - 4 * err - abs(val) * mpf(10) ** -12)
        hi = fraction_from_mpf(val + 4 * err + abs(val) * mpf(10) ** -12)
        return Enclosure(max(lo, Fraction(0)), hi)
    finally:
        mp.prec = old
