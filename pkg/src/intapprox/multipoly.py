"""Sparse multivariate polynomials and certified cube sup norms.

Terms are keyed by exponent tuples (one entry per variable).  Coefficients
are exact Fractions; zero coefficients are never stored.  Cube sup norms use
tensor-product Bernstein enclosures with box subdivision, mirroring the
univariate engine in :mod:`norms`.
"""

from __future__ import annotations

import heapq
import itertools
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Optional

from .polynomials import Poly
from .scalars import Enclosure, as_fraction, format_rational

Exponent = tuple[int, ...]


class MultiPoly:
    """Multivariate polynomial: map from exponent tuple to Fraction."""

    __slots__ = ("terms", "nvars")

    def __init__(self, nvars: int, terms: Mapping[Exponent, Fraction] | None = None):
        self.nvars = nvars
        t: dict[Exponent, Fraction] = {}
        if terms:
            for k, c in terms.items():
                c = as_fraction(c)
                if c:
                    if len(k) != nvars:
                        raise ValueError(f"exponent {k} has wrong arity")
                    t[tuple(k)] = c
        self.terms = t

    # ---- constructors -------------------------------------------------
    @staticmethod
    def zero(nvars: int) -> "MultiPoly":
        return MultiPoly(nvars)

    @staticmethod
    def const(nvars: int, c) -> "MultiPoly":
        return MultiPoly(nvars, {(0,) * nvars: as_fraction(c)})

    @staticmethod
    def from_poly(p: Poly, nvars: int, axis: int) -> "MultiPoly":
        terms = {}
        for k, c in enumerate(p.coeffs):
            if c:
                e = [0] * nvars
                e[axis] = k
                terms[tuple(e)] = c
        return MultiPoly(nvars, terms)

    # ---- structure ------------------------------------------------------
    def total_degree(self) -> int:
        return max((sum(k) for k in self.terms), default=-1)

    def axis_degree(self, j: int) -> int:
        return max((k[j] for k in self.terms), default=0)

    def is_integer(self) -> bool:
        return all(c.denominator == 1 for c in self.terms.values())

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, MultiPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # ---- arithmetic ------------------------------------------------------
    def __add__(self, other) -> "MultiPoly":
        o = other if isinstance(other, MultiPoly) else MultiPoly.const(self.nvars, other)
        t = dict(self.terms)
        for k, c in o.terms.items():
            t[k] = t.get(k, Fraction(0)) + c
        return MultiPoly(self.nvars, t)

    __radd__ = __add__

    def __sub__(self, other) -> "MultiPoly":
        o = other if isinstance(other, MultiPoly) else MultiPoly.const(self.nvars, other)
        t = dict(self.terms)
        for k, c in o.terms.items():
            t[k] = t.get(k, Fraction(0)) - c
        return MultiPoly(self.nvars, t)

    def __rsub__(self, other) -> "MultiPoly":
        return MultiPoly.const(self.nvars, other) - self

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.nvars, {k: -c for k, c in self.terms.items()})

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            c = as_fraction(other)
            return MultiPoly(self.nvars, {k: v * c for k, v in self.terms.items()})
        t: dict[Exponent, Fraction] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                t[k] = t.get(k, Fraction(0)) + c1 * c2
        return MultiPoly(self.nvars, t)

    __rmul__ = __mul__

    def shift_exponents(self, s: Exponent) -> "MultiPoly":
        return MultiPoly(self.nvars, {tuple(a + b for a, b in zip(k, s)): c
                                      for k, c in self.terms.items()})

    def __call__(self, point: Iterable) -> Fraction:
        pt = [as_fraction(x) for x in point]
        total = Fraction(0)
        for k, c in self.terms.items():
            v = c
            for e, x in zip(k, pt):
                if e:
                    v *= x**e
            total += v
        return total

    def serialize(self) -> list[list]:
        items = sorted(self.terms.items())
        return [[list(k), format_rational(c)] for k, c in items]

    def __repr__(self):
        if not self.terms:
            return "MultiPoly(0)"
        parts = []
        for k, c in sorted(self.terms.items()):
            mono = "*".join(f"x{j}^{e}" for j, e in enumerate(k) if e)
            cs = format_rational(c)
            parts.append(f"{cs}*{mono}" if mono else cs)
        return "MultiPoly(" + " + ".join(parts) + ")"


# ----------------------------------------------------------------------
# Tensor Bernstein enclosure on a cube
# ----------------------------------------------------------------------

class _TensorBern:
    """Tensor of integer-scaled Bernstein coefficients on a parameter box."""

    __slots__ = ("flat", "shape", "den", "widths")

    def __init__(self, flat: list[int], shape: tuple[int, ...], den: int,
                 widths: tuple[Fraction, ...]):
        self.flat = flat
        self.shape = shape
        self.den = den
        self.widths = widths

    def upper(self) -> Fraction:
        return Fraction(max(self.flat), self.den)

    def lower(self) -> Fraction:
        return Fraction(min(self.flat), self.den)

    def abs_upper(self) -> Fraction:
        return Fraction(max(max(self.flat), -min(self.flat)), self.den)

    def corner_values(self) -> list[Fraction]:
        out = []
        for corner in itertools.product(*[(0, s - 1) if s > 1 else (0,) for s in self.shape]):
            pos = 0
            for c, s in zip(corner, self.shape):
                pos = pos * s + c
            out.append(Fraction(self.flat[pos], self.den))
        return out

    def subdivide_axis(self, axis: int) -> tuple["_TensorBern", "_TensorBern"]:
        shape = self.shape
        m = shape[axis] - 1
        stride = 1
        for s in shape[axis + 1:]:
            stride *= s
        block = stride * shape[axis]
        left = list(self.flat)
        right = list(self.flat)
        n_outer = len(self.flat) // block
        for outer in range(n_outer):
            base = outer * block
            for inner in range(stride):
                off = base + inner
                row = [self.flat[off + i * stride] for i in range(m + 1)]
                lcol = [row[0] << m]
                rcol = [row[-1] << m]
                cur = row
                for r in range(1, m + 1):
                    cur = [cur[i] + cur[i + 1] for i in range(len(cur) - 1)]
                    sh = m - r
                    lcol.append(cur[0] << sh)
                    rcol.append(cur[-1] << sh)
                rcol.reverse()
                for i in range(m + 1):
                    left[off + i * stride] = lcol[i]
                    right[off + i * stride] = rcol[i]
        d = self.den << m
        w = list(self.widths)
        w[axis] = w[axis] / 2
        w = tuple(w)
        return (_TensorBern(left, shape, d, w), _TensorBern(right, shape, d, w))


def _tensor_from_multipoly(f: MultiPoly, lo: Fraction, hi: Fraction) -> _TensorBern:
    d = f.nvars
    degs = [f.axis_degree(j) for j in range(d)]
    shape = tuple(n + 1 for n in degs)
    size = 1
    for s in shape:
        size *= s
    coeffs: list[Fraction] = [Fraction(0)] * size

    def pos_of(k: Exponent) -> int:
        pos = 0
        for e, s in zip(k, shape):
            pos = pos * s + e
        return pos

    for k, c in f.terms.items():
        coeffs[pos_of(k)] = c

    w = hi - lo
    # per-axis affine composition x_j = lo + w * s_j, then monomial -> Bernstein
    for axis in range(d):
        n = degs[axis]
        if n == 0:
            continue
        # composition matrix: new_a[i] = sum_k a[k] * C(k,i) lo^(k-i) w^i
        comp = [[Fraction(comb(k, i)) * lo ** (k - i) * w**i if i <= k else Fraction(0)
                 for k in range(n + 1)] for i in range(n + 1)]
        bern = [[Fraction(comb(j, k), comb(n, k)) if k <= j else Fraction(0)
                 for k in range(n + 1)] for j in range(n + 1)]
        mat = [[sum(bern[j][k] * comp[k][i] for k in range(n + 1)) for i in range(n + 1)]
               for j in range(n + 1)]
        coeffs = _apply_axis_matrix(coeffs, shape, axis, mat)

    den = 1
    for c in coeffs:
        den = den * c.denominator // _gcd(den, c.denominator)
    flat = [int(c * den) for c in coeffs]
    return _TensorBern(flat, shape, den, tuple([w] * d))


def _apply_axis_matrix(flat: list[Fraction], shape: tuple[int, ...], axis: int,
                       mat: list[list[Fraction]]) -> list[Fraction]:
    m = shape[axis]
    stride = 1
    for s in shape[axis + 1:]:
        stride *= s
    block = stride * m
    out = list(flat)
    n_outer = len(flat) // block
    for outer in range(n_outer):
        base = outer * block
        for inner in range(stride):
            off = base + inner
            col = [flat[off + i * stride] for i in range(m)]
            for i in range(m):
                acc = Fraction(0)
                row = mat[i]
                for k in range(m):
                    if row[k] and col[k]:
                        acc += row[k] * col[k]
                out[off + i * stride] = acc
    return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


class _CubeBox:
    __slots__ = ("bern",)

    def __init__(self, bern: _TensorBern):
        self.bern = bern

    def upper_bound(self) -> Fraction:
        return self.bern.abs_upper()

    def lowers(self):
        return [abs(v) for v in self.bern.corner_values()]

    def split(self):
        widest = max(range(len(self.bern.shape)),
                     key=lambda j: (self.bern.widths[j], -self.bern.shape[j])
                     if self.bern.shape[j] > 1 else (Fraction(-1), 0))
        a, b = self.bern.subdivide_axis(widest)
        return (_CubeBox(a), _CubeBox(b))


def sup_abs_on_cube(f: MultiPoly, cube, request, decide: Optional[Fraction] = None) -> Enclosure:
    """Certified enclosure of max over [a,b]^d of |f|."""
    from .norms import _bnb_max

    if not f:
        return Enclosure.exact(0)
    if all(s == 1 for s in (f.axis_degree(j) + 1 for j in range(f.nvars))) and len(f.terms) <= 1:
        return Enclosure.exact(abs(f.terms.get((0,) * f.nvars, Fraction(0))))
    bern = _tensor_from_multipoly(f, cube.a, cube.b)
    box = _CubeBox(bern)
    return _bnb_max([(Fraction(0), box)], _CubeBox.upper_bound, _CubeBox.lowers,
                    request.tolerance, request.max_boxes, decide)
