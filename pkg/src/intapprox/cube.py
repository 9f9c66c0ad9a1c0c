"""Approximation of a constant by integer polynomials on a cube [a,b]^d.

The construction multiplies per-axis normalized Chebyshev factors to
approximate the constant 1 (zero constant term), then cascades over
monomials: at each total degree the integer part of every coefficient is
split off and the fractional part is re-expanded with the remaining degree
budget.  Lower bounds come from the Chebyshev growth inequality (value at 0
versus sup on the cube) and from the q-adic argument when b = 1/q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional

from .disk import digit_condition
from .multipoly import MultiPoly
from .norms import Cube, DEFAULT_REQUEST, NormRequest, sup_norm
from .polynomials import Poly, cheb, cheb_at_zero, cheb_growth_base
from .scalars import Enclosure, as_fraction, dist_to_int


@dataclass(frozen=True)
class CubeProblem:
    lam: Fraction
    a: Fraction
    b: Fraction
    d: int

    def __post_init__(self):
        object.__setattr__(self, "lam", as_fraction(self.lam))
        object.__setattr__(self, "a", as_fraction(self.a))
        object.__setattr__(self, "b", as_fraction(self.b))
        if not (0 < self.lam < 1):
            raise ValueError("need lambda in (0,1)")
        if not (0 < self.a < self.b < 1):
            raise ValueError("need 0 < a < b < 1")
        if self.a + self.b > 1:
            raise ValueError("need a + b <= 1 so the origin is the nearest lattice point")
        if self.d < 1:
            raise ValueError("need d >= 1")

    def domain(self) -> Cube:
        return Cube(self.a, self.b, self.d)


def monomial_count(d: int, n: int) -> int:
    """Number of monomials x^k with |k| <= n in d variables: C(d+n, d)."""
    if d < 1 or n < 0:
        raise ValueError("need d >= 1 and n >= 0")
    return comb(d + n, d)


@dataclass(frozen=True)
class CubeRates:
    rho_cheb: Enclosure
    rho: Enclosure
    rho_is_b: bool


def cube_rates(a, b, rel_tol: Fraction = Fraction(1, 10**30)) -> CubeRates:
    """rho = max{(sqrt(b)-sqrt(a))/(sqrt(b)+sqrt(a)), b} with an exact comparison.

    rho_cheb >= b  <=>  sqrt(b)(1-b) >= sqrt(a)(1+b)  <=>  b(1-b)^2 >= a(1+b)^2,
    a rational test (both sides nonnegative since b < 1).
    """
    a, b = as_fraction(a), as_fraction(b)
    base = cheb_growth_base(a, b, rel_tol)  # (sqrt b + sqrt a)/(sqrt b - sqrt a)
    rho_cheb = Enclosure.exact(1) / base
    cheb_ge_b = b * (1 - b) ** 2 >= a * (1 + b) ** 2
    rho = rho_cheb if cheb_ge_b else Enclosure.exact(b)
    return CubeRates(rho_cheb, rho, not cheb_ge_b)


def split_degree(n: int, d: int) -> tuple[int, ...]:
    """n = sum n_j with n_j in {floor(n/d), ceil(n/d)}, larger parts first."""
    q, rem = divmod(n, d)
    return tuple([q + 1] * rem + [q] * (d - rem))


def cube_unit_approx(a, b, d: int, n: int) -> tuple[MultiPoly, Fraction]:
    """Polynomial U with zero constant term approximating 1 on [a,b]^d.

    U = 1 - prod_j C_{n_j}(x_j)/C_{n_j}(0); the certified bound on |1 - U|
    is prod_j 1/|C_{n_j}(0)| (exact rational), which is at most
    2^d * rho_cheb^n.
    """
    a, b = as_fraction(a), as_fraction(b)
    parts = split_degree(n, d)
    prod = MultiPoly.const(d, 1)
    bound = Fraction(1)
    for j, nj in enumerate(parts):
        if nj == 0:
            continue
        c0 = cheb_at_zero(nj, a, b)
        axis_poly = cheb(nj, a, b).map_coeffs(lambda c: c / c0)
        prod = prod * MultiPoly.from_poly(axis_poly, d, axis=j)
        bound /= abs(c0)
    u = MultiPoly.const(d, 1) - prod
    return u, bound


def cube_construct(problem: CubeProblem, n: int,
                   request: NormRequest = DEFAULT_REQUEST) -> tuple[MultiPoly, Enclosure]:
    """Cascade over monomials; returns (integer q_n, certified sup error).

    Integer parts here are floors, matching the fractional-part recursion
    delta in [0,1); the per-monomial expansion budget is n - |s|.
    """
    d = problem.d
    lam, a, b = problem.lam, problem.a, problem.b
    units: dict[int, tuple[MultiPoly, Fraction]] = {}

    def unit_for(budget: int) -> tuple[MultiPoly, Fraction]:
        if budget not in units:
            units[budget] = cube_unit_approx(a, b, d, budget)
        return units[budget]

    pending: dict[tuple[int, ...], Fraction] = {(0,) * d: lam}
    out: dict[tuple[int, ...], Fraction] = {}
    for level in range(n + 1):
        keys = sorted(k for k in pending if sum(k) == level)
        for key in keys:
            delta = pending.pop(key)
            fl = delta.numerator // delta.denominator
            if fl:
                out[key] = out.get(key, Fraction(0)) + fl
            delta -= fl
            if not delta or level == n:
                continue
            u, _ = unit_for(n - level)
            for k, c in u.terms.items():
                idx = tuple(x + y for x, y in zip(key, k))
                pending[idx] = pending.get(idx, Fraction(0)) + delta * c
    q = MultiPoly(d, out)
    assert q.is_integer()
    err_poly = MultiPoly.const(d, lam) - q
    err = sup_norm(err_poly if d > 1 else _to_poly(err_poly), problem.domain(), request)
    return q, err


def _to_poly(f: MultiPoly) -> Poly:
    coeffs = [Fraction(0)] * (f.total_degree() + 1)
    for k, c in f.terms.items():
        coeffs[k[0]] = c
    return Poly(coeffs)


def cube_upper_bound(problem: CubeProblem, n: int) -> Enclosure:
    """2^d * monomial_count(d, n) * rho^n (the proof's pre-simplification chain)."""
    rates = cube_rates(problem.a, problem.b)
    return rates.rho**n * (2**problem.d * monomial_count(problem.d, n))


def cube_lower_bernstein(problem: CubeProblem, n: int) -> Enclosure:
    """dist(lambda, Z) * rho_cheb^n via the growth inequality at the origin."""
    rates = cube_rates(problem.a, problem.b)
    return rates.rho_cheb**n * dist_to_int(problem.lam)


def cube_lower_qadic(problem: CubeProblem, n: int) -> Optional[Fraction]:
    """b^(n+2) when b = 1/q and the digit condition holds.

    Valid for infinitely many n (an envelope, not a per-n certificate):
    the point (b,...,b) lies in the cube and q_n(b) has denominator q^n.
    """
    b = problem.b
    if b.numerator != 1:
        return None
    q = b.denominator
    if q < 2:
        return None
    if not digit_condition(problem.lam, q, None):
        return None
    return b ** (n + 2)


def growth_product(a, b, parts: tuple[int, ...]) -> Fraction:
    """prod_j |C_{n_j}(0; a, b)|, the Chebyshev growth factor at the origin."""
    prod = Fraction(1)
    for nj in parts:
        if nj:
            prod *= abs(cheb_at_zero(nj, a, b))
    return prod
