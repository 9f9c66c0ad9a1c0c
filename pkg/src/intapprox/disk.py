"""Approximation of a constant by Gaussian-integer polynomials on a disk.

The closed disk K_r(z0) must avoid the lattice Z+iZ.  After canonicalization
(lattice shift, the reflection z -> 1-z, conjugation) the center lies in
[0, 1/2]^2, so 0 is the nearest lattice point.  The construction cascade
rounds one coefficient per degree and re-expands the fractional part against
(1 - z/z0)^(n-k); its certified error is sandwiched between the growth lower
bound dist(lambda, Z+iZ) * (r/|z0|)^n and the upper bound (n+1) * rho^n with
rho = max(r/|z0|, |z0|+r).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

from .norms import Disk, DEFAULT_REQUEST, NormRequest, sup_abs_on_circle
from .polynomials import Poly, shifted_power_expand
from .scalars import (
    Enclosure,
    GaussianRational,
    as_fraction,
    dist_to_int,
    sqrt_enclosure,
    to_gaussian,
)


class InfeasibleError(Exception):
    """The disk contains a Gaussian integer: non-integer constants cannot be approximated."""


class ProtocolError(Exception):
    """Operation applied to a non-canonical problem."""


@dataclass(frozen=True)
class DiskProblem:
    lam: GaussianRational
    center: GaussianRational
    radius: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lam", to_gaussian(self.lam))
        object.__setattr__(self, "center", to_gaussian(self.center))
        object.__setattr__(self, "radius", as_fraction(self.radius))
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    def contains_gaussian_integer(self) -> bool:
        return self.center.dist2_to_gaussian_int() <= self.radius**2

    def is_canonical(self) -> bool:
        z = self.center
        half = Fraction(1, 2)
        return (0 <= z.re <= half and 0 <= z.im <= half
                and not self.contains_gaussian_integer())

    def domain(self) -> Disk:
        return Disk(self.center, self.radius)


@dataclass(frozen=True)
class Transform:
    """w = unit * (conj(z) if conjugate else z) + shift, with unit in {1,-1}.

    Sends the lattice to itself, hence integer polynomials in w pull back to
    integer polynomials in z.
    """

    conjugate: bool = False
    unit: int = 1
    shift: GaussianRational = GaussianRational(Fraction(0))

    def apply_point(self, z: GaussianRational) -> GaussianRational:
        w = z.conj() if self.conjugate else z
        return w * self.unit + self.shift

    def apply_lambda(self, lam: GaussianRational) -> GaussianRational:
        return lam.conj() if self.conjugate else lam

    def pull_back(self, q: Poly) -> Poly:
        """Integer polynomial for the original problem from a canonical one."""
        if self.conjugate:
            # |conj(lam) - q(w)| at w = unit*conj(z)+shift equals
            # |lam - conj(q)(unit*z + conj(shift))| at z
            inner = Poly([self.shift.conj(), GaussianRational(Fraction(self.unit))])
            return q.conj_coeffs().compose(inner)
        inner = Poly([self.shift, GaussianRational(Fraction(self.unit))])
        return q.compose(inner)


def canonicalize(problem: DiskProblem) -> tuple[DiskProblem, Transform]:
    """Equivalent problem with center in [0,1/2]^2 plus the lattice symmetry used."""
    if problem.contains_gaussian_integer():
        raise InfeasibleError(
            "disk contains a Gaussian integer; approximation of a non-integer "
            "constant is impossible"
        )
    z = problem.center
    conj_flag = False
    unit = 1
    shift = GaussianRational(Fraction(0))

    def compose(new_conj: bool, new_unit: int, new_shift: GaussianRational):
        # current map T(z) = unit*sigma(z) + shift; apply S(w) = u*tau(w) + g
        nonlocal conj_flag, unit, shift
        if new_conj:
            conj_flag = not conj_flag
            unit = unit  # conj of (+-1) is itself
            shift = shift.conj()
        unit *= new_unit
        shift = shift * new_unit + new_shift

    # lattice shift into [0,1)^2
    fx = z.re - (z.re.numerator // z.re.denominator)
    fy = z.im - (z.im.numerator // z.im.denominator)
    g = GaussianRational(fx - z.re, fy - z.im)  # integer components
    compose(False, 1, g)
    z = z + g
    half = Fraction(1, 2)
    if z.re > half:
        # z -> 1 + i - z keeps [0,1)^2 and flips both coordinates around 1/2
        compose(False, -1, GaussianRational(Fraction(1), Fraction(1)))
        z = GaussianRational(1 - z.re, 1 - z.im)
    if z.im > half:
        # conjugate then shift back up: z -> conj(z) + i
        compose(True, 1, GaussianRational(Fraction(0), Fraction(1)))
        z = GaussianRational(z.re, 1 - z.im)
    tr = Transform(conj_flag, unit, shift)
    assert tr.apply_point(problem.center) == z
    canon = DiskProblem(tr.apply_lambda(problem.lam), z, problem.radius)
    return canon, tr


@dataclass(frozen=True)
class DiskRates:
    """rho1 = r/|z0|, rho2 = |z0|+r, rho = max; exact squares plus enclosures."""

    rho1_sq: Fraction
    rho2_sq_is_exact: bool
    rho1: Enclosure
    rho2: Enclosure
    rho: Enclosure
    rho_is_rho1: bool


def disk_rates(problem: DiskProblem, rel_tol: Fraction = Fraction(1, 10**30)) -> DiskRates:
    z0 = problem.center
    r = problem.radius
    s = z0.abs2()
    if s == 0:
        raise InfeasibleError("center at a lattice point")
    rho1_sq = r * r / s
    mod = sqrt_enclosure(s, rel_tol)
    rho1 = Enclosure.exact(r) / mod
    rho2 = mod + Enclosure.exact(r)
    # exact comparison of rho1 = r/t vs rho2 = t + r with t = |z0|, t^2 = s:
    # rho1 >= rho2  <=>  r >= t^2 + r t  <=>  r - s >= r t
    c = r - s
    if c < 0:
        rho1_ge = False
    else:
        rho1_ge = c * c >= r * r * s
    rho = rho1 if rho1_ge else rho2
    return DiskRates(rho1_sq, mod.is_exact, rho1, rho2, rho, rho1_ge)


def _require_canonical(problem: DiskProblem):
    if not problem.is_canonical():
        raise ProtocolError("problem must be canonicalized first")


def disk_construct(problem: DiskProblem, n: int,
                   request: NormRequest = DEFAULT_REQUEST) -> tuple[Poly, Enclosure]:
    """Cascade construction of a Gaussian-integer q_n; returns (q_n, certified error).

    At step k the coefficient of z^k is rounded to the nearest Gaussian
    integer and the fractional part is re-expanded against
    (1 - z/z0)^(n-k), pushing the defect to higher degrees.
    """
    _require_canonical(problem)
    q = _cascade(Poly([problem.lam]), problem.center, n)
    err_poly = Poly([problem.lam]) - q
    err = sup_abs_on_circle(err_poly, problem.center, problem.radius, request)
    return q, err


def _cascade(target: Poly, z0: GaussianRational, n: int) -> Poly:
    """Approximate an arbitrary-coefficient polynomial by a Gaussian-integer one."""
    pending: dict[int, GaussianRational] = {}
    for k, c in enumerate(target.coeffs):
        if k > n:
            break
        pending[k] = to_gaussian(c)
    out: dict[int, GaussianRational] = {}
    for k in range(n + 1):
        cur = pending.pop(k, None)
        if cur is None or not cur:
            continue
        g = cur.nearest_gaussian_int()
        if g:
            out[k] = out.get(k, GaussianRational(Fraction(0))) + g
        delta = cur - g
        if not delta or k == n:
            continue
        # delta*z^k = -delta*sum_{j>=1} a_j z^{k+j} + delta*z^k*(1-z/z0)^{n-k}
        m = n - k
        expansion = shifted_power_expand(z0, m)
        for j in range(1, m + 1):
            aj = expansion[j]
            if aj:
                prev = pending.get(k + j, GaussianRational(Fraction(0)))
                pending[k + j] = prev - delta * aj
    coeffs = [out.get(k, GaussianRational(Fraction(0))) for k in range(n + 1)]
    return Poly(coeffs)


def disk_upper_bound(problem: DiskProblem, n: int) -> Enclosure:
    """(n+1) * rho^n; exact when |z0| is rational."""
    _require_canonical(problem)
    rates = disk_rates(problem)
    return (rates.rho**n) * (n + 1)


def dist_to_gaussian_int(lam: GaussianRational) -> Enclosure:
    d2 = lam.dist2_to_gaussian_int()
    return sqrt_enclosure(d2)


def disk_lower_growth(problem: DiskProblem, n: int) -> Enclosure:
    """dist(lambda, Z+iZ) * rho1^n, a lower bound on the best error for every n."""
    _require_canonical(problem)
    rates = disk_rates(problem)
    return dist_to_gaussian_int(problem.lam) * rates.rho1**n


# ----------------------------------------------------------------------
# q-adic lower bound
# ----------------------------------------------------------------------

def digit_condition(lam_re: Fraction, q: int, digit_count: Optional[int] = None) -> bool:
    """True iff the q-ary expansion of frac(lam_re) never repeats 0 or q-1.

    For rational input the digit stream is eventually periodic, so
    digit_count=None (the infinite check) is decided from one period.
    """
    if q < 2:
        raise ValueError("base must be >= 2")
    x = as_fraction(lam_re)
    x = x - (x.numerator // x.denominator)
    digits: list[int] = []
    seen: dict[Fraction, int] = {}
    while x not in seen:
        seen[x] = len(digits)
        y = x * q
        d = y.numerator // y.denominator
        digits.append(d)
        x = y - d
        if digit_count is not None and len(digits) >= digit_count + 1:
            break
    if digit_count is None:
        # unroll one extra period so every adjacent pair (incl. wrap) appears
        start = seen.get(x, len(digits))
        digits = digits + digits[start:] + digits[start:start + 1]
    else:
        digits = digits[:digit_count]
    for d1, d2 in zip(digits, digits[1:]):
        if d1 == d2 == 0 or d1 == d2 == q - 1:
            return False
    return True


def qadic_applicable(problem: DiskProblem, q: int) -> Optional[Fraction]:
    """A rational p/q inside the disk, if the q-adic geometry applies."""
    if q < 2:
        return None
    z0, r = problem.center, problem.radius
    # |z0| + r = 1/q  <=>  |z0|^2 = (1/q - r)^2 with 1/q >= r
    target = Fraction(1, q) - r
    if target < 0 or z0.abs2() != target * target:
        return None
    for p in range(1, q):
        pt = GaussianRational(Fraction(p, q))
        if (pt - z0).abs2() <= r * r:
            return Fraction(p, q)
    return None


def qadic_lower_bound(problem: DiskProblem, q: int, n: int) -> Optional[Fraction]:
    """q^-(n+2) when the geometry and the digit condition both hold, else None.

    Any Gaussian-integer polynomial takes a value with real part p1/q^n at
    p/q, and the digit condition keeps Re(lambda) at distance >= q^-(n+2)
    from every such rational.
    """
    _require_canonical(problem)
    if qadic_applicable(problem, q) is None:
        return None
    if not digit_condition(problem.lam.re, q, None):
        return None
    return Fraction(1, q ** (n + 2))


# ----------------------------------------------------------------------
# The p/q^s family
# ----------------------------------------------------------------------

def pqs_base(q: int, n: int) -> Poly:
    """g_n(z) = 1/q - (1/q)(1 - qz)^n, an integer polynomial."""
    one_minus = Poly([1, -q]) ** n
    g = (Poly.const(Fraction(1, q)) - one_minus * Fraction(1, q))
    assert g.is_integer()
    return g


def pqs_construct(p: int, q: int, s: int, n: int) -> tuple[Poly, Poly]:
    """Integer approximant for lambda = p/q^s via the binomial identity.

    Returns (q_n, error_poly) with the exact identity
    lambda - q_n(z) = (p/q^s) (1 - qz)^(s*floor(n/s)).
    """
    if q < 2 or s < 1:
        raise ValueError("need q >= 2 and s >= 1")
    lam = Fraction(p, q**s)
    if lam.denominator == 1:
        raise ValueError("lambda = p/q^s must not be an integer")
    m = n // s
    if m < 1:
        raise ValueError("degree budget too small: need n >= s")
    g = pqs_base(q, m)
    # p * (1/q - g)^s expanded: lambda + sum_{j>=1} C(s,j) p q^(j-s) (-g)^j
    approx = Poly.zero()
    gpow = Poly.const(1)
    for j in range(1, s + 1):
        gpow = gpow * g
        term = gpow * Fraction(comb(s, j) * p * (-1) ** (j + 1), q ** (s - j))
        approx = approx + term
    err = Poly([lam]) - approx
    expected = (Poly([1, -q]) ** (s * m)) * lam
    if err != expected:
        raise AssertionError("binomial identity failed")
    if not approx.is_integer():
        raise ValueError(
            f"the p/q^s family does not produce integer coefficients for "
            f"(p={p}, q={q}, s={s}); low-order binomial terms are fractional"
        )
    return approx, err


def pqs_error_bound(p: int, q: int, s: int, n: int, problem: DiskProblem) -> Enclosure:
    """|lambda| * (q * max_{K_r} |z - 1/q|)^(s*floor(n/s)) via exact geometry."""
    lam = abs(Fraction(p, q**s))
    m = n // s
    z0, r = problem.center, problem.radius
    centerdist = sqrt_enclosure((z0 - GaussianRational(Fraction(1, q))).abs2())
    maxdist = centerdist + Enclosure.exact(r)
    return Enclosure.exact(lam) * (maxdist * q) ** (s * m)


# ----------------------------------------------------------------------
# Corollary: analytic functions via Taylor truncation
# ----------------------------------------------------------------------

def disk_construct_function(
    taylor: Sequence,
    majorant: Fraction,
    big_r: Fraction,
    problem: DiskProblem,
    n: int,
    request: NormRequest = DEFAULT_REQUEST,
) -> tuple[Poly, Enclosure, Fraction]:
    """Integer approximant for an analytic f given its Taylor coefficients at z0.

    taylor[k] is the exact coefficient of (z - z0)^k; majorant bounds
    sum |a_k| R^k.  The series is truncated at degree n (tail bounded by
    (r/R)^(n+1) * majorant) and the truncation is fed to the cascade.
    Returns (q_n, certified error vs the truncation, tail bound).
    """
    _require_canonical(problem)
    big_r = as_fraction(big_r)
    majorant = as_fraction(majorant)
    r = problem.radius
    if big_r <= r:
        raise ValueError("need R > r")
    if majorant < 0:
        raise ValueError("majorant must bound sum |a_k| R^k")
    z0 = problem.center
    coeffs = [to_gaussian(c) for c in taylor[: n + 1]]
    # expand sum a_k (z-z0)^k into monomials
    target = Poly.zero()
    shift_pow = Poly.const(GaussianRational(Fraction(1)))
    base = Poly([-z0, GaussianRational(Fraction(1))])
    for k, c in enumerate(coeffs):
        if c:
            target = target + shift_pow * c
        if k < len(coeffs) - 1:
            shift_pow = shift_pow * base
    q = _cascade(target, z0, n)
    err = sup_abs_on_circle(target - q, problem.center, problem.radius, request)
    tail = (r / big_r) ** (n + 1) * majorant
    return q, err, tail
