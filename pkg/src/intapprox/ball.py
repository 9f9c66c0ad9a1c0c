"""Weighted L_p machinery on [0,1] and integer approximation on balls.

The radial reduction turns the L_p(K_r) problem for radial integer
polynomials Q(|x|^2) into a weighted problem on [0, r^2] with weight
u^alpha, alpha = d/2 - 1.  The exact L2 minimizers with prescribed
vanishing at 0 (normal equations against the Hilbert-type Gram matrix)
drive both the lower-bound families and the constructive stages; the final
conversion to integer coefficients re-expands an X-divisible residue into
the binomial mixture sum p_s X^s (1-X)^(N-s) and rounds digit by digit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional

from .norms import (
    DEFAULT_REQUEST,
    Interval,
    NormRequest,
    range_on_interval,
    sup_abs_on_interval,
    weighted_lp_integral,
    weighted_lp_norm,
)
from .polynomials import Poly, cheb_at_zero, round_coeffs
from .scalars import (
    Enclosure,
    as_fraction,
    dist_to_int,
    nearest_int,
    nth_root_enclosure,
    pi_enclosure,
)


class UnsupportedCaseError(Exception):
    """Constructive path not implemented for this parameter range (documented scope cut)."""


class NonexistenceError(Exception):
    """Certified impossibility (transfinite diameter >= 1)."""


class SearchExhaustedError(Exception):
    """No unit polynomial found within the search budget (distinct from nonexistence)."""


@dataclass(frozen=True)
class BallProblem:
    lam: Fraction
    r: Fraction
    d: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "lam", as_fraction(self.lam))
        object.__setattr__(self, "r", as_fraction(self.r))
        if not (0 < self.lam < 1):
            raise ValueError("need lambda in (0,1)")
        if self.r <= 0:
            raise ValueError("need r > 0")
        if self.d < 1 or self.p < 1:
            raise ValueError("need d >= 1 and p >= 1")

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.d, 2) - 1


# ----------------------------------------------------------------------
# Lemma 3: exact weighted-L2 minimizers with vanishing constraints
# ----------------------------------------------------------------------

def lemma3_value(alpha, m: int, n: int) -> Fraction:
    """Closed form of min over {a_k} of integral t^alpha (1 - sum_m^n a_k t^k)^2."""
    alpha = as_fraction(alpha)
    if not n >= m >= 1:
        raise ValueError("need n >= m >= 1")
    if alpha <= -1:
        raise ValueError("need alpha > -1")
    val = Fraction(1) / (alpha + 1)
    for k in range(m, n + 1):
        val *= (Fraction(k) / (k + alpha + 1)) ** 2
    return val


@dataclass(frozen=True)
class Lemma3Family:
    alpha: Fraction
    m: int
    n: int
    poly: Poly          # 1 - sum_{k=m}^n a_k t^k
    value: Fraction     # exact minimal integral


def lemma3_poly(alpha, m: int, n: int) -> Lemma3Family:
    """Solve the normal equations exactly; the minimum must equal the closed form.

    Gram entries are integral of t^(alpha+j+k) over [0,1] = 1/(alpha+j+k+1),
    all rational, so Gaussian elimination stays exact.
    """
    alpha = as_fraction(alpha)
    if not n >= m >= 1:
        raise ValueError("need n >= m >= 1")
    size = n - m + 1
    idx = list(range(m, n + 1))
    mat = [[Fraction(1, 1) / (alpha + j + k + 1) for k in idx] for j in idx]
    rhs = [Fraction(1, 1) / (alpha + j + 1) for j in idx]
    sol = _solve_exact(mat, rhs)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[0] = Fraction(1)
    for k, a in zip(idx, sol):
        coeffs[k] = -a
    poly = Poly(coeffs)
    value = Fraction(1) / (alpha + 1) - sum(a / (alpha + j + 1) for j, a in zip(idx, sol))
    closed = lemma3_value(alpha, m, n)
    if value != closed:
        raise AssertionError(
            f"normal-equation optimum {value} != closed form {closed} "
            f"(alpha={alpha}, m={m}, n={n})"
        )
    return Lemma3Family(alpha, m, n, poly, value)


def _solve_exact(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(rhs)
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise AssertionError("Gram matrix must be positive definite")
        a[col], a[piv] = a[piv], a[col]
        inv = Fraction(1) / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def lemma3_pstar(alpha, m: int, n: int) -> Poly:
    """Squared family member: works in every L_p since the square is bounded.

    (p^2)(0) = 1 and integral t^alpha p^(2p) <= (max|p|)^(2p-2) integral
    t^alpha p^2, so the L2 rate transfers to all p >= 1.
    """
    fam = lemma3_poly(alpha, m, max(m, n // 2))
    return fam.poly * fam.poly


# ----------------------------------------------------------------------
# Lemma 1: weighted lower bound through the value at zero
# ----------------------------------------------------------------------

def eq3_growth_constant(n: int) -> Fraction:
    """|C_n(0; 1/n^2, 1)|: the absolute constant in the interval-shrink growth bound."""
    if n < 2:
        raise ValueError("need n >= 2")
    return abs(cheb_at_zero(n, Fraction(1, n * n), Fraction(1)))


def lemma1_lower(alpha, p: int, n: int, f: Poly,
                 request: NormRequest = DEFAULT_REQUEST) -> Enclosure:
    """(integral t^alpha |f|^p) * n^(2+2*alpha) / |f(0)|^p.

    Callers assert this ratio stays bounded below across families; the
    minimal families of lemma3 make it bounded above as well.
    """
    alpha = as_fraction(alpha)
    f0 = f[0]
    if not f0:
        raise ValueError("degenerate input: f(0) = 0")
    integ = weighted_lp_integral(f, 0, 1, alpha, p, request)
    power = rational_pow_enclosure(Fraction(n), 2 + 2 * alpha)
    return integ * power / Enclosure.exact(abs(f0) ** p)


def rational_pow_enclosure(base: Fraction, expo: Fraction) -> Enclosure:
    """base^expo for base > 0 and rational expo (exact when expo is integral)."""
    base, expo = as_fraction(base), as_fraction(expo)
    if base <= 0:
        raise ValueError("need base > 0")
    if expo.denominator == 1:
        e = int(expo)
        v = base**e if e >= 0 else Fraction(1) / base ** (-e)
        return Enclosure.exact(v)
    num, den = expo.numerator, expo.denominator
    inner = base**num if num >= 0 else Fraction(1) / base ** (-num)
    return nth_root_enclosure(inner, den)


# ----------------------------------------------------------------------
# Radial reduction
# ----------------------------------------------------------------------

def sphere_area(d: int, bits: int = 128) -> Enclosure:
    """Surface area of the unit sphere in R^d: 2 pi^(d/2) / Gamma(d/2)."""
    coeff, k = sphere_area_coeff(d)
    return Enclosure.exact(coeff) * pi_enclosure(bits) ** k


def sphere_area_coeff(d: int) -> tuple[Fraction, int]:
    """sigma_{d-1} = coeff * pi^k with rational coeff (k = floor(d/2))."""
    if d < 1:
        raise ValueError("need d >= 1")
    if d % 2 == 0:
        k = d // 2
        fact = 1
        for i in range(1, k):
            fact *= i
        return Fraction(2, fact), k
    k = (d - 1) // 2
    # 2 pi^(k+1/2) / Gamma(k+1/2) with Gamma(k+1/2) = (2k)! sqrt(pi) / (4^k k!)
    fact_2k = 1
    for i in range(1, 2 * k + 1):
        fact_2k *= i
    fact_k = 1
    for i in range(1, k + 1):
        fact_k *= i
    return Fraction(2 * 4**k * fact_k, fact_2k), k


def radial_lp_error(lam, q_radial: Poly, r, d: int, p: int,
                    request: NormRequest = DEFAULT_REQUEST) -> Enclosure:
    """L_p(K_r) error of the radial polynomial Q(|x|^2) against lambda.

    Reduces to sigma_{d-1} * integral over [0,r] of t^(d-1) |lambda - Q(t^2)|^p dt;
    the angular factor is carried as a rational multiple of a pi power.
    """
    lam = as_fraction(lam)
    r = as_fraction(r)
    g = Poly([lam]) - q_radial.compose(Poly([0, 0, 1]))  # lambda - Q(t^2)
    integ = weighted_lp_integral(g, 0, r, d - 1, p, request)
    total = sphere_area(d, request.precision_bits) * integ
    lo = nth_root_enclosure(max(total.lo, Fraction(0)), p, request.tolerance / 4).lo
    hi = nth_root_enclosure(total.hi, p, request.tolerance / 4).hi
    return Enclosure(lo, hi)


# ----------------------------------------------------------------------
# Unit polynomials (Eq. (5)) and the Lemma-2 conversion
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class UnitPolynomial:
    """Monic integer X with 0 <= X <= rho < 1 on E = [0, c]; X vanishes at
    every integer point of E.  `square_root` witnesses nonnegativity when X
    is a square (None when X = t is nonnegative structurally)."""

    poly: Poly
    rho: Fraction
    c: Fraction
    square_root: Optional[Poly] = None

    @property
    def degree(self) -> int:
        return self.poly.degree


def find_unit_X(c, max_degree: int = 12,
                request: NormRequest = DEFAULT_REQUEST) -> UnitPolynomial:
    """Search for a monic integer X with 0 <= X <= rho < 1 on [0, c].

    Candidates: the product of (t - g) over integer g in [0, c] when it is
    nonnegative on [0, c] (i.e. c < 1), else its square; preference is the
    smallest degree (conversion digit count scales with it), then smallest
    certified rho.  For c >= 4 the minimal monic sup is 2 (c/4)^l >= 2, so
    nonexistence is certified.
    """
    c = as_fraction(c)
    if c <= 0:
        raise ValueError("need c > 0")
    if c >= 4:
        raise NonexistenceError(
            "transfinite diameter c/4 >= 1: every monic integer polynomial "
            "has sup >= 2 on [0, c]"
        )
    ints = list(range(0, int(c) + 1)) if c >= 1 else [0]
    prod = Poly([1])
    for g in ints:
        prod = prod * Poly([-g, 1])
    candidates: list[tuple[Poly, Optional[Poly]]] = []
    if c < 1:
        candidates.append((prod, None))  # X = t, nonnegative on [0,c] as is
    candidates.append(((prod * prod), prod))
    best: Optional[UnitPolynomial] = None
    for x, root in candidates:
        if x.degree > max_degree:
            continue
        sup = sup_abs_on_interval(x, 0, c, request)
        if sup.hi >= 1:
            continue
        if root is None:
            # nonnegativity must hold structurally: X = product of (t - g)
            # with all g <= 0 relative to [0,c]; only the c < 1 case qualifies
            lo_enc, _ = range_on_interval(x, 0, c, request)
            if lo_enc.lo < 0 and x != Poly([0, 1]):
                continue
        for g in ints:
            if x(Fraction(g)) != 0:
                raise AssertionError("unit polynomial must vanish at integer points")
        cand = UnitPolynomial(x, sup.hi, c, root)
        if best is None or (cand.degree, cand.rho) < (best.degree, best.rho):
            best = cand
    if best is None:
        raise SearchExhaustedError(
            f"no unit polynomial of degree <= {max_degree} found for [0, {c}]"
        )
    return best


@dataclass(frozen=True)
class Lemma2Result:
    q: Poly
    mixture_digits: list[Poly]     # p_{2,s}, s = m..N (pre-rounding)
    formula_bound: Fraction        # m rho^(N-m+1) + N^-m
    certified_error: Enclosure     # sup_E |f - q|


def xadic_digits(f: Poly, x: Poly) -> list[Poly]:
    """f = sum digits[k] * X^k with deg(digits[k]) < deg(X), by repeated division."""
    digits = []
    cur = f
    while cur:
        cur, rem = cur.divmod(x)
        digits.append(rem)
    return digits


def lemma2_convert(f: Poly, unit: UnitPolynomial, m: int, big_n: int,
                   request: NormRequest = DEFAULT_REQUEST) -> Lemma2Result:
    """Integer approximation of an X^m-divisible polynomial on E = [0, c].

    Steps: X-adic digits by division, re-expansion into the binomial mixture
    sum_{s=m}^{N} p_{2,s} X^s (1-X)^(N-s) (an exact identity, asserted),
    then coefficient-wise rounding of each p_{2,s}.  The mixture tail gives
    the bound m rho^(N-m+1) + N^-m.
    """
    x = unit.poly
    digits = xadic_digits(f, x)
    if len(digits) > big_n + 1:
        raise ValueError(f"N = {big_n} too small: f has {len(digits)} X-adic digits")
    for k in range(min(m, len(digits))):
        if digits[k]:
            raise ValueError(f"f is not divisible by X^{m}: digit {k} is nonzero")
    big_k = len(digits) - 1
    p2: dict[int, Poly] = {}
    for s in range(m, big_n + 1):
        acc = Poly.zero()
        for k in range(m, min(s, big_k) + 1):
            if digits[k]:
                acc = acc + digits[k] * comb(big_n - k, s - k)
        p2[s] = acc
    # exact reconstruction identity (pre-rounding)
    xpows = [Poly([1])]
    ympows = [Poly([1])]
    one_minus = Poly([1]) - x
    for _ in range(big_n):
        xpows.append(xpows[-1] * x)
        ympows.append(ympows[-1] * one_minus)
    recon = Poly.zero()
    for s in range(m, big_n + 1):
        if p2[s]:
            recon = recon + p2[s] * xpows[s] * ympows[big_n - s]
    if recon != f:
        raise AssertionError("binomial mixture does not reconstruct f")
    q = Poly.zero()
    for s in range(m, big_n + 1):
        qs, _ = round_coeffs(p2[s])
        if qs:
            q = q + qs * xpows[s] * ympows[big_n - s]
    assert q.is_integer()
    bound = m * unit.rho ** (big_n - m + 1) + Fraction(1, big_n**m)
    err = sup_abs_on_interval(f - q, 0, unit.c, request)
    return Lemma2Result(q, [p2[s] for s in range(m, big_n + 1)], bound, err)


# ----------------------------------------------------------------------
# Constructive upper bound on the ball (single forced zero, r <= 1)
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class BallReport:
    q_radial: Poly          # integer polynomial in u = |x|^2
    error: Enclosure         # certified L_p(K_r) error
    stage_degrees: tuple[int, ...]
    conversion_n: int


def ball_construct(problem: BallProblem, n: int,
                   request: NormRequest = DEFAULT_REQUEST) -> BallReport:
    """Integer radial approximant on K_r for r <= 1 with certified L_p error.

    Pipeline: d stages each multiply the pending fractional masses by
    1 - p*(u) (p* a squared lemma-3 factor, so the defect gains one order of
    vanishing at u = 0 per stage and stays small in the weighted metric),
    rounding integer parts stagewise; the X^d-divisible residue is finished
    by the binomial-mixture conversion with X = u.

    At r = 1 the endpoint u = 1 is an integer point of E = [0,1], so the
    strict sup-norm unit certificate (rho < 1) is unavailable; the weighted
    metric still absorbs the endpoint (the weight assigns mass O(eps) to a
    neighborhood where the mixture degrades), and the certified error is
    measured, not inferred from the sup bound.
    """
    if problem.r > 1:
        raise UnsupportedCaseError(
            "constructive path implemented for r <= 1 only (single forced zero); "
            "lower bounds and the oracle still apply for 1 < r < 2"
        )
    lam, d, p, r = problem.lam, problem.d, problem.p, problem.r
    u_budget = n // 2
    if u_budget < 2 * (d + 1):
        q = Poly([nearest_int(lam)])
        err = radial_lp_error(lam, q, r, d, p, request)
        return BallReport(q, err, (), 0)
    alpha = problem.alpha
    # stages consume 2*n_s degrees each; the residue must fit in the
    # conversion budget N = u_budget, so n_s = U/(2d) saturates it
    n_s = max(1, u_budget // (2 * d))
    pending: dict[int, Fraction] = {0: lam}
    out: dict[int, Fraction] = {}
    stage_degrees = []
    for _ in range(d):
        pstar = lemma3_pstar(alpha, 1, 2 * n_s)
        stage_degrees.append(pstar.degree)
        w = Poly.const(1) - pstar  # vanishes at u = 0
        acc: dict[int, Fraction] = {}
        for k, delta in pending.items():
            for j, wj in enumerate(w.coeffs):
                if j >= 1 and wj:
                    acc[k + j] = acc.get(k + j, Fraction(0)) + delta * wj
        pending = {}
        for idx in sorted(acc):
            g = nearest_int(acc[idx])
            if g:
                out[idx] = out.get(idx, Fraction(0)) + g
            fr = acc[idx] - g
            if fr:
                pending[idx] = fr
    # residue divisible by u^d
    res_deg = max(pending) if pending else 0
    big_n = max(u_budget, res_deg)
    q_conv = _convert_monomial_residue(pending, d, big_n)
    q_coeffs = [out.get(k, Fraction(0)) for k in range(max(out, default=0) + 1)]
    q = Poly(q_coeffs) + q_conv
    assert q.is_integer()
    err = radial_lp_error(lam, q, r, d, p, request)
    return BallReport(q, err, tuple(stage_degrees), big_n)


def _convert_monomial_residue(pending: dict[int, Fraction], m: int, big_n: int) -> Poly:
    """Binomial-mixture conversion of sum delta_k u^k (k >= m) with X = u."""
    if not pending:
        return Poly.zero()
    p2 = []
    for s in range(0, big_n + 1):
        if s < m:
            p2.append(Fraction(0))
            continue
        acc = Fraction(0)
        for k, delta in pending.items():
            if m <= k <= s:
                acc += delta * comb(big_n - k, s - k)
        p2.append(acc)
    u = Poly([0, 1])
    one_minus = Poly([1, -1])
    q = Poly.zero()
    upow = [Poly([1])]
    ompow = [Poly([1])]
    for _ in range(big_n):
        upow.append(upow[-1] * u)
        ompow.append(ompow[-1] * one_minus)
    for s in range(m, big_n + 1):
        g = nearest_int(p2[s])
        if g:
            q = q + upow[s] * ompow[big_n - s] * g
    return q


# ----------------------------------------------------------------------
# Lower bounds: the Eq.-(4) chain and the r >= 2 obstruction
# ----------------------------------------------------------------------

def ball_lower(problem: BallProblem, n: int, bits: int = 128) -> Enclosure:
    """Explicit lower bound on E_n via radial averaging and the value at 0.

    Fully explicit chain (all constants computed, none invented):
      E_n^p >= sigma_{d-1} (r^d / 2) * integral_0^1 u^alpha |H(u)|^p du,
    with H the averaged radial error, |H(0)| >= dist(lambda, Z), followed by
    the p = 1 value-at-zero bound and (for p > 1) a Hoelder step.  The
    Hoelder step costs sharpness in the exponent for p > 1 (the asserted
    two-sided rate has anonymous constants); for p = 1 the bound is the
    sharp-order n^(-d).
    """
    if problem.r >= 2:
        raise ValueError("use korkin_zolotarev_obstruction for r >= 2")
    lam, d, p, r = problem.lam, problem.d, problem.p, problem.r
    alpha = problem.alpha
    n_u = max(2, n // 2)
    dist = dist_to_int(lam)
    c3 = eq3_growth_constant(n_u)
    # integral_0^1 u^alpha |H| du >= dist / ((alpha+1) c3 n_u^(2+2alpha))
    denom_pow = rational_pow_enclosure(Fraction(n_u), 2 + 2 * alpha)
    l1_lower = Enclosure.exact(dist) / (Enclosure.exact((alpha + 1) * c3) * denom_pow)
    # integral u^alpha |H|^p >= (alpha+1)^(p-1) (integral u^alpha |H|)^p
    lp_lower = l1_lower**p * Enclosure.exact((alpha + 1) ** (p - 1))
    total = sphere_area(d, bits) * Enclosure.exact(r**d / 2) * lp_lower
    lo = nth_root_enclosure(max(total.lo, Fraction(0)), p).lo
    hi = nth_root_enclosure(total.hi, p).hi
    return Enclosure(lo, hi)


def symmetrized_abs_integral(lam, q_radial: Poly, limit: Fraction = Fraction(2),
                             request: NormRequest = DEFAULT_REQUEST) -> Enclosure:
    """integral over [-limit, limit] of |lambda - Q(t^2)| dt, exact sign-split."""
    lam = as_fraction(lam)
    g = Poly([lam]) - q_radial.compose(Poly([0, 0, 1]))
    half = weighted_lp_integral(g, 0, limit, 0, 1, request)
    return half * 2


def korkin_zolotarev_obstruction(lam, r, d: int, p: int, bits: int = 128) -> Enclosure:
    """n-independent positive lower bound on E_n for r >= 2.

    d = 1: even-part symmetrization keeps integer coefficients, and on
    [-2,2] the Korkin-Zolotarev inequality gives
    integral |lambda - q(t^2)| dt >= 4 min(1, dist), hence
    E >= 4^(1/p) dist(lambda, Z).

    d >= 2: the source's weight-matching chain applied to the radial
    reduction: an integer-m weight, Hoelder against the u^alpha weight on
    [0,4], and Korkin-Zolotarev for the leading coefficient (>= 1 for a
    nonconstant integer radial polynomial; constant case uses dist).
    """
    lam, r = as_fraction(lam), as_fraction(r)
    if r < 2:
        raise ValueError("obstruction applies for r >= 2")
    dist = dist_to_int(lam)
    if d == 1:
        # E^p >= int_{-2}^{2} |lam - q(t^2)|^p >= (4 dist)^p / 4^(p-1) = 4 dist^p
        v = 4 * dist**p
        return Enclosure(nth_root_enclosure(v, p).lo, nth_root_enclosure(v, p).hi)
    alpha = Fraction(d, 2) - 1
    # smallest integer weight m >= alpha (p=1) or with beta*p' > -1 (p>1)
    if p == 1:
        m = int(alpha) if alpha.denominator == 1 else int(alpha) + 1
        # int_0^4 u^m |h| <= 4^(m-alpha) int_0^4 u^alpha |h|
        kz_low = min(Fraction(4), dist * Fraction(4) ** (m + 1) / (m + 1))
        j_low = Enclosure.exact(kz_low * Fraction(4) ** (alpha - m)) \
            if (alpha - m).denominator == 1 else \
            Enclosure.exact(kz_low) * rational_pow_enclosure(Fraction(4), alpha - m)
        total = sphere_area(d, bits) * Enclosure.exact(Fraction(1, 2)) * j_low
        return Enclosure(max(total.lo, Fraction(0)), total.hi)
    pp = Fraction(p)
    pprime = pp / (pp - 1)
    m = 0
    while True:
        beta = m - alpha / pp
        if beta >= -1 / pp and beta * pprime > -1:
            break
        m += 1
    kz_low = min(Fraction(4), dist * Fraction(4) ** (m + 1) / (m + 1))
    # Hoelder: int u^m |h| <= (int u^alpha |h|^p)^(1/p) (int u^(beta p'))^(1/p')
    bpp = beta * pprime
    inner = rational_pow_enclosure(Fraction(4), bpp + 1) / Enclosure.exact(bpp + 1)
    holder = _enc_pow(inner, 1 / pprime)
    j_low = _enc_pow(Enclosure.exact(kz_low) / holder, pp)
    total = sphere_area(d, bits) * Enclosure.exact(Fraction(1, 2)) * j_low
    lo = nth_root_enclosure(max(total.lo, Fraction(0)), p).lo
    hi = nth_root_enclosure(total.hi, p).hi
    return Enclosure(lo, hi)


def _enc_pow(x: Enclosure, expo: Fraction) -> Enclosure:
    """x^expo for an enclosure with x.lo > 0 and rational expo > 0."""
    expo = as_fraction(expo)
    lo = rational_pow_enclosure(x.lo, expo).lo
    hi = rational_pow_enclosure(x.hi, expo).hi
    return Enclosure(lo, hi)
