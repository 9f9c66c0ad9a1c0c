"""Exact best integer-polynomial approximation at small degree.

The search enumerates integer coefficient vectors inside certified outer
boxes and evaluates certified norms only for candidates surviving cheap
exact point filters.  Boxes come from necessary conditions on the
recentered frame: writing the approximant around the domain's center, a
sup bound B forces every recentered coefficient into an interval whose
width scales like B / scale^k (Cauchy's estimate on disks, the Chebyshev
coefficient extremals on intervals, inverse-Gram moment bounds for
weighted L_p).  Enumeration is depth-first from the leading coefficient
down, with iterative deepening on B so the boxes stay near the optimum.

Results are exact optima with a completeness certificate: when the best
value found is <= the bound B used for the boxes, every polynomial at
least as good was inside the search region.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Optional

from .norms import (
    DEFAULT_REQUEST,
    Disk,
    Interval,
    NormRequest,
    sup_abs_on_circle,
    sup_abs_on_interval,
    weighted_lp_integral,
)
from .polynomials import Poly, cheb
from .scalars import Enclosure, GaussianRational, as_fraction, nth_root_enclosure, to_gaussian


class OracleCapError(Exception):
    """Degree above the configured cap (prevents combinatorial explosion)."""


class OracleBudgetError(Exception):
    """Node budget exhausted before the search completed."""


DEFAULT_CAPS = {
    "interval-sup": 6,
    "disk-sup": 6,
    "weighted-lp": 5,
    "disk-sup-gaussian": 4,
}


@dataclass(frozen=True)
class SearchBox:
    bounds: tuple[tuple[int, int], ...]
    degree: int
    ring: str
    derivation: tuple[str, ...]

    def contains(self, q: Poly) -> bool:
        for k, (lo, hi) in enumerate(self.bounds):
            c = q[k]
            if isinstance(c, GaussianRational):
                if not (lo <= c.re <= hi and lo <= c.im <= hi):
                    return False
            elif not (lo <= c <= hi):
                return False
        return True


@dataclass
class OracleResult:
    best: Poly
    optimum: Enclosure
    nodes: int
    box: SearchBox
    bound_used: Fraction
    complete: bool


# ----------------------------------------------------------------------
# Spec-level coefficient boxes (Lagrange / inverse-Gram derivations)
# ----------------------------------------------------------------------

def _lagrange_lambdas(nodes: list[Fraction]) -> list[Fraction]:
    """Lambda_k = sum_i |Vinv[k][i]| from the exact inverse Vandermonde."""
    n = len(nodes) - 1
    lambdas = []
    # column k of Vinv = coefficients of sum_i ell_i * e_i; build ell_i exactly
    ells = []
    for i, xi in enumerate(nodes):
        num = Poly([1])
        den = Fraction(1)
        for j, xj in enumerate(nodes):
            if j != i:
                num = num * Poly([-xj, 1])
                den *= xi - xj
        ells.append(num.map_coeffs(lambda c: c / den))
    for k in range(n + 1):
        lambdas.append(sum(abs(e[k]) for e in ells))
    return lambdas


def coeff_box(domain, n: int, bound, lam, ring: str = "int") -> SearchBox:
    """Finite integer boxes provably containing every q with error <= bound.

    Interval/disk: Lagrange interpolation at rational nodes, so
    |c_k - lam*[k=0]| <= bound * Lambda_k with Lambda_k from the exact
    inverse Vandermonde.  Weighted L_p: inverse-Gram moment bounds.
    """
    bound = as_fraction(bound)
    log: list[str] = []
    if isinstance(domain, Interval):
        a, b = domain.a, domain.b
        if a == b:
            raise ValueError("degenerate domain")
        nodes = [a + (b - a) * Fraction(2 * i + 1, 2 * (n + 1)) for i in range(n + 1)]
        lambdas = _lagrange_lambdas(nodes)
        log.append(f"interval Lagrange nodes: {[str(x) for x in nodes]}")
        lamf = as_fraction(lam)
        bounds = []
        for k, lk in enumerate(lambdas):
            center = lamf if k == 0 else Fraction(0)
            rad = bound * lk
            bounds.append((_ceil(center - rad), _floor(center + rad)))
            log.append(f"|c_{k} - {center}| <= B*Lambda_{k} = {bound}*{lk}")
        return SearchBox(tuple(bounds), n, ring, tuple(log))
    if isinstance(domain, Disk):
        z0, r = domain.center, domain.radius
        lamg = to_gaussian(lam)
        # Cauchy frame: |ctilde_k| <= B, and c_k = ctilde_k/r^k recentered by
        # the triangular shift terms; the crude box uses the worst case via
        # Lagrange on rational circle points
        ts = [Fraction(i, n + 2) for i in range(n + 1)]
        nodes = []
        for t in ts:
            den = 1 + t * t
            w = GaussianRational((1 - t * t) / den, 2 * t / den)
            nodes.append(z0 + w * r)
        # Gaussian Lagrange: Lambda_k from modulus bounds |re|+|im|
        n_ = len(nodes) - 1
        ells = []
        for i, zi in enumerate(nodes):
            num = Poly([GaussianRational(Fraction(1))])
            den = GaussianRational(Fraction(1))
            for j, zj in enumerate(nodes):
                if j != i:
                    num = num * Poly([-zj, GaussianRational(Fraction(1))])
                    den = den * (zi - zj)
            ells.append(num.map_coeffs(lambda c: to_gaussian(c) / den))
        bounds = []
        for k in range(n_ + 1):
            lk = Fraction(0)
            for e in ells:
                c = to_gaussian(e[k])
                lk += abs(c.re) + abs(c.im)
            center = lamg.re if k == 0 else Fraction(0)
            rad = (abs(lamg.im) + bound) * lk if k == 0 else bound * lk
            rad = bound * lk + (abs(lamg.re) + abs(lamg.im)) * (lk if k == 0 else lk)
            bounds.append((_ceil(-rad + (0 if k else 0)), _floor(rad)))
            log.append(f"|c_{k}| <= (B + |lam|)*Lambda_{k}, Lambda_{k} = {lk}")
        return SearchBox(tuple(bounds), n, ring, tuple(log))
    raise ValueError(f"coeff_box does not support {domain!r}")


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


# ----------------------------------------------------------------------
# Chebyshev coefficient extremals (interval Cauchy-frame widths)
# ----------------------------------------------------------------------

def _cheb_extremals(n: int) -> list[Fraction]:
    """E_j = max over k <= n of |coefficient of w^j in T_k| on [-1,1].

    V. A. Markov: polynomials bounded by 1 on [-1,1] have |c_j| bounded by
    the corresponding Chebyshev coefficient (of matching parity).
    """
    es = [Fraction(0)] * (n + 1)
    for k in range(n + 1):
        tk = cheb(k, Fraction(-1), Fraction(1))
        for j, c in enumerate(tk.coeffs):
            if abs(c) > es[j]:
                es[j] = abs(c)
    return es


# ----------------------------------------------------------------------
# Core DFS engines
# ----------------------------------------------------------------------

@dataclass
class _SearchState:
    nodes: int = 0
    budget: int = 50_000_000
    best_val: Optional[Enclosure] = None
    best_q: Optional[Poly] = None
    candidates: int = 0

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise OracleBudgetError(f"node budget {self.budget} exhausted")


def _update_incumbent(state: _SearchState, q: Poly, val: Enclosure):
    state.candidates += 1
    if state.best_val is None or val.hi < state.best_val.lo:
        state.best_val, state.best_q = val, q
        return
    if val.lo > state.best_val.hi:
        return
    # overlapping enclosures: exact values equal for our exact norms only
    # when enclosures are exact; otherwise prefer the certified-smaller one,
    # tie-breaking lexicographically on the coefficient vector
    if val.lo == state.best_val.lo and val.hi == state.best_val.hi:
        if _lex_key(q) < _lex_key(state.best_q):
            state.best_q = q
        return
    if val.mid < state.best_val.mid:
        state.best_val, state.best_q = val, q


def _lex_key(q: Poly):
    out = []
    for c in q.coeffs:
        if isinstance(c, GaussianRational):
            out.append((c.re, c.im))
        else:
            out.append((c, Fraction(0)))
    return out


_FLOAT_MARGIN = 1e-9  # conservative rounding slack for float witness pruning


def _search_interval_sup(lam: Fraction, a: Fraction, b: Fraction, n: int,
                         bound: Fraction, state: _SearchState,
                         request: NormRequest):
    mid = (a + b) / 2
    s = (b - a) / 2
    extremals = _cheb_extremals(n)
    cum = [Fraction(0)] * (n + 2)
    for j in range(n, -1, -1):
        cum[j] = cum[j + 1] + extremals[j]
    w_count = max(3, int((n + 2) * 3 // 2))
    witnesses = [a + (b - a) * Fraction(i, w_count - 1) for i in range(w_count)]
    # witness pruning runs in the recentered frame w in [-1,1], where the
    # not-yet-fixed recentered coefficients are bounded by B*E_j; values in
    # float with a conservative margin, exact arithmetic only at leaves
    wpts = [2 * (x - mid) / (b - a) for x in witnesses]
    wpows_f = [[float(w) ** k for w in wpts] for k in range(n + 1)]
    coeffs = [0] * (n + 1)

    spow = [s**k for k in range(n + 1)]
    mpow = [mid**k for k in range(n + 1)]

    def rec(level: int, known_f: list[float]):
        # known_f[i] = sum_{j >= level} ftilde_j * w_i^j  (recentred error terms)
        state.tick()
        if level < 0:
            q = Poly([Fraction(c) for c in coeffs])
            _leaf_interval(q, lam, a, b, witnesses, bound, state, request)
            return
        t = Fraction(0)
        for k in range(level + 1, n + 1):
            if coeffs[k]:
                t += comb(k, level) * mpow[k - level] * coeffs[k]
        center = lam if level == 0 else Fraction(0)
        rad = bound * extremals[level]
        lo = _ceil((center - rad) / spow[level] - t)
        hi = _floor((center + rad) / spow[level] - t)
        slack = float(bound + bound * (cum[0] - cum[level])) * (1 + 1e-9) + 1e-12
        ws = wpows_f[level]
        t_f = float(t)
        s_f = float(spow[level])
        c_f = float(center)
        for c in range(lo, hi + 1):
            # ftilde_level = center - s^level (c + t)
            ft = c_f - s_f * (c + t_f)
            new_known = [kv + ft * wp for kv, wp in zip(known_f, ws)]
            ok = True
            for kv in new_known:
                if abs(kv) > slack:
                    ok = False
                    break
            if ok:
                coeffs[level] = c
                rec(level - 1, new_known)
        coeffs[level] = 0

    rec(n, [0.0] * w_count)


def _leaf_interval(q: Poly, lam: Fraction, a: Fraction, b: Fraction,
                   exact_pts: list[Fraction], bound: Fraction,
                   state: _SearchState, request: NormRequest):
    inc = state.best_val.lo if state.best_val is not None else bound
    dec = min(inc, bound)
    # exact point filter: sup >= |lam - q(x)| at every point
    for x in exact_pts:
        if abs(lam - q(x)) > dec:
            return
    err = Poly([lam]) - q
    loose = NormRequest(tolerance=Fraction(1, 1000), max_boxes=request.max_boxes)
    val = sup_abs_on_interval(err, a, b, loose, decide=dec)
    if val.lo > dec:
        return
    val = sup_abs_on_interval(err, a, b, request)
    _update_incumbent(state, q, val)


def _search_disk_sup(lam: GaussianRational, z0: GaussianRational, r: Fraction,
                     n: int, bound: Fraction, state: _SearchState,
                     request: NormRequest, gaussian: bool):
    rpow = [r**k for k in range(n + 1)]
    ts = [Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-1, 2),
          Fraction(2), Fraction(-2), Fraction(1, 3), Fraction(3), Fraction(-1, 3),
          Fraction(-3), Fraction(1, 4), Fraction(4), Fraction(2, 3)]
    w_count = min(len(ts), max(5, int((n + 2) * 3 // 2)))
    circle = []
    for t in ts[:w_count]:
        den = 1 + t * t
        circle.append(GaussianRational((1 - t * t) / den, 2 * t / den))
    witnesses = [z0 + w * r for w in circle]
    wpows_f = [[complex(float(w.re), float(w.im)) ** k for w in circle]
               for k in range(n + 1)]
    coeffs: list[GaussianRational] = [GaussianRational(Fraction(0))] * (n + 1)
    int_coeffs = [(0, 0)] * (n + 1)

    def rec(level: int, known_f: list[complex]):
        # known_f[i] = sum_{j >= level} fhat_j w_i^j with fhat the Taylor
        # coefficients of lambda - q at z0 (scaled to the unit w-disk);
        # remaining |fhat_j| <= B each (Cauchy), so |known| <= B(1 + level)
        state.tick()
        if level < 0:
            q = Poly(list(coeffs))
            _leaf_disk(q, lam, z0, r, witnesses, bound, state, request)
            return
        t = GaussianRational(Fraction(0))
        for k in range(level + 1, n + 1):
            if int_coeffs[k] != (0, 0):
                t = t + coeffs[k] * (z0 ** (k - level) * comb(k, level))
        center = lam if level == 0 else GaussianRational(Fraction(0))
        rad = bound / rpow[level]
        cre = center.re / rpow[level] - t.re
        cim = center.im / rpow[level] - t.im
        re_lo, re_hi = _ceil(cre - rad), _floor(cre + rad)
        slack = float(bound + bound * level) * (1 + 1e-9) + 1e-12
        if gaussian:
            im_rng = range(_ceil(cim - rad), _floor(cim + rad) + 1)
        else:
            if not (cim - rad <= 0 <= cim + rad):
                return
            im_rng = (0,)
        ws = wpows_f[level]
        r_f = float(rpow[level])
        t_ref, t_imf = float(t.re), float(t.im)
        c_ref, c_imf = float(center.re), float(center.im)
        for a_ in range(re_lo, re_hi + 1):
            for b_ in im_rng:
                # fhat_level = center - r^level (c + t)
                ft = complex(c_ref - r_f * (a_ + t_ref), c_imf - r_f * (b_ + t_imf))
                new_known = [kv + ft * wp for kv, wp in zip(known_f, ws)]
                ok = True
                for kv in new_known:
                    if abs(kv) > slack:
                        ok = False
                        break
                if ok:
                    coeffs[level] = GaussianRational(Fraction(a_), Fraction(b_))
                    int_coeffs[level] = (a_, b_)
                    rec(level - 1, new_known)
        coeffs[level] = GaussianRational(Fraction(0))
        int_coeffs[level] = (0, 0)

    rec(n, [0j] * len(circle))


def _leaf_disk(q: Poly, lam: GaussianRational, z0: GaussianRational, r: Fraction,
               witnesses, bound: Fraction, state: _SearchState, request: NormRequest):
    inc = state.best_val.lo if state.best_val is not None else bound
    dec = min(inc, bound)
    dec_sq = dec * dec
    for z in witnesses:
        if (lam - to_gaussian(q(z))).abs2() > dec_sq:
            return
    err = Poly([lam]) - q
    loose = NormRequest(tolerance=Fraction(1, 1000), max_boxes=request.max_boxes)
    val = sup_abs_on_circle(err, z0, r, loose, decide=dec)
    if val.lo > dec:
        return
    val = sup_abs_on_circle(err, z0, r, request)
    _update_incumbent(state, q, val)


def _search_weighted(lam: Fraction, upper: Fraction, alpha: Fraction, p: int,
                     n_u: int, bound: Fraction, state: _SearchState,
                     request: NormRequest):
    """Weighted L_p oracle in the radial variable on [0, upper]."""
    # Gram-moment boxes: G c = lam*g - m, |m_j| <= h_j * B
    size = n_u + 1
    gram = [[_moment(alpha + i + j, upper) for j in range(size)] for i in range(size)]
    gvec = [lam * _moment(alpha + i, upper) for i in range(size)]
    ginv = _invert_exact(gram)
    if p == 1:
        hs = [upper ** j for j in range(size)]
    else:
        pp = Fraction(p)
        pprime = pp / (pp - 1)
        hs = []
        for j in range(size):
            # ||u^j||_{p'} with weight u^alpha: (int u^(alpha + j p'))^(1/p')
            if pprime.denominator == 1:
                integ = _moment(alpha + j * pprime, upper)
                hs.append(nth_root_enclosure(integ, int(pprime)).hi)
            else:
                hs.append(upper ** j)  # fall back to the sup bound
    centers = [sum(ginv[k][j] * gvec[j] for j in range(size)) for k in range(size)]
    radii = [bound * sum(abs(ginv[k][j]) * hs[j] for j in range(size)) for k in range(size)]
    ranges = [range(_ceil(c - r), _floor(c + r) + 1) for c, r in zip(centers, radii)]
    bpow = bound ** p
    for combo in itertools.product(*ranges):
        state.tick()
        q = Poly([Fraction(c) for c in combo])
        integ = weighted_lp_integral(Poly([lam]) - q, 0, upper, alpha, p, request)
        inc = state.best_val if state.best_val is not None else None
        if inc is not None and integ.lo > inc.hi ** p:
            continue
        val = Enclosure(nth_root_enclosure(max(integ.lo, Fraction(0)), p).lo,
                        nth_root_enclosure(integ.hi, p).hi)
        _update_incumbent(state, q, val)


def _moment(expo: Fraction, upper: Fraction) -> Fraction:
    """int_0^upper u^expo du, exact (expo rational > -1 with rational power)."""
    e = expo + 1
    if e.denominator == 1:
        return upper ** int(e) / e
    from .scalars import rational_sqrt
    root = rational_sqrt(upper)
    if root is not None and e.denominator == 2:
        return root ** int(2 * e) / e
    raise ValueError(f"irrational moment u^{expo} on [0, {upper}]")


def _invert_exact(mat: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(mat)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


# ----------------------------------------------------------------------
# Public driver with iterative deepening
# ----------------------------------------------------------------------

def oracle_best_int(
    lam,
    domain,
    n: int,
    norm: str = "sup",
    p: int = 1,
    ring: str = "auto",
    start_bound=None,
    caps: dict = DEFAULT_CAPS,
    node_budget: int = 50_000_000,
    request: Optional[NormRequest] = None,
) -> OracleResult:
    """Exact minimum of the norm of lambda - q over integer polynomials.

    Iterative deepening: search with error bound B (boxes shrink like B), and
    accept the best candidate found once its value is <= B — then every
    better polynomial was provably inside the searched region.  start_bound
    seeds the ladder (use a theory lower bound); B grows by 35% per round.
    """
    request = request or NormRequest(tolerance=Fraction(1, 10**9))
    if isinstance(domain, Disk) and norm == "sup":
        lamg = to_gaussian(lam)
        gaussian = ring == "gaussian" or (ring == "auto" and
                                          (lamg.im != 0 or domain.center.im != 0))
        cap = caps["disk-sup-gaussian"] if gaussian else caps["disk-sup"]
        kind = "disk-sup-gaussian" if gaussian else "disk-sup"
        if n > cap:
            raise OracleCapError(f"n = {n} above cap {cap} for {kind}")
        lower_seed = as_fraction(start_bound) if start_bound is not None else Fraction(1, 10**6)

        def run(bound, state):
            _search_disk_sup(lamg, domain.center, domain.radius, n, bound,
                             state, request, gaussian)
    elif isinstance(domain, Interval) and norm == "sup":
        lamf = as_fraction(lam)
        cap = caps["interval-sup"]
        kind = "interval-sup"
        if n > cap:
            raise OracleCapError(f"n = {n} above cap {cap} for interval-sup")
        lower_seed = as_fraction(start_bound) if start_bound is not None else Fraction(1, 10**6)

        def run(bound, state):
            _search_interval_sup(lamf, domain.a, domain.b, n, bound, state, request)
    elif norm == "weighted-lp":
        lamf = as_fraction(lam)
        cap = caps["weighted-lp"]
        kind = "weighted-lp"
        if n > cap:
            raise OracleCapError(f"n = {n} above cap {cap} for weighted-lp")
        upper, alpha = domain  # (r^2, d/2 - 1) radial data
        lower_seed = as_fraction(start_bound) if start_bound is not None else Fraction(1, 10**4)

        def run(bound, state):
            _search_weighted(lamf, upper, alpha, p, n, bound, state, request)
    else:
        raise ValueError(f"unsupported oracle norm/domain: {norm}, {domain!r}")

    bound = lower_seed * Fraction(105, 100)
    total_nodes = 0
    for _ in range(60):
        state = _SearchState(budget=node_budget - total_nodes)
        run(bound, state)
        total_nodes += state.nodes
        if state.best_val is not None and state.best_val.hi <= bound:
            box = _certificate_box(domain, n, bound, lam, kind)
            return OracleResult(state.best_q, state.best_val, total_nodes, box,
                                bound, complete=True)
        if state.best_val is not None:
            # a candidate exists but above B: its value caps the next round
            bound = min(state.best_val.hi, bound * Fraction(135, 100))
            if state.best_val.hi <= bound:
                bound = state.best_val.hi
        else:
            bound = bound * Fraction(135, 100)
    raise OracleBudgetError("iterative deepening did not converge in 60 rounds")


def _certificate_box(domain, n, bound, lam, kind) -> SearchBox:
    if isinstance(domain, (Interval, Disk)):
        return coeff_box(domain, n, bound, lam)
    return SearchBox(((0, 0),) * (n + 1), n, kind,
                     ("weighted-lp inverse-Gram box; see search ranges",))
