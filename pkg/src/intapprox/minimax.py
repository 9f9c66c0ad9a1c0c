"""Discretized weighted linear minimax: min over p_n of max t^alpha |1 - t^m p_n(t)|.

The objective is linear in the coefficients of p_n, so the grid-restricted
problem is an LP whose optimum increases to the true minimax as the grid is
refined.  The solver works in a shifted-Chebyshev basis (Vandermonde columns
stay in [-1,1], keeping the LP well conditioned), starts from 257 Chebyshev
points and doubles the grid until the optimum stabilizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.optimize import linprog

from .norms import DEFAULT_REQUEST, NormRequest, sup_abs_on_interval
from .polynomials import Poly, cheb
from .scalars import Enclosure, as_fraction


@dataclass(frozen=True)
class MinimaxResult:
    value: Enclosure
    solution: Optional[Poly]    # the fitted p_n (rationalized), None for exact cases
    converged: bool
    grid_size: int


def _cheb_grid(k: int, lo: float, hi: float) -> np.ndarray:
    j = np.arange(k)
    pts = 0.5 * (lo + hi) + 0.5 * (hi - lo) * np.cos(np.pi * j / (k - 1))
    return np.sort(pts)


def lemma5_rate(alpha, m: int, n: int, symmetric: bool = False,
                rel_tol: float = 1e-6, start_grid: int = 257,
                request: NormRequest = DEFAULT_REQUEST) -> MinimaxResult:
    """Near-optimal value of min_{p_n} max t^alpha |1 - t^m p_n(t)|.

    On [0,1] the optimum decays like n^(-2 alpha); the symmetric variant on
    [-1,1] (weight |t|^alpha) decays like n^(-alpha).  For alpha = 0 the
    value at t = 0 pins the optimum at exactly 1.
    """
    alpha = as_fraction(alpha)
    if alpha < 0:
        raise ValueError("need alpha >= 0")
    if m < 1 or n < 0:
        raise ValueError("need m >= 1, n >= 0")
    if alpha == 0:
        # weight 1 and the obstruction |1 - 0| = 1 at t = 0 is attainable (p = 0)
        return MinimaxResult(Enclosure.exact(1), Poly.zero(), True, 0)

    lo, hi = (-1.0, 1.0) if symmetric else (0.0, 1.0)
    basis = [cheb(j, Fraction(-1 if symmetric else 0), Fraction(1)) for j in range(n + 1)]
    af = float(alpha)

    prev_opt = None
    opt = None
    coef = None
    k = start_grid
    converged = False
    for _ in range(6):
        t = _cheb_grid(k, lo, hi)
        w = np.abs(t) ** af if symmetric else t**af
        # columns: w * t^m * T_j(u(t)); evaluate T_j by the stable recurrence
        # (monomial coefficients of shifted Chebyshev overflow float64)
        tm = t**m
        u = t if symmetric else 2.0 * t - 1.0
        cols = np.empty((len(t), n + 1))
        t_prev = np.ones_like(u)
        t_cur = u.copy()
        for j in range(n + 1):
            if j == 0:
                vals = t_prev
            elif j == 1:
                vals = t_cur
            else:
                t_prev, t_cur = t_cur, 2.0 * u * t_cur - t_prev
                vals = t_cur
            cols[:, j] = w * tm * vals
        target = w
        # LP: minimize E subject to -E <= target - cols@c <= E
        a_ub = np.vstack([
            np.hstack([-cols, -np.ones((len(t), 1))]),
            np.hstack([cols, -np.ones((len(t), 1))]),
        ])
        b_ub = np.hstack([-target, target])
        c_obj = np.zeros(n + 2)
        c_obj[-1] = 1.0
        res = linprog(c_obj, A_ub=a_ub, b_ub=b_ub,
                      bounds=[(None, None)] * (n + 1) + [(0, None)],
                      method="highs")
        if not res.success:
            break
        opt = res.x[-1]
        coef = res.x[:-1]
        if prev_opt is not None and abs(opt - prev_opt) <= rel_tol * max(opt, 1e-300):
            converged = True
            break
        prev_opt = opt
        k = 2 * (k - 1) + 1
    if opt is None:
        raise RuntimeError("LP solver failed")

    # assemble p_n (exact dyadic rationalization of the float solution)
    sol = Poly.zero()
    for j, cj in enumerate(coef):
        if cj:
            sol = sol + basis[j] * Fraction(float(cj))

    # certified upper end: sup of the candidate's objective where it is a
    # polynomial (integer alpha); otherwise a grid-based heuristic pad
    grid_lo = Fraction(float(opt)) * Fraction(1 - 10 * rel_tol if opt > 0 else 1)
    if alpha.denominator == 1:
        weight = Poly.monomial(Fraction(1), int(alpha))
        tm_poly = Poly.monomial(Fraction(1), m)
        objective = weight * (Poly.const(1) - tm_poly * sol)
        if symmetric:
            sup = sup_abs_on_interval(objective, -1, 1, request)
        else:
            sup = sup_abs_on_interval(objective, 0, 1, request)
        upper = sup.hi
    else:
        upper = Fraction(float(opt)) * Fraction(1 + 100 * rel_tol)
    lo_end = min(grid_lo, upper)
    return MinimaxResult(Enclosure(max(lo_end, Fraction(0)), upper), sol, converged, k)
