"""Constructive constants for the auxiliary inequalities and the ODE bound.

The boundedness argument only needs these constants to exist; here they are
computed near-minimally so that runtime diagnostics stay sharp.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class YoungParams:
    """Exponent bookkeeping for the two Young-type inequalities.

    d1, d2 control the product form a^d1 b^d2 <= eps(a+b) + c (requires
    d1 + d2 < 1); d3, d4 the sum form a^d3 + b^d4 >= 2^-d5 (a+b)^d5 - d.
    """

    d1: float
    d2: float
    epsilon: float
    d3: float = 1.0
    d4: float = 1.0

    def __post_init__(self):
        if not (self.d1 > 0 and self.d2 > 0):
            raise ValueError("d1 and d2 must be positive")
        if not self.d1 + self.d2 < 1:
            raise ValueError("d1 + d2 must be below 1")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if not (self.d3 > 0 and self.d4 > 0):
            raise ValueError("d3 and d4 must be positive")


def young_product_constant(d1: float, d2: float, epsilon: float) -> float:
    """Smallest c with a^d1 b^d2 <= epsilon (a+b) + c for all a, b >= 0.

    The penalized product F(a,b) = a^d1 b^d2 - eps(a+b) has a unique interior
    stationary point (F -> -infinity at infinity because d1+d2 < 1, and F <= 0
    on the axes), so c = F at that point:
        b* = (d2/d1) a*,   a* = (d1^(1-d2) d2^d2 / eps)^(1/(1-d1-d2)).
    """
    if not (d1 > 0 and d2 > 0):
        raise ValueError("d1 and d2 must be positive")
    if not d1 + d2 < 1:
        raise ValueError(f"divergent supremum: d1 + d2 = {d1 + d2} >= 1")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    astar = (d1 ** (1 - d2) * d2**d2 / epsilon) ** (1 / (1 - d1 - d2))
    bstar = d2 / d1 * astar
    c = astar**d1 * bstar**d2 - epsilon * (astar + bstar)
    return max(c, 0.0)


def _zoomed_max(gap, lo, hi, levels=4, pts=513):
    """Maximize gap(a, b) over [lo,hi]^2 by repeated grid refinement."""
    best = -np.inf
    a_lo = b_lo = lo
    a_hi = b_hi = hi
    for _ in range(levels):
        av = np.linspace(a_lo, a_hi, pts)
        bv = np.linspace(b_lo, b_hi, pts)
        vals = gap(av[:, None], bv[None, :])
        idx = np.unravel_index(np.argmax(vals), vals.shape)
        best = max(best, float(vals[idx]))
        da = (a_hi - a_lo) / (pts - 1)
        db = (b_hi - b_lo) / (pts - 1)
        a_mid, b_mid = av[idx[0]], bv[idx[1]]
        a_lo, a_hi = max(lo, a_mid - 2 * da), min(hi, a_mid + 2 * da)
        b_lo, b_hi = max(lo, b_mid - 2 * db), min(hi, b_mid + 2 * db)
    return best


def power_sum_lower(d3: float, d4: float):
    """Constants (d5, d) with a^d3 + b^d4 >= 2^-d5 (a+b)^d5 - d for a, b >= 0.

    d5 = min(d3, d4) works: for max(a,b) >= 1 the gap
    2^-d5 (a+b)^d5 - a^d3 - b^d4 <= max^d5 - max^(d3 or d4) is nonpositive,
    so its supremum is attained on [0,1]^2 and is found numerically there.
    The result carries a 1+1e-6 safety factor over the numeric supremum.
    """
    if not (d3 > 0 and d4 > 0):
        raise ValueError("d3 and d4 must be positive")
    d5 = min(d3, d4)

    def gap(a, b):
        return 2.0**-d5 * (a + b) ** d5 - a**d3 - b**d4

    sup = _zoomed_max(gap, 0.0, 1.0)
    if sup <= 1e-13:  # exact-domination case up to roundoff
        return d5, 0.0
    return d5, sup * (1 + 1e-6)


def ode_comparison_bound(y0: float, c18: float, c19: float, kappa: float) -> float:
    """Uniform bound max(y0, (c19/c18)^(1/kappa)) for y' + c18 y^kappa <= c19."""
    if not c18 > 0:
        raise ValueError("c18 must be positive")
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    if y0 < 0 or c19 < 0:
        raise ValueError("y0 and c19 must be nonnegative")
    return max(y0, (c19 / c18) ** (1 / kappa))
