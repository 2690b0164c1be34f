"""Model definition and parameter-region classification.

The system couples a cell density u and a chemical signal v:

    u_t = div(grad u) - div(f(u) grad v),      f(s) = K s^alpha
    v_t = div(grad v) - v + g(u),              g(s) = K0 s^l

with zero-flux boundaries.  The power prototypes above are the defaults; a
user-supplied f or g is accepted if it stays within the same power bounds on
a sample grid.  Classification of a triple (n, alpha, l) against the known
boundedness regions is done in exact rational arithmetic, with the upper
boundary excluded (the inequalities are strict).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .rational import RealLike, as_fraction

_SAMPLE_GRID = np.concatenate(([0.0], np.geomspace(1e-6, 1e3, 181)))


class RegionTag(str, Enum):
    THEOREM = "TheoremRegion"
    PRIOR_RESULT = "PriorResultRegion"
    OUTSIDE = "OutsideKnownRegion"


@dataclass(frozen=True)
class RegionVerdict:
    tag: RegionTag
    detail: str


@dataclass(frozen=True)
class ModelParams:
    """Physical problem definition: dimension, exponents and scales.

    ``sensitivity``/``production`` override the power prototypes; they are
    validated against f(0)=0, 0 <= f(s) <= K s^alpha and 0 <= g(s) <= K0 s^l
    on a sample grid at construction time.
    """

    n: int
    alpha: float
    l: float
    K: float = 1.0
    K0: float = 1.0
    sensitivity: Optional[Callable[[np.ndarray], np.ndarray]] = field(
        default=None, compare=False
    )
    production: Optional[Callable[[np.ndarray], np.ndarray]] = field(
        default=None, compare=False
    )

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"unsupported dimension n={self.n}; need integer n >= 2")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if not self.l > 0:
            raise ValueError("l must be positive")
        if not self.K > 0 or not self.K0 > 0:
            raise ValueError("scales K and K0 must be positive")
        if self.sensitivity is not None:
            _validate_against_bound(
                self.sensitivity, self.K, self.alpha, zero_at_zero=True, name="sensitivity"
            )
        if self.production is not None:
            _validate_against_bound(
                self.production, self.K0, self.l, zero_at_zero=False, name="production"
            )


def _validate_against_bound(func, scale, exponent, zero_at_zero, name):
    s = _SAMPLE_GRID
    vals = np.asarray(func(s), dtype=float)
    if vals.shape != s.shape:
        raise ValueError(f"custom {name} must map samples elementwise")
    bound = scale * s**exponent
    # 1e-12 relative slack absorbs roundoff in the caller's arithmetic
    if np.any(vals < -1e-12) or np.any(vals > bound * (1 + 1e-12) + 1e-300):
        raise ValueError(f"custom {name} violates its power bound on the sample grid")
    if zero_at_zero and vals[0] != 0.0:
        raise ValueError(f"custom {name} must vanish at s=0")


def eval_sensitivity(s, params: ModelParams):
    """Chemotactic sensitivity f(s); exactly 0 at s=0.  Accepts scalars or arrays."""
    arr = np.asarray(s, dtype=float)
    if np.any(arr < 0):
        raise ValueError("sensitivity argument must be nonnegative")
    if params.sensitivity is not None:
        out = np.asarray(params.sensitivity(arr), dtype=float)
    else:
        out = params.K * arr**params.alpha
    return float(out) if np.ndim(s) == 0 else out


def eval_production(s, params: ModelParams):
    """Signal production g(s) >= 0.  Accepts scalars or arrays."""
    arr = np.asarray(s, dtype=float)
    if np.any(arr < 0):
        raise ValueError("production argument must be nonnegative")
    if params.production is not None:
        out = np.asarray(params.production(arr), dtype=float)
    else:
        out = params.K0 * arr**params.l
    return float(out) if np.ndim(s) == 0 else out


def _check_triple(n: int, alpha: Fraction, l: Fraction):
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"unsupported dimension n={n}; need integer n >= 2")
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    if not l > 0:
        raise ValueError("l must be positive")


def classify_pp(n: int, alpha: RealLike, l: RealLike) -> RegionVerdict:
    """Classify (n, alpha, l) for the fully parabolic system.

    Bounded region: l in (0, 2/n) and 2/n <= alpha < 1 + 1/n - l/2; the case
    alpha < 2/n (same l range) is covered by earlier results.  Comparisons
    are exact, so points on the open upper boundary fall outside.
    """
    a, ll = as_fraction(alpha), as_fraction(l)
    _check_triple(n, a, ll)
    two_n = Fraction(2, n)
    upper = 1 + Fraction(1, n) - ll / 2
    if ll >= two_n:
        return RegionVerdict(RegionTag.OUTSIDE, f"l >= 2/n (l={ll}, 2/n={two_n})")
    if a < two_n:
        return RegionVerdict(
            RegionTag.PRIOR_RESULT, f"alpha < 2/n with l in (0, 2/n) (alpha={a})"
        )
    if a < upper:
        return RegionVerdict(
            RegionTag.THEOREM, f"2/n <= alpha < 1 + 1/n - l/2 with l in (0, 2/n)"
        )
    return RegionVerdict(
        RegionTag.OUTSIDE, f"alpha >= 1 + 1/n - l/2 (alpha={a}, bound={upper})"
    )


def classify_pe(n: int, alpha: RealLike, l: RealLike) -> RegionVerdict:
    """Classify (n, alpha, l) for the parabolic-elliptic simplification.

    Bounded region: l in (0, 1) and 2/n <= alpha < 1 + 2/n - l.
    """
    a, ll = as_fraction(alpha), as_fraction(l)
    _check_triple(n, a, ll)
    two_n = Fraction(2, n)
    upper = 1 + two_n - ll
    if ll >= 1:
        return RegionVerdict(RegionTag.OUTSIDE, f"l >= 1 (l={ll})")
    if a < two_n:
        return RegionVerdict(
            RegionTag.PRIOR_RESULT, f"alpha < 2/n with l in (0, 1) (alpha={a})"
        )
    if a < upper:
        return RegionVerdict(
            RegionTag.THEOREM, f"2/n <= alpha < 1 + 2/n - l with l in (0, 1)"
        )
    return RegionVerdict(
        RegionTag.OUTSIDE, f"alpha >= 1 + 2/n - l (alpha={a}, bound={upper})"
    )
