"""Exact rational arithmetic helpers.

All region and certificate algebra is done with `fractions.Fraction` so that
strict inequalities at region boundaries are decided exactly.  Binary floats
convert losslessly (every finite float is a dyadic rational); decimal strings
such as "1.3" convert to the exact decimal value, which is what command-line
users mean.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

RealLike = Union[int, float, str, Fraction]


def as_fraction(x: RealLike) -> Fraction:
    """Convert ``x`` to an exact Fraction, rejecting NaN/infinity."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a numeric value")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r} has no rational form")
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {type(x).__name__} as a rational number")
