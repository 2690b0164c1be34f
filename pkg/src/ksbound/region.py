"""Tabulated boundedness-region boundaries in the (l, alpha) plane.

For each sampled l the admissible alpha ranges are [2/n, 1 + 1/n - l/2) in
the fully parabolic case (only while l < 2/n) and [2/n, 1 + 2/n - l) in the
parabolic-elliptic simplification (l < 1).  Values are exact rationals; the
CSV leaves absent bounds as empty cells.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional


@dataclass(frozen=True)
class RegionRow:
    l: Fraction
    alpha_lower: Fraction
    alpha_upper_pp: Optional[Fraction]
    alpha_upper_pe: Optional[Fraction]


def region_table(n: int, l_samples: int) -> list:
    """Sample l uniformly over (0, 1), strictly inside by a half-step offset."""
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"unsupported dimension n={n}; need integer n >= 2")
    if l_samples < 2:
        raise ValueError("need at least 2 samples")
    eps = Fraction(1, 2 * l_samples)
    span = 1 - 2 * eps
    lower = Fraction(2, n)
    rows = []
    for i in range(l_samples):
        l = eps + span * Fraction(i, l_samples - 1)
        pp = 1 + Fraction(1, n) - l / 2 if l < lower else None
        pe = 1 + Fraction(2, n) - l if l < 1 else None
        rows.append(RegionRow(l=l, alpha_lower=lower, alpha_upper_pp=pp, alpha_upper_pe=pe))
    return rows


def format_region_csv(rows) -> str:
    lines = ["l,alpha_lower,alpha_upper_pp,alpha_upper_pe"]
    for row in rows:
        cells = [repr(float(row.l)), repr(float(row.alpha_lower))]
        cells.append("" if row.alpha_upper_pp is None else repr(float(row.alpha_upper_pp)))
        cells.append("" if row.alpha_upper_pe is None else repr(float(row.alpha_upper_pe)))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_region_csv(rows, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_region_csv(rows))
