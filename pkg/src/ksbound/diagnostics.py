"""Monitored quantities on simulation states and run classification.

Discrete gradients use centered differences in the interior and one-sided
differences at the boundary, matching the solver's zero-flux closure so that
no spurious boundary gradient growth is reported.  The theoretical bound
constants are not constructive, so classification is plateau-based: a run is
Bounded when its trailing sup-norms settle under a small multiple of their
early values.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .grid import Field

CSV_HEADER = "t,mass,sup_u,sup_v,lp_u,grad_v_2q,y,w1n_v"


@dataclass(frozen=True)
class DiagnosticRecord:
    t: float
    mass: float
    sup_u: float
    sup_v: float
    lp_u: float
    grad_v_2q: float
    y: float
    w1n_v: float


class RunClass(str, Enum):
    BOUNDED = "Bounded"
    GROWTH_SUSPECTED = "GrowthSuspected"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class ClassifyThresholds:
    plateau_factor: float = 2.0
    growth_threshold: float = 1e6
    dt_underflow: bool = False


def mass(u: Field) -> float:
    """Cell-volume-weighted total of u."""
    return float(u.values.sum()) * u.grid.cell_volume


def lp_norm(field: Field, p: float) -> float:
    if p < 1:
        raise ValueError("p must be at least 1")
    vol = field.grid.cell_volume
    return float((np.abs(field.values) ** p).sum() * vol) ** (1.0 / p)


def gradient_magnitude(field: Field) -> np.ndarray:
    """|grad| by centered interior differences, one-sided at the boundary."""
    h = field.grid.spacing
    comps = np.gradient(field.values, h, edge_order=2)
    if field.grid.dims == 1:
        return np.abs(comps)
    return np.sqrt(sum(c**2 for c in comps))


def grad_norm_2q(v: Field, q: float) -> float:
    """L^{2q} norm of |grad v|."""
    if q < 1:
        raise ValueError("q must be at least 1")
    mag = gradient_magnitude(v)
    vol = v.grid.cell_volume
    return float((mag ** (2 * q)).sum() * vol) ** (1.0 / (2 * q))


def functional_y(state, p: float, q: float) -> float:
    """Absorptive functional: (u+1)^p mass over p(p-1) plus |grad v|^{2q} over q."""
    if p <= 1:
        raise ValueError("p must exceed 1")
    if q < 1:
        raise ValueError("q must be at least 1")
    vol = state.u.grid.cell_volume
    term_u = float(((state.u.values + 1.0) ** p).sum() * vol) / (p * (p - 1))
    mag = gradient_magnitude(state.v)
    term_v = float((mag ** (2 * q)).sum() * vol) / q
    return term_u + term_v


def w1n_norm(v: Field, n: int) -> float:
    """W^{1,n} norm: (||v||_n^n + || |grad v| ||_n^n)^(1/n)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    vol = v.grid.cell_volume
    vn = float((np.abs(v.values) ** n).sum() * vol)
    gn = float((gradient_magnitude(v) ** n).sum() * vol)
    return (vn + gn) ** (1.0 / n)


def make_record(state, p: float, q: float, n: int = 2) -> DiagnosticRecord:
    """Sample every monitored quantity; n is the model dimension for w1n_v."""
    u, v = state.u, state.v
    return DiagnosticRecord(
        t=state.t,
        mass=mass(u),
        sup_u=float(u.values.max()),
        sup_v=float(v.values.max()),
        lp_u=lp_norm(u, p),
        grad_v_2q=grad_norm_2q(v, q),
        y=functional_y(state, p, q),
        w1n_v=w1n_norm(v, n),
    )


def classify_run(
    records: Sequence[DiagnosticRecord],
    thresholds: ClassifyThresholds = ClassifyThresholds(),
) -> RunClass:
    """Plateau-based boundedness classification of a diagnostic timeseries.

    GrowthSuspected when the joint sup-norm crossed the growth threshold (or
    the step underflowed); Bounded when the trailing half of both sup-norms
    stays within plateau_factor of their values at the 10%-time mark;
    Inconclusive otherwise.
    """
    if not records:
        raise ValueError("timeseries must be nonempty")
    sups = [r.sup_u + r.sup_v for r in records]
    if thresholds.dt_underflow:
        return RunClass.GROWTH_SUSPECTED
    if sups[0] > 0 and max(sups) > thresholds.growth_threshold * sups[0]:
        return RunClass.GROWTH_SUSPECTED
    t0, t1 = records[0].t, records[-1].t
    mark = next(r for r in records if r.t >= t0 + 0.1 * (t1 - t0))
    trailing = [r for r in records if r.t >= t0 + 0.5 * (t1 - t0)]
    pf = thresholds.plateau_factor
    if (
        max(r.sup_u for r in trailing) <= pf * mark.sup_u
        and max(r.sup_v for r in trailing) <= pf * mark.sup_v
    ):
        return RunClass.BOUNDED
    return RunClass.INCONCLUSIVE


def format_csv(records: Sequence[DiagnosticRecord]) -> str:
    """CSV text with full double precision (17 significant digits)."""
    lines = [CSV_HEADER]
    for r in records:
        lines.append(
            ",".join(
                f"{x:.17g}"
                for x in (r.t, r.mass, r.sup_u, r.sup_v, r.lp_u, r.grad_v_2q, r.y, r.w1n_v)
            )
        )
    return "\n".join(lines) + "\n"


def write_csv(records: Sequence[DiagnosticRecord], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_csv(records))
