"""Mass-conservative explicit integrator for the chemotaxis system.

Space: cell-centered finite volumes on a uniform grid, central second-order
diffusion fluxes, first-order upwinding of the chemotactic advection on the
sign of the v-gradient, ghost cells mirroring the interior (zero flux).
Time: explicit Euler with an adaptive step bounded by both the diffusive
limit and the advective speed; the stiff -v reaction is integrated exactly
through an exp(-dt) factor.  The discrete scheme conserves the total mass of
u to roundoff and keeps both fields nonnegative under the CFL bound.

The chemical can evolve in time (fully parabolic, mode "pp") or equilibrate
instantaneously (parabolic-elliptic, mode "pe"), in which case v solves
(-lap + 1) v = g(u) by matrix-free conjugate gradients each step.
"""

from __future__ import annotations

import configparser
import time as _time
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

import numpy as np

from . import diagnostics, kernels
from .grid import Field, Grid, make_field
from .model import ModelParams, eval_production, eval_sensitivity


class ConfigError(ValueError):
    """Malformed or incomplete simulation configuration."""


class EllipticSolveError(RuntimeError):
    """Conjugate gradients exceeded the iteration cap."""


class Mode(str, Enum):
    PP = "pp"
    PE = "pe"


class Termination(str, Enum):
    COMPLETED = "Completed"
    GROWTH_SUSPECTED = "GrowthSuspected"
    STEP_UNDERFLOW = "StepUnderflow"
    NUMERICAL_FAILURE = "NumericalFailure"


PRESETS = ("constant", "gaussian", "constant-perturbed", "two-bumps")


@dataclass(frozen=True)
class SimConfig:
    n: int
    alpha: float
    l: float
    dims: int
    extent: float
    resolution: int
    t_end: float
    preset: str
    mass: float
    K: float = 1.0
    K0: float = 1.0
    mode: Mode = Mode.PP
    dt_max: float = 0.01
    safety: float = 0.4
    dt_min: float = 1e-10
    amplitude: float = 0.1
    seed: int = 0
    path: Optional[str] = None
    stride: int = 50
    growth_threshold: float = 1e6

    def __post_init__(self):
        if not 0 < self.safety <= 1:
            raise ConfigError("safety must lie in (0, 1]")
        if self.t_end <= 0 or self.dt_max <= 0 or self.dt_min <= 0:
            raise ConfigError("t_end, dt_max and dt_min must be positive")
        if self.stride < 1:
            raise ConfigError("stride must be at least 1")
        if self.growth_threshold <= 1:
            raise ConfigError("growth_threshold must exceed 1")

    def model_params(self) -> ModelParams:
        return ModelParams(n=self.n, alpha=self.alpha, l=self.l, K=self.K, K0=self.K0)

    def make_grid(self) -> Grid:
        return Grid(dims=self.dims, extent=self.extent, resolution=self.resolution)


@dataclass(frozen=True)
class SimState:
    u: Field
    v: Field
    t: float
    dt: float
    mode: Mode


@dataclass(frozen=True)
class SimResult:
    state: SimState
    records: tuple
    termination: Termination
    steps: int
    wall_time: float


# INI schema: section -> {key: (parser, required)}
_SCHEMA = {
    "model": {
        "n": (int, True),
        "alpha": (float, True),
        "l": (float, True),
        "K": (float, False),
        "K0": (float, False),
        "mode": (str, False),
    },
    "domain": {
        "dims": (int, True),
        "extent": (float, True),
        "resolution": (int, True),
    },
    "time": {
        "t_end": (float, True),
        "dt_max": (float, True),
        "safety": (float, True),
        "dt_min": (float, True),
    },
    "init": {
        "preset": (str, True),
        "mass": (float, True),
        "amplitude": (float, True),
        "seed": (int, True),
    },
    "output": {
        "path": (str, True),
        "stride": (int, True),
        "growth_threshold": (float, True),
    },
}


def read_ini(path) -> dict:
    """Read an INI file into {section: {key: raw string}}."""
    cp = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return {section: dict(cp.items(section)) for section in cp.sections()}


def sim_config_from_mapping(mapping: dict) -> SimConfig:
    """Build a SimConfig from {section: {key: str}}; unknown keys are errors."""
    for section in mapping:
        if section not in _SCHEMA:
            raise ConfigError(f"unknown config section [{section}]")
    values = {}
    for section, keys in _SCHEMA.items():
        given = mapping.get(section, {})
        for key in given:
            if key not in keys:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")
        for key, (parse, required) in keys.items():
            if key in given:
                try:
                    values[key] = parse(given[key])
                except ValueError as exc:
                    raise ConfigError(
                        f"bad value for {key!r} in [{section}]: {given[key]!r}"
                    ) from exc
            elif required:
                raise ConfigError(f"missing required key {key!r} in section [{section}]")
    if "mode" in values:
        try:
            values["mode"] = Mode(values["mode"])
        except ValueError:
            raise ConfigError(f"mode must be 'pp' or 'pe', got {values['mode']!r}")
    try:
        return SimConfig(**values)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_sim_config(path) -> SimConfig:
    return sim_config_from_mapping(read_ini(path))


def _gaussian(grid: Grid, centers, sigma):
    coords = grid.cell_centers()
    total = np.zeros(grid.shape)
    for center in centers:
        r2 = np.zeros(grid.shape)
        for x, c in zip(coords, center):
            r2 = r2 + (x - c) ** 2
        total += np.exp(-r2 / (2 * sigma**2))
    return total


def init_state(config: SimConfig) -> SimState:
    """Nonnegative initial data with the prescribed total mass; v0 = 0.

    Preset shapes (their amplitudes are artifact choices, echoed in the run
    metadata): "constant" is uniform; "gaussian" a centered bump of width
    sigma = amplitude * extent; "constant-perturbed" uniform times
    (1 + amplitude * product of cosines); "two-bumps" two gaussians on the
    diagonal.  All are renormalized so the discrete mass equals ``mass``.
    """
    if config.mass <= 0:
        raise ConfigError("initial mass must be positive (nontrivial data)")
    grid = config.make_grid()
    L = config.extent
    if config.preset == "constant":
        u = np.full(grid.shape, config.mass / grid.domain_volume)
    elif config.preset == "gaussian":
        if not 0 < config.amplitude <= 0.5:
            raise ConfigError("gaussian preset needs amplitude in (0, 0.5] (width fraction)")
        u = _gaussian(grid, [(L / 2,) * grid.dims], config.amplitude * L)
    elif config.preset == "constant-perturbed":
        if not 0 < abs(config.amplitude) < 1:
            raise ConfigError("constant-perturbed preset needs 0 < |amplitude| < 1")
        wave = np.ones(grid.shape)
        for x in grid.cell_centers():
            wave = wave * np.cos(2 * np.pi * x / L)
        u = 1.0 + config.amplitude * wave
    elif config.preset == "two-bumps":
        if not 0 < config.amplitude <= 0.5:
            raise ConfigError("two-bumps preset needs amplitude in (0, 0.5] (width fraction)")
        centers = [(0.3 * L,) * grid.dims, (0.7 * L,) * grid.dims]
        u = _gaussian(grid, centers, config.amplitude * L)
    else:
        raise ConfigError(f"unknown init preset {config.preset!r} (choose from {PRESETS})")
    u = u * (config.mass / (u.sum() * grid.cell_volume))
    return SimState(
        u=make_field(grid, u),
        v=make_field(grid),
        t=0.0,
        dt=0.0,
        mode=config.mode,
    )


def _k(dims: int):
    if dims == 1:
        return (
            kernels.max_face_speed_1d,
            kernels.advance_u_1d,
            kernels.advance_v_1d,
            kernels.helmholtz_apply_1d,
        )
    return (
        kernels.max_face_speed_2d,
        kernels.advance_u_2d,
        kernels.advance_v_2d,
        kernels.helmholtz_apply_2d,
    )


def step_pp(state: SimState, params: ModelParams, dt: float) -> SimState:
    """One explicit step of the fully parabolic system.

    The caller is responsible for dt being within the stability limit (run()
    handles this); mass of u is conserved to roundoff by construction.
    """
    if state.mode is not Mode.PP:
        raise ValueError("step_pp requires a ParabolicParabolic state")
    grid = state.u.grid
    _, advance_u, advance_v, _ = _k(grid.dims)
    u, v = state.u.values, state.v.values
    fu = eval_sensitivity(u, params)
    gu = eval_production(u, params)
    new_u = advance_u(u, v, fu, dt, grid.spacing)
    new_v = advance_v(v, gu, dt, grid.spacing)
    return SimState(
        u=Field(new_u, grid), v=Field(new_v, grid), t=state.t + dt, dt=dt, mode=state.mode
    )


def _cg(apply_fn, b, h, tol, x0, max_iter):
    bnorm = float(np.sqrt(np.vdot(b, b)))
    if bnorm == 0.0:
        return np.zeros_like(b)
    x = np.zeros_like(b) if x0 is None else x0.copy()
    r = b - apply_fn(x, h)
    target = tol * bnorm
    rr = float(np.vdot(r, r))
    if np.sqrt(rr) <= target:
        return x
    p = r.copy()
    for _ in range(max_iter):
        Ap = apply_fn(p, h)
        alpha = rr / float(np.vdot(p, Ap))
        x = x + alpha * p
        r = r - alpha * Ap
        rr_new = float(np.vdot(r, r))
        if np.sqrt(rr_new) <= target:
            return x
        p = r + (rr_new / rr) * p
        rr = rr_new
    raise EllipticSolveError(
        f"conjugate gradients did not reach tol={tol} within {max_iter} iterations"
    )


def solve_elliptic(
    u: Field,
    params: ModelParams,
    grid: Optional[Grid] = None,
    tol: float = 1e-10,
    warm_start: Optional[Field] = None,
    max_iter: Optional[int] = None,
) -> Field:
    """Solve (-lap + 1) v = g(u) with the zero-flux stencil.

    Residual 2-norm is driven below tol * ||g(u)||.  The operator is an
    M-matrix, so the exact discrete solution inherits nonnegativity from
    g(u) >= 0; the iterate matches it to the solve tolerance.
    """
    grid = grid or u.grid
    _, _, _, apply_fn = _k(grid.dims)
    b = eval_production(u.values, params)
    x0 = warm_start.values if warm_start is not None else None
    cap = max_iter if max_iter is not None else max(1000, 5 * b.size)
    v = _cg(apply_fn, b, grid.spacing, tol, x0, cap)
    return Field(v, grid)


def step_pe(
    state: SimState, params: ModelParams, dt: float, tol: float = 1e-10
) -> SimState:
    """Parabolic-elliptic step: equilibrate v from u, then advance u."""
    if state.mode is not Mode.PE:
        raise ValueError("step_pe requires a ParabolicElliptic state")
    grid = state.u.grid
    _, advance_u, _, _ = _k(grid.dims)
    u = state.u.values
    v = solve_elliptic(state.u, params, grid, tol=tol, warm_start=state.v)
    fu = eval_sensitivity(u, params)
    new_u = advance_u(u, v.values, fu, dt, grid.spacing)
    return SimState(u=Field(new_u, grid), v=v, t=state.t + dt, dt=dt, mode=state.mode)


def _fields_ok(u, v):
    # negative overshoot beyond the roundoff floor counts as failure
    if not (np.isfinite(u).all() and np.isfinite(v).all()):
        return False
    if u.min() < -1e-10 * max(1.0, float(u.max())):
        return False
    if v.min() < -1e-10 * max(1.0, float(v.max())):
        return False
    return True


def run(
    config: SimConfig,
    diag_p: float = 2.0,
    diag_q: float = 1.0,
    elliptic_tol: float = 1e-10,
) -> SimResult:
    """Integrate to t_end, emitting diagnostics every ``stride`` steps.

    Stops early when the joint sup-norm exceeds growth_threshold times its
    initial value (GrowthSuspected), the stable step falls below dt_min
    (StepUnderflow), or the fields leave the finite nonnegative range
    (NumericalFailure).
    """
    params = config.model_params()
    state = init_state(config)
    grid = state.u.grid
    h = grid.spacing
    max_speed, advance_u, advance_v, _ = _k(grid.dims)
    pe = config.mode is Mode.PE

    if pe:
        state = replace(state, v=solve_elliptic(state.u, params, grid, tol=elliptic_tol))

    records = [diagnostics.make_record(state, diag_p, diag_q, n=config.n)]
    sup0 = float(state.u.values.max()) + float(state.v.values.max())
    diff_limit = config.safety * h * h / (2 * grid.dims)
    termination = Termination.COMPLETED
    steps = 0
    recorded_at = 0
    t_tol = 1e-12 * max(config.t_end, 1.0)
    start = _time.perf_counter()

    while config.t_end - state.t > t_tol:
        u, v = state.u.values, state.v.values
        if pe:
            v = solve_elliptic(
                Field(u, grid), params, grid, tol=elliptic_tol,
                warm_start=Field(v, grid),
            ).values
            state = replace(state, v=Field(v, grid))
        fu = eval_sensitivity(u, params)
        vmax = max_speed(u, v, fu, h)
        dt_stable = diff_limit
        if vmax > 0.0:
            dt_stable = min(dt_stable, config.safety * h / (2 * grid.dims * vmax))
        dt = min(dt_stable, config.dt_max)
        if dt < config.dt_min:
            termination = Termination.STEP_UNDERFLOW
            break
        dt = min(dt, config.t_end - state.t)
        new_u = advance_u(u, v, fu, dt, h)
        if pe:
            new_v = v
        else:
            new_v = advance_v(v, eval_production(u, params), dt, h)
        state = SimState(
            u=Field(new_u, grid), v=Field(new_v, grid),
            t=state.t + dt, dt=dt, mode=state.mode,
        )
        steps += 1
        if not _fields_ok(new_u, new_v):
            termination = Termination.NUMERICAL_FAILURE
            break
        if float(new_u.max()) + float(new_v.max()) > config.growth_threshold * sup0:
            termination = Termination.GROWTH_SUSPECTED
            break
        if steps % config.stride == 0:
            records.append(diagnostics.make_record(state, diag_p, diag_q, n=config.n))
            recorded_at = steps

    if recorded_at != steps:
        records.append(diagnostics.make_record(state, diag_p, diag_q, n=config.n))

    return SimResult(
        state=state,
        records=tuple(records),
        termination=termination,
        steps=steps,
        wall_time=_time.perf_counter() - start,
    )
