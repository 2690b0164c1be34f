"""Pure-numpy reference implementations of the hot stencil kernels.

Conventions shared with the numba backend:

  - fields are cell-centered, 1D shape (n,) or 2D shape (nx, ny);
  - boundary faces carry zero flux (ghost cells mirror the interior), so a
    face loop only ever touches interior faces;
  - ``fu`` holds the chemotactic sensitivity f(u) sampled at cell centers;
    the interior face between cells L and R carries
        F = -(u_R - u_L)/h + fu_donor * (v_R - v_L)/h,
    donor = L when v increases across the face, else R;
  - the u update is conservative: dt/h times telescoping face fluxes;
  - the v update integrates the -v reaction exactly:
        v' = exp(-dt) v + (1 - exp(-dt)) (lap v + gu).

Per-cell sums are grouped by axis (x-pair plus y-pair) so that mirror
symmetry of the data survives bit-for-bit: IEEE negation and two-term
addition commute with rounding, longer chains do not.
"""

import math

import numpy as np


def max_face_speed_1d(u, v, fu, h):
    dv = (v[1:] - v[:-1]) / h
    donor = np.where(dv > 0.0, fu[:-1], fu[1:])
    speed = donor * np.abs(dv)
    return float(speed.max()) if speed.size else 0.0


def max_face_speed_2d(u, v, fu, h):
    dvx = (v[1:, :] - v[:-1, :]) / h
    donor = np.where(dvx > 0.0, fu[:-1, :], fu[1:, :])
    sx = float((donor * np.abs(dvx)).max())
    dvy = (v[:, 1:] - v[:, :-1]) / h
    donor = np.where(dvy > 0.0, fu[:, :-1], fu[:, 1:])
    sy = float((donor * np.abs(dvy)).max())
    return max(sx, sy)


def _face_flux(uL, uR, vL, vR, fuL, fuR, h):
    dv = (vR - vL) / h
    donor = np.where(dv > 0.0, fuL, fuR)
    return -(uR - uL) / h + donor * dv


def advance_u_1d(u, v, fu, dt, h):
    flux = _face_flux(u[:-1], u[1:], v[:-1], v[1:], fu[:-1], fu[1:], h)
    div = np.zeros_like(u)
    div[:-1] -= flux
    div[1:] += flux
    return u + (dt / h) * div


def advance_u_2d(u, v, fu, dt, h):
    fx = _face_flux(u[:-1, :], u[1:, :], v[:-1, :], v[1:, :], fu[:-1, :], fu[1:, :], h)
    divx = np.zeros_like(u)
    divx[:-1, :] -= fx
    divx[1:, :] += fx
    fy = _face_flux(u[:, :-1], u[:, 1:], v[:, :-1], v[:, 1:], fu[:, :-1], fu[:, 1:], h)
    divy = np.zeros_like(u)
    divy[:, :-1] -= fy
    divy[:, 1:] += fy
    return u + (dt / h) * (divx + divy)


def _laplacian_1d(v, h):
    lap = np.zeros_like(v)
    d = v[1:] - v[:-1]
    lap[:-1] += d
    lap[1:] -= d
    return lap / (h * h)


def _laplacian_2d(v, h):
    lapx = np.zeros_like(v)
    d = v[1:, :] - v[:-1, :]
    lapx[:-1, :] += d
    lapx[1:, :] -= d
    lapy = np.zeros_like(v)
    d = v[:, 1:] - v[:, :-1]
    lapy[:, :-1] += d
    lapy[:, 1:] -= d
    return (lapx + lapy) / (h * h)


def advance_v_1d(v, gu, dt, h):
    decay = math.exp(-dt)
    return decay * v + (1.0 - decay) * (_laplacian_1d(v, h) + gu)


def advance_v_2d(v, gu, dt, h):
    decay = math.exp(-dt)
    return decay * v + (1.0 - decay) * (_laplacian_2d(v, h) + gu)


def helmholtz_apply_1d(v, h):
    """(-laplacian + identity) with the zero-flux closure; SPD."""
    return v - _laplacian_1d(v, h)


def helmholtz_apply_2d(v, h):
    return v - _laplacian_2d(v, h)
