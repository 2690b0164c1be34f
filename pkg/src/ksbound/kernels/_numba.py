"""Numba-compiled stencil kernels; see _numpy.py for the shared conventions
(including the axis-grouped accumulation that keeps mirror symmetry exact).

Loops are single-threaded on purpose: reductions keep one fixed association
order, so runs are bit-reproducible regardless of worker count.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def max_face_speed_1d(u, v, fu, h):
    n = u.shape[0]
    best = 0.0
    for i in range(n - 1):
        dv = (v[i + 1] - v[i]) / h
        donor = fu[i] if dv > 0.0 else fu[i + 1]
        s = donor * abs(dv)
        if s > best:
            best = s
    return best


@njit(cache=True)
def max_face_speed_2d(u, v, fu, h):
    nx, ny = u.shape
    best = 0.0
    for i in range(nx - 1):
        for j in range(ny):
            dv = (v[i + 1, j] - v[i, j]) / h
            donor = fu[i, j] if dv > 0.0 else fu[i + 1, j]
            s = donor * abs(dv)
            if s > best:
                best = s
    for i in range(nx):
        for j in range(ny - 1):
            dv = (v[i, j + 1] - v[i, j]) / h
            donor = fu[i, j] if dv > 0.0 else fu[i, j + 1]
            s = donor * abs(dv)
            if s > best:
                best = s
    return best


@njit(cache=True)
def advance_u_1d(u, v, fu, dt, h):
    n = u.shape[0]
    flux = np.empty(n - 1)
    for i in range(n - 1):
        dv = (v[i + 1] - v[i]) / h
        donor = fu[i] if dv > 0.0 else fu[i + 1]
        flux[i] = -(u[i + 1] - u[i]) / h + donor * dv
    out = np.empty_like(u)
    c = dt / h
    for i in range(n):
        west = flux[i - 1] if i > 0 else 0.0
        east = flux[i] if i < n - 1 else 0.0
        out[i] = u[i] + c * (west - east)
    return out


@njit(cache=True)
def advance_u_2d(u, v, fu, dt, h):
    nx, ny = u.shape
    fx = np.empty((nx - 1, ny))
    for i in range(nx - 1):
        for j in range(ny):
            dv = (v[i + 1, j] - v[i, j]) / h
            donor = fu[i, j] if dv > 0.0 else fu[i + 1, j]
            fx[i, j] = -(u[i + 1, j] - u[i, j]) / h + donor * dv
    fy = np.empty((nx, ny - 1))
    for i in range(nx):
        for j in range(ny - 1):
            dv = (v[i, j + 1] - v[i, j]) / h
            donor = fu[i, j] if dv > 0.0 else fu[i, j + 1]
            fy[i, j] = -(u[i, j + 1] - u[i, j]) / h + donor * dv
    out = np.empty_like(u)
    c = dt / h
    for i in range(nx):
        for j in range(ny):
            gx = (fx[i - 1, j] if i > 0 else 0.0) - (fx[i, j] if i < nx - 1 else 0.0)
            gy = (fy[i, j - 1] if j > 0 else 0.0) - (fy[i, j] if j < ny - 1 else 0.0)
            out[i, j] = u[i, j] + c * (gx + gy)
    return out


@njit(cache=True)
def advance_v_1d(v, gu, dt, h):
    n = v.shape[0]
    out = np.empty_like(v)
    decay = math.exp(-dt)
    grow = 1.0 - decay
    h2 = h * h
    for i in range(n):
        lap = 0.0
        if i > 0:
            lap += v[i - 1] - v[i]
        if i < n - 1:
            lap += v[i + 1] - v[i]
        out[i] = decay * v[i] + grow * (lap / h2 + gu[i])
    return out


@njit(cache=True)
def advance_v_2d(v, gu, dt, h):
    nx, ny = v.shape
    out = np.empty_like(v)
    decay = math.exp(-dt)
    grow = 1.0 - decay
    h2 = h * h
    for i in range(nx):
        for j in range(ny):
            lx = 0.0
            if i > 0:
                lx += v[i - 1, j] - v[i, j]
            if i < nx - 1:
                lx += v[i + 1, j] - v[i, j]
            ly = 0.0
            if j > 0:
                ly += v[i, j - 1] - v[i, j]
            if j < ny - 1:
                ly += v[i, j + 1] - v[i, j]
            out[i, j] = decay * v[i, j] + grow * ((lx + ly) / h2 + gu[i, j])
    return out


@njit(cache=True)
def helmholtz_apply_1d(v, h):
    n = v.shape[0]
    out = np.empty_like(v)
    h2 = h * h
    for i in range(n):
        lap = 0.0
        if i > 0:
            lap += v[i - 1] - v[i]
        if i < n - 1:
            lap += v[i + 1] - v[i]
        out[i] = v[i] - lap / h2
    return out


@njit(cache=True)
def helmholtz_apply_2d(v, h):
    nx, ny = v.shape
    out = np.empty_like(v)
    h2 = h * h
    for i in range(nx):
        for j in range(ny):
            lx = 0.0
            if i > 0:
                lx += v[i - 1, j] - v[i, j]
            if i < nx - 1:
                lx += v[i + 1, j] - v[i, j]
            ly = 0.0
            if j > 0:
                ly += v[i, j - 1] - v[i, j]
            if j < ny - 1:
                ly += v[i, j + 1] - v[i, j]
            out[i, j] = v[i, j] - (lx + ly) / h2
    return out
