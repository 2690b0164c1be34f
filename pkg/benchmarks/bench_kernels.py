#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the three hot stencil kernels on square grids and a short end-to-end
run; smaller is better.  Usage: python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from ksbound.kernels import get_backend


def time_call(fn, *args, repeat=200):
    fn(*args)  # warm up (JIT compile on the numba path)
    start = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - start) / repeat


def bench_kernels(resolution):
    rng = np.random.default_rng(0)
    u = rng.uniform(0.5, 2.0, size=(resolution, resolution))
    v = rng.uniform(0.0, 1.0, size=(resolution, resolution))
    fu = u**1.05
    gu = u**0.5
    h = 1.0 / resolution
    print(f"\n{resolution}x{resolution} grid, seconds per call:")
    header = f"  {'kernel':<22}{'numpy':>12}{'numba':>12}{'speedup':>9}"
    print(header)
    for name, args in (
        ("advance_u_2d", (u, v, fu, 1e-5, h)),
        ("advance_v_2d", (v, gu, 1e-5, h)),
        ("helmholtz_apply_2d", (v, h)),
        ("max_face_speed_2d", (u, v, fu, h)),
    ):
        times = {}
        for backend in ("numpy", "numba"):
            impl = get_backend(backend)
            times[backend] = time_call(getattr(impl, name), *args)
        ratio = times["numpy"] / times["numba"]
        print(f"  {name:<22}{times['numpy']:>12.3e}{times['numba']:>12.3e}{ratio:>8.1f}x")


_RUN_SNIPPET = """
import time
from ksbound.solver import Mode, SimConfig, run
from ksbound.kernels import BACKEND
cfg = SimConfig(n=2, alpha=1.0, l=0.5, dims=2, extent=1.0, resolution=64,
                t_end=0.05, preset="gaussian", mass=5.0, amplitude=0.1,
                mode=Mode.PP, stride=10**6)
run(cfg)  # warm up
start = time.perf_counter()
result = run(cfg)
print(f"  {BACKEND:<8}{time.perf_counter() - start:>10.3f}  ({result.steps} steps)")
"""


def bench_run():
    # fresh interpreter per backend so the env flag does the selection
    import os
    import subprocess
    import sys

    print("\nend-to-end run (64x64, t_end=0.05), wall seconds:", flush=True)
    for backend in ("numpy", "numba"):
        env = dict(os.environ, KSBOUND_KERNELS=backend)
        subprocess.run([sys.executable, "-c", _RUN_SNIPPET], env=env, check=True)


if __name__ == "__main__":
    for resolution in (64, 128, 256):
        bench_kernels(resolution)
    bench_run()
