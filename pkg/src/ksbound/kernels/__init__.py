"""Hot stencil kernels with two interchangeable backends.

The default backend is numba (JIT-compiled loops, cached on disk); setting
the environment variable ``KSBOUND_KERNELS=numpy`` before import selects the
pure-numpy fallback.  ``KSBOUND_KERNELS=numba`` demands numba and fails
loudly when it is unavailable.  Both backends implement the same functions
and agree to roundoff; `benchmarks/bench_kernels.py` compares their speed.
"""

import os

from . import _numpy

BACKEND_ENV = "KSBOUND_KERNELS"

_KERNEL_NAMES = (
    "max_face_speed_1d",
    "max_face_speed_2d",
    "advance_u_1d",
    "advance_u_2d",
    "advance_v_1d",
    "advance_v_2d",
    "helmholtz_apply_1d",
    "helmholtz_apply_2d",
)


def get_backend(name: str):
    """Return the kernel module for backend ``name`` ('numpy' or 'numba')."""
    if name == "numpy":
        return _numpy
    if name == "numba":
        from . import _numba

        return _numba
    raise ValueError(f"unknown kernel backend {name!r}")


def _select():
    choice = os.environ.get(BACKEND_ENV, "auto").strip().lower() or "auto"
    if choice == "auto":
        try:
            return get_backend("numba"), "numba"
        except ImportError:
            return _numpy, "numpy"
    return get_backend(choice), choice


_impl, BACKEND = _select()

max_face_speed_1d = _impl.max_face_speed_1d
max_face_speed_2d = _impl.max_face_speed_2d
advance_u_1d = _impl.advance_u_1d
advance_u_2d = _impl.advance_u_2d
advance_v_1d = _impl.advance_v_1d
advance_v_2d = _impl.advance_v_2d
helmholtz_apply_1d = _impl.helmholtz_apply_1d
helmholtz_apply_2d = _impl.helmholtz_apply_2d
