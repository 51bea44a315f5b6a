"""Kernel backend selection.

The compiled extension is preferred; the NumPy implementation is the
drop-in fallback when the extension was not built. ``BACKEND`` records
which one is active. Set NLSEARCH_BACKEND=python to force the fallback.
"""

import os

from . import _kernels_py

_forced = os.environ.get("NLSEARCH_BACKEND")
if _forced == "python":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels_cy as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

apply_gate = _impl.apply_gate
rk4_nonlinear = _impl.rk4_nonlinear


def get_backend(name):
    """Return the kernel module for `name` ('cython' or 'python').

    Raises ImportError if the compiled backend was requested but is not
    available. Used by the benchmark and the backend-agreement tests.
    """
    if name == "python":
        return _kernels_py
    if name == "cython":
        if BACKEND != "cython":
            raise ImportError("compiled kernel backend is not available")
        return _impl
    raise ValueError(f"unknown backend {name!r}")
