"""Import-time selection between the compiled and the pure-Python kernel.

The compiled extension is preferred.  Setting the environment variable
``VARWEYL_PURE_PYTHON=1`` forces the fallback, which is also used when the
extension was not built.
"""
from __future__ import annotations

import os

import numpy as np

from . import _core_py

if os.environ.get("VARWEYL_PURE_PYTHON", "") not in ("", "0"):
    _impl = _core_py
    BACKEND = "python"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _core_py
        BACKEND = "python"

window_pieces = _core_py.window_pieces


def _c(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def modular_weighted(w, h, p, lam):
    """Weighted modular; see :func:`varweyl._core_py.modular_weighted`."""
    return float(_impl.modular_weighted(_c(w), _c(h), _c(p), float(lam)))


def luxemburg_weighted(w, h, p, tol):
    """Weighted Luxemburg norm; see :func:`varweyl._core_py.luxemburg_weighted`.

    The samples are divided by their largest magnitude first, so that the
    bracket search starts within a factor of the norm (the norm is
    homogeneous, the returned modular is unchanged by the scaling).
    """
    h = _c(h)
    m = float(np.max(np.abs(h))) if h.size else 0.0
    if not (m > 0.0 and np.isfinite(m)) or m == 1.0:
        return _impl.luxemburg_weighted(_c(w), h, _c(p), float(tol))
    value, rho, iterations, width = _impl.luxemburg_weighted(_c(w), h / m, _c(p), float(tol))
    return value * m, rho, iterations, width * m


def window_norms(edges, heights, starts, length, exp_breaks, exp_values,
                 relative=False, measure_scale=1.0, tol=1e-13, closed_form=True):
    """Sliding-window norms; see :func:`varweyl._core_py.window_norms`."""
    return _impl.window_norms(_c(edges), _c(heights), _c(np.atleast_1d(starts)), float(length),
                              _c(exp_breaks), _c(exp_values), bool(relative),
                              float(measure_scale), float(tol), bool(closed_form))


def backends():
    """Return the available kernel modules keyed by name."""
    found = {"python": _core_py}
    try:
        from . import _core  # type: ignore[attr-defined]

        found["cython"] = _core
    except ImportError:
        pass
    return found
