"""Pure-Python (numpy) kernels for Luxemburg norms of piecewise data.

This module is the reference twin of the compiled ``varweyl._core``
extension.  Both follow the same bracket and bisection schedule, so they
agree to rounding error; the compiled version is only faster.
"""
from __future__ import annotations

import numpy as np

INF_EXCESS = 1e-12
MAX_DOUBLINGS = 200
MAX_BISECTIONS = 80


def modular_weighted(w, h, p, lam):
    """Return ``sum_i w_i * phi_{p_i}(h_i / lam)``.

    ``phi_p(s) = s**p`` for finite ``p``.  For ``p = inf`` it is 0 when
    ``s <= 1`` and infinite otherwise; infinite-exponent samples are tested
    even when their weight is zero so that breakpoint samples count.
    """
    w = np.asarray(w, dtype=float)
    h = np.asarray(h, dtype=float)
    p = np.asarray(p, dtype=float)
    s = h / lam
    inf_mask = np.isinf(p)
    if np.any(inf_mask & (h > 0.0) & (s > 1.0 + INF_EXCESS)):
        return float("inf")
    fin = (~inf_mask) & (w > 0.0) & (h > 0.0)
    if not np.any(fin):
        return 0.0
    with np.errstate(over="ignore"):
        return float(np.sum(w[fin] * s[fin] ** p[fin]))


def _nonzero(w, h, p):
    return bool(np.any((h > 0.0) & ((w > 0.0) | np.isinf(p))))


def luxemburg_weighted(w, h, p, tol):
    """Luxemburg norm of weighted samples.

    Returns
    -------
    tuple
        ``(value, modular_at_value, iterations, bracket_width)``.
    """
    w = np.ascontiguousarray(w, dtype=float)
    h = np.ascontiguousarray(h, dtype=float)
    p = np.ascontiguousarray(p, dtype=float)
    if not _nonzero(w, h, p):
        return 0.0, 0.0, 0, 0.0
    k = 0
    if modular_weighted(w, h, p, 1.0) <= 1.0:
        hi, lo = 1.0, 0.5
        while modular_weighted(w, h, p, lo) <= 1.0:
            hi, lo = lo, 0.5 * lo
            k += 1
            if k > MAX_DOUBLINGS:
                raise ArithmeticError("bracket not found after 200 doublings (non-integrable input)")
    else:
        lo, hi = 1.0, 2.0
        while modular_weighted(w, h, p, hi) > 1.0:
            lo, hi = hi, 2.0 * hi
            k += 1
            if k > MAX_DOUBLINGS:
                raise ArithmeticError("bracket not found after 200 doublings (non-integrable input)")
    steps = 0
    while steps < MAX_BISECTIONS and (hi - lo) > tol * hi:
        mid = 0.5 * (lo + hi)
        if modular_weighted(w, h, p, mid) <= 1.0:
            hi = mid
        else:
            lo = mid
        steps += 1
    return hi, modular_weighted(w, h, p, hi), k + steps, hi - lo


def window_pieces(edges, heights, s, length, exp_breaks, exp_values, relative, measure_scale):
    """Clip piecewise data to ``[s, s + length]`` and split at exponent breaks.

    Returns
    -------
    tuple of ndarray
        ``(widths, heights, exponents)`` of the merged pieces, widths already
        multiplied by ``measure_scale``.
    """
    edges = np.asarray(edges, dtype=float)
    a = max(s, edges[0])
    b = min(s + length, edges[-1])
    if not b > a:
        return np.empty(0), np.empty(0), np.empty(0)
    breaks = np.asarray(exp_breaks, dtype=float)
    if relative:
        breaks = s + length * breaks
    inner = np.concatenate([edges[(edges > a) & (edges < b)], breaks[(breaks > a) & (breaks < b)]])
    pts = np.unique(np.concatenate([[a], inner, [b]]))
    widths = np.diff(pts)
    keep = widths > 0.0
    mids = 0.5 * (pts[:-1] + pts[1:])[keep]
    widths = widths[keep] * measure_scale
    idx = np.clip(np.searchsorted(edges, mids, side="right") - 1, 0, len(heights) - 1)
    jdx = np.searchsorted(breaks, mids, side="right")
    return widths, np.asarray(heights, dtype=float)[idx], np.asarray(exp_values, dtype=float)[jdx]


def window_norms(edges, heights, starts, length, exp_breaks, exp_values,
                 relative, measure_scale, tol, closed_form):
    """Luxemburg norms of a piecewise-constant function on sliding windows.

    See :func:`varweyl._core.window_norms` for the parameter contract.
    """
    starts = np.asarray(starts, dtype=float)
    out = np.zeros(len(starts))
    if len(heights) == 0:
        return out
    exp_values = np.asarray(exp_values, dtype=float)
    single = len(exp_breaks) == 0
    for k, s in enumerate(starts):
        w, h, p = window_pieces(edges, heights, s, length, exp_breaks, exp_values, relative, measure_scale)
        if closed_form and single:
            p0 = exp_values[0]
            if np.isinf(p0):
                pos = w > 0.0
                out[k] = float(h[pos].max()) if np.any(pos) else 0.0
            else:
                pos = (h > 0.0) & (w > 0.0)
                if np.any(pos):
                    top = float(h[pos].max())
                    out[k] = top * float(np.sum(w[pos] * (h[pos] / top) ** p0)) ** (1.0 / p0)
        else:
            out[k] = luxemburg_weighted(w, h, p, tol)[0]
    return out
