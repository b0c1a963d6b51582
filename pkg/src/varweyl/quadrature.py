"""Adaptive composite Gauss-Legendre quadrature.

The rule is built once for an integrand and can be reused (the nodes and
weights are returned), which lets Luxemburg bisection evaluate the modular
at many scales with the same discretization.  Panels always split at the
supplied breakpoints.  Panels that touch a declared power singularity use a
graded substitution ``x = a + (b - a) u**m`` that turns ``(x - a)**s`` into
a smooth integrand in ``u``.
"""
from __future__ import annotations

import math
from typing import Callable, Iterable

import numpy as np
from scipy import integrate as _sp_integrate

_GL_X, _GL_W = np.polynomial.legendre.leggauss(15)
_U = 0.5 * (_GL_X + 1.0)
_WU = 0.5 * _GL_W

DEFAULT_ABS_TOL = 1e-10
_EPS = float(np.finfo(float).eps)
_MAX_LEVEL_PANELS = 20_000


def _grading(power: float | None) -> int:
    if power is None or power >= 0.0:
        return 1
    if power <= -1.0:
        raise ValueError(f"singularity of power {power} is not integrable")
    # the tolerance keeps 2 / (1 + s) from rounding up past an integer
    return max(2, math.ceil(2.0 / (1.0 + power) - 1e-9))


def panel_nodes(a: float, b: float, left_power: float | None = None,
                right_power: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of one 15-point panel on ``[a, b]``.

    ``left_power``/``right_power`` declare a singularity ``|x - end|**s`` at
    the corresponding end.
    """
    h = b - a
    if left_power is not None and right_power is not None and (left_power < 0 or right_power < 0):
        mid = 0.5 * (a + b)
        x1, w1 = panel_nodes(a, mid, left_power, None)
        x2, w2 = panel_nodes(mid, b, None, right_power)
        return np.concatenate([x1, x2]), np.concatenate([w1, w2])
    m = _grading(left_power)
    if m > 1:
        x = np.maximum(a + h * _U ** m, np.nextafter(a, b))
        return x, _WU * m * h * _U ** (m - 1)
    m = _grading(right_power)
    if m > 1:
        x = np.minimum(b - h * _U ** m, np.nextafter(b, a))
        return x[::-1].copy(), (_WU * m * h * _U ** (m - 1))[::-1].copy()
    return a + h * _U, _WU * h


def adaptive_rule(fn: Callable[[np.ndarray], np.ndarray], a: float, b: float, breaks: Iterable[float] = (),
                  *, tol: float = DEFAULT_ABS_TOL, rel_tol: float = 1e-13,
                  singular: Iterable[tuple[float, float]] = (), max_panel: float | None = None,
                  max_depth: int = 50) -> tuple[np.ndarray, np.ndarray, float]:
    """Build an adaptive composite rule for ``int_a^b fn``.

    Parameters
    ----------
    fn : callable
        Vectorized, non-negative or signed integrand used to drive adaptivity.
    breaks : iterable of float
        Mandatory panel boundaries inside ``(a, b)``.
    tol : float
        Absolute tolerance for the whole interval, shared in proportion to
        panel length.
    singular : iterable of (point, power)
        Power singularities; panels adjacent to them are graded.
    max_panel : float, optional
        Initial panels are subdivided to at most this length.

    Returns
    -------
    nodes, weights : ndarray
        Sorted nodes and their weights.
    error : float
        Sum of the accepted panel error estimates.
    """
    a, b = float(a), float(b)
    if not b > a:
        return np.empty(0), np.empty(0), 0.0
    sing = {}
    for x0, s in singular:
        if a <= x0 <= b and s < 0:
            sing[float(x0)] = min(float(s), sing.get(float(x0), 0.0))
    pts = [a, b]
    pts.extend(float(x) for x in breaks if a < x < b)
    pts.extend(x for x in sing if a < x < b)
    pts = np.unique(np.asarray(pts))
    if max_panel is not None and max_panel > 0:
        refined = [pts[0]]
        for lo, hi in zip(pts[:-1], pts[1:]):
            n = max(1, int(math.ceil((hi - lo) / max_panel)))
            refined.extend(np.linspace(lo, hi, n + 1)[1:].tolist())
        pts = np.asarray(refined)
    total = b - a
    xs: list[np.ndarray] = []
    ws: list[np.ndarray] = []
    err_total = 0.0
    level = [(float(lo), float(hi), sing.get(float(lo)), sing.get(float(hi)))
             for lo, hi in zip(pts[:-1], pts[1:]) if hi > lo]
    depth = 0
    cap = _MAX_LEVEL_PANELS + 8 * len(level)
    last = False
    while level:
        # all panels of one refinement level share a single integrand call
        rules = []
        for lo, hi, sl, sr in level:
            mid = 0.5 * (lo + hi)
            rules.append((panel_nodes(lo, hi, sl, sr), panel_nodes(lo, mid, sl, None), panel_nodes(mid, hi, None, sr)))
        parts = [part for r in rules for part in (r[0][0], r[1][0], r[2][0])]
        vals = np.asarray(fn(np.concatenate(parts)), dtype=float)
        cuts = np.cumsum([0] + [part.size for part in parts])
        nxt = []
        for k, ((lo, hi, sl, sr), (coarse, left, right)) in enumerate(zip(level, rules)):
            f1, fl, fr = (vals[cuts[3 * k + j]:cuts[3 * k + j + 1]] for j in range(3))
            i1 = float(np.dot(coarse[1], f1))
            i2 = float(np.dot(left[1], fl) + np.dot(right[1], fr))
            err = abs(i1 - i2)
            if not math.isfinite(i2):
                err = 0.0
            mid = 0.5 * (lo + hi)
            # differences below the rounding level of the panel sum cannot be refined away
            noise = 64.0 * _EPS * float(np.dot(left[1], np.abs(fl)) + np.dot(right[1], np.abs(fr)))
            if (last or err <= max(tol * (hi - lo) / total, rel_tol * abs(i2), noise) or depth >= max_depth
                    or mid in (lo, hi)):
                xs.extend([left[0], right[0]])
                ws.extend([left[1], right[1]])
                err_total += err
            else:
                nxt.append((lo, mid, sl, None))
                nxt.append((mid, hi, None, sr))
        level = nxt
        depth += 1
        # values whose noise exceeds tol (e.g. arguments rounded at large offsets) cannot settle:
        # the next level is accepted as is and its differences stay in the error estimate
        last = len(level) > cap
    if not xs:
        return np.empty(0), np.empty(0), 0.0
    x = np.concatenate(xs)
    w = np.concatenate(ws)
    order = np.argsort(x, kind="stable")
    return x[order], w[order], err_total


def integrate(fn: Callable[[np.ndarray], np.ndarray], a: float, b: float, breaks: Iterable[float] = (),
              **kwargs) -> tuple[float, float]:
    """Adaptive Gauss-Legendre integral ``(value, error_estimate)`` of ``fn`` over ``[a, b]``."""
    if b < a:
        val, err = integrate(fn, b, a, breaks, **kwargs)
        return -val, err
    x, w, err = adaptive_rule(fn, a, b, breaks, **kwargs)
    if x.size == 0:
        return 0.0, 0.0
    return float(np.dot(w, fn(x))), err


def fourier_half_line(kernel, omega: float, tol: float = 1e-12) -> complex:
    """``int_0^inf R(v) exp(-i omega v) dv`` for a decaying kernel.

    The head ``[0, 1]`` uses the graded rule (handles ``t**(beta-1)``), the
    tail uses QUADPACK's Fourier-integral routine, which is built for
    slowly decaying oscillatory tails.
    """
    omega = float(omega)
    s = kernel.singular_power
    sing = [(0.0, s)] if s < 0 else []
    head_re = integrate(lambda v: kernel(v) * np.cos(omega * v), 0.0, 1.0, singular=sing, tol=tol)[0]
    head_im = integrate(lambda v: -kernel(v) * np.sin(omega * v), 0.0, 1.0, singular=sing, tol=tol)[0]
    if omega == 0.0:
        return complex(kernel.integral(0.0, math.inf), 0.0)
    f = lambda v: float(kernel(np.array([v]))[0])  # noqa: E731
    tail_re = _sp_integrate.quad(f, 1.0, np.inf, weight="cos", wvar=abs(omega), limlst=200)[0]
    tail_im = _sp_integrate.quad(f, 1.0, np.inf, weight="sin", wvar=abs(omega), limlst=200)[0]
    tail_im = -tail_im if omega > 0 else tail_im
    return complex(head_re + tail_re, head_im + tail_im)
