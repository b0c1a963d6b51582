"""Modular, Luxemburg norm, windowed and Stepanov-type norms, and the
classical inequalities of variable-exponent Lebesgue spaces.

For an exponent ``p(.)`` the modular of ``g`` on ``[a, b]`` is
``rho(g) = int_a^b phi_{p(x)}(||g(x)||) dx`` with ``phi_p(s) = s**p`` for
finite ``p`` and, for ``p = inf``, 0 when ``s <= 1`` and ``inf`` otherwise.
The Luxemburg norm is ``inf{lam > 0 : rho(g / lam) <= 1}``.

Two discretizations are used:

* piecewise-constant ``g`` with a piecewise-constant exponent is split into
  pieces with constant height and exponent, so the modular is an exact
  finite sum;
* everything else is integrated with an adaptive Gauss-Legendre rule that
  is built once per batch of windows and then reused for every bisection
  step.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .funcspace import (
    ConstantExponent,
    DomainError,
    ExponentSpec,
    FunctionSpec,
    GridSpec,
    NormOf,
    PhiSpec,
    Product,
    SequenceSpec,
    magnitude,
)
from .quadrature import DEFAULT_ABS_TOL, adaptive_rule
from .verdict import Status, SupResult, Verdict, grid_sup, inequality_verdict

DEFAULT_TOL = 1e-13
"""Default relative bisection tolerance."""

_INF_SAMPLES = 257
_MAX_ANCHORS = 2_000_000
_PREFIX_WORK = 5_000_000
"""Above this many (piece, window) pairs, constant finite exponents use prefix sums."""


@dataclass
class NormResult:
    """Luxemburg norm with provenance.

    Attributes
    ----------
    value : float
    method : str
        ``"exact"`` (closed form), ``"bisection"`` (exact pieces) or
        ``"bisection+quadrature"``.
    modular_at_value : float
        ``rho(g / value)``; close to 1 for bounded exponents.
    iterations : int
        Bracketing plus bisection steps.
    error_bound : float
        Estimated relative error of ``value``.
    """

    value: float
    method: str
    modular_at_value: float
    iterations: int
    error_bound: float

    def __float__(self) -> float:
        return float(self.value)


# ---------------------------------------------------------------------------
# discretization
# ---------------------------------------------------------------------------


def _exponent_at(p: ExponentSpec, x: np.ndarray, s: float, length: float, relative: bool) -> np.ndarray:
    return p((x - s) / length) if relative else p(x)


def _adapt_powers(p: ExponentSpec) -> tuple[float, float]:
    lo = p.p_minus
    hi = p.p_plus if math.isfinite(p.p_plus) else lo
    return lo, min(hi, 64.0)


class _NodeRule:
    """Adaptive rule for ``||g||`` over ``[A, B]`` with splits at every window edge."""

    def __init__(self, h: FunctionSpec, p: ExponentSpec, starts: np.ndarray, length: float, relative: bool,
                 quad_tol: float):
        A, B = float(starts.min()), float(starts.max() + length)
        self.h, self.p, self.length, self.relative = h, p, length, relative
        breaks = [h.breakpoints(A, B), starts, starts + length]
        if p.piecewise:
            pb, _ = p.segments()
            if relative:
                breaks.append((starts[:, None] + length * pb[None, :]).ravel())
            else:
                breaks.append(pb)
        breaks = np.concatenate([np.ravel(b) for b in breaks])
        scale = h.sup_norm(A, B)
        self.zero = not scale > 0
        self.scale = scale if scale > 0 and math.isfinite(scale) else 1.0
        plo, phi = _adapt_powers(p)
        sing = [(x0, s * phi) for x0, s in h.singularities(A, B)]
        sc = self.scale

        def fn(x):
            y = h.values(x)[:, 0] / sc
            return y ** plo + y ** phi

        # sparse windows get one rule per cluster of overlapping windows
        order = np.sort(starts)
        cut = np.nonzero(order[1:] > order[:-1] + length)[0]
        lo_c = np.concatenate([[order[0]], order[cut + 1]])
        hi_c = np.concatenate([order[cut] + length, [order[-1] + length]])
        if np.sum(hi_c - lo_c) > 0.5 * (B - A):
            lo_c, hi_c = np.array([A]), np.array([B])
        xs, ws, err = [], [], 0.0
        for a, b in zip(lo_c, hi_c):
            inside = breaks[(breaks > a) & (breaks < b)]
            x, w, e = adaptive_rule(fn, float(a), float(b), inside, tol=quad_tol * (b - a) / length,
                                    singular=[(x0, s) for x0, s in sing if a <= x0 <= b], max_panel=length / 2)
            xs.append(x)
            ws.append(w)
            err += e
        self.x, self.w, self.err = np.concatenate(xs), np.concatenate(ws), err
        self.hx = h.values(self.x)[:, 0]

    def window(self, s: float):
        L = self.length
        i0 = np.searchsorted(self.x, s, side="left")
        i1 = np.searchsorted(self.x, s + L, side="right")
        x = self.x[i0:i1]
        w = self.w[i0:i1] * (1.0 / L if self.relative else 1.0)
        hv = self.hx[i0:i1]
        pv = _exponent_at(self.p, x, s, L, self.relative)
        if math.isinf(self.p.p_plus):
            bp = self.h.breakpoints(s, s + L)
            # one-sided limits at the ends and at the breakpoints enter the essential supremum
            near = np.concatenate([[s, s + L], bp])
            near = np.concatenate([near + 1e-12 * L, near - 1e-12 * L])
            near = near[(near > s) & (near < s + L)]
            xs = np.concatenate([np.linspace(s, s + L, _INF_SAMPLES), bp, near])
            x = np.concatenate([x, xs])
            w = np.concatenate([w, np.zeros(xs.size)])
            hv = np.concatenate([hv, self.h.values(xs)[:, 0]])
            pv = np.concatenate([pv, _exponent_at(self.p, xs, s, L, self.relative)])
        return w, hv, pv


def _check_domain(h: FunctionSpec, A: float) -> None:
    if A < h.lower - 1e-12:
        raise DomainError(f"window starts at {A} before the domain start {h.lower}")


def window_norms(g: FunctionSpec, p: ExponentSpec, starts, length: float, *, relative: bool = False,
                 tol: float = DEFAULT_TOL, method: str = "auto", quad_tol: float = DEFAULT_ABS_TOL) -> np.ndarray:
    """Luxemburg norms of ``||g||`` on the windows ``[s, s + length]``.

    Parameters
    ----------
    starts : array_like
        Window starts.
    relative : bool
        Measure the window in rescaled coordinates: the exponent is read at
        ``(x - s) / length`` and the measure is divided by ``length``.  This
        equals the norm of ``u -> g(s + u * length)`` on ``[0, 1]``.
    method : {"auto", "bisection"}
        ``"bisection"`` disables the constant-exponent closed form.
    """
    starts = np.atleast_1d(np.asarray(starts, dtype=float))
    if starts.size == 0:
        return np.empty(0)
    if not length > 0:
        raise ValueError("window length must be positive")
    h = magnitude(g)
    _check_domain(h, float(starts.min()))
    closed = method != "bisection"
    if h.exact and p.piecewise:
        A, B = float(starts.min()), float(starts.max() + length)
        edges, vals = h.pieces(A, B)
        if closed and p.is_constant and math.isfinite(p.p_plus) and edges.size * starts.size > _PREFIX_WORK:
            return _prefix_window_norms(edges, vals[:, 0], starts, length, p.p_plus, relative)
        pb, pv = p.segments()
        return _kernels.window_norms(edges, vals[:, 0], starts, length, pb, pv, relative,
                                     1.0 / length if relative else 1.0, tol, closed)
    rule = _NodeRule(h, p, starts, length, relative, quad_tol)
    out = np.zeros(starts.size)
    if rule.zero:
        return out
    const = p.is_constant and math.isfinite(p.p_plus) and closed
    for k, s in enumerate(starts):
        w, hv, pv = rule.window(s)
        if const:
            out[k] = _power_mean(w, hv, p.p_plus)
        else:
            out[k] = _kernels.luxemburg_weighted(w, hv, pv, tol)[0]
    return out


def _prefix_window_norms(edges: np.ndarray, heights: np.ndarray, starts: np.ndarray, length: float, p: float,
                         relative: bool) -> np.ndarray:
    """Closed-form window norms from the cumulative integral of ``h**p``.

    Costs ``O(pieces + windows)`` instead of ``O(pieces * windows)``.  The
    subtraction of cumulative values loses about ``eps * total / window``
    in relative accuracy, so this path is kept for large batches only.
    """
    top = float(np.max(np.abs(heights))) if heights.size else 0.0
    if not top > 0:
        return np.zeros(starts.size)
    cum = np.concatenate([[0.0], np.cumsum(np.diff(edges) * (np.abs(heights) / top) ** p)])
    mass = np.interp(starts + length, edges, cum) - np.interp(starts, edges, cum)
    mass = np.maximum(mass, 0.0)
    if relative:
        mass = mass / length
    return top * mass ** (1.0 / p)


def _power_mean(w: np.ndarray, h: np.ndarray, p: float) -> float:
    """``(sum w h**p)**(1/p)`` computed on ``h / max(h)`` so tiny or huge heights do not under- or overflow."""
    pos = (h > 0) & (w > 0)
    if not np.any(pos):
        return 0.0
    top = float(h[pos].max())
    acc = float(np.sum(w[pos] * (h[pos] / top) ** p))
    return top * acc ** (1.0 / p)


def _window_arrays(h: FunctionSpec, p: ExponentSpec, a: float, b: float, quad_tol: float):
    """Weighted samples ``(w, h, p)`` of one window plus the quadrature error and method tag."""
    _check_domain(h, a)
    if h.exact and p.piecewise:
        edges, vals = h.pieces(a, b)
        pb, pv = p.segments()
        w, hv, ev = _kernels.window_pieces(edges, vals[:, 0], a, b - a, pb, pv, False, 1.0)
        return w, hv, ev, 0.0, 1.0, "pieces"
    rule = _NodeRule(h, p, np.array([a]), b - a, False, quad_tol)
    w, hv, ev = rule.window(a)
    return w, hv, ev, rule.err, rule.scale, "nodes"


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def modular(g: FunctionSpec, p: ExponentSpec, a: float, b: float, lam: float = 1.0,
            quad_tol: float = DEFAULT_ABS_TOL) -> float:
    """``int_a^b phi_{p(x)}(||g(x)|| / lam) dx``; may be ``inf``."""
    if not b > a:
        raise ValueError("need a < b")
    h = magnitude(g)
    if h.exact and p.piecewise:
        w, hv, ev, *_ = _window_arrays(h, p, a, b, quad_tol)
        return _kernels.modular_weighted(w, hv, ev, lam)
    _check_domain(h, a)
    plo, phi = _adapt_powers(p)

    def fn(x):
        y = h.values(x)[:, 0] / lam
        e = np.where(np.isinf(p(x)), plo, p(x))
        with np.errstate(over="ignore"):
            return y ** e

    breaks = list(h.breakpoints(a, b))
    if p.piecewise:
        breaks.extend(p.segments()[0])
    sing = [(x0, s * phi) for x0, s in h.singularities(a, b)]
    x, w, _ = adaptive_rule(fn, a, b, breaks, tol=quad_tol, singular=sing)
    hv = h.values(x)[:, 0]
    ev = p(x)
    if math.isinf(p.p_plus):
        xs = np.concatenate([np.linspace(a, b, _INF_SAMPLES), h.breakpoints(a, b)])
        x = np.concatenate([x, xs])
        w = np.concatenate([w, np.zeros(xs.size)])
        hv = np.concatenate([hv, h.values(xs)[:, 0]])
        ev = np.concatenate([ev, p(xs)])
    return _kernels.modular_weighted(w, hv, ev, lam)


def luxemburg_norm(g: FunctionSpec, p: ExponentSpec, a: float, b: float, tol: float = DEFAULT_TOL,
                   method: str = "auto", quad_tol: float = DEFAULT_ABS_TOL) -> NormResult:
    """Luxemburg norm of ``||g||`` on ``[a, b]``.

    Parameters
    ----------
    tol : float
        Relative bisection tolerance.
    method : {"auto", "bisection"}
        ``"auto"`` uses the closed form ``(int ||g||^p)^(1/p)`` for constant
        finite exponents; ``"bisection"`` always bisects.

    Raises
    ------
    ArithmeticError
        When no bracket is found within 200 doublings.
    """
    if not b > a:
        raise ValueError("need a < b")
    if not tol > 0:
        raise ValueError("tol must be positive")
    h = magnitude(g)
    w, hv, ev, qerr, scale, kind = _window_arrays(h, p, a, b, quad_tol)
    const = p.is_constant and math.isfinite(p.p_plus)
    if method == "auto" and const:
        p0 = p.p_plus
        value = _power_mean(w, hv, p0)
        rho = _kernels.modular_weighted(w, hv, ev, value) if value > 0 else 0.0
        err = 0.0 if kind == "pieces" else _quad_rel_error(qerr, scale, value, p)
        return NormResult(value, "exact" if kind == "pieces" else "quadrature", rho, 0, err)
    if method == "auto" and p.is_constant and math.isinf(p.p_plus):
        pos = (w > 0) | (kind == "nodes")
        value = float(hv[pos].max()) if np.any(pos) else 0.0
        rho = _kernels.modular_weighted(w, hv, ev, value) if value > 0 else 0.0
        return NormResult(value, "exact" if kind == "pieces" else "quadrature", rho, 0, 0.0)
    value, rho, iters, width = _kernels.luxemburg_weighted(w, hv, ev, tol)
    err = (width / value if value > 0 else 0.0)
    if kind == "nodes":
        err += _quad_rel_error(qerr, scale, value, p)
    return NormResult(float(value), "bisection" if kind == "pieces" else "bisection+quadrature", float(rho),
                      int(iters), float(err))


def _quad_rel_error(qerr: float, scale: float, value: float, p: ExponentSpec) -> float:
    if value <= 0:
        return 0.0
    e = p.p_minus
    return float(qerr * (scale / value) ** e / e)


def windowed_norm(g: FunctionSpec, p: ExponentSpec, t: float, l: float, tol: float = DEFAULT_TOL) -> float:
    """Luxemburg norm of ``||g||`` on ``[t, t + l]``."""
    if not l > 0:
        raise ValueError("window length must be positive")
    return luxemburg_norm(g, p, t, t + l, tol).value


def anchor_points(h: FunctionSpec, lo: float, hi: float, length: float) -> np.ndarray:
    """Window starts ``s`` in ``[lo, hi]`` where ``s`` or ``s + length`` hits a breakpoint of ``h``.

    For piecewise-constant data the window integral is piecewise linear in
    ``s`` with kinks exactly at these starts.
    """
    b = h.breakpoints(lo - 1e-9, hi + length + 1e-9)
    if b.size > _MAX_ANCHORS:
        return np.empty(0)
    cand = np.concatenate([b, b - length])
    return cand[(cand >= lo) & (cand <= hi)]


def default_t_grid(length: float, lower: float = -math.inf, horizon: float | None = None) -> np.ndarray:
    """Uniform grid of step ``length / 16`` on ``[-T, T]`` (or ``[lower, T]``), ``T = max(8 length, 64)``."""
    T = max(8.0 * length, 64.0) if horizon is None else float(horizon)
    start = -T if lower == -math.inf else max(lower, -T)
    step = length / 16.0
    n = int(math.floor((T - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)


def _sup_over_starts(g: FunctionSpec, p: ExponentSpec, t_grid, length: float, relative: bool,
                     tol: float) -> SupResult:
    h = magnitude(g)
    if t_grid is None:
        pts = default_t_grid(length, h.lower)
    else:
        pts = t_grid.points() if isinstance(t_grid, GridSpec) else np.asarray(t_grid, dtype=float)
    if h.exact:
        pts = np.concatenate([pts, anchor_points(h, float(pts.min()), float(pts.max()), length)])
    return grid_sup(lambda s: window_norms(h, p, s, length, relative=relative, tol=tol), pts)


def stepanov_norm(f: FunctionSpec, p: ExponentSpec, t_grid: GridSpec | None = None,
                  tol: float = DEFAULT_TOL) -> SupResult:
    """Grid supremum of the unit-window norms of ``f(. + t)``, exponent read on ``[0, 1]``.

    The result is a lower bound of the true supremum; ``argmax`` reports the
    maximizing ``t``.
    """
    return _sup_over_starts(f, p, t_grid, 1.0, True, tol)


def bs_norm(f: FunctionSpec, p: ExponentSpec, t_grid: GridSpec | None = None, tol: float = DEFAULT_TOL) -> SupResult:
    """Grid supremum of the norms on ``[t, t + 1]`` with the exponent read at the absolute coordinate."""
    return _sup_over_starts(f, p, t_grid, 1.0, False, tol)


def _reciprocal_grid(p: ExponentSpec, a: float, b: float) -> np.ndarray:
    xs = [np.linspace(a, b, 1001)]
    if p.piecewise:
        br = p.segments()[0]
        xs.append(br[(br >= a) & (br <= b)])
    return np.concatenate(xs)


def holder_check(u: FunctionSpec, v: FunctionSpec, p: ExponentSpec, q: ExponentSpec, r: ExponentSpec,
                 a: float, b: float, tol: float = DEFAULT_TOL) -> Verdict:
    """Check ``||u v||_q <= 2 ||u||_p ||v||_r`` on ``[a, b]`` when ``1/q = 1/p + 1/r``.

    Raises
    ------
    ValueError
        If the exponent relation fails at a grid point.
    """
    xs = np.unique(np.concatenate([_reciprocal_grid(e, a, b) for e in (p, q, r)]))
    gap = np.abs(q.reciprocal(xs) - p.reciprocal(xs) - r.reciprocal(xs))
    if np.any(gap > 1e-12):
        raise ValueError("exponent relation 1/q = 1/p + 1/r violated")
    lhs = luxemburg_norm(Product(NormOf(u), NormOf(v)), q, a, b, tol).value
    rhs = 2.0 * luxemburg_norm(u, p, a, b, tol).value * luxemburg_norm(v, r, a, b, tol).value
    return inequality_verdict(lhs, rhs, 1e-12 * max(1.0, rhs))


def embedding_check(f: FunctionSpec, p: ExponentSpec, t: float, l: float, tol: float = DEFAULT_TOL) -> Verdict:
    """Check ``||f||_{L^1[t, t+l]} <= 2 (1 + l) ||f||_{L^p[t, t+l]}``."""
    if not l > 0:
        raise ValueError("window length must be positive")
    lhs = luxemburg_norm(f, ConstantExponent(1.0), t, t + l, tol).value
    rhs = 2.0 * (1.0 + l) * luxemburg_norm(f, p, t, t + l, tol).value
    return inequality_verdict(lhs, rhs, 1e-12 * max(1.0, rhs))


def domination_check(g: FunctionSpec, f: FunctionSpec, p: ExponentSpec, a: float, b: float,
                     tol: float = DEFAULT_TOL) -> Verdict:
    """Check that ``||g|| <= ||f||`` pointwise implies ``norm(g) <= norm(f)``.

    The pointwise hypothesis is verified on the union of both functions'
    pieces (or a fine sample); the verdict is inconclusive when it fails.
    """
    pts = np.concatenate([np.linspace(a, b, 2001), g.breakpoints(a, b), f.breakpoints(a, b)])
    pts = np.unique(pts)
    mids = np.concatenate([pts, 0.5 * (pts[1:] + pts[:-1])])
    if np.any(g.norms(mids) > f.norms(mids) + 1e-15):
        return Verdict(Status.INCONCLUSIVE, detail={"reason": "pointwise domination fails"})
    lhs = luxemburg_norm(g, p, a, b, tol).value
    rhs = luxemburg_norm(f, p, a, b, tol).value
    return inequality_verdict(lhs, rhs, 1e-9)


def jensen_check(phi: PhiSpec, seq: SequenceSpec, x) -> Verdict:
    """Series Jensen inequality ``phi(sum a_k x_k) <= sum a_k phi(x_k)``.

    ``x`` holds ``x_0 .. x_K``; the first ``K`` points carry ``a_0 .. a_{K-1}``
    and the last point carries the tail mass, so the weights sum to one.
    For concave ``phi`` the reversed inequality is checked.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 1 or np.any(x < 0):
        raise ValueError("x must be a non-empty vector of non-negative numbers")
    if seq.two_sided:
        raise ValueError("jensen_check expects a one-sided sequence")
    K = x.size - 1
    a = np.concatenate([seq.terms(K), [seq.tail(K)]])
    a = a / a.sum()
    mean = float(np.dot(a, x))
    left = float(phi(np.array([mean]))[0])
    right = float(np.dot(a, phi(x)))
    slack = 1e-12 * (1.0 + abs(left) + abs(right))
    if phi.convex:
        return inequality_verdict(left, right, slack, direction="convex")
    if phi.concave:
        return inequality_verdict(right, left, slack, direction="concave")
    raise ValueError("jensen_check needs a convex or concave phi")
