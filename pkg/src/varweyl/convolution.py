"""Convolution products against kernel norms and checks of their admissibility conditions.

Three groups of tools live here.

Convolutions
    ``G(x) = int_0^inf R(v) g(x - v) dv`` (infinite product), its split on
    the half-line into ``H``, ``H1`` and ``H2``, and the scalar convolution
    ``psi * f`` over the whole line.  Piecewise-constant inputs are handled
    with the antiderivative of the kernel (or of ``f``), which is exact up
    to the truncation of infinite ranges.

Kernel series
    Sums over consecutive windows of weighted kernel norms (``H``, ``H_p``,
    ``W``, ``W2``, ``W_p`` and two variants used by the subadditive classes).
    Each sum reports its truncation point and a two-sided enclosure of the
    remainder, built from the monotone envelope of the kernel.

Condition checks
    The integral inequalities that make a convolution product preserve a
    Weyl class, tabulated over ``(t, l)`` (and ``epsilon`` where it enters).
    They are hypotheses of sufficient conditions: a violation says the
    criterion does not apply, not that the conclusion fails.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .funcspace import (
    ConstantExponent,
    ConstantOne,
    ExpDecay,
    ExponentSpec,
    FunctionSpec,
    Geometric,
    GridSpec,
    IdentityPhi,
    KernelSpec,
    Mapped,
    PhiSpec,
    PiecewiseConstant,
    Reflect,
    Scale,
    SequenceSpec,
    Translate,
    TwoSidedGeometric,
    WeightSpec,
    magnitude,
    merge_breakpoints,
)
from .quadrature import adaptive_rule, integrate
from .varlebesgue import window_norms
from .verdict import Status, Verdict, grid_sup, inequality_verdict

DEFAULT_TOL = 1e-10
CONDITION_SLACK = 1e-9
"""A tabulated condition integral passes when it is at most ``1 + CONDITION_SLACK``."""

SERIES_KINDS = ("H", "H_p", "W", "W2", "W_p", "sub1", "sub2")
THEOREMS = ("jensen", "krajeq-weak", "kraj", "jensenjen", "prcko", "sub1", "sub2", "napolje", "univer")

_CHUNK = 4096
_GL_X, _GL_W = np.polynomial.legendre.leggauss(15)


class SeriesDivergence(ArithmeticError):
    """A kernel series has no usable tail bound and its terms stopped decreasing."""


# ---------------------------------------------------------------------------
# truncation of kernel integrals
# ---------------------------------------------------------------------------


def truncation_point(R: KernelSpec, bound: float, tol: float) -> float:
    """Smallest power of two ``T`` with ``bound * int_T^inf R <= tol`` (``inf`` if none below 2**80)."""
    if R.is_zero or bound == 0.0:
        return 0.0
    if math.isfinite(R.support):
        return float(R.support)
    T = 1.0
    while bound * R.tail_integral(T) > tol:
        T *= 2.0
        if T > 2.0 ** 80:
            return math.inf
    return T


def _stable_bound(value: float) -> float:
    """Round a sup bound up to a power of two, so truncation points rarely change between batches."""
    if not value > 0 or not math.isfinite(value):
        return value
    return 2.0 ** math.ceil(math.log2(value))


def _bounded_truncation(R: KernelSpec, sup_fn: Callable[[float], float], tol: float) -> tuple[float, float]:
    """Truncation ``T`` for ``int_0^T R(v) g(x - v) dv`` where ``sup_fn(T)`` bounds ``||g||`` on the range.

    Returns ``(T, bound_used)``; the bound is re-evaluated on the final range.
    """
    T, bound = 1.0, max(sup_fn(1.0), 0.0)
    for _ in range(100):
        T_new = truncation_point(R, max(bound, 1e-300), tol)
        if T_new <= T or math.isinf(T_new):
            return (T if T_new <= T else T_new), bound
        T = T_new
        bound = max(bound, sup_fn(T))
    return T, bound


# ---------------------------------------------------------------------------
# exact convolution of a kernel with piecewise-constant data
# ---------------------------------------------------------------------------


def _piece_convolution(R: KernelSpec, g: FunctionSpec, xs: np.ndarray, v_lo: np.ndarray,
                       v_hi: np.ndarray) -> np.ndarray:
    """``int_{v_lo}^{v_hi} R(v) g(x - v) dv`` for piecewise-constant ``g``, one row per ``x``.

    The kernel enters only through its antiderivative, so the value is
    exact for every piece.
    """
    xs = np.asarray(xs, dtype=float)
    out = np.zeros((xs.size, g.dim))
    if xs.size == 0:
        return out
    v_lo = np.broadcast_to(np.asarray(v_lo, dtype=float), xs.shape)
    v_hi = np.broadcast_to(np.asarray(v_hi, dtype=float), xs.shape)
    for c0 in range(0, xs.size, _CHUNK):
        sl = slice(c0, c0 + _CHUNK)
        x, lo, hi = xs[sl], v_lo[sl], v_hi[sl]
        live = hi > lo
        if not np.any(live):
            continue
        A = float(np.min((x - hi)[live]))
        B = float(np.max((x - lo)[live]))
        if not B > A:
            continue
        edges, vals = g.pieces(A, B)
        j0 = np.searchsorted(edges[1:], x - hi, side="right")
        j1 = np.searchsorted(edges[:-1], x - lo, side="left")
        counts = np.where(live, np.maximum(j1 - j0, 0), 0)
        total = int(counts.sum())
        if total == 0:
            continue
        rows = np.repeat(np.arange(x.size), counts)
        offs = np.cumsum(counts) - counts
        j = j0[rows] + (np.arange(total) - offs[rows])
        xr = x[rows]
        a_v = np.maximum(xr - edges[j + 1], lo[rows])
        b_v = np.minimum(xr - edges[j], hi[rows])
        mass = np.where(b_v > a_v, R.mass(a_v, np.maximum(a_v, b_v)), 0.0)
        for d in range(g.dim):
            out[sl, d] += np.bincount(rows, weights=mass * vals[j, d], minlength=x.size)
    return out


def _quadrature_convolution(R: KernelSpec, g: FunctionSpec, x: float, a: float, b: float, tol: float) -> np.ndarray:
    """``int_a^b R(v) g(x - v) dv`` by adaptive quadrature (one component at a time)."""
    if not b > a:
        return np.zeros(g.dim)
    breaks = [0.0, *np.asarray(R._breaks(), dtype=float).tolist()]
    breaks.extend((x - g.breakpoints(x - b, x - a)).tolist())
    if math.isfinite(b) and b > 2.0:
        breaks.extend(2.0 ** np.arange(1, math.ceil(math.log2(b))))
    sing = [(0.0, R.singular_power)] if R.singular_power < 0 else []
    sing.extend((x - x0, s) for x0, s in g.singularities(x - b, x - a))
    out = np.zeros(g.dim)
    for d in range(g.dim):
        def fn(v, d=d):
            return R(v) * g.values(x - v)[:, d]

        out[d] = integrate(fn, a, b, breaks, tol=tol, singular=sing, rel_tol=1e-13)[0]
    return out


def _kernel_integral(R: KernelSpec, g: FunctionSpec, x: float, a: float, b: float, tol: float) -> np.ndarray:
    """``int_a^b R(v) g(x - v) dv`` with an infinite ``b`` truncated at the kernel tail."""
    if R.is_zero or not b > a:
        return np.zeros(g.dim)
    if math.isinf(b):
        # the bound covers at least one unit past ``a``, so it is never taken over an empty range
        T, _ = _bounded_truncation(R, lambda T: g.sup_norm(x - max(T, a + 1.0), x - a), tol / 2.0)
        if math.isinf(T):
            raise ArithmeticError("kernel tail does not become small enough for a truncation")
        b = max(T, a)
        if not b > a:
            return np.zeros(g.dim)
    if g.exact:
        return _piece_convolution(R, g, np.array([x]), np.array([a]), np.array([b]))[0]
    return _quadrature_convolution(R, g, x, a, b, tol / 2.0)


def _sinusoid_parameters(g: FunctionSpec):
    from .funcspace import Sinusoid

    if isinstance(g, Sinusoid) and g.frequency != 0.0:
        return g.amplitude, g.frequency, g.phase
    return None


def infinite_convolution(R: KernelSpec, g: FunctionSpec, x: float, tol: float = DEFAULT_TOL,
                         method: str = "auto"):
    """``G(x) = int_0^inf R(v) g(x - v) dv``.

    Parameters
    ----------
    method : {"auto", "quadrature"}
        ``"auto"`` evaluates sinusoids through the kernel transform and
        piecewise-constant ``g`` through the kernel antiderivative;
        ``"quadrature"`` always integrates numerically.

    Returns
    -------
    float, or ndarray for vector-valued ``g``.

    Notes
    -----
    The range is cut at ``T`` with ``sup ||g|| * int_T^inf R <= tol / 2``.
    """
    if method not in ("auto", "quadrature"):
        raise ValueError("method must be 'auto' or 'quadrature'")
    g_dom = g.lower
    if g_dom != -math.inf:
        raise ValueError("the infinite convolution needs g on the whole real line")
    sin = _sinusoid_parameters(g) if method == "auto" else None
    if sin is not None and not R.is_zero:
        A, w, ph = sin
        val = A * (np.exp(1j * (w * x + ph)) * R.fourier(w)).imag
        return float(val)
    if method == "quadrature" and g.exact:
        T, _ = _bounded_truncation(R, lambda T: g.sup_norm(x - T, x), tol / 2.0)
        val = _quadrature_convolution(R, g, x, 0.0, T, tol / 2.0)
    else:
        val = _kernel_integral(R, g, x, 0.0, math.inf, tol)
    return float(val[0]) if g.dim == 1 else val


class ConvolutionFunction(FunctionSpec):
    """The infinite convolution ``x -> int_0^inf R(v) g(x - v) dv`` as a function.

    Sinusoids are evaluated in closed form through the kernel transform and
    piecewise-constant data through the kernel antiderivative; other data
    fall back to pointwise quadrature.  A declared period of ``g`` is kept.
    """

    def __init__(self, R: KernelSpec, g: FunctionSpec, tol: float = DEFAULT_TOL, method: str = "auto"):
        if g.lower != -math.inf:
            raise ValueError("the infinite convolution needs g on the whole real line")
        self.R, self.g, self.tol, self.method = R, g, float(tol), method
        self.dim = g.dim
        self.lower = -math.inf
        period = getattr(g, "period", None)
        if isinstance(period, (int, float)) and 0 < period < math.inf:
            self.period = float(period)
        self._sin = _sinusoid_parameters(g) if method == "auto" else None
        self._transform = self.R.fourier(self._sin[1]) if self._sin is not None and not R.is_zero else None

    def values(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).ravel()
        if self.R.is_zero:
            return np.zeros((x.size, self.dim))
        if self._transform is not None:
            A, w, ph = self._sin
            return (A * (np.exp(1j * (w * x + ph)) * self._transform).imag).reshape(-1, 1)
        if self.g.exact and self.method == "auto" and x.size:
            lo, hi = float(x.min()), float(x.max())
            T, _ = _bounded_truncation(self.R, lambda T: _stable_bound(self.g.sup_norm(lo - T, hi)), self.tol / 2.0)
            return _piece_convolution(self.R, self.g, x, np.zeros(x.size), np.full(x.size, T))
        return np.array([np.atleast_1d(infinite_convolution(self.R, self.g, float(xi), self.tol, self.method))
                         for xi in x]).reshape(x.size, self.dim)

    def breakpoints(self, a: float, b: float) -> np.ndarray:
        return self.g.breakpoints(a, b)

    def __repr__(self) -> str:
        return f"ConvolutionFunction({self.R!r}, {self.g!r})"


class FiniteConvolution(FunctionSpec):
    """``t -> int_0^t R(t - s) q(s) ds`` on ``[0, inf)``.

    For piecewise-constant ``q`` the kernel is cut where its tail integral
    drops below ``1e-17``, so the relative truncation error is below
    rounding and does not depend on the evaluation points.
    """

    lower = 0.0

    def __init__(self, R: KernelSpec, q: FunctionSpec, tol: float = DEFAULT_TOL):
        self.R, self.q, self.tol = R, q, float(tol)
        self.dim = q.dim
        self._exact_cutoff = truncation_point(R, 1.0, 1e-17)

    def values(self, x) -> np.ndarray:
        t = np.maximum(np.asarray(x, dtype=float).ravel(), 0.0)
        if self.R.is_zero or t.size == 0:
            return np.zeros((t.size, self.dim))
        if self.q.exact:
            # a cutoff fixed by the kernel alone keeps values independent of the batch they are computed in
            return _piece_convolution(self.R, self.q, t, np.zeros(t.size), np.minimum(t, self._exact_cutoff))
        v_hi = np.minimum(t, self._truncation(t))
        return np.array([_quadrature_convolution(self.R, self.q, float(ti), 0.0, float(vh), self.tol / 2.0)
                         for ti, vh in zip(t, v_hi)]).reshape(t.size, self.dim)

    def _truncation(self, t: np.ndarray) -> float:
        T, _ = _bounded_truncation(self.R, lambda T: _stable_bound(self.q.sup_norm(max(0.0, float(t.min()) - T),
                                                                                  float(t.max()))), self.tol / 2.0)
        return T

    def breakpoints(self, a: float, b: float) -> np.ndarray:
        return self.q.breakpoints(max(a, 0.0), b)

    def __repr__(self) -> str:
        return f"FiniteConvolution({self.R!r}, {self.q!r})"


@dataclass
class SplitResult:
    """Values of the half-line split at one ``t``.

    ``H = int_0^t R(t-s)(g+q)(s) ds``, ``H1 = int_t^inf R(s) g(t-s) ds``,
    ``H2 = int_0^t R(t-s) q(s) ds`` and ``G`` the infinite convolution of
    ``g``; ``H = H2 + G - H1``.
    """

    H: float | np.ndarray
    H1: float | np.ndarray
    H2: float | np.ndarray
    G: float | np.ndarray

    def __iter__(self):
        return iter((self.H, self.H1, self.H2))

    @property
    def identity_gap(self) -> float:
        return float(np.max(np.abs(np.atleast_1d(self.H) - (np.atleast_1d(self.H2) + np.atleast_1d(self.G)
                                                               - np.atleast_1d(self.H1)))))


def finite_convolution_split(R: KernelSpec, g: FunctionSpec, q: FunctionSpec, t: float,
                             tol: float = DEFAULT_TOL) -> SplitResult:
    """Split ``int_0^t R(t - s)[g(s) + q(s)] ds`` into ``H2 + G - H1``.

    Every part is computed independently, so the identity between them is a
    consistency check.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    if g.dim != q.dim:
        raise ValueError("g and q must have the same dimension")
    G = _kernel_integral(R, g, t, 0.0, math.inf, tol)
    H1 = _kernel_integral(R, g, t, t, math.inf, tol)
    H2 = _kernel_integral(R, q, t, 0.0, t, tol)
    Hg = _kernel_integral(R, g, t, 0.0, t, tol)
    H = H2 + Hg

    def out(v):
        return float(v[0]) if v.size == 1 else v

    return SplitResult(out(H), out(H1), out(H2), out(G))


# ---------------------------------------------------------------------------
# scalar convolution psi * f
# ---------------------------------------------------------------------------


def _compact_pieces(psi: FunctionSpec):
    """``(edges, values)`` of a compactly supported piecewise-constant scalar ``psi``, else None."""
    if isinstance(psi, PiecewiseConstant) and psi.dim == 1:
        left, right = psi.tails
        knots = psi.knots
        if knots.size >= 2 and not np.any(left) and not np.any(right):
            return knots, psi.piece_values[:, 0]
    return None


def _antiderivative(f: FunctionSpec, pts: np.ndarray) -> np.ndarray:
    """Values at ``pts`` of an antiderivative of piecewise-constant ``f`` (any common anchor)."""
    lo, hi = float(pts.min()), float(pts.max())
    if not hi > lo:
        hi = lo + 1.0
    edges, vals = f.pieces(lo, hi)
    cum = np.concatenate([[0.0], np.cumsum(vals * np.diff(edges)[:, None], axis=0)[:, 0]]) if f.dim == 1 else None
    if cum is None:
        raise ValueError("antiderivative needs a scalar function")
    return np.interp(pts, edges, cum)


def _psi_truncation(psi: FunctionSpec, bound: float, tol: float, t_max: float = 2.0 ** 30) -> float:
    """Half-width ``T`` outside which ``int |psi| * bound`` is below ``tol`` (dyadic shells test)."""
    absf = magnitude(psi)
    T = 1.0
    while T <= t_max:
        shell = (integrate(lambda y: absf.values(y)[:, 0], T, 2.0 * T, absf.breakpoints(T, 2 * T), tol=tol)[0]
                 + integrate(lambda y: absf.values(y)[:, 0], -2.0 * T, -T, absf.breakpoints(-2 * T, -T), tol=tol)[0])
        if shell * bound <= tol / 4.0 and T >= 4.0:
            return 2.0 * T
        T *= 2.0
    raise ArithmeticError("psi does not look absolutely integrable")


def scalar_convolution(psi: FunctionSpec, f: FunctionSpec, x: float, tol: float = DEFAULT_TOL,
                       support: tuple[float, float] | None = None) -> float:
    """``(psi * f)(x) = int psi(y) f(x - y) dy`` for scalar ``psi`` and bounded ``f``.

    Parameters
    ----------
    support : (float, float), optional
        Known support of ``psi``; otherwise it is read from a compactly
        supported piecewise-constant ``psi`` or found by dyadic shells of
        ``int |psi|`` against ``sup ||f||``.
    """
    if psi.dim != 1:
        raise ValueError("psi must be scalar")
    pieces = _compact_pieces(psi)
    if pieces is not None and f.exact and f.dim == 1:
        edges, vals = pieces
        A = _antiderivative(f, np.concatenate([x - edges, [x]]))
        return float(np.sum(vals * (A[:-1][:-1] - A[:-1][1:])))
    if support is None:
        support = (float(pieces[0][0]), float(pieces[0][-1])) if pieces is not None else None
    if support is None:
        bound = f.sup_norm(x - 1e3, x + 1e3)
        T = _psi_truncation(psi, max(bound, 1e-300), tol)
        support = (-T, T)
    a, b = support
    breaks = list(psi.breakpoints(a, b)) + list(x - f.breakpoints(x - b, x - a))
    out = np.zeros(f.dim)
    for d in range(f.dim):
        def fn(y, d=d):
            return psi.values(y)[:, 0] * f.values(x - y)[:, d]

        out[d] = integrate(fn, a, b, breaks, tol=tol, max_panel=max(1.0, (b - a) / 64.0))[0]
    return float(out[0]) if f.dim == 1 else out


class ScalarConvolution(FunctionSpec):
    """The function ``psi * f``.

    For compactly supported piecewise-constant ``psi`` and piecewise-constant
    scalar ``f`` the values come from the antiderivative of ``f`` and are
    exact (the result is piecewise linear); otherwise each value is a
    quadrature.  A declared period of ``f`` is kept.
    """

    def __init__(self, psi: FunctionSpec, f: FunctionSpec, tol: float = DEFAULT_TOL):
        if psi.dim != 1:
            raise ValueError("psi must be scalar")
        self.psi, self.f, self.tol = psi, f, float(tol)
        self.dim = f.dim
        self.lower = -math.inf
        self._pieces = _compact_pieces(psi)
        period = getattr(f, "period", None)
        if isinstance(period, (int, float)) and 0 < period < math.inf:
            self.period = float(period)

    @property
    def piecewise_linear(self) -> bool:
        return self._pieces is not None and self.f.exact and self.f.dim == 1

    def values(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).ravel()
        if x.size == 0:
            return np.zeros((0, self.dim))
        if self.piecewise_linear:
            edges, vals = self._pieces
            pts = x[:, None] - edges[None, :]
            A = _antiderivative(self.f, pts.ravel()).reshape(pts.shape)
            return np.sum(vals[None, :] * (A[:, :-1] - A[:, 1:]), axis=1).reshape(-1, 1)
        return np.array([np.atleast_1d(scalar_convolution(self.psi, self.f, float(xi), self.tol))
                         for xi in x]).reshape(x.size, self.dim)

    def breakpoints(self, a: float, b: float) -> np.ndarray:
        if self._pieces is None:
            return self.f.breakpoints(a, b)
        edges = self._pieces[0]
        pts = [self.f.breakpoints(a - e, b - e) + e for e in edges]
        pts = merge_breakpoints(np.concatenate(pts)) if pts else np.empty(0)
        return pts[(pts > a) & (pts < b)]

    def __repr__(self) -> str:
        return f"ScalarConvolution({self.psi!r}, {self.f!r})"


def convolve_scalar(psi: FunctionSpec, f: FunctionSpec, tol: float = DEFAULT_TOL) -> ScalarConvolution:
    """``psi * f`` as a function (exact and piecewise linear for indicator data)."""
    return ScalarConvolution(psi, f, tol)


# ---------------------------------------------------------------------------
# kernel series
# ---------------------------------------------------------------------------


def _as_sequence(b) -> Callable[[np.ndarray], np.ndarray]:
    if b is None:
        return lambda k: np.ones(np.shape(k))
    if isinstance(b, SequenceSpec):
        return b.term
    if callable(b):
        return lambda k: np.asarray(b(np.asarray(k)), dtype=float) * np.ones(np.shape(k))
    c = float(b)
    return lambda k: np.full(np.shape(k), c)


def _const_norm_bounds(q: ExponentSpec, length: float) -> tuple[float, float]:
    """Factors ``(lo, hi)`` with ``lo * c <= ||c||_{L^q(I)} <= hi * c`` for ``|I| = length``."""
    inv = [1.0 / q.p_minus if math.isfinite(q.p_minus) else 0.0,
           1.0 / q.p_plus if math.isfinite(q.p_plus) else 0.0]
    vals = [length ** e for e in inv]
    return min(vals), max(vals)


@dataclass
class SeriesResult:
    """A kernel series with its truncation.

    Attributes
    ----------
    value : float
        ``partial_sum`` plus the midpoint of the remainder enclosure.
    partial_sum : float
        Sum of the computed terms ``k < terms_used``.
    terms_used : int
    tail_lower, tail_upper : float
        Enclosure of the remainder from the kernel envelope.
    converged : bool
        The enclosure half width is below ``tol * max(1, partial_sum)``.
    terms : ndarray
    """

    kind: str
    value: float
    partial_sum: float
    terms_used: int
    tail_lower: float
    tail_upper: float
    converged: bool
    terms: np.ndarray = field(repr=False, default_factory=lambda: np.empty(0))

    @property
    def error(self) -> float:
        return 0.5 * (self.tail_upper - self.tail_lower)

    def __float__(self) -> float:
        return float(self.value)


@dataclass
class _SeriesPlan:
    h: FunctionSpec
    q: ExponentSpec
    starts: Callable[[np.ndarray], np.ndarray]
    length: float
    relative: bool
    multiplier: Callable[[np.ndarray], np.ndarray]
    kernel_window: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]
    inner: PhiSpec | None


def _times(m: np.ndarray, v: np.ndarray) -> np.ndarray:
    """``m * v`` with ``0 * inf = 0`` (a vanishing kernel window contributes nothing)."""
    with np.errstate(invalid="ignore", over="ignore"):
        return np.where(v == 0.0, 0.0, m * v)


def _tail_enclosure(R: KernelSpec, plan: _SeriesPlan, K: int, far: int) -> tuple[float, float]:
    """Enclosure of ``sum_{k >= K}`` from the kernel's window sup/inf.

    Terms ``K <= k < far`` are bounded termwise.  Beyond ``far`` the upper
    envelope is extended by a power law fitted to its last octave; without
    decay faster than ``1/k`` the upper bound is infinite.
    """
    if R.is_zero:
        return 0.0, 0.0
    ks = np.arange(K, far, dtype=float)
    lo, hi = plan.kernel_window(ks)
    if math.isfinite(R.support) and np.all(lo >= R.support):
        return 0.0, 0.0
    if not R.monotone:
        # non-monotone tables: only their support end gives a bound
        return (0.0, math.inf) if np.any(lo < R.support) else (0.0, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        r_sup = np.where(lo > 0, R(np.maximum(lo, 1e-300)), np.inf)
        r_inf = np.where(lo >= 0, R(hi), 0.0)
    if plan.inner is not None:
        r_sup, r_inf = plan.inner(np.where(np.isinf(r_sup), 1e300, r_sup)), plan.inner(r_inf)
    f_lo, f_hi = _const_norm_bounds(plan.q, 1.0 if plan.relative else plan.length)
    m = plan.multiplier(ks)
    upper_terms = _times(m, r_sup * f_hi)
    upper = float(np.sum(upper_terms))
    if not math.isfinite(upper):
        return float(np.sum(_times(m, r_inf * f_lo))), math.inf
    lower_terms = _times(m, r_inf * f_lo)
    lower = float(np.sum(lower_terms))
    u_rate = _power_rate(upper_terms, K, far)
    if u_rate is None:
        return lower, upper
    if u_rate <= 1.0:
        return lower, math.inf
    upper += float(upper_terms[-1]) * (1.0 + far / (u_rate - 1.0))
    l_rate = _power_rate(lower_terms, K, far)
    if l_rate is not None and l_rate > 1.0:
        lower += float(lower_terms[-1]) * far / (l_rate - 1.0)
    return lower, upper


def _power_rate(terms: np.ndarray, K: int, far: int) -> float | None:
    """Decay exponent ``s`` of ``terms ~ k**(-s)`` over the last octave; None when the terms vanish."""
    last = float(terms[-1])
    mid = float(terms[far // 2 - K]) if far // 2 > K else float(terms[0])
    if last == 0.0:
        return None
    if mid <= 0.0 or last >= mid:
        return 0.0
    return math.log2(mid / last) / math.log2(far / max(far // 2, K))


def _sum_series(R: KernelSpec, plan: _SeriesPlan, kind: str, tol: float, max_terms: int,
                start_terms: int = 32) -> SeriesResult:
    terms = np.empty(0)
    K = start_terms
    while True:
        ks = np.arange(terms.size, K, dtype=float)
        if R.is_zero:
            new = np.zeros(ks.size)
        else:
            norms = window_norms(plan.h, plan.q, plan.starts(ks), plan.length, relative=plan.relative)
            m = plan.multiplier(ks)
            new = _times(m, norms)
        terms = np.concatenate([terms, new])
        partial = float(np.sum(terms))
        far = int(min(max(4 * K, 1 << 12), 1 << 20))
        lo, hi = _tail_enclosure(R, plan, K, far)
        half = 0.5 * (hi - lo)
        if math.isfinite(hi) and half <= tol * max(1.0, abs(partial)):
            return SeriesResult(kind, partial + 0.5 * (lo + hi), partial, K, lo, hi, True, terms)
        if not math.isfinite(partial) and not math.isfinite(hi):
            raise SeriesDivergence(f"{kind} series has an infinite term")
        if math.isinf(hi) and terms.size >= 50 and np.all(np.diff(terms[-50:]) >= 0) and terms[-1] > 0:
            raise SeriesDivergence(f"{kind} series: no tail bound and the last 50 terms do not decrease")
        if K >= max_terms:
            mid = 0.5 * (lo + hi) if math.isfinite(hi) else lo
            return SeriesResult(kind, partial + mid, partial, K, lo, hi, False, terms)
        K = min(2 * K, max_terms)


def series_eval(which: str, R: KernelSpec, q: ExponentSpec, *, l: float = 1.0, x: float = 0.0,
                a: SequenceSpec | None = None, b=None, F: WeightSpec | None = None,
                varphi: PhiSpec | None = None, phi: PhiSpec | None = None, eps: float | None = None,
                tol: float = DEFAULT_TOL, max_terms: int = 1 << 14) -> SeriesResult:
    """Evaluate a kernel series at one point.

    With ``c_k = a_k varphi(l / a_k)``, ``d_k = a_k varphi(1 / a_k)`` and
    ``N(h; I)`` the Luxemburg norm in ``L^{q(.)}(I)``:

    ``H``     ``sum c_k N(varphi(R(. + x)); [-x + k l, -x + (k+1) l]) / F(l, -x + k l)``
    ``H_p``   ``sum c_k N(varphi(R); [k l, (k+1) l]) / F(l, -x + k l)``
    ``W``     ``sum d_k N(varphi(R(. + x + k)); [0, 1]) b_k``
    ``W2``    ``sum N(R(. + x + k); [0, 1]) b_k``
    ``W_p``   ``sum d_k N(varphi(R); [x + k, x + k + 1]) b_k``
    ``sub1``  ``sum N(R(. + x); [-x + k l, -x + (k+1) l]) sup phi^{-1}([0, eps / F(l, -x + k l)])``
    ``sub2``  ``sum N(R(. + x); [-x + k l, -x + (k+1) l]) / F(l, -x + k l)``

    On ``[0, 1]`` the exponent is read in the local coordinate; on the other
    windows at the absolute position.  In ``W`` and ``W2`` the ``k``-th
    window covers the kernel on ``[x + k, x + k + 1]``.

    Raises
    ------
    SeriesDivergence
        No finite tail bound while the last 50 terms do not decrease.
    """
    if which not in SERIES_KINDS:
        raise ValueError(f"which must be one of {SERIES_KINDS}")
    if not l > 0:
        raise ValueError("l must be positive")
    a = Geometric(0.5) if a is None else a
    F = ConstantOne() if F is None else F
    vphi = IdentityPhi() if varphi is None else varphi
    bk = _as_sequence(b)
    K0 = R.as_function()
    l, x = float(l), float(x)

    def weighted(ak, s):
        # a varphi(s / a); exact for the identity, inf once s / a leaves the float range
        ak = np.asarray(ak, dtype=float)
        if isinstance(vphi, IdentityPhi):
            return np.full(ak.shape, s)
        safe = np.where(ak > 0, ak, 1.0)
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            val = np.where(ak > 0, safe * vphi(s / safe), math.inf)
        return np.where(np.isfinite(val), val, math.inf)

    def c_coef(k):
        return weighted(a.term(k), l)

    def d_coef(k):
        return weighted(a.term(k), 1.0)

    def inv_F(k):
        return 1.0 / F(l, -x + k * l)

    line_window = lambda k: (k * l, (k + 1.0) * l)  # noqa: E731
    unit_window = lambda k: (x + k, x + k + 1.0)  # noqa: E731
    if which == "H":
        plan = _SeriesPlan(Mapped(vphi, Translate(x, K0)), q, lambda k: -x + k * l, l, False,
                           lambda k: c_coef(k) * inv_F(k), line_window, vphi)
    elif which == "H_p":
        plan = _SeriesPlan(Mapped(vphi, K0), q, lambda k: k * l, l, False,
                           lambda k: c_coef(k) * inv_F(k), line_window, vphi)
    elif which == "W":
        plan = _SeriesPlan(Mapped(vphi, K0), q, lambda k: x + k, 1.0, True,
                           lambda k: d_coef(k) * bk(k), unit_window, vphi)
    elif which == "W2":
        plan = _SeriesPlan(K0, q, lambda k: x + k, 1.0, True, bk, unit_window, None)
    elif which == "W_p":
        plan = _SeriesPlan(Mapped(vphi, K0), q, lambda k: x + k, 1.0, False,
                           lambda k: d_coef(k) * bk(k), unit_window, vphi)
    elif which == "sub1":
        if phi is None or eps is None:
            raise ValueError("sub1 series needs phi and eps")
        pre = np.vectorize(lambda y: phi.sup_preimage(float(y)), otypes=[float])
        plan = _SeriesPlan(Translate(x, K0), q, lambda k: -x + k * l, l, False,
                           lambda k: pre(eps * inv_F(k)), line_window, None)
    else:
        plan = _SeriesPlan(Translate(x, K0), q, lambda k: -x + k * l, l, False, inv_F, line_window, None)
    return _sum_series(R, plan, which, tol, max_terms)


# ---------------------------------------------------------------------------
# theorem condition checks
# ---------------------------------------------------------------------------


def _phi_p(s: np.ndarray, p: np.ndarray) -> np.ndarray:
    """``s**p`` for finite ``p``; for ``p = inf``: 0 when ``s <= 1``, ``inf`` otherwise."""
    s = np.asarray(s, dtype=float)
    p = np.broadcast_to(np.asarray(p, dtype=float), s.shape)
    with np.errstate(over="ignore", invalid="ignore"):
        out = np.where(np.isinf(p), np.where(s <= 1.0, 0.0, np.inf), np.power(s, np.where(np.isinf(p), 1.0, p)))
    return np.where(s == 0.0, 0.0, out)


def _nodes(a: float, b: float, panels: int) -> tuple[np.ndarray, np.ndarray]:
    edges = np.linspace(a, b, panels + 1)
    h = np.diff(edges)
    x = (edges[:-1, None] + 0.5 * h[:, None] * (_GL_X[None, :] + 1.0)).ravel()
    w = (0.5 * h[:, None] * _GL_W[None, :]).ravel()
    return x, w


@dataclass(frozen=True)
class ConvolutionConfig:
    """Data shared by the condition checks.

    Attributes
    ----------
    R : KernelSpec
    p : ExponentSpec
        Exponent of the class (on the line for paren checks, on ``[0, 1]`` for bracket checks).
    q : ExponentSpec, optional
        Kernel exponent; defaults to the conjugate of ``p``.
    phi : PhiSpec
        Map of the class; enters through ``sup phi^{-1}``.
    varphi : PhiSpec
        Companion map with ``phi(x y) <= varphi(x) phi(y)``.
    F, F1 : WeightSpec
        Weights of the source and target classes.
    a : SequenceSpec
        Positive weights summing to one (one-sided for the series checks).
    a_two_sided : SequenceSpec
        Weights over all integers for the scalar convolution checks.
    b : SequenceSpec, callable or float
        The sequence ``b_k`` of the bracket checks (default 1).
    omega : callable
        ``omega(eps)``; default the identity.
    S : callable
        ``S(l, t)``; default 1.
    eps : tuple of float
    l_grid, t_grid : GridSpec
    x_panels : int
        Gauss-Legendre panels (15 nodes each) for the integral over ``x``.
    tol : float
        Series tolerance.
    """

    R: KernelSpec = field(default_factory=ExpDecay)
    p: ExponentSpec = field(default_factory=lambda: ConstantExponent(1.0))
    q: ExponentSpec | None = None
    phi: PhiSpec = field(default_factory=IdentityPhi)
    varphi: PhiSpec = field(default_factory=IdentityPhi)
    F: WeightSpec = field(default_factory=ConstantOne)
    F1: WeightSpec = field(default_factory=ConstantOne)
    a: SequenceSpec = field(default_factory=lambda: Geometric(0.5))
    a_two_sided: SequenceSpec = field(default_factory=lambda: TwoSidedGeometric(0.5))
    b: object = None
    omega: Callable[[float], float] = field(default=lambda e: e)
    S: Callable = field(default=lambda l, t: 1.0)
    eps: tuple[float, ...] = (0.5, 0.1)
    l_grid: GridSpec = field(default_factory=lambda: GridSpec.geometric(1.0, 64.0, 7))
    t_grid: GridSpec = field(default_factory=lambda: GridSpec.uniform(-8.0, 8.0, 4.0))
    x_panels: int = 4
    tol: float = 1e-8

    def with_(self, **changes) -> "ConvolutionConfig":
        return replace(self, **changes)

    @property
    def kernel_exponent(self) -> ExponentSpec:
        return self.p.conjugate() if self.q is None else self.q


@dataclass
class TheoremConditionReport:
    """Tabulated hypotheses of one convolution theorem.

    Attributes
    ----------
    theorem : str
    series_table : list of dict
        One row per evaluated series (``l``, ``x``, ``value``, ``terms``, ``converged``).
    condition_table : list of dict
        One row per ``(t, l)`` (and ``eps``) with the condition integral.
    all_satisfied : bool
        Every integral is at most ``1 + CONDITION_SLACK`` and every series converged.
    first_violation : dict or None
    conclusion : str
        The class the theorem would deliver, named by the weights checked.
    notes : list of str
    """

    theorem: str
    series_table: list[dict]
    condition_table: list[dict]
    all_satisfied: bool
    first_violation: dict | None
    conclusion: str
    notes: list[str] = field(default_factory=list)

    @property
    def verdict(self) -> Verdict:
        status = Status.SATISFIED if self.all_satisfied else Status.VIOLATED
        return Verdict(status, witness=self.first_violation, diagnostics=self.condition_table,
                       detail={"theorem": self.theorem, "conclusion": self.conclusion})

    @property
    def max_condition(self) -> float:
        return max((row["value"] for row in self.condition_table), default=0.0)


class _SeriesCache:
    def __init__(self, cfg: ConvolutionConfig):
        self.cfg = cfg
        self.store: dict = {}
        self.rows: list[dict] = []
        self.unconverged: dict | None = None

    def get(self, which: str, l: float, x: float, eps: float | None = None) -> float:
        cfg = self.cfg
        key = (which, l, x, eps)
        if key not in self.store:
            res = series_eval(which, cfg.R, cfg.kernel_exponent, l=l, x=x, a=cfg.a, b=cfg.b, F=cfg.F,
                              varphi=cfg.varphi, phi=cfg.phi, eps=eps, tol=cfg.tol)
            row = {"series": which, "l": l, "x": x, "value": res.value, "terms": res.terms_used,
                   "converged": res.converged}
            if eps is not None:
                row["eps"] = eps
            self.rows.append(row)
            if not res.converged and self.unconverged is None:
                self.unconverged = row
            self.store[key] = res.value
        return self.store[key]


def _x_independent(which: str, cfg: ConvolutionConfig) -> bool:
    """Paren series depend on ``x`` only through ``F(l, -x + k l)`` and the exponent position."""
    q = cfg.kernel_exponent
    if which == "H_p":
        return cfg.F.t_independent
    return cfg.F.t_independent and q.is_constant


def _paren_integral(cache: _SeriesCache, which: str, t: float, l: float, scale: float, eps: float | None,
                    coefficient: float, outer: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> float:
    """``int_t^{t+l} outer(coefficient * scale * series(l, x), x) dx`` with Gauss-Legendre nodes."""
    cfg = cache.cfg
    xs, ws = _nodes(t, t + l, cfg.x_panels)
    if _x_independent(which, cfg):
        s = np.full(xs.size, cache.get(which, l, 0.0, eps))
    else:
        s = np.array([cache.get(which, l, float(x), eps) for x in xs])
    return float(np.dot(ws, outer(coefficient * scale * s, xs)))


def _bracket_integral(cache: _SeriesCache, which: str, scale: float, coefficient: float,
                      outer: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> float:
    xs, ws = _nodes(0.0, 1.0, cache.cfg.x_panels)
    s = np.array([cache.get(which, 1.0, float(x)) for x in xs])
    return float(np.dot(ws, outer(coefficient * scale * s, xs)))


def _conclusion(theorem: str, cfg: ConvolutionConfig) -> str:
    labels = {
        "jensen": "({p}, phi, {F1})", "krajeq-weak": "({p}, phi, {F1})", "kraj": "({p}, phi, {F1})",
        "jensenjen": "[{p}, phi, {F1}]", "prcko": "[{p}, phi, {F1}]", "sub1": "({p}, phi, {F1})_1",
        "sub2": "({p}, phi, {F1})_2", "napolje": "[{p}, phi, {F1}]", "univer": "[{p}, phi, {F1}]",
    }
    return "equi-Weyl-" + labels[theorem].format(p=repr(cfg.p), F1=cfg.F1.name)


def check_theorem(theorem: str, cfg: ConvolutionConfig, coefficient: float | None = None) -> TheoremConditionReport:
    """Tabulate the hypothesis inequality of a convolution theorem over the grids of ``cfg``.

    Parameters
    ----------
    theorem : str
        ``jensen`` (window series ``H`` with factor 2), ``krajeq-weak``
        (``H`` without the factor, constant ``p``), ``kraj`` (``H_p``,
        constant ``p``), ``jensenjen`` (``W``), ``prcko`` (``W_p``),
        ``sub1``/``sub2`` (subadditive paren classes), ``napolje``/``univer``
        (``W2`` for the bracket subadditive classes).
    coefficient : float, optional
        Overrides the leading factor (2 by default, 1 for ``krajeq-weak``).

    Notes
    -----
    For the subadditive checks ``lambda`` is taken equal to the largest
    admissible value ``a``:

    * ``sub1``: ``a = sup phi^{-1}([0, eps / F(l, t)])``;
    * ``sub2``: ``a = sup phi^{-1}([0, eps]) / F(l, t)``;
    * ``napolje``: ``a = sup phi^{-1}([0, eps / F1(l, t)])``;
    * ``univer``: ``a = sup phi^{-1}([0, eps]) / F1(l, t)``.

    A larger ``lambda`` only makes the inequality easier, so this is the
    weakest admissible test.  When ``a`` is infinite the integrand is zero.
    """
    if theorem not in THEOREMS:
        raise ValueError(f"theorem must be one of {THEOREMS}")
    p = cfg.p
    if theorem in ("krajeq-weak", "kraj", "prcko") and not p.is_constant:
        raise ValueError(f"{theorem} needs a constant exponent")
    if coefficient is None:
        coefficient = 1.0 if theorem == "krajeq-weak" else 2.0
    cache = _SeriesCache(cfg)
    rows: list[dict] = []
    notes: list[str] = []
    ls = cfg.l_grid.points()
    ts = cfg.t_grid.points()

    def outer_p(s, x):
        return _phi_p(s, p(x))

    def outer_const(s, x):
        return np.power(s, p.p_plus)

    def add(value, **where):
        rows.append({**where, "value": float(value)})

    if theorem in ("jensen", "krajeq-weak", "kraj"):
        which = "H_p" if theorem == "kraj" else "H"
        outer = outer_const if theorem == "kraj" else outer_p
        for l in ls:
            for t in ts:
                scale = 1.0 / (float(l) * float(cfg.F1(l, t)))
                add(_paren_integral(cache, which, float(t), float(l), scale, None, coefficient, outer), t=float(t),
                    l=float(l))
    elif theorem in ("sub1", "sub2"):
        for eps in cfg.eps:
            for l in ls:
                for t in ts:
                    if theorem == "sub1":
                        lam = cfg.phi.sup_preimage(eps / float(cfg.F(l, t)))
                        scale, series_eps = (0.0 if math.isinf(lam) else 1.0 / lam), eps
                    else:
                        pre = cfg.phi.sup_preimage(eps)
                        lam = pre / float(cfg.F(l, t))
                        scale, series_eps = (0.0 if math.isinf(lam) else pre / lam), None
                    if scale == 0.0:
                        add(0.0, t=float(t), l=float(l), eps=eps, lam=lam)
                        continue
                    val = _paren_integral(cache, theorem, float(t), float(l), scale, series_eps, coefficient, outer_p)
                    add(val, t=float(t), l=float(l), eps=eps, lam=lam)
    elif theorem in ("jensenjen", "prcko"):
        which = "W" if theorem == "jensenjen" else "W_p"
        outer = outer_p if theorem == "jensenjen" else outer_const
        eps_list = cfg.eps if theorem == "jensenjen" else (None,)
        for eps in eps_list:
            for l in ls:
                for t in ts:
                    scale = float(cfg.S(l, t)) / float(cfg.F1(l, t))
                    if eps is not None:
                        scale *= float(cfg.omega(eps)) / eps
                    where = {"t": float(t), "l": float(l)}
                    if eps is not None:
                        where["eps"] = eps
                    add(_bracket_integral(cache, which, scale, coefficient, outer), **where)
    else:
        for eps in cfg.eps:
            for l in ls:
                for t in ts:
                    if theorem == "napolje":
                        lam = cfg.phi.sup_preimage(eps / float(cfg.F1(l, t)))
                    else:
                        lam = cfg.phi.sup_preimage(eps) / float(cfg.F1(l, t))
                    if math.isinf(lam):
                        add(0.0, t=float(t), l=float(l), eps=eps, lam=lam)
                        continue
                    scale = float(cfg.omega(eps)) * float(cfg.S(l, t)) / lam
                    add(_bracket_integral(cache, "W2", scale, coefficient, outer_p), t=float(t), l=float(l),
                        eps=eps, lam=lam)
        notes.append("conclusion labelled with the weights of the checked hypothesis")
    if theorem in ("sub1", "sub2", "napolje", "univer"):
        notes.append("lambda taken equal to the largest admissible value a")
    first = next((r for r in rows if not r["value"] <= 1.0 + CONDITION_SLACK), None)
    if first is None and cache.unconverged is not None:
        first = {"series_not_converged": True, **cache.unconverged}
    return TheoremConditionReport(theorem, cache.rows, rows, first is None, first, _conclusion(theorem, cfg), notes)


def kernel_scale_for(theorem: str, cfg: ConvolutionConfig) -> float:
    """Factor ``c`` such that the kernel ``R / c`` passes ``theorem`` on the grids of ``cfg``.

    The series are linear in the kernel for the identity ``varphi``, so the
    condition integral scales like ``c**(-p)`` for a constant exponent ``p``.
    """
    if not cfg.p.is_constant or not math.isfinite(cfg.p.p_plus):
        raise ValueError("scaling needs a constant finite exponent")
    if not isinstance(cfg.varphi, IdentityPhi):
        raise ValueError("scaling needs the identity varphi")
    rep = check_theorem(theorem, cfg)
    top = rep.max_condition
    return top ** (1.0 / cfg.p.p_plus) if top > 0 else 1.0


# ---------------------------------------------------------------------------
# growth-order bounds
# ---------------------------------------------------------------------------


def section41_lhs(k: int, l: float, q: float, beta: float, gamma: float) -> float:
    """``int_{k l}^{(k+1) l} t^{(beta-1) q} / (1 + t^gamma)^q dt`` by graded quadrature."""
    e = (beta - 1.0) * q

    def fn(t):
        t = np.asarray(t, dtype=float)
        return t ** e / (1.0 + t ** gamma) ** q

    a, b = k * l, (k + 1) * l
    sing = [(0.0, e)] if (k == 0 and e < 0) else []
    return integrate(fn, a, b, tol=1e-15, rel_tol=1e-14, singular=sing)[0]


def section41_rhs(k: int, l: float, q: float, beta: float, gamma: float) -> float:
    """``(k+1)^{(beta-1) q} l^{(beta-1) q + 1} / (1 + k^{q gamma} l^{q gamma})``."""
    e = (beta - 1.0) * q
    return (k + 1.0) ** e * l ** (e + 1.0) / (1.0 + (k * l) ** (q * gamma))


def section41_bound_check(k: int, l: float, q: float, beta: float, gamma: float) -> Verdict:
    """Compare the window integral of ``t^{beta-1} / (1 + t^gamma)`` in ``L^q`` with its claimed bound.

    Satisfied iff ``lhs <= rhs + 1e-9``.
    """
    if k < 0 or int(k) != k:
        raise ValueError("k must be a non-negative integer")
    if not l > 0 or q < 1 or not 0 < beta <= 1 or not gamma > 1:
        raise ValueError("need l > 0, q >= 1, beta in (0, 1], gamma > 1")
    if not (beta - 1.0) * q > -1.0:
        raise ValueError("need (beta - 1) q > -1")
    lhs = section41_lhs(int(k), l, q, beta, gamma)
    rhs = section41_rhs(int(k), l, q, beta, gamma)
    return inequality_verdict(lhs, rhs, 1e-9, k=int(k), l=float(l), q=float(q), beta=float(beta),
                              gamma=float(gamma))


def section41_grid(ks=range(21), ls=(0.5, 1.0, 2.0, 5.0), qs=(1.0, 2.0, 4.0), betas=(0.5, 1.0),
                   gammas=(1.5, 2.0, 3.0)) -> Verdict:
    """Run :func:`section41_bound_check` over a parameter grid; the witness is the first failure."""
    rows = []
    first = None
    for beta in betas:
        for q in qs:
            if not (beta - 1.0) * q > -1.0:
                continue
            for gamma in gammas:
                for l in ls:
                    for k in ks:
                        v = section41_bound_check(k, l, q, beta, gamma)
                        rows.append({**v.detail, "status": str(v.status)})
                        if v.violated and first is None:
                            first = dict(v.witness)
    status = Status.SATISFIED if first is None else Status.VIOLATED
    failures = sum(r["status"] == str(Status.VIOLATED) for r in rows)
    return Verdict(status, witness=first, diagnostics=rows, detail={"cases": len(rows), "failures": failures})


def window_series_growth(q: float, beta: float, gamma: float, l_grid: GridSpec, p: float | None = None,
                         terms: int = 4096) -> Verdict:
    """Growth in ``l`` of ``int_t^{t+l} (sum_k ||t^{beta-1}/(1+t^gamma)||_{L^q[kl,(k+1)l]})^p dx``.

    With ``p = 1`` (``q = inf``) the window norms are suprema.  The
    integrand does not depend on ``x``, so the value is ``l * S(l)^p``.
    Bounded when the log-log slope over the trailing half of ``l_grid`` is
    at most 0.05; the detail reports that slope.
    """
    ls = l_grid.points()
    if ls.size < 4:
        raise ValueError("need at least 4 window lengths")
    if p is None:
        p = 1.0 if math.isinf(q) else q / (q - 1.0) if q > 1 else math.inf
    vals = []
    for l in ls:
        ks = np.arange(terms)
        if math.isinf(q):
            if beta != 1.0:
                raise ValueError("the supremum form needs beta = 1")
            s = np.sum(1.0 / (1.0 + (ks * l) ** gamma))
            tail = l ** (-gamma) * terms ** (1.0 - gamma) / (gamma - 1.0)
        else:
            parts = np.array([section41_lhs(int(k), float(l), q, beta, gamma) for k in ks[:64]])
            # for k >= 64 the window integral is within 1e-3 of its midpoint value
            kk = ks[64:] + 0.5
            approx = ((kk * l) ** ((beta - 1.0) * q) / (1.0 + (kk * l) ** gamma) ** q * l)
            s = np.sum(parts ** (1.0 / q)) + np.sum(approx ** (1.0 / q))
            decay = beta - 1.0 - gamma + 1.0 / q
            tail = (l ** (beta - 1.0 - gamma + 1.0 / q)) * terms ** (decay + 1.0) / -(decay + 1.0)
        vals.append(float(l * (s + tail) ** (p if math.isfinite(p) else 1.0)))
    vals = np.asarray(vals)
    half = ls.size // 2
    slope = float(np.polyfit(np.log(ls[half:]), np.log(vals[half:]), 1)[0])
    rows = [{"l": float(l), "value": float(v)} for l, v in zip(ls, vals)]
    if slope <= 0.05:
        return Verdict(Status.SATISFIED, diagnostics=rows, detail={"growth_exponent": slope})
    j = int(np.argmax(vals))
    return Verdict(Status.VIOLATED, witness={"l": float(ls[j]), "value": float(vals[j]), "growth_exponent": slope},
                   diagnostics=rows, detail={"growth_exponent": slope})


# ---------------------------------------------------------------------------
# finite convolution on the half-line
# ---------------------------------------------------------------------------


def tail_series(R: KernelSpec, kernel_exponent: ExponentSpec, t: float, tol: float = DEFAULT_TOL) -> SeriesResult:
    """``S(t) = sum_k ||R(. + t + k)||_{L^{q(.)}[0, 1]}``."""
    return series_eval("W2", R, kernel_exponent, x=float(t), b=1.0, tol=tol)


def hypothesis_functional(R: KernelSpec, q: FunctionSpec, F1: WeightSpec, l: float, t: float, x_span: float = 4.0,
                          x_points: int = 64, tol: float = 1e-9) -> float:
    """Grid value of ``sup_{x>=0} F1(l, t) int_0^{x+t} [int_{x+t}^{x+t+l} ||R(s - r)|| ds] ||q(r)|| dr``.

    The inner integral is the kernel antiderivative; the outer one runs over
    the last ``T`` units before ``x + t`` where the kernel tail makes the
    rest smaller than ``tol``.  The supremum runs over ``[0, t + x_span l]``.
    """
    qn = magnitude(q)
    w = float(F1(l, t))

    def at(xs: np.ndarray) -> np.ndarray:
        out = np.empty(xs.size)
        for i, x in enumerate(xs):
            u = x + t
            T, _ = _bounded_truncation(R, lambda T: qn.sup_norm(max(0.0, u - T), u), tol / max(l, 1.0))
            lo = max(0.0, u - T)

            def fn(r):
                return R.mass(u - r, u + l - r) * qn.values(r)[:, 0]

            val = integrate(fn, lo, u, qn.breakpoints(lo, u), tol=tol, rel_tol=1e-12)[0] if u > lo else 0.0
            out[i] = w * val
        return out

    xs = np.linspace(0.0, t + x_span * l, x_points + 1)
    if qn.exact:
        br = qn.breakpoints(t, 2 * t + x_span * l + 1.0) - t
        xs = np.unique(np.concatenate([xs, br[(br >= 0) & (br <= t + x_span * l)]]))
    return grid_sup(at, xs).value


def check_prop_finite(R: KernelSpec, q: FunctionSpec, F: WeightSpec, F1: WeightSpec, *,
                      kernel_exponent: ExponentSpec | None = None, s_grid: GridSpec | None = None,
                      l_grid: GridSpec | None = None, t_grid: GridSpec | None = None, M: float = 1.0,
                      threshold: float = 0.1, zero_tol: float = 1e-6, conclusion=None) -> Verdict:
    """Check the hypotheses of the finite convolution result and run the conclusion check.

    Part one tabulates ``S(t)`` on ``s_grid`` and asks that it decreases to
    below ``zero_tol``.  Part two evaluates the double-integral hypothesis
    on ``l_grid x t_grid`` (judged like an equi vanishing limit with
    ``threshold``), checks ``F1 / F <= M`` on the same grid, and runs
    :func:`varweyl.ergodic.vanishing_verdict` on ``H2 = R * q`` with
    ``conclusion`` (a :class:`varweyl.ergodic.VanishingConfig`).

    Satisfied when both parts and the conclusion are satisfied.
    """
    from .ergodic import VanishingConfig, _trailing_limsup, vanishing_verdict

    kexp = ConstantExponent(1.0) if kernel_exponent is None else kernel_exponent
    s_grid = GridSpec.geometric(1.0, 64.0, 7) if s_grid is None else s_grid
    l_grid = GridSpec.geometric(1.0, 64.0, 7) if l_grid is None else l_grid
    t_grid = GridSpec.geometric(1.0, 1e4, 9) if t_grid is None else t_grid
    rows: list[dict] = []
    witness = None

    s_vals = np.array([tail_series(R, kexp, float(t)).value for t in s_grid.points()])
    rows.extend({"part": "S", "t": float(t), "value": float(v)} for t, v in zip(s_grid.points(), s_vals))
    half = s_vals[s_vals.size // 2:]
    s_ok = bool(np.all(np.diff(half) <= 1e-15) and half[-1] <= zero_tol)
    if not s_ok:
        witness = {"part": "S", "t": float(s_grid.points()[-1]), "value": float(s_vals[-1])}

    if R.total() == math.inf:
        raise ValueError("the kernel must be integrable")
    ls, ts = l_grid.points(), t_grid.points()
    inner = []
    ratio_max = 0.0
    for l in ls:
        vals = np.array([hypothesis_functional(R, q, F1, float(l), float(t)) for t in ts])
        rows.extend({"part": "hypothesis", "l": float(l), "t": float(t), "value": float(v)} for t, v in zip(ts, vals))
        inner.append(_trailing_limsup(vals)[0])
        ratio_max = max(ratio_max, float(np.max(F1(l, ts) / F(l, ts))))
    inner = np.asarray(inner)
    tail = inner[inner.size // 2:]
    hyp_ok = bool(np.all(np.diff(tail) <= 1e-12) and tail[-1] < threshold)
    if not hyp_ok and witness is None:
        j = inner.size // 2 + int(np.argmax(tail))
        witness = {"part": "hypothesis", "l": float(ls[j]), "value": float(inner[j])}
    ratio_ok = ratio_max <= M
    if not ratio_ok and witness is None:
        witness = {"part": "ratio", "value": ratio_max, "M": M}

    if conclusion is None:
        conclusion = VanishingConfig(F=F1, order="equi", l_grid=GridSpec.geometric(1.0, 64.0, 7),
                                     t_grid=GridSpec.geometric(1.0, 1e6, 13), x_points=64)
    vq = vanishing_verdict(FiniteConvolution(R, q), conclusion)
    rows.append({"part": "conclusion", "status": str(vq.status)})
    detail = {"S_to_zero": s_ok, "hypothesis": hyp_ok, "ratio_max": ratio_max, "conclusion": str(vq.status)}
    if s_ok and hyp_ok and ratio_ok and vq.satisfied:
        return Verdict(Status.SATISFIED, diagnostics=rows, detail=detail)
    if witness is None:
        if vq.violated:
            witness = {"part": "conclusion", **vq.witness}
        else:
            return Verdict(Status.INCONCLUSIVE, diagnostics=rows, detail=detail)
    return Verdict(Status.VIOLATED, witness=witness, diagnostics=rows, detail=detail)


# ---------------------------------------------------------------------------
# invariance under scalar convolution
# ---------------------------------------------------------------------------


def _psi_k_range(psi: FunctionSpec, l: float, k_max: int) -> range:
    pieces = _compact_pieces(psi)
    if pieces is None:
        return range(-k_max, k_max + 1)
    lo, hi = float(pieces[0][0]), float(pieces[0][-1])
    return range(max(-k_max, math.floor(lo / l) - 1), min(k_max, math.ceil(hi / l)) + 1)


def check_convolution_invariance(psi: FunctionSpec, cfg: ConvolutionConfig, family: str = "paren",
                                 p1: ExponentSpec | None = None, coefficient: float = 2.0, k_max: int = 64,
                                 f: FunctionSpec | None = None, class_cfg=None) -> TheoremConditionReport:
    """Tabulate the scalar-convolution invariance condition.

    ``family="paren"``: for ``x`` in ``[t, t + l]`` the integrand is
    ``coefficient * F1(l, t) varphi(l) / l * sum_k a_k ||varphi(psi(x - z) / a_k)||_{L^{q(z)}[x-(k+1)l, x-kl]}
    / F(l, x - (k+1) l)``.

    ``family="bracket"``: for ``x`` in ``[0, 1]`` the integrand is
    ``coefficient * F1(l, t) sum_k ||varphi(l psi(x l - (z + k) l) / a_k)||_{L^{q(z)}[0, 1]} / F(l, t + k l)``.

    Both pass through ``phi_{p1(x)}`` and are integrated.  For constant
    exponents the coefficient 2 may be replaced by 1.  The sum over ``k``
    covers the support of a compactly supported piecewise-constant ``psi``
    and ``|k| <= k_max`` otherwise.

    When ``f`` and ``class_cfg`` (a :class:`varweyl.apclass.ClassConfig`) are
    given, the membership verdict of ``psi * f`` is attached as a note.
    """
    if family not in ("paren", "bracket"):
        raise ValueError("family must be 'paren' or 'bracket'")
    a = cfg.a_two_sided
    if not a.two_sided:
        raise ValueError("the weights must be indexed by all integers")
    p1 = cfg.p if p1 is None else p1
    q = cfg.kernel_exponent
    vphi = cfg.varphi
    F, F1 = cfg.F, cfg.F1
    absr = magnitude(Reflect(psi))
    rows: list[dict] = []
    series_rows: list[dict] = []
    norm_cache: dict = {}

    def paren_norm(k: int, x: float, l: float) -> float:
        key = (k, None if q.is_constant else x, l)
        if key not in norm_cache:
            ak = float(a.term(k))
            h = Mapped(vphi, Scale(1.0 / ak, Translate(-x, absr)))
            norm_cache[key] = float(window_norms(h, q, [x - (k + 1) * l], l)[0])
        return norm_cache[key]

    def bracket_norm(k: int, x: float, l: float) -> float:
        key = (k, x, l)
        if key not in norm_cache:
            ak = float(a.term(k))
            h = Mapped(vphi, Scale(l / ak, absr))
            norm_cache[key] = float(window_norms(h, q, [-l * (x - k)], l, relative=True)[0])
        return norm_cache[key]

    for l in cfg.l_grid.points():
        l = float(l)
        ks = list(_psi_k_range(psi, l, k_max))
        for t in cfg.t_grid.points():
            t = float(t)
            if family == "paren":
                xs, ws = _nodes(t, t + l, cfg.x_panels)
                pre = coefficient * float(F1(l, t)) * float(vphi(l)) / l
                vals = np.array([pre * sum(float(a.term(k)) * paren_norm(k, float(x), l) / float(F(l, x - (k + 1) * l))
                                           for k in ks) for x in xs])
            else:
                xs, ws = _nodes(0.0, 1.0, cfg.x_panels)
                pre = coefficient * float(F1(l, t))
                vals = np.array([pre * sum(bracket_norm(k, float(x), l) / float(F(l, t + k * l)) for k in ks)
                                 for x in xs])
            series_rows.append({"l": l, "t": t, "max_integrand": float(vals.max())})
            value = float(np.dot(ws, _phi_p(vals, p1(xs))))
            rows.append({"t": t, "l": l, "value": value})
    first = next((r for r in rows if not r["value"] <= 1.0 + CONDITION_SLACK), None)
    notes = [f"coefficient {coefficient:g}"]
    if f is not None and class_cfg is not None:
        from .apclass import membership_report

        v = membership_report(convolve_scalar(psi, f), class_cfg)
        notes.append(f"membership of psi * f: {v.status}")
    label = ("equi-Weyl-(" if family == "paren" else "equi-Weyl-[") + f"{p1!r}, phi, {F1.name}" + \
        (")" if family == "paren" else "]")
    return TheoremConditionReport("proba" if family == "paren" else "proba-est", series_rows, rows, first is None,
                                  first, label, notes)
