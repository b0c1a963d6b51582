"""Specifications of functions, exponents, auxiliary maps, weights, kernels.

Every object here is immutable after construction.  Functions are
vector-valued (finite dimension, Euclidean norm) and are evaluated in a
vectorized way: ``f.values(x)`` maps an array of shape ``(n,)`` to an array
of shape ``(n, dim)``.  A function is *exact* when every restriction to a
bounded interval is piecewise constant with finitely many pieces; those
functions expose :meth:`FunctionSpec.pieces` and are integrated without
quadrature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import special

MERGE_TOL = 1e-12
"""Breakpoints closer than this are merged."""

_AUDIT_SEED = 20240917


class DomainError(ValueError):
    """Raised when a function is evaluated outside its domain."""


class NotExactlyIntegrable(ValueError):
    """Raised when an exact (piecewise-constant) path is requested for a general function."""


def merge_breakpoints(points) -> np.ndarray:
    """Sort points and merge those that lie within :data:`MERGE_TOL` of each other."""
    pts = np.sort(np.asarray(points, dtype=float).ravel())
    pts = pts[np.isfinite(pts)]
    if pts.size < 2:
        return pts
    keep = np.r_[True, np.diff(pts) > MERGE_TOL]
    return pts[keep]


# ---------------------------------------------------------------------------
# Functions
# ---------------------------------------------------------------------------


class FunctionSpec:
    """Base class of all function specifications.

    Attributes
    ----------
    dim : int
        Dimension of the values.
    lower : float
        Left end of the domain; ``-inf`` for the real line, ``0`` for the
        half-line.
    exact : bool
        True when the function is piecewise constant with finitely many
        pieces on bounded intervals.
    nonnegative : bool
        True for scalar functions known to be non-negative.
    """

    dim: int = 1
    lower: float = -math.inf
    exact: bool = False
    nonnegative: bool = False

    # -- evaluation -------------------------------------------------------
    def values(self, x) -> np.ndarray:
        """Vectorized values, shape ``(n, dim)``; no domain check."""
        raise NotImplementedError

    def evaluate(self, x: float) -> np.ndarray:
        """Value at a single point, with a domain check.

        At a breakpoint of a piecewise-constant function the right limit is
        returned.
        """
        x = float(x)
        if x < self.lower:
            raise DomainError(f"x={x} lies outside the domain [{self.lower}, inf)")
        return self.values(np.array([x]))[0]

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        if arr.ndim == 0:
            return self.evaluate(float(arr))
        return self.values(arr)

    def norms(self, x) -> np.ndarray:
        """Euclidean norms of the values at ``x``, shape ``(n,)``."""
        v = self.values(np.asarray(x, dtype=float))
        if v.shape[1] == 1:
            return np.abs(v[:, 0])
        return np.linalg.norm(v, axis=1)

    # -- structure --------------------------------------------------------
    def breakpoints(self, a: float, b: float) -> np.ndarray:
        """Discontinuities and kinks strictly inside ``(a, b)``."""
        return np.empty(0)

    def singularities(self, a: float, b: float) -> list[tuple[float, float]]:
        """Points in ``[a, b]`` where the function behaves like ``|x - x0|**s`` with ``s < 0``."""
        return []

    def pieces(self, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
        """Exact piecewise-constant description on ``[a, b]``.

        Returns
        -------
        edges : ndarray, shape (m + 1,)
        values : ndarray, shape (m, dim)
        """
        if not self.exact:
            raise NotExactlyIntegrable(f"{self!r} is not piecewise constant")
        edges = merge_breakpoints(np.concatenate([[a, b], self.breakpoints(a, b)]))
        if edges.size < 2:
            edges = np.array([a, b], dtype=float)
        edges[0], edges[-1] = a, b
        mids = 0.5 * (edges[:-1] + edges[1:])
        return edges, self.values(mids)

    def sup_norm(self, a: float, b: float) -> float:
        """Supremum of ``||f||`` over ``[a, b]`` (sampled for general functions)."""
        if self.exact:
            _, vals = self.pieces(a, b)
            return float(np.max(np.linalg.norm(vals, axis=1))) if len(vals) else 0.0
        pts = np.concatenate([np.linspace(a, b, 2001), self.breakpoints(a, b)])
        return float(np.max(self.norms(pts)))

    @property
    def domain(self) -> str:
        if self.lower == -math.inf:
            return "R"
        if self.lower == 0.0:
            return "half"
        return f"[{self.lower:g},inf)"

    # -- algebra ------------------------------------------------------------
    def __add__(self, other: "FunctionSpec") -> "FunctionSpec":
        return Sum([self, other])

    def __sub__(self, other: "FunctionSpec") -> "FunctionSpec":
        return Sum([self, Scale(-1.0, other)])

    def __neg__(self) -> "FunctionSpec":
        return Scale(-1.0, self)

    def __mul__(self, c: float) -> "FunctionSpec":
        return Scale(float(c), self)

    __rmul__ = __mul__

    def shift(self, tau: float) -> "FunctionSpec":
        """The function ``x -> f(x + tau)``."""
        return Translate(tau, self)


class PiecewiseConstant(FunctionSpec):
    """Piecewise-constant function with constant tails.

    Parameters
    ----------
    breakpoints : sequence of float
        Strictly increasing ``b_0 < ... < b_m``.
    values : array_like, shape (m, dim)
        ``values[i]`` holds on ``[b_i, b_{i+1})``.
    left, right : array_like, optional
        Values on ``(-inf, b_0)`` and ``[b_m, inf)``; zero by default.
    lower : float
        Domain left end (``-inf`` or ``0``).
    """

    exact = True

    def __init__(self, breakpoints: Sequence[float], values, left=None, right=None, lower: float = -math.inf):
        b = np.asarray(breakpoints, dtype=float).ravel()
        if b.size and np.any(np.diff(b) <= 0.0):
            raise ValueError("breakpoints must be strictly increasing")
        vals = np.asarray(values, dtype=float)
        if vals.size:
            vals = vals.reshape(-1, 1) if vals.ndim == 1 else vals.reshape(len(vals), -1)
            dim = vals.shape[1]
        else:
            tail = left if left is not None else right
            dim = np.atleast_1d(np.asarray(tail, dtype=float)).size if tail is not None else 1
            vals = np.zeros((0, dim))
        if b.size and len(vals) != b.size - 1:
            raise ValueError(f"expected {b.size - 1} piece values, got {len(vals)}")
        lt = np.zeros(dim) if left is None else np.asarray(left, dtype=float).reshape(dim)
        rt = np.zeros(dim) if right is None else np.asarray(right, dtype=float).reshape(dim)
        if b.size == 0 and not np.array_equal(lt, rt):
            raise ValueError("a function without breakpoints needs equal tails")
        if b.size > 1:
            wide = np.diff(b) > MERGE_TOL
            if not np.all(wide):
                b = np.concatenate([b[:1], b[1:][wide]])
                vals = vals[wide]
        self._b = b
        self._vals = vals
        self._left = lt
        self._right = rt
        self.dim = dim
        self.lower = float(lower)
        self._table = np.vstack([lt[None, :], vals, rt[None, :]])

    def values(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self._b.size == 0:
            return np.broadcast_to(self._right, (x.size, self.dim)).copy()
        idx = np.searchsorted(self._b, x, side="right")
        return self._table[idx]

    def breakpoints(self, a: float, b: float) -> np.ndarray:
        return self._b[(self._b > a) & (self._b < b)]

    @property
    def knots(self) -> np.ndarray:
        return self._b.copy()

    @property
    def piece_values(self) -> np.ndarray:
        return self._vals.copy()

    @property
    def tails(self) -> tuple[np.ndarray, np.ndarray]:
        return self._left.copy(), self._right.copy()

    def __repr__(self) -> str:
        return f"PiecewiseConstant(breakpoints={self._b.tolist()}, values={self._vals.tolist()})"


class Indicator(PiecewiseConstant):
    """Indicator function of ``[a, b)``, optionally scaled."""

    def __init__(self, a: float, b: float, height: float = 1.0, lower: float = -math.inf):
        if not b > a:
            raise ValueError("indicator needs a < b")
        super().__init__([a, b], [[height]], lower=lower)
        self.a, self.b, self.height = float(a), float(b), float(height)

    def __repr__(self) -> str:
        return f"Indicator({self.a:g}, {self.b:g})"


class Heaviside(PiecewiseConstant):
    """The step function equal to 1 on ``[0, inf)`` and 0 before."""

    def __init__(self, height: float = 1.0):
        super().__init__([0.0], np.zeros((0, 1)), left=[0.0], right=[height])

    def __repr__(self) -> str:
        return "Heaviside()"


class Constant(PiecewiseConstant):
    """Constant function on the real line (or the half-line)."""

    def __init__(self, c, lower: float = -math.inf):
        c = np.atleast_1d(np.asarray(c, dtype=float))
        super().__init__([], np.zeros((0, c.size)), left=c, right=c, lower=lower)
        self.c = c

    def __repr__(self) -> str:
        return f"Constant({self.c.tolist() if self.c.size > 1 else float(self.c[0])})"


_AMPLITUDE_RULES: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "one": lambda n: np.ones_like(n, dtype=float),
    "sqrt": lambda n: np.sqrt(n),
}


class SpikeTrain(FunctionSpec):
    """Half-line function ``sum_n a_n * 1_[n^2, n^2 + 1)``.

    Parameters
    ----------
    amplitude : {"one", "sqrt"} or float or callable
        The rule ``n -> a_n``; callables must accept integer arrays.
    n_max : int, optional
        Keep only spikes with ``n <= n_max``.
    """

    exact = True
    lower = 0.0

    def __init__(self, amplitude="one", n_max: int | None = None):
        if isinstance(amplitude, str):
            if amplitude not in _AMPLITUDE_RULES:
                raise ValueError(f"unknown amplitude rule {amplitude!r}")
            self.rule = amplitude
            self._amp = _AMPLITUDE_RULES[amplitude]
        elif callable(amplitude):
            self.rule = getattr(amplitude, "__name__", "custom")
            self._amp = amplitude
        else:
            c = float(amplitude)
            self.rule = f"{c:g}"
            self._amp = lambda n, c=c: np.full(np.shape(n), c)
        self.n_max = None if n_max is None else int(n_max)

    def amplitude(self, n) -> np.ndarray:
        n = np.asarray(n, dtype=float)
        return np.asarray(self._amp(n), dtype=float)

    @staticmethod
    def _index(x: np.ndarray) -> np.ndarray:
        n = np.floor(np.sqrt(np.maximum(x, 0.0)))
        n = np.where((n + 1.0) ** 2 <= x, n + 1.0, n)
        n = np.where(n * n > x, n - 1.0, n)
        return n

    def values(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        n = self._index(x)
        inside = (x >= 0.0) & (x < n * n + 1.0)
        if self.n_max is not None:
            inside &= n <= self.n_max
        out = np.zeros(x.shape)
        if np.any(inside):
            out[inside] = self.amplitude(n[inside])
        return out.reshape(-1, 1)

    def _n_range(self, a: float, b: float) -> np.ndarray:
        lo = int(self._index(np.array([max(a - 1.0, 0.0)]))[0])
        hi = int(self._index(np.array([max(b, 0.0)]))[0])
        if self.n_max is not None:
            hi = min(hi, self.n_max)
        return np.arange(max(lo, 0), hi + 1, dtype=float)

    def breakpoints(self, a: float, b: float) -> np.ndarray:
        n = self._n_range(a, b)
        if n.size == 0:
            return np.empty(0)
        pts = np.concatenate([n * n, n * n + 1.0])
        pts = merge_breakpoints(pts)
        return pts[(pts > a) & (pts < b)]

    def sup_norm(self, a: float, b: float) -> float:
        n = self._n_range(a, b)
        n = n[(n * n + 1.0 > a) & (n * n < b)]
        return float(np.max(np.abs(self.amplitude(n)))) if n.size else 0.0

    def __repr__(self) -> str:
        extra = f", n_max={self.n_max}" if self.n_max is not None else ""
        return f"SpikeTrain({self.rule!r}{extra})"


class Periodic(FunctionSpec):
    """Periodic extension ``x -> base(x mod period)`` of a function on ``[0, period)``."""

    def __init__(self, base: FunctionSpec, period: float):
        if not period > 0:
            raise ValueError("period must be positive")
        self.base = base
        self.period = float(period)
        self.dim = base.dim
        self.exact = base.exact

    def values(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.base.values(np.mod(x, self.period))

    def breakpoints(self, a: float, b: float) -> np.ndarray:
        P = self.period
        inner = np.concatenate([[0.0], self.base.breakpoints(0.0, P)])
        k0, k1 = math.floor(a / P), math.ceil(b / P)
        if k1 - k0 > 2_000_000:
            raise ValueError("too many periods in the requested interval")
        ks = np.arange(k0, k1 + 1, dtype=float)
        pts = (ks[:, None] * P + inner[None, :]).ravel()
        pts = merge_breakpoints(pts)
        return pts[(pts > a) & (pts < b)]

    def sup_norm(self, a: float, b: float) -> float:
        if b - a >= self.period:
            return self.base.sup_norm(0.0, self.period)
        return super().sup_norm(a, b)

    def __repr__(self) -> str:
        return f"Periodic({self.base!r}, {self.period:g})"


class Sinusoid(FunctionSpec):
    """``amplitude * sin(frequency * x + phase)``; ``frequency`` is angular."""

    def __init__(self, frequency: float = 1.0, phase: float = 0.0, amplitude: float = 1.0):
        self.frequency = float(frequency)
        self.phase = float(phase)
        self.amplitude = float(amplitude)

    def values(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return (self.amplitude * np.sin(self.frequency * x + self.phase)).reshape(-1, 1)

    @property
    def period(self) -> float:
        return 2.0 * math.pi / abs(self.frequency) if self.frequency else math.inf

    def sup_norm(self, a: float, b: float) -> float:
        if self.frequency == 0.0:
            return abs(self.amplitude * math.sin(self.phase))
        if (b - a) >= self.period:
            return abs(self.amplitude)
        return super().sup_norm(a, b)

    def __repr__(self) -> str:
        return f"Sinusoid(frequency={self.frequency:g}, phase={self.phase:g}, amplitude={self.amplitude:g})"


class Sampled(FunctionSpec):
    """Linear interpolation of samples; constant continuation outside the grid."""

    def __init__(self, grid, values, lower: float = -math.inf):
        g = np.asarray(grid, dtype=float).ravel()
        if g.size < 2 or np.any(np.diff(g) <= 0):
            raise ValueError("sample grid must be strictly increasing with at least two points")
        v = np.asarray(values, dtype=float)
        v = v.reshape(g.size, -1)
        self.grid = g
        self.samples = v
        self.dim = v.shape[1]
        self.lower = float(lower)

    def values(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.column_stack([np.interp(x, self.grid, self.samples[:, j]) for j in range(self.dim)])

    def breakpoints(self, a: float, b: float) -> np.ndarray:
        return self.grid[(self.grid > a) & (self.grid < b)]

    def __repr__(self) -> str:
        return f"Sampled(n={self.grid.size})"


class CallableFunction(FunctionSpec):
    """A vectorized callable ``x -> values``.

    Parameters
    ----------
    fn : callable
        Maps an array of shape ``(n,)`` to shape ``(n,)`` or ``(n, dim)``.
    breaks : sequence of float
        Known kinks or jumps.
    singular : sequence of (point, power)
        Integrable singularities ``|x - x0|**power``.
    """

    def __init__(self, fn: Callable, dim: int = 1, lower: float = -math.inf, breaks: Sequence[float] = (),
                 singular: Sequence[tuple[float, float]] = (), name: str = "callable", nonnegative: bool = False):
        self.fn = fn
        self.dim = int(dim)
        self.lower = float(lower)
        self._breaks = merge_breakpoints(list(breaks))
        self._singular = [(float(a), float(s)) for a, s in singular]
        self.name = name
        self.nonnegative = nonnegative

    def values(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.asarray(self.fn(x), dtype=float)
        if out.ndim == 0:
            out = np.full(x.shape, float(out))
        return out.reshape(x.size, self.dim)

    def breakpoints(self, a: float, b: float) -> np.ndarray:
        return self._breaks[(self._breaks > a) & (self._breaks < b)]

    def singularities(self, a: float, b: float) -> list[tuple[float, float]]:
        return [(x0, s) for x0, s in self._singular if a <= x0 <= b]

    def __repr__(self) -> str:
        return f"CallableFunction({self.name})"


class Scale(FunctionSpec):
    """``c * inner``."""

    def __init__(self, c: float, inner: FunctionSpec):
        self.c = float(c)
        self.inner = inner
        self.dim = inner.dim
        self.lower = inner.lower
        self.exact = inner.exact
        self.nonnegative = inner.nonnegative and self.c >= 0

    def values(self, x) -> np.ndarray:
        return self.c * self.inner.values(x)

    def breakpoints(self, a, b):
        return self.inner.breakpoints(a, b)

    def singularities(self, a, b):
        return self.inner.singularities(a, b) if self.c != 0 else []

    def sup_norm(self, a, b):
        return abs(self.c) * self.inner.sup_norm(a, b)

    def __repr__(self) -> str:
        return f"Scale({self.c:g}, {self.inner!r})"


class Sum(FunctionSpec):
    """Sum of functions of equal dimension; the domain is the intersection."""

    def __init__(self, parts: Sequence[FunctionSpec]):
        parts = list(parts)
        if not parts:
            raise ValueError("Sum needs at least one part")
        dims = {p.dim for p in parts}
        if len(dims) != 1:
            raise ValueError("Sum parts must share a dimension")
        self.parts = parts
        self.dim = parts[0].dim
        self.lower = max(p.lower for p in parts)
        self.exact = all(p.exact for p in parts)

    def values(self, x) -> np.ndarray:
        out = self.parts[0].values(x)
        for p in self.parts[1:]:
            out = out + p.values(x)
        return out

    def breakpoints(self, a, b):
        return merge_breakpoints(np.concatenate([p.breakpoints(a, b) for p in self.parts]))

    def singularities(self, a, b):
        return [s for p in self.parts for s in p.singularities(a, b)]

    def sup_norm(self, a, b):
        if self.exact:
            return super().sup_norm(a, b)
        return float(sum(p.sup_norm(a, b) for p in self.parts))

    def __repr__(self) -> str:
        return "Sum(" + ", ".join(repr(p) for p in self.parts) + ")"


class Translate(FunctionSpec):
    """``x -> inner(x + tau)``."""

    def __init__(self, tau: float, inner: FunctionSpec):
        self.tau = float(tau)
        self.inner = inner
        self.dim = inner.dim
        self.lower = inner.lower - self.tau
        self.exact = inner.exact
        self.nonnegative = inner.nonnegative

    def values(self, x) -> np.ndarray:
        return self.inner.values(np.asarray(x, dtype=float) + self.tau)

    def breakpoints(self, a, b):
        return self.inner.breakpoints(a + self.tau, b + self.tau) - self.tau

    def singularities(self, a, b):
        return [(x0 - self.tau, s) for x0, s in self.inner.singularities(a + self.tau, b + self.tau)]

    def sup_norm(self, a, b):
        return self.inner.sup_norm(a + self.tau, b + self.tau)

    def __repr__(self) -> str:
        return f"Translate({self.tau:g}, {self.inner!r})"


class Reflect(FunctionSpec):
    """``x -> inner(-x)`` for a function on the real line."""

    def __init__(self, inner: FunctionSpec):
        if inner.lower != -math.inf:
            raise DomainError("reflection needs a function on the whole real line")
        self.inner = inner
        self.dim = inner.dim
        self.exact = inner.exact
        self.nonnegative = inner.nonnegative

    def values(self, x) -> np.ndarray:
        return self.inner.values(-np.asarray(x, dtype=float))

    def breakpoints(self, a, b):
        return np.sort(-self.inner.breakpoints(-b, -a))

    def singularities(self, a, b):
        return [(-x0, s) for x0, s in self.inner.singularities(-b, -a)]

    def __repr__(self) -> str:
        return f"Reflect({self.inner!r})"


class Restrict(FunctionSpec):
    """Restriction of ``inner`` to ``[lower, inf)``."""

    def __init__(self, inner: FunctionSpec, lower: float = 0.0):
        self.inner = inner
        self.dim = inner.dim
        self.lower = max(float(lower), inner.lower)
        self.exact = inner.exact
        self.nonnegative = inner.nonnegative

    def values(self, x):
        return self.inner.values(x)

    def breakpoints(self, a, b):
        return self.inner.breakpoints(a, b)

    def singularities(self, a, b):
        return self.inner.singularities(a, b)

    def sup_norm(self, a, b):
        return self.inner.sup_norm(a, b)

    def __repr__(self) -> str:
        return f"Restrict({self.inner!r}, {self.lower:g})"


class NormOf(FunctionSpec):
    """Scalar function ``x -> ||inner(x)||``."""

    nonnegative = True

    def __init__(self, inner: FunctionSpec):
        self.inner = inner
        self.lower = inner.lower
        self.exact = inner.exact

    def values(self, x):
        return self.inner.norms(x).reshape(-1, 1)

    def breakpoints(self, a, b):
        return self.inner.breakpoints(a, b)

    def singularities(self, a, b):
        return self.inner.singularities(a, b)

    def sup_norm(self, a, b):
        return self.inner.sup_norm(a, b)

    def __repr__(self) -> str:
        return f"NormOf({self.inner!r})"


class Mapped(FunctionSpec):
    """Scalar function ``x -> phi(inner(x))`` for non-negative scalar ``inner``."""

    nonnegative = True

    def __init__(self, phi: "PhiSpec", inner: FunctionSpec):
        if inner.dim != 1:
            raise ValueError("Mapped expects a scalar inner function")
        self.phi = phi
        self.inner = inner
        self.lower = inner.lower
        self.exact = inner.exact

    def values(self, x):
        return self.phi(self.inner.values(x)[:, 0]).reshape(-1, 1)

    def breakpoints(self, a, b):
        return self.inner.breakpoints(a, b)

    def singularities(self, a, b):
        g = self.phi.growth_power
        return [(x0, s * g) for x0, s in self.inner.singularities(a, b)] if g is not None else []

    def sup_norm(self, a, b):
        if self.phi.increasing:
            return float(self.phi(np.array([self.inner.sup_norm(a, b)]))[0])
        return super().sup_norm(a, b)

    def __repr__(self) -> str:
        return f"Mapped({self.phi!r}, {self.inner!r})"


class Product(FunctionSpec):
    """``x -> inner(x) * scalar(x)``."""

    def __init__(self, inner: FunctionSpec, scalar: FunctionSpec):
        if scalar.dim != 1:
            raise ValueError("second factor must be scalar")
        self.inner = inner
        self.scalar = scalar
        self.dim = inner.dim
        self.lower = max(inner.lower, scalar.lower)
        self.exact = inner.exact and scalar.exact

    def values(self, x):
        return self.inner.values(x) * self.scalar.values(x)

    def breakpoints(self, a, b):
        return merge_breakpoints(np.concatenate([self.inner.breakpoints(a, b), self.scalar.breakpoints(a, b)]))

    def singularities(self, a, b):
        return self.inner.singularities(a, b) + self.scalar.singularities(a, b)

    def __repr__(self) -> str:
        return f"Product({self.inner!r}, {self.scalar!r})"


def magnitude(f: FunctionSpec) -> FunctionSpec:
    """Return a non-negative scalar function equal to ``||f||``."""
    if f.nonnegative and f.dim == 1:
        return f
    return NormOf(f)


def difference(f: FunctionSpec, tau: float) -> FunctionSpec:
    """The scalar function ``x -> ||f(x + tau) - f(x)||``.

    Piecewise-constant inputs give piecewise-constant outputs.
    """
    if tau == 0.0:
        return Constant(0.0, lower=f.lower)
    return NormOf(Sum([Translate(tau, f), Scale(-1.0, f)]))


def exact_power_integral(f: FunctionSpec, p: float, a: float, b: float) -> float:
    """Exact ``int_a^b ||f(x)||**p dx`` for a piecewise-constant ``f``.

    Raises
    ------
    NotExactlyIntegrable
        If ``f`` is not piecewise constant.
    """
    if not f.exact:
        raise NotExactlyIntegrable(f"{f!r} is not exactly integrable")
    if not b > a:
        raise ValueError("need a < b")
    edges, vals = f.pieces(a, b)
    widths = np.diff(edges)
    mags = np.linalg.norm(vals, axis=1)
    return float(np.sum(widths * mags ** float(p)))


def reflect(g: FunctionSpec) -> FunctionSpec:
    """The reflection ``t -> g(-t)``."""
    return Reflect(g)


# ---------------------------------------------------------------------------
# Exponents
# ---------------------------------------------------------------------------


class ExponentSpec:
    """Variable exponent ``p(.)`` with values in ``[1, inf]``.

    Attributes
    ----------
    p_minus, p_plus : float
        Essential infimum and supremum.
    piecewise : bool
        True when the exponent is piecewise constant (constant included).
    """

    p_minus: float
    p_plus: float
    piecewise: bool = True

    def __call__(self, x) -> np.ndarray:
        raise NotImplementedError

    @property
    def is_constant(self) -> bool:
        return self.p_minus == self.p_plus

    @property
    def in_D_plus(self) -> bool:
        return self.p_plus < math.inf

    @property
    def in_C_plus(self) -> bool:
        return self.p_minus > 1.0 and self.p_plus < math.inf

    def segments(self) -> tuple[np.ndarray, np.ndarray]:
        """``(breaks, values)`` with ``len(values) == len(breaks) + 1``."""
        raise NotImplementedError(f"{self!r} is not piecewise constant")

    def conjugate(self) -> "ExponentSpec":
        """The exponent ``q`` with ``1/p + 1/q = 1``."""
        raise NotImplementedError

    def reciprocal(self, x) -> np.ndarray:
        """``1 / p(x)`` with ``1 / inf = 0``."""
        return 1.0 / np.asarray(self(x), dtype=float)


def _check_exponent_values(vals) -> None:
    vals = np.asarray(vals, dtype=float)
    if np.any(np.isnan(vals)):
        raise ValueError("exponent is undefined somewhere")
    if np.any(vals < 1.0):
        raise ValueError("exponent below 1")


def _conj(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.where(p == 1.0, np.inf, np.where(np.isinf(p), 1.0, p / (p - 1.0)))
    return q


class ConstantExponent(ExponentSpec):
    """``p(x) = p0`` everywhere (``p0 = inf`` allowed)."""

    def __init__(self, p0: float):
        _check_exponent_values([p0])
        self.p0 = float(p0)
        self.p_minus = self.p_plus = self.p0

    def __call__(self, x):
        return np.full(np.shape(x), self.p0, dtype=float)

    def segments(self):
        return np.empty(0), np.array([self.p0])

    def conjugate(self):
        return ConstantExponent(float(_conj(np.array([self.p0]))[0]))

    def __repr__(self) -> str:
        return f"ConstantExponent({self.p0:g})"


class PiecewiseConstantExponent(ExponentSpec):
    """Exponent equal to ``values[j]`` between ``breaks[j-1]`` and ``breaks[j]``.

    The first value holds on ``(-inf, breaks[0])`` and the last on
    ``[breaks[-1], inf)``.  At a break the value on the right is used.
    """

    def __init__(self, breaks: Sequence[float], values: Sequence[float]):
        b = np.asarray(breaks, dtype=float).ravel()
        v = np.asarray(values, dtype=float).ravel()
        if v.size != b.size + 1:
            raise ValueError("need len(values) == len(breaks) + 1")
        if b.size and np.any(np.diff(b) <= 0):
            raise ValueError("exponent breaks must be strictly increasing")
        _check_exponent_values(v)
        self._b, self._v = b, v
        self.p_minus, self.p_plus = float(v.min()), float(v.max())

    def __call__(self, x):
        return self._v[np.searchsorted(self._b, np.asarray(x, dtype=float), side="right")]

    def segments(self):
        return self._b.copy(), self._v.copy()

    def conjugate(self):
        return PiecewiseConstantExponent(self._b, _conj(self._v))

    def __repr__(self) -> str:
        return f"PiecewiseConstantExponent({self._b.tolist()}, {self._v.tolist()})"


class CallableExponent(ExponentSpec):
    """Bounded measurable exponent given by a vectorized callable.

    Parameters
    ----------
    fn : callable
        Finite values in ``[p_minus, p_plus]``.
    p_minus, p_plus : float
        Declared essential bounds, checked on a sample grid.
    audit_range : (float, float)
        Interval used for the sample check.
    """

    piecewise = False

    def __init__(self, fn: Callable, p_minus: float, p_plus: float, audit_range=(-64.0, 64.0), name: str = "callable"):
        _check_exponent_values([p_minus, p_plus])
        if p_plus < p_minus:
            raise ValueError("p_minus must not exceed p_plus")
        if math.isinf(p_plus):
            raise ValueError("infinite values are only allowed in piecewise-constant exponents")
        self.fn = fn
        self.p_minus, self.p_plus = float(p_minus), float(p_plus)
        self.name = name
        xs = np.linspace(audit_range[0], audit_range[1], 4097)
        vals = np.asarray(fn(xs), dtype=float)
        _check_exponent_values(vals)
        if np.any(vals < self.p_minus - 1e-12) or np.any(vals > self.p_plus + 1e-12):
            raise ValueError("exponent values leave the declared [p_minus, p_plus] range")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(np.asarray(self.fn(x), dtype=float), x.shape).copy()

    def conjugate(self):
        if self.p_minus <= 1.0:
            raise ValueError("conjugate of a callable exponent touching 1 is unbounded; use a piecewise exponent")
        lo = float(_conj(np.array([self.p_plus]))[0])
        hi = float(_conj(np.array([self.p_minus]))[0])
        return CallableExponent(lambda x: _conj(self.fn(x)), lo, hi, name=f"conj({self.name})")

    def __repr__(self) -> str:
        return f"CallableExponent({self.name}, [{self.p_minus:g}, {self.p_plus:g}])"


# ---------------------------------------------------------------------------
# Auxiliary maps phi
# ---------------------------------------------------------------------------


class PhiSpec:
    """Map ``phi: [0, inf) -> [0, inf)`` with declared structural flags.

    Flags are audited on random samples at construction; a declared flag
    that fails the audit raises ``ValueError``.

    Parameters
    ----------
    fn : callable
        Vectorized map.
    name : str
    convex, concave, increasing, subadditive, zero_at_zero, bijection : bool
    varphi : callable, optional
        A companion with ``phi(l x) <= varphi(l) phi(x)``.
    inverse : callable, optional
        Inverse on the range, used by :meth:`sup_preimage`.
    sup_value : float
        ``sup phi`` (``inf`` for unbounded maps).
    growth_power : float, optional
        ``a`` with ``phi(x) ~ x**a`` near zero and infinity; used to grade
        quadrature at singular points.
    """

    def __init__(self, fn: Callable, name: str, *, convex=False, concave=False, increasing=True,
                 subadditive=False, zero_at_zero=True, bijection=False, varphi: Callable | None = None,
                 inverse: Callable | None = None, sup_value: float = math.inf, growth_power: float | None = None,
                 audit: bool = True):
        self.fn = fn
        self.name = name
        self.convex = convex
        self.concave = concave
        self.increasing = increasing
        self.subadditive = subadditive
        self.zero_at_zero = zero_at_zero
        self.bijection = bijection
        self.varphi = varphi
        self._inverse = inverse
        self.sup_value = float(sup_value)
        self.growth_power = growth_power
        if audit:
            self._audit()

    def __call__(self, x):
        return np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=float)

    def _audit(self) -> None:
        rng = np.random.default_rng(_AUDIT_SEED)
        x = rng.uniform(0.0, 10.0, 400)
        y = rng.uniform(0.0, 10.0, 400)
        fx, fy = self(x), self(y)
        scale = 1e-9 * (1.0 + np.abs(fx) + np.abs(fy))
        if np.any(fx < 0) or np.any(~np.isfinite(fx)):
            raise ValueError(f"phi {self.name!r} must map [0, inf) into [0, inf)")
        mid = self(0.5 * (x + y))
        if self.convex and np.any(mid > 0.5 * (fx + fy) + scale):
            raise ValueError(f"phi {self.name!r} declared convex but fails the audit")
        if self.concave and np.any(mid < 0.5 * (fx + fy) - scale):
            raise ValueError(f"phi {self.name!r} declared concave but fails the audit")
        if self.increasing:
            s = np.sort(x)
            if np.any(np.diff(self(s)) < -1e-12 * (1.0 + np.abs(self(s[1:])))):
                raise ValueError(f"phi {self.name!r} declared increasing but fails the audit")
        if self.subadditive and np.any(self(x + y) > fx + fy + scale):
            raise ValueError(f"phi {self.name!r} declared subadditive but fails the audit")
        if self.zero_at_zero and abs(float(self(np.array([0.0]))[0])) > 1e-15:
            raise ValueError(f"phi {self.name!r} declared zero at zero but phi(0) != 0")
        if self.varphi is not None:
            ls = rng.uniform(0.01, 20.0, 400)
            lhs = self(ls * x)
            rhs = np.asarray(self.varphi(ls), dtype=float) * fx
            if np.any(lhs > rhs + 1e-9 * (1.0 + np.abs(rhs))):
                raise ValueError(f"varphi of {self.name!r} fails phi(l x) <= varphi(l) phi(x)")

    def sup_preimage(self, y: float) -> float:
        """``sup { x >= 0 : phi(x) <= y }`` for an increasing ``phi``."""
        if not self.increasing:
            raise ValueError("sup_preimage needs an increasing phi")
        if y < 0:
            return -math.inf
        if y >= self.sup_value:
            return math.inf
        if self._inverse is not None:
            return float(self._inverse(y))
        lo, hi = 0.0, 1.0
        while float(self(np.array([hi]))[0]) <= y:
            lo, hi = hi, 2.0 * hi
            if hi > 1e300:
                return math.inf
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if float(self(np.array([mid]))[0]) <= y:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-15 * hi:
                break
        return lo

    def __repr__(self) -> str:
        return f"PhiSpec({self.name})"


class IdentityPhi(PhiSpec):
    """``phi(x) = x`` with ``varphi(l) = l``."""

    def __init__(self):
        super().__init__(lambda x: x, "identity", convex=True, concave=True, increasing=True, subadditive=True,
                         zero_at_zero=True, bijection=True, varphi=lambda l: np.asarray(l, dtype=float),
                         inverse=lambda y: y, growth_power=1.0)

    def __repr__(self) -> str:
        return "IdentityPhi()"


class PowerPhi(PhiSpec):
    """``phi(x) = x**alpha`` with ``varphi(l) = l**alpha``."""

    def __init__(self, alpha: float):
        if not alpha > 0:
            raise ValueError("power must be positive")
        a = float(alpha)
        self.alpha = a
        super().__init__(lambda x, a=a: np.power(x, a), f"power({a:g})", convex=a >= 1, concave=a <= 1,
                         increasing=True, subadditive=a <= 1, zero_at_zero=True, bijection=True,
                         varphi=lambda l, a=a: np.power(np.asarray(l, dtype=float), a),
                         inverse=lambda y, a=a: y ** (1.0 / a), growth_power=a)

    def __repr__(self) -> str:
        return f"PowerPhi({self.alpha:g})"


_CATALOG = {
    "expm1": dict(fn=np.expm1, convex=True, concave=False, subadditive=False, bijection=True,
                  inverse=np.log1p, growth_power=1.0),
    "log1p": dict(fn=np.log1p, convex=False, concave=True, subadditive=True, bijection=True,
                  inverse=np.expm1, growth_power=None),
    "cosh1": dict(fn=lambda x: np.cosh(x) - 1.0, convex=True, concave=False, subadditive=False, bijection=True,
                  inverse=lambda y: float(np.arccosh(y + 1.0)), growth_power=None),
    "ratio": dict(fn=lambda x: x / (1.0 + x), convex=False, concave=True, subadditive=True, bijection=False,
                  inverse=lambda y: y / (1.0 - y), sup_value=1.0, growth_power=None),
    "square": dict(fn=np.square, convex=True, concave=False, subadditive=False, bijection=True,
                   inverse=math.sqrt, growth_power=2.0, varphi=np.square),
    "sqrt": dict(fn=np.sqrt, convex=False, concave=True, subadditive=True, bijection=True,
                 inverse=lambda y: y * y, growth_power=0.5, varphi=np.sqrt),
}


class CatalogPhi(PhiSpec):
    """Named entries: ``expm1``, ``log1p``, ``cosh1`` (cosh - 1), ``ratio`` (x / (1 + x)), ``square``, ``sqrt``."""

    def __init__(self, name: str):
        if name not in _CATALOG:
            raise ValueError(f"unknown phi {name!r}; known: {sorted(_CATALOG)}")
        spec = dict(_CATALOG[name])
        fn = spec.pop("fn")
        super().__init__(fn, name, increasing=True, zero_at_zero=True, **spec)

    def __repr__(self) -> str:
        return f"CatalogPhi({self.name!r})"


# ---------------------------------------------------------------------------
# Weights F(l, t)
# ---------------------------------------------------------------------------


class WeightSpec:
    """Positive weight ``F(l, t)``.

    Attributes
    ----------
    t_independent : bool
    condition_d : bool
        True when ``F(l, t) / F(l, t + tau0)`` is bounded (translation
        condition).
    """

    t_independent: bool = False
    condition_d: bool = False
    name: str = "F"

    def __call__(self, l, t) -> np.ndarray:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name})"


class PowerOfL(WeightSpec):
    """``F(l, t) = l**sigma``."""

    t_independent = True
    condition_d = True

    def __init__(self, sigma: float):
        self.sigma = float(sigma)
        self.name = f"l^{self.sigma:g}"

    def __call__(self, l, t):
        l = np.asarray(l, dtype=float)
        return np.broadcast_to(l ** self.sigma, np.broadcast(l, np.asarray(t, dtype=float)).shape).astype(float)


class PsiPower(WeightSpec):
    """``F(l, t) = psi(l) ** (-1 / p(t))``.

    Parameters
    ----------
    psi : callable
        Positive function of ``l``.
    p : ExponentSpec
    """

    def __init__(self, psi: Callable, p: ExponentSpec, name: str = "psi"):
        self.psi = psi
        self.p = p
        self.name = name
        self.t_independent = p.is_constant
        self.condition_d = p.is_constant

    @classmethod
    def power(cls, sigma: float, p: ExponentSpec) -> "PsiPower":
        """``psi(l) = l**sigma``, so ``F = l**(-sigma / p(t))``."""
        w = cls(lambda l, s=float(sigma): np.asarray(l, dtype=float) ** s, p, name=f"psi=l^{sigma:g}")
        w.sigma = float(sigma)
        return w

    def __call__(self, l, t):
        l = np.asarray(l, dtype=float)
        t = np.asarray(t, dtype=float)
        inv_p = 1.0 / self.p(t)
        return np.asarray(self.psi(l), dtype=float) ** (-inv_p)


class ConstantOne(WeightSpec):
    """``F(l, t) = 1``."""

    t_independent = True
    condition_d = True
    name = "1"

    def __call__(self, l, t):
        return np.ones(np.broadcast(np.asarray(l, dtype=float), np.asarray(t, dtype=float)).shape)

    def __repr__(self) -> str:
        return "ConstantOne()"


class CustomWeight(WeightSpec):
    """Weight from a vectorized callable ``fn(l, t)``."""

    def __init__(self, fn: Callable, t_independent: bool = False, condition_d: bool = False, name: str = "custom"):
        self.fn = fn
        self.t_independent = t_independent
        self.condition_d = condition_d
        self.name = name

    def __call__(self, l, t):
        l = np.asarray(l, dtype=float)
        t = np.asarray(t, dtype=float)
        return np.broadcast_to(np.asarray(self.fn(l, t), dtype=float), np.broadcast(l, t).shape).astype(float)


# ---------------------------------------------------------------------------
# Kernels R(t)
# ---------------------------------------------------------------------------


class KernelSpec:
    """Scalar kernel ``t -> ||R(t)||`` on ``(0, inf)``; zero for ``t <= 0``."""

    M: float = 1.0
    beta: float = 1.0
    support: float = math.inf
    """Right end of the support of ``R``."""
    monotone: bool = True
    """True when ``R`` is nonincreasing on ``(0, inf)``."""

    def __call__(self, t) -> np.ndarray:
        raise NotImplementedError

    @property
    def singular_power(self) -> float:
        """Exponent ``s`` with ``R(t) ~ t**s`` as ``t -> 0+``."""
        return self.beta - 1.0

    def integral(self, a: float, b: float) -> float:
        """Exact ``int_a^b R``, ``0 <= a <= b <= inf``."""
        raise NotImplementedError

    def total(self) -> float:
        return self.integral(0.0, math.inf)

    def cumulative(self, u) -> np.ndarray:
        """Vectorized ``int_0^u R`` (zero for ``u <= 0``)."""
        u = np.asarray(u, dtype=float)
        return np.vectorize(lambda b: self.integral(0.0, b) if b > 0 else 0.0, otypes=[float])(u)

    def mass(self, a, b) -> np.ndarray:
        """Vectorized ``int_a^b R`` for ``a <= b``.

        Kernels with a closed-form upper tail override this so that small
        masses far from the origin keep their relative accuracy.
        """
        return self.cumulative(b) - self.cumulative(a)

    def window_inf(self, lo: float, hi: float) -> float:
        """``inf R`` over ``[lo, hi]`` (nonincreasing kernels: the value at ``hi``)."""
        if lo < 0.0 or hi > self.support:
            return 0.0
        return float(self(np.array([hi]))[0])

    def tail_integral(self, T: float) -> float:
        """``int_T^inf R``."""
        return self.integral(max(T, 0.0), math.inf)

    def window_sup(self, lo: float, hi: float) -> float:
        """``sup R`` over ``[lo, hi]`` (the kernels here are nonincreasing)."""
        if lo <= 0.0:
            return math.inf if self.singular_power < 0 else float(self(np.array([1e-300]))[0])
        return float(self(np.array([lo]))[0])

    def fourier(self, omega: float) -> complex:
        """``int_0^inf R(v) exp(-i omega v) dv``."""
        raise NotImplementedError

    def as_function(self) -> FunctionSpec:
        """The kernel as a half-line scalar function (zero for ``t <= 0``)."""
        return CallableFunction(self.__call__, lower=-math.inf, breaks=self._breaks(),
                                singular=[(0.0, self.singular_power)] if self.singular_power < 0 else [],
                                name=repr(self), nonnegative=True)

    def _breaks(self):
        return [0.0]

    @property
    def is_zero(self) -> bool:
        return False


class PolyDecay(KernelSpec):
    """``R(t) = M t**(beta - 1) / (1 + t**gamma)``."""

    def __init__(self, M: float = 1.0, beta: float = 1.0, gamma: float = 2.0):
        if not M > 0:
            raise ValueError("M must be positive")
        if not 0 < beta <= 1:
            raise ValueError("beta must lie in (0, 1]")
        if not gamma > 1:
            raise ValueError("gamma must exceed 1")
        self.M, self.beta, self.gamma = float(M), float(beta), float(gamma)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape)
        pos = t > 0
        tp = t[pos]
        out[pos] = self.M * tp ** (self.beta - 1.0) / (1.0 + tp ** self.gamma)
        return out

    def _head(self, b: float) -> float:
        """``int_0^b t^(beta-1)/(1+t^gamma)`` for ``b <= 1``."""
        if b <= 0:
            return 0.0
        bg, g = self.beta / self.gamma, self.gamma
        return b ** self.beta / self.beta * float(special.hyp2f1(1.0, bg, 1.0 + bg, -(b ** g)))

    def _tail(self, b: float) -> float:
        """``int_b^inf t^(beta-1)/(1+t^gamma)`` for ``b >= 1``."""
        if math.isinf(b):
            return 0.0
        c = (self.gamma - self.beta) / self.gamma
        return b ** (self.beta - self.gamma) / (self.gamma - self.beta) * float(
            special.hyp2f1(1.0, c, 1.0 + c, -(b ** (-self.gamma))))

    def _full(self) -> float:
        return (math.pi / self.gamma) / math.sin(math.pi * self.beta / self.gamma)

    def _upper(self, b: float) -> float:
        """``int_b^inf`` for any ``b >= 0``."""
        if b >= 1.0:
            return self._tail(b)
        return self._full() - self._head(b)

    def integral(self, a, b):
        a, b = max(float(a), 0.0), float(b)
        if b <= a:
            return 0.0
        if b <= 1.0:
            val = self._head(b) - self._head(a)
        elif a >= 1.0:
            val = self._tail(a) - self._tail(b)
        else:
            val = (self._head(1.0) - self._head(a)) + (self._tail(1.0) - self._tail(b))
        return self.M * val

    def cumulative(self, u):
        u = np.asarray(u, dtype=float)
        out = np.zeros(u.shape)
        bg, g, b = self.beta / self.gamma, self.gamma, self.beta
        head = (u > 0) & (u <= 1.0)
        uh = u[head]
        out[head] = uh ** b / b * special.hyp2f1(1.0, bg, 1.0 + bg, -(uh ** g))
        far = u > 1.0
        uf = u[far]
        c = (g - b) / g
        tail = np.where(np.isinf(uf), 0.0, uf ** (b - g) / (g - b) * special.hyp2f1(1.0, c, 1.0 + c, -(uf ** (-g))))
        out[far] = self._full() - tail
        return self.M * out

    def _upper_vec(self, u: np.ndarray) -> np.ndarray:
        """``int_u^inf R / M`` for ``u >= 1``."""
        c = (self.gamma - self.beta) / self.gamma
        return np.where(np.isinf(u), 0.0, u ** (self.beta - self.gamma) / (self.gamma - self.beta)
                        * special.hyp2f1(1.0, c, 1.0 + c, -(np.minimum(u, 1e300) ** (-self.gamma))))

    def mass(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
        far = a >= 1.0
        out = np.zeros(a.shape)
        if np.any(far):
            out[far] = self.M * (self._upper_vec(a[far]) - self._upper_vec(b[far]))
        if np.any(~far):
            out[~far] = self.cumulative(b[~far]) - self.cumulative(a[~far])
        return out

    def tail_lq_bound(self, T: float, q: float) -> float:
        """Upper bound of ``int_T^inf R**q`` for ``T > 0``."""
        e = q * (self.beta - 1.0 - self.gamma)
        return self.M ** q * T ** (e + 1.0) / (-(e + 1.0)) if e < -1 else math.inf

    def fourier(self, omega):
        from .quadrature import fourier_half_line

        return fourier_half_line(self, omega)

    def __repr__(self) -> str:
        return f"PolyDecay(M={self.M:g}, beta={self.beta:g}, gamma={self.gamma:g})"


class ExpDecay(KernelSpec):
    """``R(t) = M t**(beta - 1) exp(-c t)``."""

    def __init__(self, M: float = 1.0, beta: float = 1.0, c: float = 1.0):
        if not M > 0:
            raise ValueError("M must be positive")
        if not 0 < beta <= 1:
            raise ValueError("beta must lie in (0, 1]")
        if not c > 0:
            raise ValueError("c must be positive")
        self.M, self.beta, self.c = float(M), float(beta), float(c)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape)
        pos = t > 0
        tp = t[pos]
        out[pos] = self.M * tp ** (self.beta - 1.0) * np.exp(-self.c * tp)
        return out

    def integral(self, a, b):
        a, b = max(float(a), 0.0), float(b)
        if b <= a:
            return 0.0
        s = self.beta
        scale = self.M * math.gamma(s) / self.c ** s
        xa, xb = self.c * a, (math.inf if math.isinf(b) else self.c * b)
        if xa > s:
            upper_b = 0.0 if math.isinf(xb) else float(special.gammaincc(s, xb))
            return scale * (float(special.gammaincc(s, xa)) - upper_b)
        lower_b = 1.0 if math.isinf(xb) else float(special.gammainc(s, xb))
        return scale * (lower_b - float(special.gammainc(s, xa)))

    def cumulative(self, u):
        u = np.asarray(u, dtype=float)
        s = self.beta
        scale = self.M * math.gamma(s) / self.c ** s
        return scale * special.gammainc(s, self.c * np.maximum(u, 0.0))

    def mass(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
        s = self.beta
        scale = self.M * math.gamma(s) / self.c ** s
        xa, xb = self.c * np.maximum(a, 0.0), self.c * np.maximum(b, 0.0)
        far = xa > s
        return scale * np.where(far, special.gammaincc(s, xa) - special.gammaincc(s, xb),
                                special.gammainc(s, xb) - special.gammainc(s, xa))

    def tail_lq_bound(self, T: float, q: float) -> float:
        """Upper bound of ``int_T^inf R**q`` for ``T > 0``."""
        return (self.M * T ** (self.beta - 1.0)) ** q * math.exp(-q * self.c * T) / (q * self.c)

    def fourier(self, omega):
        return complex(self.M * math.gamma(self.beta) / (complex(self.c, float(omega)) ** self.beta))

    def __repr__(self) -> str:
        return f"ExpDecay(M={self.M:g}, beta={self.beta:g}, c={self.c:g})"


class TableKernel(KernelSpec):
    """Tabulated kernel: linear interpolation on ``(0, t_max]``, zero beyond.

    Left of the first sample the first value is held.  A table of zeros is
    the zero kernel.
    """

    beta = 1.0

    def __init__(self, t, values):
        t = np.asarray(t, dtype=float).ravel()
        v = np.asarray(values, dtype=float).ravel()
        if t.size < 2 or t.size != v.size or np.any(np.diff(t) <= 0) or t[0] < 0:
            raise ValueError("table needs increasing non-negative abscissae with matching values")
        if np.any(v < 0):
            raise ValueError("kernel norms are non-negative")
        self.t, self.v = t, v
        self.M = float(v.max()) if v.max() > 0 else 1.0
        self.support = float(t[-1])
        self.monotone = bool(np.all(np.diff(v) <= 0))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.interp(x, self.t, self.v, left=self.v[0], right=0.0)
        out[(x <= 0) | (x > self.t[-1])] = 0.0
        return out

    @property
    def singular_power(self) -> float:
        return 0.0

    @property
    def is_zero(self) -> bool:
        return bool(np.all(self.v == 0))

    def integral(self, a, b):
        a, b = max(float(a), 0.0), min(float(b), float(self.t[-1]))
        if b <= a:
            return 0.0
        nodes = np.concatenate([[a], self.t[(self.t > a) & (self.t < b)], [b]])
        vals = self(nodes)
        vals[0] = float(np.interp(a, self.t, self.v, left=self.v[0])) if a > 0 else self.v[0]
        vals[-1] = float(np.interp(b, self.t, self.v))
        return float(np.sum(0.5 * (vals[1:] + vals[:-1]) * np.diff(nodes)))

    def window_sup(self, lo, hi):
        lo, hi = max(lo, 0.0), min(hi, float(self.t[-1]))
        if hi < lo:
            return 0.0
        nodes = np.concatenate([[lo, hi], self.t[(self.t > lo) & (self.t < hi)]])
        return float(np.max(np.interp(nodes, self.t, self.v, left=self.v[0])))

    def window_inf(self, lo, hi):
        if lo < 0.0 or hi > self.t[-1]:
            return 0.0
        nodes = np.concatenate([[lo, hi], self.t[(self.t > lo) & (self.t < hi)]])
        return float(np.min(np.interp(nodes, self.t, self.v, left=self.v[0])))

    def tail_lq_bound(self, T: float, q: float) -> float:
        if T >= self.t[-1]:
            return 0.0
        return self.window_sup(T, self.t[-1]) ** q * (self.t[-1] - T)

    def fourier(self, omega):
        from .quadrature import integrate

        re = integrate(lambda v: self(v) * np.cos(omega * v), 0.0, float(self.t[-1]), breaks=self.t)[0]
        im = integrate(lambda v: -self(v) * np.sin(omega * v), 0.0, float(self.t[-1]), breaks=self.t)[0]
        return complex(re, im)

    def _breaks(self):
        return [0.0, *self.t.tolist()]

    def __repr__(self) -> str:
        return f"TableKernel(n={self.t.size}, t_max={self.t[-1]:g})"


# ---------------------------------------------------------------------------
# Sequences
# ---------------------------------------------------------------------------


class SequenceSpec:
    """Positive sequence ``(a_k)`` with a tail bound.

    Attributes
    ----------
    two_sided : bool
        Indexed by all integers when True.
    normalized : bool
        The terms sum to one.
    """

    two_sided: bool = False
    normalized: bool = True

    def term(self, k) -> np.ndarray:
        raise NotImplementedError

    def tail(self, K: int) -> float:
        """Mass of the terms with ``|k| >= K``."""
        raise NotImplementedError

    def terms(self, K: int) -> np.ndarray:
        """Terms ``a_0 .. a_{K-1}`` (one-sided)."""
        return self.term(np.arange(K))


class Geometric(SequenceSpec):
    """``a_k = (1 - r) r**k`` for ``k >= 0``."""

    def __init__(self, r: float = 0.5):
        if not 0 < r < 1:
            raise ValueError("ratio must lie in (0, 1)")
        self.r = float(r)

    def term(self, k):
        k = np.asarray(k, dtype=float)
        return (1.0 - self.r) * self.r ** k

    def tail(self, K):
        return self.r ** K

    def __repr__(self) -> str:
        return f"Geometric({self.r:g})"


class TwoSidedGeometric(SequenceSpec):
    """``a_k = (1 - r) / (1 + r) * r**|k|`` for all integers ``k``."""

    two_sided = True

    def __init__(self, r: float = 0.5):
        if not 0 < r < 1:
            raise ValueError("ratio must lie in (0, 1)")
        self.r = float(r)

    def term(self, k):
        k = np.abs(np.asarray(k, dtype=float))
        return (1.0 - self.r) / (1.0 + self.r) * self.r ** k

    def tail(self, K):
        return 2.0 * self.r ** K / (1.0 + self.r)

    def __repr__(self) -> str:
        return f"TwoSidedGeometric({self.r:g})"


class CustomSequence(SequenceSpec):
    """Sequence from a vectorized term function and a tail bound.

    When ``normalized`` is True the partial sums are checked against one
    within the declared tail bound.
    """

    def __init__(self, term_fn: Callable, tail_fn: Callable[[int], float], normalized: bool = True,
                 two_sided: bool = False, name: str = "custom"):
        self._term = term_fn
        self._tail = tail_fn
        self.normalized = normalized
        self.two_sided = two_sided
        self.name = name
        ks = np.arange(-200, 201) if two_sided else np.arange(400)
        vals = np.asarray(term_fn(ks), dtype=float)
        if np.any(vals <= 0):
            raise ValueError("sequence terms must be positive")
        if normalized:
            K = 200 if two_sided else 400
            if abs(vals.sum() - 1.0) > float(tail_fn(K)) + 1e-12:
                raise ValueError("normalized sequence does not sum to one within its tail bound")

    def term(self, k):
        return np.asarray(self._term(np.asarray(k)), dtype=float)

    def tail(self, K):
        return float(self._tail(K))

    def __repr__(self) -> str:
        return f"CustomSequence({self.name})"


# ---------------------------------------------------------------------------
# Grids
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    """An explicit, sorted set of sample points with a label of its origin."""

    points_: tuple[float, ...]
    kind: str = "explicit"

    @classmethod
    def uniform(cls, start: float, stop: float, step: float) -> "GridSpec":
        if not step > 0:
            raise ValueError("grid step must be positive")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return cls(tuple((start + step * np.arange(n)).tolist()), "uniform")

    @classmethod
    def linspace(cls, start: float, stop: float, num: int) -> "GridSpec":
        return cls(tuple(np.linspace(start, stop, int(num)).tolist()), "uniform")

    @classmethod
    def geometric(cls, start: float, stop: float, num: int) -> "GridSpec":
        if not (start > 0 and stop > start):
            raise ValueError("geometric grid needs 0 < start < stop")
        pts = np.geomspace(start, stop, int(num))
        # snap round-off so that e.g. powers of two stay exact
        near = np.round(pts)
        pts = np.where(np.abs(pts - near) <= 1e-12 * pts, near, pts)
        return cls(tuple(pts.tolist()), "geometric")

    @classmethod
    def explicit(cls, points: Sequence[float]) -> "GridSpec":
        return cls(tuple(sorted(float(p) for p in points)), "explicit")

    def points(self) -> np.ndarray:
        return np.asarray(self.points_, dtype=float)

    def __len__(self) -> int:
        return len(self.points_)
