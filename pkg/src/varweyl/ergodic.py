"""Weyl vanishing functionals and their grid verdicts.

For ``q`` on ``[0, inf)`` the vanishing functional at ``(l, t)`` is

``sup_{x >= 0}  F(l, t) * || phi(||q(t + v)||) ||_{L^{p(v)}[x, x + l]}``   (base)

with the ``sub1`` form ``F * phi(||q(t + .)||)`` and the ``sub2`` form
``phi(F * ||q(t + .)||)``.  A function vanishes when an iterated limit of
this functional is zero:

* ``order="equi"``: ``lim_l limsup_t``;
* ``order="weyl"``: ``lim_t limsup_l``.

Suprema over ``x`` run over ``[0, t + 4 l]`` (for exact data the window
starts that touch a breakpoint are added, which makes the piecewise-constant
constant-exponent case exact on that range).  A limsup is estimated by the
maximum over the trailing half of its grid, and an outer limit is judged
from the trailing half of the outer sequence.  Verdicts are grid evidence.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .funcspace import (
    ConstantExponent,
    CustomWeight,
    ExponentSpec,
    FunctionSpec,
    GridSpec,
    IdentityPhi,
    Mapped,
    PhiSpec,
    PowerOfL,
    Restrict,
    Translate,
    WeightSpec,
    magnitude,
)
from .varlebesgue import DEFAULT_TOL, anchor_points, window_norms
from .verdict import Status, Verdict, grid_sup

VARIANTS = ("base", "sub1", "sub2")
ORDERS = ("equi", "weyl")

#: relative growth over the trailing half of an inner grid that counts as divergence
DIVERGENCE_GROWTH = 0.10


@dataclass(frozen=True)
class VanishingConfig:
    """Data of a vanishing class and the grids used to estimate its limits.

    Attributes
    ----------
    p : ExponentSpec
        Exponent on ``[0, inf)``, read at ``v`` in ``[x, x + l]``.
    phi : PhiSpec
    F : WeightSpec
    variant : {"base", "sub1", "sub2"}
    order : {"equi", "weyl"}
    l_grid, t_grid : GridSpec, optional
        Increasing positive grids spanning at least two decades.  The
        defaults depend on ``order``: the inner variable runs far beyond the
        outer one (``t`` up to ``1e10`` against ``l <= 256`` for the equi
        order, ``l`` up to ``1e8`` against ``t <= 1e4`` for the Weyl order),
        so that the trailing half of each inner grid sits in the regime where
        the inner limsup is attained.
    x_points : int
        Uniform ``x`` samples on ``[0, t + x_span * l]`` (anchors are added for exact data).
    x_span : float
        Upper cutoff multiplier for ``x``.
    threshold : float
        An outer sequence ending below this value (and not increasing) is
        taken as tending to zero.
    """

    p: ExponentSpec = field(default_factory=lambda: ConstantExponent(1.0))
    phi: PhiSpec = field(default_factory=IdentityPhi)
    F: WeightSpec = field(default_factory=lambda: PowerOfL(-1.0))
    variant: str = "base"
    order: str = "equi"
    l_grid: GridSpec | None = None
    t_grid: GridSpec | None = None
    x_points: int = 256
    x_span: float = 4.0
    threshold: float = 0.1
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        if self.order not in ORDERS:
            raise ValueError(f"order must be one of {ORDERS}")
        if self.l_grid is None:
            default = GridSpec.geometric(1.0, 256.0, 9) if self.order == "equi" else GridSpec.geometric(1.0, 1e8, 17)
            object.__setattr__(self, "l_grid", default)
        if self.t_grid is None:
            default = GridSpec.geometric(1.0, 1e10, 21) if self.order == "equi" else GridSpec.geometric(1.0, 1e4, 9)
            object.__setattr__(self, "t_grid", default)
        for g in (self.l_grid, self.t_grid):
            pts = g.points()
            if pts.size < 2 or np.any(pts <= 0) or np.any(np.diff(pts) <= 0):
                raise ValueError("grids must be positive and increasing")
        if self.x_points < 2 or not self.x_span > 0:
            raise ValueError("x grid needs at least 2 points and a positive span")
        if not self.threshold > 0:
            raise ValueError("threshold must be positive")

    def with_(self, **changes) -> "VanishingConfig":
        return replace(self, **changes)


@dataclass
class FunctionalValue:
    """Value of the vanishing functional with its maximizing ``x``."""

    value: float
    argmax_x: float

    def __float__(self) -> float:
        return float(self.value)


def _shifted(q: FunctionSpec, t: float) -> FunctionSpec:
    if q.lower > 0.0:
        raise ValueError("q must be defined on [0, inf)")
    base = q if q.lower == 0.0 else Restrict(q, 0.0)
    return magnitude(Translate(t, base))


def _x_points(h: FunctionSpec, p: ExponentSpec, l: float, x_max: float, n: int) -> np.ndarray:
    pts = [np.linspace(0.0, x_max, n)]
    if h.exact:
        pts.append(anchor_points(h, 0.0, x_max, l))
    if p.piecewise and not p.is_constant:
        pb, _ = p.segments()
        pts.append(pb[(pb >= 0) & (pb <= x_max)])
        pts.append((pb - l)[(pb - l >= 0) & (pb - l <= x_max)])
    return np.concatenate(pts)


def vanishing_functional(q: FunctionSpec, cfg: VanishingConfig, l: float, t: float) -> FunctionalValue:
    """Grid supremum over ``x`` in ``[0, t + x_span l]`` of the configured window expression."""
    if not (l > 0 and t >= 0):
        raise ValueError("need l > 0 and t >= 0")
    h = _shifted(q, t)
    phi = cfg.phi
    g = Mapped(phi, h) if cfg.variant == "base" else h
    weight = float(np.asarray(cfg.F(l, t)).ravel()[0])
    x_max = t + cfg.x_span * l

    def evaluate(xs):
        norms = window_norms(g, cfg.p, xs, l, tol=cfg.tol)
        if cfg.variant == "base":
            return weight * norms
        if cfg.variant == "sub1":
            return weight * phi(norms)
        return phi(weight * norms)

    res = grid_sup(evaluate, _x_points(g, cfg.p, l, x_max, cfg.x_points), lo=0.0, hi=x_max)
    return FunctionalValue(res.value, res.argmax)


@dataclass
class IteratedLimit:
    """Tables behind an iterated-limit estimate.

    Attributes
    ----------
    table : ndarray, shape (len(l_grid), len(t_grid))
        Functional values.
    inner : ndarray
        Inner limsup estimates indexed by the outer variable.
    inner_diverging : ndarray of bool
        Inner sequences still growing over their trailing half.
    outer_points : ndarray
        Grid of the outer variable (``l`` for equi order, ``t`` for weyl order).
    """

    table: np.ndarray
    inner: np.ndarray
    inner_diverging: np.ndarray
    outer_points: np.ndarray


def _trailing_limsup(values: np.ndarray) -> tuple[float, bool]:
    k = values.size // 2
    tail = values[k:]
    first, last = float(tail[0]), float(tail[-1])
    growing = last > first * (1.0 + DIVERGENCE_GROWTH) and last > 0.0 and bool(np.all(np.diff(tail) >= 0))
    return float(tail.max()), growing


def iterated_limit(q: FunctionSpec, cfg: VanishingConfig) -> IteratedLimit:
    """Evaluate the functional on ``l_grid x t_grid`` and reduce it along the inner variable."""
    ls, ts = cfg.l_grid.points(), cfg.t_grid.points()
    table = np.array([[vanishing_functional(q, cfg, float(l), float(t)).value for t in ts] for l in ls])
    inner_rows = table if cfg.order == "equi" else table.T
    reduced = [_trailing_limsup(row) for row in inner_rows]
    inner = np.array([r[0] for r in reduced])
    diverging = np.array([r[1] for r in reduced])
    return IteratedLimit(table, inner, diverging, ls if cfg.order == "equi" else ts)


def vanishing_verdict(q: FunctionSpec, cfg: VanishingConfig) -> Verdict:
    """Grid verdict on whether the iterated limit of the functional is zero.

    Satisfied when the trailing half of the outer sequence is nonincreasing
    and ends below ``cfg.threshold``.  Violated when some inner sequence
    keeps growing over its trailing half, or when the outer sequence ends at
    or above the threshold without decreasing.  Otherwise inconclusive.
    """
    lim = iterated_limit(q, cfg)
    outer_name = "l" if cfg.order == "equi" else "t"
    k = lim.inner.size // 2
    tail = lim.inner[k:]
    pts = lim.outer_points[k:]
    rows = [{outer_name: float(x), "inner_limsup": float(v), "diverging": bool(d)}
            for x, v, d in zip(lim.outer_points, lim.inner, lim.inner_diverging)]
    detail = {"order": cfg.order, "variant": cfg.variant, "last": float(tail[-1])}
    if np.any(lim.inner_diverging[k:]):
        j = k + int(np.argmax(lim.inner_diverging[k:]))
        witness = {outer_name: float(lim.outer_points[j]), "inner_limsup": float(lim.inner[j]),
                   "reason": "inner sequence grows over its trailing half"}
        return Verdict(Status.VIOLATED, witness=witness, diagnostics=rows, detail=detail)
    nonincreasing = bool(np.all(np.diff(tail) <= 1e-12 * max(1.0, float(np.abs(tail).max()))))
    if tail[-1] < cfg.threshold and nonincreasing:
        return Verdict(Status.SATISFIED, diagnostics=rows, detail=detail)
    nondecreasing = bool(np.all(np.diff(tail) >= -1e-12 * max(1.0, float(np.abs(tail).max()))))
    if tail[-1] >= cfg.threshold and nondecreasing:
        witness = {outer_name: float(pts[-1]), "inner_limsup": float(tail[-1]),
                   "reason": "outer sequence does not decrease below the threshold"}
        return Verdict(Status.VIOLATED, witness=witness, diagnostics=rows, detail=detail)
    return Verdict(Status.INCONCLUSIVE, diagnostics=rows, detail=detail)


# ---------------------------------------------------------------------------
# Stepanov-type vanishing on the unit window
# ---------------------------------------------------------------------------


def stepanov_vanishing_functional(q: FunctionSpec, p: ExponentSpec, phi: PhiSpec, G: Callable[[float], float],
                                  t: float, variant: int = 0, tol: float = DEFAULT_TOL) -> float:
    """Unit-window functional at ``t``.

    ``variant=0``: ``G(t) * || phi(||q(t + v)||) ||_{L^{p(v)}[0, 1]}``;
    ``variant=1``: ``G(t) * phi(|| q(t + .) ||)``;
    ``variant=2``: ``phi(G(t) * || q(t + .) ||)``.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    if variant not in (0, 1, 2):
        raise ValueError("variant must be 0, 1 or 2")
    h = _shifted(q, t)
    g = Mapped(phi, h) if variant == 0 else h
    norm = float(window_norms(g, p, [0.0], 1.0, tol=tol)[0])
    w = float(G(t))
    if variant == 0:
        return w * norm
    if variant == 1:
        return w * float(phi(np.array([norm]))[0])
    return float(phi(np.array([w * norm]))[0])


def stepanov_vanishing_verdict(q: FunctionSpec, p: ExponentSpec, phi: PhiSpec, G: Callable[[float], float],
                               t_grid: GridSpec, variant: int = 0, threshold: float = 0.1) -> Verdict:
    """Judge ``lim_t`` of the unit-window functional from its trailing half on ``t_grid``.

    For exact data the starts ``t`` where ``t`` or ``t + 1`` meets a
    breakpoint are added, so isolated bumps are not stepped over.
    """
    ts = t_grid.points()
    h = _shifted(q, 0.0)
    if h.exact:
        ts = np.unique(np.concatenate([ts, anchor_points(h, float(ts.min()), float(ts.max()), 1.0)]))
    vals = np.array([stepanov_vanishing_functional(q, p, phi, G, float(t), variant) for t in ts])
    k = vals.size // 2
    tail = vals[k:]
    j = k + int(np.argmax(tail))
    rows = [{"t": float(t), "value": float(v)} for t, v in zip(ts, vals)]
    if tail.max() < threshold:
        return Verdict(Status.SATISFIED, diagnostics=rows, detail={"trailing_max": float(tail.max())})
    return Verdict(Status.VIOLATED, witness={"t": float(ts[j]), "value": float(vals[j])}, diagnostics=rows,
                   detail={"trailing_max": float(tail.max())})


# ---------------------------------------------------------------------------
# exponent comparison weights
# ---------------------------------------------------------------------------


def _reciprocal_gap_range(r: ExponentSpec, p: ExponentSpec, audit_range=(0.0, 1024.0)) -> tuple[float, float]:
    """Essential range of ``1/r - 1/p``; raises if ``r > p`` somewhere."""
    if r.piecewise and p.piecewise:
        rb, _ = r.segments()
        pb, _ = p.segments()
        b = np.unique(np.concatenate([rb, pb]))
        if b.size:
            xs = np.concatenate([[b[0] - 1.0], b])
        else:
            xs = np.array([0.0])
    else:
        xs = np.linspace(audit_range[0], audit_range[1], 8193)
    rv = np.asarray(r(xs), dtype=float)
    pv = np.asarray(p(xs), dtype=float)
    if np.any(rv > pv + 1e-12):
        raise ValueError("exponent order violated: need 1 <= r(x) <= p(x)")
    gap = 1.0 / rv - 1.0 / pv
    return float(gap.min()), float(gap.max())


def tirsen_transform(F: WeightSpec, r: ExponentSpec, p: ExponentSpec, mode: str = "exponent-pair",
                     varphi: Callable | None = None) -> WeightSpec:
    """Weight that carries vanishing in ``L^p`` windows over to ``L^r`` windows (``r <= p``).

    Modes
    -----
    ``"exponent-pair"``: ``F1 = 2 max(l**e_lo, l**e_hi) F`` with ``[e_lo, e_hi]``
    the essential range of ``1/r - 1/p``.
    ``"crude"``: ``F1 = 2 (1 + l) F``.
    ``"constant"``: ``F1 = l**(1/r - 1/p) F`` for constant exponents.

    With ``varphi`` (a bound ``phi(c x) <= varphi(c) phi(x)``) the factor is
    passed through ``varphi`` instead of multiplying ``F`` directly, which is
    the form used with the ``sub1`` variant.
    """
    lo, hi = _reciprocal_gap_range(r, p)
    if mode == "exponent-pair":
        def factor(l):
            l = np.asarray(l, dtype=float)
            return 2.0 * np.maximum(l ** lo, l ** hi)
    elif mode == "crude":
        def factor(l):
            return 2.0 * (1.0 + np.asarray(l, dtype=float))
    elif mode == "constant":
        if not (r.is_constant and p.is_constant):
            raise ValueError("constant mode needs constant exponents")
        e = lo

        def factor(l):
            return np.asarray(l, dtype=float) ** e
    else:
        raise ValueError("mode must be 'exponent-pair', 'crude' or 'constant'")
    if varphi is None:
        fn = lambda l, t: factor(l) * F(l, t)  # noqa: E731
    else:
        fn = lambda l, t: np.asarray(varphi(factor(l)), dtype=float) * F(l, t)  # noqa: E731
    return CustomWeight(fn, t_independent=F.t_independent, condition_d=F.condition_d, name=f"{mode}({F.name})")


# ---------------------------------------------------------------------------
# reference bounds and decompositions
# ---------------------------------------------------------------------------


def unit_spike_bound(l, t, p: float = 1.0):
    """Upper bound ``(2 + l / (sqrt(t) + sqrt(l)))**(1/p)`` for windows of the unit spike train."""
    l, t = np.asarray(l, dtype=float), np.asarray(t, dtype=float)
    return (2.0 + l / (np.sqrt(t) + np.sqrt(l))) ** (1.0 / p)


def sqrt_spike_bound(l, t, p: float = 1.0):
    """Claimed bound ``(l + t)**(1/(2p))`` for windows of the spike train with heights ``sqrt(n)``."""
    l, t = np.asarray(l, dtype=float), np.asarray(t, dtype=float)
    return (l + t) ** (1.0 / (2.0 * p))


def asymptotic_decomposition_check(g: FunctionSpec, q: FunctionSpec, g_cfg, q_cfg: VanishingConfig) -> Verdict:
    """Check ``h = g + q`` with ``g`` in an almost periodic class and ``q`` vanishing.

    ``g_cfg`` is a :class:`varweyl.apclass.ClassConfig`.  Satisfied when both
    parts are satisfied on their grids; violated (with the failing part's
    witness) when either part is violated; inconclusive otherwise.
    """
    from .apclass import membership_report

    vg = membership_report(g, g_cfg)
    vq = vanishing_verdict(q, q_cfg)
    rows = [{"part": "g", "status": str(vg.status)}, {"part": "q", "status": str(vq.status)}]
    if vg.satisfied and vq.satisfied:
        return Verdict(Status.SATISFIED, diagnostics=rows)
    for name, v in (("g", vg), ("q", vq)):
        if v.violated:
            return Verdict(Status.VIOLATED, witness={"part": name, **v.witness}, diagnostics=rows)
    return Verdict(Status.INCONCLUSIVE, diagnostics=rows)
