"""Seminorms of generalized Weyl almost periodicity.

For a shift ``tau`` let ``D(x) = ||f(x + tau) - f(x)||``.  With a weight
``F(l, t)``, a map ``phi`` and an exponent ``p`` there are six seminorms:

paren family (window ``[t, t + l]``, exponent at absolute ``x``)
    base  ``sup_t F(l, t) * || phi(D) ||_{L^p[t, t+l]}``
    sub1  ``sup_t F(l, t) * phi(|| D ||_{L^p[t, t+l]})``
    sub2  ``sup_t phi(F(l, t) * || D ||_{L^p[t, t+l]})``

bracket family (same shapes, with ``x -> D(t + x l)`` measured on ``[0, 1]``).

The supremum over ``t`` is taken over a finite grid and refined around the
maximizer, so every value is a lower bound of the true supremum.  When the
function declares a period, the weight does not depend on ``t`` and the
exponent is constant (or the bracket family is used), the window value is
periodic in ``t`` and the grid covers a single period.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .funcspace import (
    ConstantOne,
    CustomWeight,
    ExponentSpec,
    FunctionSpec,
    GridSpec,
    IdentityPhi,
    Mapped,
    PhiSpec,
    WeightSpec,
    difference,
    magnitude,
)
from .varlebesgue import DEFAULT_TOL, anchor_points, default_t_grid, window_norms
from .verdict import SupResult, grid_sup

FAMILIES = ("paren", "bracket")
VARIANTS = ("base", "sub1", "sub2")


@dataclass(frozen=True)
class SeminormRequest:
    """All data of one seminorm evaluation.

    Attributes
    ----------
    f : FunctionSpec
    tau : float
    p : ExponentSpec
        On the domain for the paren family, on ``[0, 1]`` for the bracket family.
    phi : PhiSpec
    F : WeightSpec
    l : float
    family : {"paren", "bracket"}
    variant : {"base", "sub1", "sub2"}
    t_grid : GridSpec, optional
        Defaults to :func:`varweyl.varlebesgue.default_t_grid`.
    domain : {"R", "half"}
    refine : bool
        Refine the grid around the maximizer.
    """

    f: FunctionSpec
    tau: float
    p: ExponentSpec
    phi: PhiSpec = field(default_factory=IdentityPhi)
    F: WeightSpec = field(default_factory=ConstantOne)
    l: float = 1.0
    family: str = "paren"
    variant: str = "base"
    t_grid: GridSpec | None = None
    domain: str = "R"
    refine: bool = True
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        if not self.l > 0:
            raise ValueError("l must be positive")
        if self.domain not in ("R", "half"):
            raise ValueError("domain must be 'R' or 'half'")

    def with_(self, **changes) -> "SeminormRequest":
        return replace(self, **changes)


@dataclass
class SeminormResult:
    """Grid supremum of a seminorm with the per-``t`` curve.

    ``value`` equals the maximum of ``curve_values``.
    """

    value: float
    argmax_t: float
    curve_t: np.ndarray
    curve_values: np.ndarray

    def __float__(self) -> float:
        return float(self.value)


def declared_period(f: FunctionSpec) -> float | None:
    """Period of ``f`` when it is declared by the representation, else None."""
    period = getattr(f, "period", None)
    if isinstance(period, (int, float)) and period > 0 and math.isfinite(period):
        return float(period)
    return None


def _t_points(h: FunctionSpec, l: float, domain: str, t_grid: GridSpec | None,
              period: float | None = None) -> np.ndarray:
    lower = 0.0 if domain == "half" else -math.inf
    if t_grid is not None:
        pts = t_grid.points()
    elif period is not None and domain == "R":
        # the window value is periodic in t, one period of starts suffices
        n = max(64, int(math.ceil(16.0 * period / l)))
        pts = np.linspace(0.0, period, n + 1)
    else:
        pts = default_t_grid(l, lower)
    if h.exact:
        pts = np.concatenate([pts, anchor_points(h, float(pts.min()), float(pts.max()), l)])
    return pts


def _windowed_sup(integrand: FunctionSpec, p: ExponentSpec, phi: PhiSpec, F: WeightSpec, l: float,
                  family: str, variant: str, domain: str, t_grid: GridSpec | None, refine: bool,
                  tol: float, period: float | None = None) -> SeminormResult:
    h = Mapped(phi, integrand) if variant == "base" else integrand
    relative = family == "bracket"

    def evaluate(ts: np.ndarray) -> np.ndarray:
        norms = window_norms(h, p, ts, l, relative=relative, tol=tol)
        weights = F(l, ts)
        if variant == "base":
            return weights * norms
        if variant == "sub1":
            return weights * phi(norms)
        return phi(weights * norms)

    if period is not None and not (F.t_independent and (relative or p.is_constant)):
        period = None
    pts = _t_points(h, l, domain, t_grid, period)
    res: SupResult = grid_sup(evaluate, pts, refine=refine)
    return SeminormResult(res.value, res.argmax, res.points, res.values)


def seminorm(req: SeminormRequest) -> SeminormResult:
    """Evaluate the seminorm described by ``req`` (either family)."""
    delta = difference(req.f, req.tau)
    return _windowed_sup(delta, req.p, req.phi, req.F, req.l, req.family, req.variant, req.domain,
                         req.t_grid, req.refine, req.tol, declared_period(req.f))


def paren_seminorm(req: SeminormRequest) -> SeminormResult:
    """Seminorm on windows ``[t, t + l]`` with the exponent at absolute positions."""
    if req.family != "paren":
        raise ValueError("paren_seminorm needs family='paren'")
    return seminorm(req)


def bracket_seminorm(req: SeminormRequest) -> SeminormResult:
    """Seminorm of ``x -> f(x l + t + tau) - f(t + x l)`` measured in ``L^{p(x)}[0, 1]``."""
    if req.family != "bracket":
        raise ValueError("bracket_seminorm needs family='bracket'")
    return seminorm(req)


@dataclass
class LimsupResult:
    """Limsup estimate over a geometric ``l`` grid.

    Attributes
    ----------
    value : float
        Maximum of the seminorm over the trailing half of the grid.
    l_values, seminorms : ndarray
        The full sequence.
    trailing_start : int
        Index where the trailing half begins.
    """

    value: float
    l_values: np.ndarray
    seminorms: np.ndarray
    trailing_start: int

    def __float__(self) -> float:
        return float(self.value)


def limsup_over_l(req: SeminormRequest, l_grid: GridSpec) -> LimsupResult:
    """Estimate ``limsup_{l -> inf}`` of a seminorm by the maximum over the trailing half of ``l_grid``."""
    ls = l_grid.points()
    if ls.size < 8:
        raise ValueError("l grid needs at least 8 points")
    if np.any(np.diff(ls) <= 0):
        raise ValueError("l grid must be increasing")
    vals = np.array([seminorm(req.with_(l=float(l))).value for l in ls])
    start = ls.size // 2
    return LimsupResult(float(vals[start:].max()), ls, vals, start)


def untranslated_norm(f: FunctionSpec, p: ExponentSpec, phi: PhiSpec, F: WeightSpec, l: float,
                      variant: str = "base", family: str = "paren", domain: str = "R",
                      t_grid: GridSpec | None = None, refine: bool = True, tol: float = DEFAULT_TOL) -> SeminormResult:
    """The seminorm shapes applied to ``||f||`` itself instead of a difference."""
    if variant not in VARIANTS or family not in FAMILIES:
        raise ValueError("unknown family or variant")
    return _windowed_sup(magnitude(f), p, phi, F, l, family, variant, domain, t_grid, refine, tol,
                         declared_period(f))


def stevate_transform(F: WeightSpec, varphi: Callable, which: str) -> WeightSpec:
    """Weight transforms used when ``phi`` is convex with companion ``varphi``.

    ``which="F1"`` gives ``F(l, t) * l / varphi(l)``; ``which="F2"`` gives
    ``varphi(F(l, t) * l) / l``.
    """
    if which == "F1":
        fn = lambda l, t: F(l, t) * np.asarray(l, dtype=float) / np.asarray(varphi(l), dtype=float)  # noqa: E731
    elif which == "F2":
        fn = lambda l, t: np.asarray(varphi(F(l, t) * np.asarray(l, dtype=float)), dtype=float) / np.asarray(l, dtype=float)  # noqa: E731,E501
    else:
        raise ValueError("which must be 'F1' or 'F2'")
    return CustomWeight(fn, t_independent=F.t_independent, condition_d=F.condition_d, name=f"{which}({F.name})")
