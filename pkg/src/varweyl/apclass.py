"""Search for epsilon-almost periods and grid verdicts on class membership.

A shift ``tau`` is an epsilon-almost period when the chosen seminorm of
``f(. + tau) - f(.)`` is at most ``epsilon``.  Membership asks that such
shifts be relatively dense: every interval of some length ``L`` contains one.

All verdicts are grid evidence.  ``satisfied-on-grid`` means a certificate
``(l, L, tau per interval)`` was found on the scanned intervals;
``violated-with-witness`` means no grid certificate exists and the witness
names a shift whose seminorm exceeds epsilon.  Neither is a proof.

The equi classes fix ``l`` from a search grid.  The non-equi classes replace
the seminorm by its limsup estimate over an ``l`` grid
(:func:`varweyl.weylnorms.limsup_over_l`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .funcspace import (
    ConstantExponent,
    ConstantOne,
    ExponentSpec,
    FunctionSpec,
    GridSpec,
    IdentityPhi,
    PhiSpec,
    WeightSpec,
)
from .verdict import Status, Verdict
from .weylnorms import FAMILIES, VARIANTS, SeminormRequest, declared_period, limsup_over_l, seminorm


@dataclass(frozen=True)
class ClassConfig:
    """Which class to test and on which grids.

    Attributes
    ----------
    p, phi, F, family, variant, domain
        Seminorm data, as in :class:`varweyl.weylnorms.SeminormRequest`.
    equi : bool
        Equi class (one ``l`` per epsilon) or its limsup counterpart.
    eps : tuple of float
        Strictly decreasing tolerances.
    l_search : GridSpec
        Window lengths tried in equi mode.
    L_ladder : tuple of float
        Relative-density lengths tried for each epsilon.
    windows : int
        Number ``m`` of consecutive length-``L`` intervals scanned (at least 4).
    tau_step : float, optional
        Shift grid step; default ``max(eps / 4, L / 200)``.
    scan_start : float, optional
        Left end of the first scanned interval.  Defaults to twice the
        largest ``l`` in equi mode, so that shifts longer than every window
        are examined, and to 0 in limsup mode.
    limsup_l_grid : GridSpec
        ``l`` grid for limsup estimates (at least 8 points).
    """

    p: ExponentSpec = field(default_factory=lambda: ConstantExponent(1.0))
    phi: PhiSpec = field(default_factory=IdentityPhi)
    F: WeightSpec = field(default_factory=ConstantOne)
    family: str = "paren"
    variant: str = "base"
    domain: str = "R"
    equi: bool = True
    eps: tuple[float, ...] = (0.5, 0.2, 0.1)
    l_search: GridSpec = field(default_factory=lambda: GridSpec.geometric(1.0, 256.0, 9))
    L_ladder: tuple[float, ...] = (1.0, 2.0, 4.0, 8.0)
    windows: int = 4
    tau_step: float | None = None
    scan_start: float | None = None
    limsup_l_grid: GridSpec = field(default_factory=lambda: GridSpec.geometric(2.0, 256.0, 8))
    t_grid: GridSpec | None = None

    def __post_init__(self):
        if self.family not in FAMILIES or self.variant not in VARIANTS:
            raise ValueError("unknown family or variant")
        eps = tuple(float(e) for e in self.eps)
        if not eps or any(e <= 0 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
            raise ValueError("eps must be positive and strictly decreasing")
        object.__setattr__(self, "eps", eps)
        if any(L <= 0 for L in self.L_ladder):
            raise ValueError("L values must be positive")
        if self.tau_step is not None and not self.tau_step > 0:
            raise ValueError("tau_step must be positive")
        if self.windows < 4:
            raise ValueError("at least 4 windows are scanned")
        if len(self.limsup_l_grid) < 8:
            raise ValueError("limsup l grid needs at least 8 points")

    def with_(self, **changes) -> "ClassConfig":
        return replace(self, **changes)

    def request(self, f: FunctionSpec, tau: float, l: float) -> SeminormRequest:
        return SeminormRequest(f, tau, self.p, self.phi, self.F, l, self.family, self.variant, self.t_grid,
                               self.domain)

    def start(self) -> float:
        if self.scan_start is not None:
            return float(self.scan_start)
        return 2.0 * float(self.l_search.points().max()) if self.equi else 0.0

    def step(self, eps: float, L: float) -> float:
        return self.tau_step if self.tau_step is not None else max(eps / 4.0, L / 200.0)


def shift_value(f: FunctionSpec, tau: float, l: float | None, cfg: ClassConfig,
                cache: dict | None = None) -> float:
    """The quantity compared against epsilon: the seminorm at ``l`` (equi) or its limsup estimate.

    ``cache`` (keyed by ``(tau, l)``) avoids recomputing shifts shared by
    several intervals or ladder lengths within one report.
    """
    key = (float(tau), None if l is None else float(l))
    if cache is not None and key in cache:
        return cache[key]
    if cfg.equi:
        val = float(seminorm(cfg.request(f, tau, float(l))).value)
    else:
        val = float(limsup_over_l(cfg.request(f, tau, 1.0), cfg.limsup_l_grid).value)
    if cache is not None:
        cache[key] = val
    return val


def _known_periods(f: FunctionSpec, a: float, b: float) -> list[float]:
    period = declared_period(f)
    if period is None:
        return []
    k0, k1 = math.ceil(a / period), math.floor(b / period)
    return [k * period for k in range(k0, k1 + 1)]


def tau_candidates(f: FunctionSpec, a: float, b: float, step: float) -> np.ndarray:
    """Uniform shifts on ``[a, b]`` plus the multiples of a declared period, in increasing order."""
    n = int(math.floor((b - a) / step + 1e-9))
    grid = a + step * np.arange(n + 1)
    return np.unique(np.concatenate([grid, [b], _known_periods(f, a, b)]))


@dataclass
class PeriodSearch:
    """Outcome of scanning one interval.

    ``tau`` is the first shift meeting the tolerance, or None.  ``best_tau`` and
    ``best_value`` record the smallest value seen, which is the witness
    when nothing qualifies.
    """

    tau: float | None
    best_tau: float
    best_value: float
    evaluated: int


def search_interval(f: FunctionSpec, eps: float, l: float | None, interval: tuple[float, float],
                    cfg: ClassConfig, cache: dict | None = None) -> PeriodSearch:
    """Scan shifts in ``interval`` left to right and stop at the first epsilon-almost period."""
    a, b = map(float, interval)
    if not b > a:
        raise ValueError("interval must have positive length")
    if l is not None and not l > 0:
        raise ValueError("l must be positive")
    best_tau, best_val = a, math.inf
    taus = tau_candidates(f, a, b, cfg.step(eps, b - a))
    for i, tau in enumerate(taus):
        v = shift_value(f, float(tau), l, cfg, cache)
        if v < best_val:
            best_tau, best_val = float(tau), v
        if v <= eps:
            return PeriodSearch(float(tau), float(tau), v, i + 1)
    return PeriodSearch(None, best_tau, best_val, taus.size)


def find_period(f: FunctionSpec, eps: float, l: float | None, interval: tuple[float, float],
                cfg: ClassConfig) -> float | None:
    """First shift in ``interval`` whose seminorm is at most ``eps``, or None."""
    return search_interval(f, eps, l, interval, cfg).tau


def relative_density_scan(f: FunctionSpec, eps: float, l: float | None, L: float, cfg: ClassConfig,
                          windows: int | None = None, cache: dict | None = None) -> Verdict:
    """Look for an epsilon-almost period in each of ``windows`` consecutive length-``L`` intervals.

    Satisfied when every interval has one.  Otherwise the first failing
    interval is the witness, together with its best shift and value.
    """
    m = cfg.windows if windows is None else int(windows)
    if m < 4:
        raise ValueError("at least 4 windows are scanned")
    start = cfg.start()
    found = []
    for i in range(m):
        interval = (start + i * L, start + (i + 1) * L)
        res = search_interval(f, eps, l, interval, cfg, cache)
        if res.tau is None:
            witness = {"eps": eps, "l": l, "L": L, "interval": interval, "tau": res.best_tau,
                       "value": res.best_value}
            return Verdict(Status.VIOLATED, witness=witness, diagnostics=[{"periods": found}],
                           detail={"eps": eps, "l": l, "L": L})
        found.append(res.tau)
    return Verdict(Status.SATISFIED, diagnostics=[{"periods": found}], detail={"eps": eps, "l": l, "L": L})


def _report_eps(f: FunctionSpec, eps: float, cfg: ClassConfig, cache: dict) -> tuple[Verdict, dict]:
    ls = cfg.l_search.points() if cfg.equi else [None]
    last = None
    for l in ls:
        for L in cfg.L_ladder:
            v = relative_density_scan(f, eps, None if l is None else float(l), float(L), cfg, cache=cache)
            if v.satisfied:
                return v, {"eps": eps, "status": str(v.status), "l": None if l is None else float(l), "L": float(L),
                           "periods": tuple(v.diagnostics[0]["periods"])}
            last = v
    assert last is not None
    row = {"eps": eps, "status": str(last.status), "l": last.witness["l"], "L": last.witness["L"],
           "tau": last.witness["tau"], "value": last.witness["value"]}
    return last, row


def membership_report(f: FunctionSpec, cfg: ClassConfig) -> Verdict:
    """Grid verdict on membership of ``f`` in the class described by ``cfg``.

    For each epsilon (largest first) the ``l`` grid (equi mode only) and the
    ``L`` ladder are searched for a certificate.  The first epsilon without
    one gives the witness; smaller epsilons then fail on the same grid and
    are reported as such without re-scanning.
    """
    rows: list[dict] = []
    witness = None
    cache: dict = {}
    for eps in cfg.eps:
        if witness is not None:
            rows.append({"eps": eps, "status": str(Status.VIOLATED), "implied_by_eps": witness["eps"]})
            continue
        v, row = _report_eps(f, eps, cfg, cache)
        rows.append(row)
        if v.violated:
            witness = dict(v.witness)
    mode = "equi" if cfg.equi else "limsup"
    detail = {"mode": mode, "family": cfg.family, "variant": cfg.variant}
    if witness is None:
        return Verdict(Status.SATISFIED, diagnostics=rows, detail=detail)
    return Verdict(Status.VIOLATED, witness=witness, diagnostics=rows, detail=detail)


def recheck_witness(f: FunctionSpec, witness: dict, cfg: ClassConfig) -> float:
    """Recompute the value stored in a violation witness with one seminorm (or limsup) call."""
    return shift_value(f, witness["tau"], witness["l"], cfg)
