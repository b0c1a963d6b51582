"""Fractional derivatives with the kernel ``g_zeta`` and mild solutions of relaxation problems.

``g_zeta(t) = t**(zeta - 1) / Gamma(zeta)`` for ``t > 0``.  The Caputo
derivative of order ``zeta`` in ``(0, 1)`` is the derivative of
``g_{1-zeta} * (u - u(0))`` on ``[0, t]``; the Weyl-Liouville derivative
differentiates the whole-history integral ``int_{-inf}^t g_{1-zeta}(t - s) u(s) ds``.

Both derivatives are computed as a central difference of the integral,
with one level of Richardson extrapolation.  The integrals use
Gauss-Legendre panels graded toward the weak singularity of the kernel.

Examples
--------
>>> from varweyl.fractional import caputo_derivative, FracConfig
>>> from varweyl.funcspace import CallableFunction
>>> u = CallableFunction(lambda t: t, lower=0.0)
>>> round(caputo_derivative(u, 0.5, 1.0), 6)
1.128379
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.special import gamma as gamma_fn

from .convolution import DEFAULT_TOL, _kernel_integral, infinite_convolution
from .funcspace import FunctionSpec, KernelSpec, Restrict
from .quadrature import integrate
from .verdict import Status

__all__ = [
    "FracConfig",
    "FracResult",
    "gamma_kernel",
    "kernel_semigroup",
    "caputo_derivative",
    "weyl_liouville_derivative",
    "mild_solution_dfp",
    "mild_solution_line",
    "continuity_at_zero",
]


@dataclass(frozen=True)
class FracConfig:
    """Numerical settings of the fractional operators.

    Attributes
    ----------
    zeta : float
        Order in ``(0, 1]``; used when an operator is called without an order.
    step : float, optional
        Differentiation step ``h``; default ``1e-3 * max(1, t)``.
    tail_cutoff : float
        History length ``T`` kept by the Weyl-Liouville derivative.
    tol : float
        Absolute quadrature tolerance.
    tail_tol : float
        Largest acceptable bound on the derivative of the discarded history.
    """

    zeta: float = 0.5
    step: float | None = None
    tail_cutoff: float = 1.0e3
    tol: float = 1e-12
    tail_tol: float = 1e-6

    def __post_init__(self):
        _check_order(self.zeta)
        if self.step is not None and not self.step > 0:
            raise ValueError("step must be positive")
        if not self.tail_cutoff > 0:
            raise ValueError("tail_cutoff must be positive")

    def h(self, t: float) -> float:
        return self.step if self.step is not None else 1e-3 * max(1.0, abs(t))


@dataclass
class FracResult:
    """A derivative value with its error information.

    ``status`` is inconclusive when the bound on the derivative of the
    discarded history exceeds ``FracConfig.tail_tol``.
    """

    value: float
    status: Status
    tail_bound: float = 0.0
    step: float = 0.0

    def __float__(self) -> float:
        return float(self.value)


def _check_order(zeta: float) -> None:
    if not 0.0 < zeta <= 1.0:
        raise ValueError("the order must lie in (0, 1]")


def gamma_kernel(zeta: float, t):
    """``g_zeta(t) = t**(zeta - 1) / Gamma(zeta)`` for ``t > 0``.

    >>> gamma_kernel(2.0, 3.0)
    3.0
    """
    if not zeta > 0:
        raise ValueError("zeta must be positive")
    arr = np.asarray(t, dtype=float)
    if np.any(arr <= 0):
        raise ValueError("g_zeta is defined for t > 0 only")
    out = arr ** (zeta - 1.0) / gamma_fn(zeta)
    return float(out) if out.ndim == 0 else out


def kernel_semigroup(zeta: float, eta: float, t: float, tol: float = 1e-14) -> float:
    """``int_0^t g_zeta(t - s) g_eta(s) ds`` by quadrature graded at both ends.

    Equals ``g_{zeta + eta}(t)``.
    """
    if not (zeta > 0 and eta > 0 and t > 0):
        raise ValueError("need zeta, eta, t > 0")

    # both halves are written with the singular end at 0, where it is represented exactly
    def near(a, b):
        return lambda w: w ** (a - 1.0) * (t - w) ** (b - 1.0)

    half = 0.5 * t
    val = (integrate(near(eta, zeta), 0.0, half, tol=tol, rel_tol=1e-14, singular=[(0.0, eta - 1.0)])[0]
           + integrate(near(zeta, eta), 0.0, half, tol=tol, rel_tol=1e-14, singular=[(0.0, zeta - 1.0)])[0])
    return val / (gamma_fn(zeta) * gamma_fn(eta))


def _scalar(u: FunctionSpec):
    if u.dim != 1:
        raise ValueError("fractional derivatives are implemented for scalar functions")

    def f(x):
        return u.values(np.atleast_1d(np.asarray(x, dtype=float)))[:, 0]

    return f


def _richardson(v, t: float, h: float) -> float:
    """Central difference of ``v`` at ``t`` with one Richardson step (``h`` and ``h / 2``)."""
    d1 = (v(t + h) - v(t - h)) / (2.0 * h)
    d2 = (v(t + h / 2) - v(t - h / 2)) / h
    return d2 + (d2 - d1) / 3.0


def _singular_weight_integral(g, zeta: float, b: float, breaks, tol: float) -> float:
    """``int_0^b w**(-zeta) g(w) dw`` for bounded ``g`` with jumps at ``breaks``.

    The first subinterval uses the algebraic-weight rule of QUADPACK, which
    integrates the factor ``w**(-zeta)`` exactly; the remaining panels carry
    no singularity.
    """
    cuts = sorted(x for x in breaks if 0.0 < x < b)
    first = min([b, 1.0] + cuts[:1])
    val = quad(lambda w: float(g(np.array([w]))[0]), 0.0, first, weight="alg", wvar=(-zeta, 0.0),
               epsabs=tol, epsrel=1e-13, limit=200)[0]
    if b > first:
        val += integrate(lambda w: w ** (-zeta) * g(w), first, b, cuts, tol=tol, rel_tol=1e-13)[0]
    return val


def _caputo_integral(f, u0: float, zeta: float, s: float, breaks, tol: float) -> float:
    """``int_0^s g_{1-zeta}(w)(u(s - w) - u(0)) dw``."""
    if s <= 0:
        return 0.0
    br = [s - x for x in breaks if 0.0 < x < s]
    return _singular_weight_integral(lambda w: f(s - w) - u0, zeta, s, br, tol) / gamma_fn(1.0 - zeta)


def caputo_derivative(u: FunctionSpec, zeta: float, t: float, cfg: FracConfig | None = None) -> float:
    """Caputo derivative ``d/dt [g_{1-zeta} * (u - u(0))](t)``.

    For ``zeta = 1`` this is the ordinary derivative, by the same
    central difference.

    Raises
    ------
    ValueError
        ``t <= h``, so that the difference quotient would reach below 0.
    """
    _check_order(zeta)
    cfg = FracConfig() if cfg is None else cfg
    h = cfg.h(t)
    if t <= h:
        raise ValueError(f"t={t} is too close to 0 for the step {h}")
    f = _scalar(u)
    if zeta == 1.0:
        return float(_richardson(lambda s: float(f(s)[0]), t, h))
    u0 = float(f(0.0)[0])
    breaks = u.breakpoints(0.0, t + h).tolist()
    return float(_richardson(lambda s: _caputo_integral(f, u0, zeta, s, breaks, cfg.tol), t, h))


def _history_integral(f, u: FunctionSpec, zeta: float, x: float, T: float, tol: float) -> float:
    """``int_0^T g_{1-zeta}(v) u(x - v) dv`` with panels doubling away from ``v = 0``."""
    breaks = [2.0 ** k for k in range(0, int(math.log2(T)) + 1) if 2.0 ** k < T]
    breaks += (x - u.breakpoints(x - T, x)).tolist()
    return _singular_weight_integral(lambda v: f(x - v), zeta, T, breaks, tol) / gamma_fn(1.0 - zeta)


def weyl_liouville_derivative(u: FunctionSpec, zeta: float, t: float, cfg: FracConfig | None = None) -> FracResult:
    """Weyl-Liouville derivative ``d/dt int_{-inf}^t g_{1-zeta}(t - s) u(s) ds``.

    The history is cut at ``t - T``.  Integrating the discarded part by
    parts bounds its derivative by ``2 sup|u| g_{1-zeta}(T)`` with the
    supremum over ``(-inf, t - T]`` (sampled on ``[t - 16 T, t - T]``).
    The status is inconclusive when this bound exceeds ``cfg.tail_tol``.

    For ``zeta = 1`` the value is ``-u'(t)``, the sign convention of the
    first-order case of this operator family.
    """
    _check_order(zeta)
    cfg = FracConfig() if cfg is None else cfg
    if u.lower != -math.inf:
        raise ValueError("u must be defined on the whole real line")
    h = cfg.h(t)
    f = _scalar(u)
    if zeta == 1.0:
        d = _richardson(lambda s: float(f(s)[0]), t, h)
        return FracResult(-float(d), Status.SATISFIED, 0.0, h)
    T = cfg.tail_cutoff
    value = _richardson(lambda x: _history_integral(f, u, zeta, x, T, cfg.tol), t, h)
    sup_u = u.sup_norm(t - 16.0 * T, t - T + h)
    bound = 2.0 * sup_u * gamma_kernel(1.0 - zeta, T)
    status = Status.SATISFIED if bound <= cfg.tail_tol else Status.INCONCLUSIVE
    return FracResult(float(value), status, float(bound), h)


def mild_solution_dfp(S: KernelSpec, u0, f: FunctionSpec, t: float, tol: float = DEFAULT_TOL):
    """``S(t) u0 + int_0^t S(t - s) f(s) ds`` for a scalar resolvent ``S``.

    ``u0`` may be a scalar or a vector of the dimension of ``f``.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    u0 = np.atleast_1d(np.asarray(u0, dtype=float))
    if u0.size not in (1, f.dim):
        raise ValueError("u0 and f must have the same dimension")
    g = f if f.lower <= 0.0 else Restrict(f, 0.0)
    S_t = float(S.as_function().values(np.array([t]))[0, 0]) if t > 0 else _limit_at_zero(S)
    conv = _kernel_integral(S, g, float(t), 0.0, float(t), tol)
    out = S_t * u0 + conv
    return float(out[0]) if out.size == 1 else out


def _limit_at_zero(S: KernelSpec) -> float:
    """``S(0+)`` read at ``t = 1e-12``."""
    return float(S.as_function().values(np.array([1e-12]))[0, 0])


def mild_solution_line(R: KernelSpec, g: FunctionSpec, t: float, tol: float = DEFAULT_TOL):
    """``int_{-inf}^t R(t - s) g(s) ds``, the infinite convolution of ``R`` and ``g`` at ``t``."""
    return infinite_convolution(R, g, t, tol)


@dataclass
class ContinuityReport:
    """Values ``S(t) u0`` as ``t`` decreases to 0 and the measured limit."""

    times: np.ndarray
    values: np.ndarray
    limit: float
    matches: bool
    status: Status = field(default=Status.SATISFIED)


def continuity_at_zero(S: KernelSpec, u0: float = 1.0, tol: float = 1e-6) -> ContinuityReport:
    """Check ``lim_{t -> 0+} S(t) u0 = u0`` on ``t = 10**-1, ..., 10**-10``.

    The limit is the value at the smallest ``t`` when the last three values
    agree within ``tol``; otherwise the status is inconclusive and no limit
    is claimed (``limit`` is nan).
    """
    ts = 10.0 ** -np.arange(1, 11, dtype=float)
    vals = S.as_function().values(ts)[:, 0] * float(u0)
    last = vals[-3:]
    if np.max(last) - np.min(last) > tol:
        return ContinuityReport(ts, vals, math.nan, False, Status.INCONCLUSIVE)
    limit = float(vals[-1])
    ok = abs(limit - float(u0)) <= tol * max(1.0, abs(float(u0)))
    return ContinuityReport(ts, vals, limit, ok, Status.SATISFIED if ok else Status.VIOLATED)
