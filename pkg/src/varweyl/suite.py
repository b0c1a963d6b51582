"""Pinned worked examples and their stored verdicts.

Every case recomputes one verdict (and one headline number) from the
public operations of the package.  :func:`run_suite` returns the rows,
:func:`compare_with_expected` checks them against ``data/expected_suite.csv``.

A row has the columns ``case``, ``group``, ``verdict``, ``value`` and
``rtol``.  ``verdict`` is a grid status for membership and inequality
cases; for closed-form values it is ``satisfied-on-grid`` when the
computed number agrees with the independent reference within ``rtol``.

Selections: ``all``, ``spaces`` (seminorms and class membership),
``vanishing`` (ergodic components) and ``bounds`` (kernel bounds,
convolutions and fractional operators).
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources
from typing import Callable

import numpy as np

from . import funcspace as fs
from .verdict import Status

SELECTIONS = ("all", "spaces", "vanishing", "bounds")
GROUPS = SELECTIONS[1:]


@dataclass(frozen=True)
class Case:
    name: str
    group: str
    run: Callable[[int], tuple[str, float]]
    rtol: float = 1e-6


def _agree(value: float, reference: float, rtol: float) -> str:
    ok = abs(value - reference) <= rtol * max(1.0, abs(reference))
    return str(Status.SATISFIED if ok else Status.VIOLATED)


# --------------------------------------------------------------------- spaces

_P1 = fs.ConstantExponent(1.0)


def _heaviside_seminorm(p: float, tau: float):
    from .weylnorms import SeminormRequest, seminorm

    def run(seed):
        req = SeminormRequest(fs.Heaviside(), tau, fs.ConstantExponent(p), fs.IdentityPhi(), fs.ConstantOne(),
                              2 * abs(tau) + 1)
        value = seminorm(req).value
        return _agree(value, abs(tau) ** (1 / p), 1e-6), value

    return run


def _membership(f, **kw):
    from .apclass import ClassConfig, membership_report

    def run(seed):
        v = membership_report(f, ClassConfig(**kw))
        witness = v.witness or {}
        return str(v.status), float(witness.get("value", witness.get("tau", math.nan)))

    return run


def _weyl_heaviside(seed):
    from .weylnorms import SeminormRequest, limsup_over_l

    req = SeminormRequest(fs.Heaviside(), 1.0, _P1, fs.IdentityPhi(), fs.PsiPower.power(1.0, _P1), 256.0)
    res = limsup_over_l(req, fs.GridSpec.geometric(2.0, 256.0, 8))
    value = float(res.seminorms[-1])
    return str(Status.SATISFIED if value <= 1e-2 else Status.VIOLATED), value


def _luxemburg_random(seed):
    """Bisection against the closed form on seeded random step functions."""
    from .varlebesgue import luxemburg_norm

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(40):
        n = int(rng.integers(1, 8))
        edges = np.sort(rng.uniform(0.0, 1.0, n + 1))
        f = fs.PiecewiseConstant(edges, rng.uniform(-3.0, 3.0, (n, 1)))
        p = fs.ConstantExponent(float(rng.choice([1.0, 1.5, 2.0, 4.0])))
        closed = float(luxemburg_norm(f, p, 0.0, 1.0))
        bis = float(luxemburg_norm(f, p, 0.0, 1.0, method="bisection"))
        if closed > 0:
            worst = max(worst, abs(bis - closed) / closed)
    return str(Status.SATISFIED if worst <= 1e-9 else Status.VIOLATED), worst


def _mixed_exponent(seed):
    from .varlebesgue import luxemburg_norm

    p = fs.PiecewiseConstantExponent([0.5], [2.0, 4.0])
    value = float(luxemburg_norm(fs.Indicator(0.0, 1.0), p, 0.0, 1.0))
    return _agree(value, 1.0, 1e-9), value


# ------------------------------------------------------------------ vanishing


def _vanishing(q, order: str, sigma: float, p: float = 1.0):
    from .ergodic import VanishingConfig, vanishing_verdict

    def run(seed):
        cfg = VanishingConfig(p=fs.ConstantExponent(p), F=fs.PowerOfL(sigma), order=order)
        v = vanishing_verdict(q, cfg)
        return str(v.status), float(v.detail["last"])

    return run


def _stepanov_spike(seed):
    from .ergodic import stepanov_vanishing_verdict

    q = fs.SpikeTrain("one")
    v = stepanov_vanishing_verdict(q, _P1, fs.IdentityPhi(), lambda t: 1.0, fs.GridSpec.geometric(1.0, 1e4, 9))
    return str(v.status), float(v.detail["trailing_max"])


def _decomposition(seed):
    from .apclass import ClassConfig
    from .ergodic import VanishingConfig, asymptotic_decomposition_check

    v = asymptotic_decomposition_check(fs.Sinusoid(1.0), fs.SpikeTrain("one"), ClassConfig(eps=(0.5, 0.2)),
                                       VanishingConfig(F=fs.PowerOfL(-0.5), order="equi"))
    return str(v.status), float(len(v.diagnostics))


def _spike_bound(seed):
    from .ergodic import unit_spike_bound
    from .varlebesgue import window_norms

    q = fs.SpikeTrain("one")
    worst = -math.inf
    for l in (1.0, 4.0, 16.0, 64.0):
        ts = np.linspace(0.0, 1e3, 1001)
        norms = window_norms(q, _P1, ts, l)
        worst = max(worst, float(np.max(norms - unit_spike_bound(l, ts))))
    return str(Status.SATISFIED if worst <= 1e-9 else Status.VIOLATED), worst


# --------------------------------------------------------------------- bounds


def _section41_grid(seed):
    from .convolution import section41_grid

    v = section41_grid()
    w = v.witness or {}
    return str(v.status), float(w.get("k", math.nan))


def _section41_value(k, l, q, beta, gamma, reference):
    from .convolution import section41_bound_check

    def run(seed):
        v = section41_bound_check(k, l, q, beta, gamma)
        lhs = float(v.detail["lhs"])
        agree = abs(lhs - reference) <= 1e-5 * abs(reference)
        return str(v.status if agree else Status.VIOLATED), lhs

    return run


def _growth(q, beta, gamma):
    from .convolution import window_series_growth

    def run(seed):
        v = window_series_growth(q, beta, gamma, fs.GridSpec.geometric(1.0, 256.0, 9))
        return str(v.status), float(v.detail["growth_exponent"])

    return run


def _sin_convolution(seed):
    from .convolution import ConvolutionFunction
    from .weylnorms import SeminormRequest, seminorm

    G = ConvolutionFunction(fs.ExpDecay(1.0, 1.0, 1.0), fs.Sinusoid(1.0))
    xs = np.linspace(-10.0, 10.0, 201)
    err = float(np.max(np.abs(G.values(xs)[:, 0] - 0.5 * (np.sin(xs) - np.cos(xs)))))
    sn = seminorm(SeminormRequest(G, 2 * math.pi, _P1, fs.IdentityPhi(), fs.ConstantOne(), 1.0)).value
    ok = err <= 1e-6 and sn < 1e-5
    return str(Status.SATISFIED if ok else Status.VIOLATED), err


def _series(which: str, reference: float, **kw):
    from .convolution import series_eval

    def run(seed):
        res = series_eval(which, **kw)
        return _agree(res.value, reference, 1e-7), res.value

    return run


def _halving(k):
    return 0.5 ** np.asarray(k, dtype=float)


def _caputo(seed):
    from .fractional import caputo_derivative

    u = fs.CallableFunction(lambda t: t, lower=0.0)
    value = caputo_derivative(u, 0.5, 1.0)
    return _agree(value, 1.0 / math.gamma(1.5), 1e-8), value


def _semigroup(seed):
    from .fractional import gamma_kernel, kernel_semigroup

    value = kernel_semigroup(0.3, 0.5, 2.0)
    return _agree(value, gamma_kernel(0.8, 2.0), 1e-8), value


def _prop_finite(seed):
    from .convolution import check_prop_finite

    v = check_prop_finite(fs.ExpDecay(1.0, 1.0, 1.0), fs.SpikeTrain("one"), fs.PowerOfL(-1.0), fs.PowerOfL(-1.0))
    return str(v.status), float(v.detail.get("ratio_max", math.nan))


def _mild(seed):
    from .fractional import mild_solution_dfp

    value = mild_solution_dfp(fs.ExpDecay(1.0, 1.0, 1.0), 0.0, fs.Constant(1.0, lower=0.0), 1.0)
    return _agree(value, 1.0 - math.exp(-1.0), 1e-9), value


def _cases() -> list[Case]:
    sigmas = (-1.0, -0.5, 0.0, 0.5, 1.0)
    ind = fs.Indicator(0.0, 0.5)
    cases = [
        Case("heaviside-seminorm-p1-tau1", "spaces", _heaviside_seminorm(1.0, 1.0)),
        Case("heaviside-seminorm-p2-tau2", "spaces", _heaviside_seminorm(2.0, 2.0)),
        Case("indicator-equi-l^1", "spaces", _membership(ind, F=fs.PsiPower.power(1.0, _P1))),
        Case("indicator-equi-l^0", "spaces", _membership(ind, F=fs.PsiPower.power(0.0, _P1), eps=(0.2,),
                                                         scan_start=10.0)),
        *[Case(f"heaviside-equi-l^{s:g}", "spaces", _membership(fs.Heaviside(), F=fs.PsiPower.power(s, _P1),
                                                                scan_start=512.0))
          for s in sigmas],
        Case("heaviside-limsup-l^1", "spaces", _weyl_heaviside),
        Case("luxemburg-bisection-vs-closed", "spaces", _luxemburg_random, rtol=0.0),
        Case("luxemburg-mixed-exponent", "spaces", _mixed_exponent),
        Case("spikes-equi-l^-0.5", "vanishing", _vanishing(fs.SpikeTrain("one"), "equi", -0.5)),
        Case("spikes-equi-l^0", "vanishing", _vanishing(fs.SpikeTrain("one"), "equi", 0.0)),
        Case("sqrt-spikes-weyl-l^-1", "vanishing", _vanishing(fs.SpikeTrain("sqrt"), "weyl", -1.0)),
        Case("sqrt-spikes-equi-l^-1", "vanishing", _vanishing(fs.SpikeTrain("sqrt"), "equi", -1.0)),
        Case("spikes-stepanov", "vanishing", _stepanov_spike),
        Case("sinusoid-plus-spikes", "vanishing", _decomposition),
        Case("spikes-window-bound", "vanishing", _spike_bound, rtol=0.0),
        Case("kernel-window-bound-grid", "bounds", _section41_grid),
        Case("kernel-window-bound-k0", "bounds", _section41_value(0, 1.0, 2.0, 1.0, 2.0, 0.642699)),
        Case("kernel-window-bound-k3", "bounds", _section41_value(3, 2.0, 1.0, 1.0, 2.0,
                                                                  math.atan(8.0) - math.atan(6.0))),
        Case("window-series-growth-q2", "bounds", _growth(2.0, 1.0, 2.0)),
        Case("sinusoid-convolution", "bounds", _sin_convolution),
        Case("series-H", "bounds", _series("H", 1.0401810933050684, R=fs.ExpDecay(1.0, 1.0, 1.0),
                                           q=fs.ConstantExponent(2.0), l=1.0, x=0.0)),
        Case("series-W2", "bounds", _series("W2", 0.7746003264394359, R=fs.ExpDecay(1.0, 1.0, 1.0),
                                            q=_P1, x=0.0, b=_halving)),
        Case("caputo-identity", "bounds", _caputo),
        Case("kernel-semigroup", "bounds", _semigroup),
        Case("mild-solution", "bounds", _mild),
        Case("finite-convolution-spikes", "bounds", _prop_finite),
    ]
    return cases


def cases(selection: str = "all") -> list[Case]:
    if selection not in SELECTIONS:
        raise ValueError(f"unknown selection {selection!r}; choose one of {SELECTIONS}")
    return [c for c in _cases() if selection == "all" or c.group == selection]


def _run_case(args):
    name, seed = args
    case = next(c for c in _cases() if c.name == name)
    verdict, value = case.run(seed)
    return {"case": case.name, "group": case.group, "verdict": verdict, "value": float(value), "rtol": case.rtol}


def run_suite(selection: str = "all", seed: int = 0, jobs: int = 1) -> list[dict]:
    """Run the pinned cases; rows come back in table order whatever ``jobs`` is."""
    todo = [(c.name, seed) for c in cases(selection)]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_case, todo))
    return [_run_case(t) for t in todo]


def expected_rows() -> list[dict]:
    """The stored table."""
    text = resources.files("varweyl").joinpath("data/expected_suite.csv").read_text()
    rows = []
    for r in csv.DictReader(text.splitlines()):
        rows.append({"case": r["case"], "group": r["group"], "verdict": r["verdict"],
                     "value": float(r["value"]) if r["value"] not in ("", "nan") else math.nan,
                     "rtol": float(r["rtol"])})
    return rows


def compare_with_expected(rows: list[dict], expected: list[dict] | None = None) -> dict[str, str]:
    """Map ``case -> reason`` for every row that disagrees with the stored table."""
    table = {r["case"]: r for r in (expected_rows() if expected is None else expected)}
    out = {}
    for r in rows:
        exp = table.get(r["case"])
        if exp is None:
            out[r["case"]] = "not in the stored table"
            continue
        if r["verdict"] != exp["verdict"]:
            out[r["case"]] = f"verdict {r['verdict']} differs from stored {exp['verdict']}"
            continue
        a, b = r["value"], exp["value"]
        if math.isnan(a) and math.isnan(b):
            continue
        rtol = max(exp["rtol"], 1e-9)
        if not abs(a - b) <= rtol * max(1.0, abs(b)):
            out[r["case"]] = f"value {a!r} differs from stored {b!r}"
    return out
