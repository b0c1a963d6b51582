"""Acceptance criteria AC1 to AC12 at their stated tolerances.

A summary line per criterion is printed at the end of the run.  Criteria
that the implementation reproduces faithfully but that fail as stated are
marked ``xfail(strict=True)`` with the assertion left as written.
"""
import csv
import io
import math
import time

import numpy as np
import pytest

from varweyl import funcspace as fs
from varweyl.apclass import ClassConfig, membership_report
from varweyl.cli import main
from varweyl.convolution import ConvolutionFunction, section41_grid
from varweyl.ergodic import VanishingConfig, sqrt_spike_bound, unit_spike_bound, vanishing_verdict
from varweyl.fractional import caputo_derivative, gamma_kernel, kernel_semigroup, mild_solution_dfp
from varweyl.suite import expected_rows
from varweyl.varlebesgue import (
    domination_check,
    embedding_check,
    holder_check,
    jensen_check,
    luxemburg_norm,
    window_norms,
)
from varweyl.weylnorms import SeminormRequest, bracket_seminorm, limsup_over_l, paren_seminorm, seminorm

pytestmark = pytest.mark.acceptance

P1 = fs.ConstantExponent(1.0)


def random_step(rng, lo=0.0, hi=1.0, max_pieces=8, scale=3.0):
    n = int(rng.integers(1, max_pieces + 1))
    edges = np.sort(rng.uniform(lo, hi, n + 1))
    edges[0], edges[-1] = lo, hi
    return fs.PiecewiseConstant(edges, rng.uniform(-scale, scale, (n, 1)))


def random_exponent(rng):
    if rng.random() < 0.5:
        return fs.ConstantExponent(float(rng.uniform(1.0, 5.0)))
    return fs.PiecewiseConstantExponent([float(rng.uniform(0.2, 0.8))], rng.uniform(1.0, 5.0, 2).tolist())


# --------------------------------------------------------------------- AC1


def test_ac1_heaviside_seminorm():
    start = time.perf_counter()
    for p in (1.0, 2.0):
        for tau in (0.25, 1.0, 2.0):
            req = SeminormRequest(fs.Heaviside(), tau, fs.ConstantExponent(p), fs.IdentityPhi(), fs.ConstantOne(),
                                  2 * abs(tau) + 1)
            assert abs(seminorm(req).value - abs(tau) ** (1 / p)) <= 1e-6
    assert time.perf_counter() - start < 5.0


# --------------------------------------------------------------------- AC2


def test_ac2_indicator_verdicts():
    start = time.perf_counter()
    f = fs.Indicator(0.0, 0.5)
    member = membership_report(f, ClassConfig(p=P1, F=fs.PsiPower.power(1.0, P1)))
    assert str(member.status) == "satisfied-on-grid"
    cfg = ClassConfig(p=P1, F=fs.PsiPower.power(0.0, P1), eps=(0.2,), scan_start=10.0)
    out = membership_report(f, cfg)
    assert str(out.status) == "violated-with-witness"
    lo, hi = out.witness["interval"]
    assert 10.0 <= lo < hi <= 20.0
    assert time.perf_counter() - start < 30.0


# --------------------------------------------------------------------- AC3


@pytest.mark.parametrize("sigma", [-1.0, -0.5, 0.0, 0.5, 1.0])
def test_ac3_heaviside_equi_catalog(sigma):
    v = membership_report(fs.Heaviside(), ClassConfig(p=P1, F=fs.PsiPower.power(sigma, P1), scan_start=512.0))
    assert str(v.status) == "violated-with-witness"


def test_ac3_heaviside_weyl_limsup():
    v = membership_report(fs.Heaviside(), ClassConfig(p=P1, F=fs.PsiPower.power(1.0, P1), equi=False))
    assert str(v.status) == "satisfied-on-grid"
    req = SeminormRequest(fs.Heaviside(), 1.0, P1, fs.IdentityPhi(), fs.PsiPower.power(1.0, P1), 256.0)
    res = limsup_over_l(req, fs.GridSpec.geometric(2.0, 256.0, 8))
    assert res.l_values[-1] == 256.0
    assert res.seminorms[-1] <= 1e-2


# --------------------------------------------------------------------- AC4


def test_ac4_luxemburg_bisection_vs_closed_form():
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(200):
        f = random_step(rng)
        p = fs.ConstantExponent(float(rng.choice([1.0, 1.5, 2.0, 4.0])))
        closed = luxemburg_norm(f, p, 0.0, 1.0).value
        bis = luxemburg_norm(f, p, 0.0, 1.0, method="bisection").value
        worst = max(worst, abs(bis - closed) / closed)
    assert worst <= 1e-9


def test_ac4_mixed_exponent():
    p = fs.PiecewiseConstantExponent([0.5], [2.0, 4.0])
    assert abs(luxemburg_norm(fs.Indicator(0.0, 1.0), p, 0.0, 1.0).value - 1.0) <= 1e-9


# --------------------------------------------------------------------- AC5


def test_ac5_holder():
    rng = np.random.default_rng(51)
    violations = 0
    for _ in range(200):
        cut = [float(rng.uniform(0.2, 0.8))]
        pv, rv = rng.uniform(2.0, 6.0, 2), rng.uniform(2.0, 6.0, 2)
        p, r = fs.PiecewiseConstantExponent(cut, pv.tolist()), fs.PiecewiseConstantExponent(cut, rv.tolist())
        q = fs.PiecewiseConstantExponent(cut, (1.0 / (1.0 / pv + 1.0 / rv)).tolist())
        violations += not holder_check(random_step(rng), random_step(rng), p, q, r, 0.0, 1.0).satisfied
    assert violations == 0


def test_ac5_embedding():
    rng = np.random.default_rng(52)
    violations = 0
    for _ in range(200):
        t, l = float(rng.uniform(-5.0, 5.0)), float(rng.uniform(0.05, 20.0))
        f = random_step(rng, t, t + l)
        p = fs.PiecewiseConstantExponent([t + l * float(rng.uniform(0.2, 0.8))], rng.uniform(1.0, 5.0, 2).tolist())
        violations += not embedding_check(f, p, t, l).satisfied
    assert violations == 0


def test_ac5_domination():
    rng = np.random.default_rng(53)
    violations = 0
    for _ in range(200):
        f = random_step(rng)
        g = fs.Scale(float(rng.uniform(0.0, 1.0)), f)
        violations += not domination_check(g, f, random_exponent(rng), 0.0, 1.0).satisfied
    assert violations == 0


# --------------------------------------------------------------------- AC6

CONVEX = ("expm1", "cosh1", "square")
CONCAVE = ("log1p", "sqrt", "ratio")


@pytest.mark.parametrize("names", [CONVEX, CONCAVE], ids=["convex", "concave-reversed"])
def test_ac6_jensen(names):
    rng = np.random.default_rng(6 + len(names[0]))
    violations = 0
    for _ in range(500):
        phi = fs.CatalogPhi(str(rng.choice(names)))
        a = fs.Geometric(float(rng.uniform(0.05, 0.95)))
        x = rng.uniform(0.0, 3.0, int(rng.integers(2, 30)))
        violations += not jensen_check(phi, a, x).satisfied
    assert violations == 0


# --------------------------------------------------------------------- AC7


def test_ac7_bracket_paren_rescaling():
    rng = np.random.default_rng(7)
    grid = fs.GridSpec.linspace(-6.0, 6.0, 49)
    worst = 0.0
    for _ in range(100):
        f = random_step(rng, -3.0, 3.0)
        tau, l = float(rng.uniform(-3.0, 3.0)), float(rng.uniform(0.2, 10.0))
        p = float(rng.choice([1.0, 1.5, 2.0, 3.0]))
        sigma = float(rng.uniform(-1.0, 2.0))
        pe = fs.ConstantExponent(p)
        br = bracket_seminorm(SeminormRequest(f, tau, pe, F=fs.PowerOfL(sigma), l=l, family="bracket",
                                              t_grid=grid, refine=False)).value
        weight = fs.CustomWeight(lambda ll, t, s=sigma, p=p: ll ** s * ll ** (-1.0 / p), t_independent=True)
        pa = paren_seminorm(SeminormRequest(f, tau, pe, F=weight, l=l, t_grid=grid, refine=False)).value
        if pa > 0:
            worst = max(worst, abs(br - pa) / pa)
    assert worst <= 1e-9


# --------------------------------------------------------------------- AC8


@pytest.mark.slow
@pytest.mark.xfail(strict=True, reason="the window bound fails at k = 0 for beta = 0.5")
def test_ac8_window_bound_grid():
    start = time.perf_counter()
    v = section41_grid()
    assert time.perf_counter() - start < 60.0
    assert v.detail["cases"] > 0
    assert str(v.status) == "satisfied-on-grid", v.witness


# --------------------------------------------------------------------- AC9

AC9_LS = fs.GridSpec.geometric(0.5, 256.0, 10).points()
AC9_TS = np.linspace(0.0, 1e3, 100)


def test_ac9a_unit_spike_bound_and_thresholds():
    q = fs.SpikeTrain("one")
    for l in AC9_LS:
        assert np.all(window_norms(q, P1, AC9_TS, l) <= unit_spike_bound(l, AC9_TS) + 1e-12)
    for sigma in (-1.0, -0.5, -0.25, -0.1, 0.0, 0.5):
        status = str(vanishing_verdict(q, VanishingConfig(F=fs.PowerOfL(sigma), order="equi")).status)
        if sigma < 0:
            assert status != "violated-with-witness"
        else:
            assert status == "violated-with-witness"
    for sigma in (-1.0, -0.5):
        assert vanishing_verdict(q, VanishingConfig(F=fs.PowerOfL(sigma), order="equi")).satisfied


@pytest.mark.xfail(strict=True, reason="sqrt(n) spike windows grow like (l + t)^(3/4)")
def test_ac9b_sqrt_spike_bound():
    q = fs.SpikeTrain("sqrt")
    for l in AC9_LS:
        assert np.all(window_norms(q, P1, AC9_TS, l) <= sqrt_spike_bound(l, AC9_TS) + 1e-12), l


@pytest.mark.xfail(strict=True, reason="sqrt(n) spikes vanish in the Weyl order only below sigma = -3/4")
def test_ac9c_sqrt_spike_weyl_threshold():
    q = fs.SpikeTrain("sqrt")
    p = 1.0
    for sigma in (-1.0, -0.6, -0.4, 0.0):
        status = str(vanishing_verdict(q, VanishingConfig(F=fs.PowerOfL(sigma), order="weyl")).status)
        if sigma < -1.0 / (2.0 * p):
            assert status != "violated-with-witness", sigma
        else:
            assert status == "violated-with-witness", sigma


# --------------------------------------------------------------------- AC10


@pytest.mark.parametrize("zeta", [0.3, 0.5, 0.9])
def test_ac10_caputo_power_rule(zeta):
    u = fs.CallableFunction(lambda t: t, lower=0.0)
    for t in np.linspace(0.1, 2.0, 20):
        expected = t ** (1 - zeta) / math.gamma(2 - zeta)
        assert abs(caputo_derivative(u, zeta, float(t)) - expected) <= 1e-4 * expected


def test_ac10_kernel_semigroup():
    for zeta, eta, t in [(0.3, 0.5, 2.0), (0.5, 0.5, 1.0), (0.9, 0.2, 0.3), (0.1, 0.1, 5.0)]:
        expected = gamma_kernel(zeta + eta, t)
        assert abs(kernel_semigroup(zeta, eta, t) - expected) <= 1e-6 * abs(expected)


def test_ac10_mild_solution_residual():
    S = fs.ExpDecay(1.0, 1.0, 1.0)
    f = fs.Restrict(fs.Sinusoid(1.0), 0.0)
    h = 1e-4
    for t in (0.5, 1.0, 2.0, 4.0):
        u = [mild_solution_dfp(S, 1.0, f, t + d) for d in (-h, 0.0, h)]
        residual = (u[2] - u[0]) / (2 * h) - (-u[1] + math.sin(t))
        assert abs(residual) <= 1e-4


# --------------------------------------------------------------------- AC11


def test_ac11_convolution_of_sinusoid():
    G = ConvolutionFunction(fs.ExpDecay(1.0, 1.0, 1.0), fs.Sinusoid(1.0))
    xs = np.linspace(-10.0, 10.0, 401)
    assert np.max(np.abs(G.values(xs)[:, 0] - 0.5 * (np.sin(xs) - np.cos(xs)))) <= 1e-6
    Gq = ConvolutionFunction(fs.ExpDecay(1.0, 1.0, 1.0), fs.Sinusoid(1.0), method="quadrature")
    xq = np.linspace(-10.0, 10.0, 21)
    assert np.max(np.abs(Gq.values(xq)[:, 0] - 0.5 * (np.sin(xq) - np.cos(xq)))) <= 1e-6
    sn = seminorm(SeminormRequest(G, 2 * math.pi, P1, fs.IdentityPhi(), fs.ConstantOne(), 1.0)).value
    assert sn < 1e-5


# --------------------------------------------------------------------- AC12


@pytest.mark.slow
def test_ac12_full_suite(tmp_path):
    out = tmp_path / "suite.csv"
    start = time.perf_counter()
    code = main(["paper-suite", "all", "--seed", "0", "--out", str(out)], io.StringIO())
    elapsed = time.perf_counter() - start
    assert code == 0
    assert elapsed < 300.0
    rows = list(csv.DictReader(out.open()))
    stored = expected_rows()
    assert [r["case"] for r in rows] == [r["case"] for r in stored]
    assert [r["verdict"] for r in rows] == [r["verdict"] for r in stored]
    # a second run of the seeded selection reproduces the same rows
    again = tmp_path / "again.csv"
    assert main(["paper-suite", "spaces", "--seed", "0", "--out", str(again)], io.StringIO()) == 0
    first = {r["case"]: r for r in rows}
    for r in csv.DictReader(again.open()):
        assert r == first[r["case"]], r["case"]
