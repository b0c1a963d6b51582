import math

import pytest

from varweyl import funcspace as fs
from varweyl.apclass import (
    ClassConfig,
    find_period,
    membership_report,
    recheck_witness,
    relative_density_scan,
    tau_candidates,
)

P1 = fs.ConstantExponent(1.0)


def test_sinusoid_is_member():
    v = membership_report(fs.Sinusoid(1.0), ClassConfig())
    assert v.satisfied
    assert all(r["status"] == "satisfied-on-grid" for r in v.diagnostics)


def test_indicator_with_growing_weight_is_member():
    v = membership_report(fs.Indicator(0.0, 0.5), ClassConfig(p=P1, F=fs.PsiPower.power(1.0, P1)))
    assert v.satisfied


def test_indicator_unweighted_has_witness():
    cfg = ClassConfig(p=P1, F=fs.PsiPower.power(0.0, P1), eps=(0.2,), scan_start=10.0)
    v = membership_report(fs.Indicator(0.0, 0.5), cfg)
    assert v.violated
    assert 10.0 <= v.witness["interval"][0] < v.witness["interval"][1] <= 30.0
    assert recheck_witness(fs.Indicator(0.0, 0.5), v.witness, cfg) == pytest.approx(v.witness["value"])
    assert v.witness["value"] > 0.2


@pytest.mark.parametrize("sigma", [-1.0, -0.5, 0.0, 0.5, 1.0])
def test_heaviside_equi_catalog_violated(sigma):
    v = membership_report(fs.Heaviside(), ClassConfig(p=P1, F=fs.PsiPower.power(sigma, P1)))
    assert v.violated


def test_heaviside_limsup_member():
    v = membership_report(fs.Heaviside(), ClassConfig(p=P1, F=fs.PsiPower.power(1.0, P1), equi=False))
    assert v.satisfied


def test_smaller_eps_after_failure_is_implied():
    cfg = ClassConfig(p=P1, eps=(0.5, 0.2), scan_start=10.0)
    v = membership_report(fs.Heaviside(), cfg)
    assert v.violated
    assert v.diagnostics[-1].get("implied_by_eps") == 0.5


def test_find_period_for_sinusoid():
    tau = find_period(fs.Sinusoid(1.0), 1e-6, 3.0, (6.0, 7.0), ClassConfig())
    assert tau == pytest.approx(2 * math.pi)


def test_find_period_none_for_heaviside():
    assert find_period(fs.Heaviside(), 0.1, 1.0, (5.0, 6.0), ClassConfig()) is None


def test_tau_candidates_include_periods():
    taus = tau_candidates(fs.Sinusoid(1.0), 0.0, 10.0, 1.0)
    assert any(abs(t - 2 * math.pi) < 1e-15 for t in taus)


def test_relative_density_scan_needs_four_windows():
    with pytest.raises(ValueError):
        relative_density_scan(fs.Sinusoid(1.0), 0.5, 1.0, 8.0, ClassConfig(), windows=2)


@pytest.mark.parametrize("kw", [dict(eps=(0.1, 0.2)), dict(eps=()), dict(family="curly"), dict(windows=3),
                                dict(L_ladder=(0.0,)), dict(limsup_l_grid=fs.GridSpec.geometric(1.0, 8.0, 4))])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        ClassConfig(**kw)
