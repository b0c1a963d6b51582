import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from varweyl import funcspace as fs
from varweyl.weylnorms import (
    SeminormRequest,
    bracket_seminorm,
    declared_period,
    limsup_over_l,
    paren_seminorm,
    seminorm,
    stevate_transform,
    untranslated_norm,
)

P1 = fs.ConstantExponent(1.0)


@pytest.mark.parametrize("p", [1.0, 2.0])
@pytest.mark.parametrize("tau", [0.25, 1.0, 2.0, -1.5])
def test_heaviside_seminorm(p, tau):
    req = SeminormRequest(fs.Heaviside(), tau, fs.ConstantExponent(p), l=2 * abs(tau) + 1)
    assert seminorm(req).value == pytest.approx(abs(tau) ** (1 / p), rel=1e-9)


def test_zero_shift_is_zero():
    req = SeminormRequest(fs.Indicator(0.0, 0.5), 0.0, P1, l=3.0)
    assert seminorm(req).value == 0.0


def test_exact_period_gives_zero():
    req = SeminormRequest(fs.Periodic(fs.Indicator(0.0, 0.5), 1.0), 3.0, fs.ConstantExponent(2.0), l=5.0)
    assert seminorm(req).value == pytest.approx(0.0, abs=1e-12)


def test_sinusoid_half_period():
    # |sin(x + pi) - sin(x)| = 2|sin x|; L^1 over a period is 8
    req = SeminormRequest(fs.Sinusoid(1.0), math.pi, P1, l=2 * math.pi)
    assert seminorm(req).value == pytest.approx(8.0, rel=1e-8)


def test_weight_scales_linearly():
    base = SeminormRequest(fs.Heaviside(), 1.0, P1, l=4.0)
    weighted = base.with_(F=fs.PowerOfL(-1.0))
    assert seminorm(weighted).value == pytest.approx(seminorm(base).value / 4.0)


@pytest.mark.parametrize("variant", ["base", "sub1", "sub2"])
def test_variants_agree_for_identity_phi(variant):
    req = SeminormRequest(fs.Heaviside(), 1.0, fs.ConstantExponent(2.0), l=3.0, variant=variant)
    assert seminorm(req).value == pytest.approx(1.0, rel=1e-9)


def test_sub2_applies_phi_outside():
    req = SeminormRequest(fs.Heaviside(), 1.0, P1, phi=fs.CatalogPhi("square"), l=3.0, variant="sub2",
                          F=fs.PowerOfL(-1.0))
    assert seminorm(req).value == pytest.approx(1.0 / 9.0, rel=1e-9)


@given(
    tau=st.floats(0.1, 3.0),
    l=st.floats(0.5, 8.0),
    p=st.sampled_from([1.0, 1.5, 2.0, 3.0]),
    sigma=st.floats(-1.0, 1.0),
)
def test_bracket_equals_rescaled_paren(tau, l, p, sigma):
    f = fs.Indicator(0.0, 0.7)
    pe = fs.ConstantExponent(p)
    grid = fs.GridSpec.linspace(-4.0, 4.0, 81)
    F = fs.PowerOfL(sigma)
    br = bracket_seminorm(SeminormRequest(f, tau, pe, F=F, l=l, family="bracket", t_grid=grid, refine=False))
    rescaled = fs.CustomWeight(lambda ll, t: ll ** sigma * ll ** (-1.0 / p), t_independent=True)
    pa = paren_seminorm(SeminormRequest(f, tau, pe, F=rescaled, l=l, t_grid=grid, refine=False))
    assert br.value == pytest.approx(pa.value, rel=1e-9, abs=1e-15)


def test_family_guard():
    with pytest.raises(ValueError):
        bracket_seminorm(SeminormRequest(fs.Heaviside(), 1.0, P1))
    with pytest.raises(ValueError):
        SeminormRequest(fs.Heaviside(), 1.0, P1, family="curly")
    with pytest.raises(ValueError):
        SeminormRequest(fs.Heaviside(), 1.0, P1, l=0.0)


def test_limsup_decays_for_growing_psi():
    req = SeminormRequest(fs.Heaviside(), 1.0, P1, F=fs.PsiPower.power(1.0, P1))
    res = limsup_over_l(req, fs.GridSpec.geometric(2.0, 256.0, 8))
    assert res.value == pytest.approx(1.0 / 32.0)
    assert np.all(np.diff(res.seminorms) < 0)


def test_limsup_needs_eight_points():
    req = SeminormRequest(fs.Heaviside(), 1.0, P1)
    with pytest.raises(ValueError):
        limsup_over_l(req, fs.GridSpec.geometric(1.0, 8.0, 4))


def test_declared_period():
    assert declared_period(fs.Sinusoid(1.0)) == pytest.approx(2 * math.pi)
    assert declared_period(fs.Heaviside()) is None


def test_untranslated_norm_of_spikes():
    res = untranslated_norm(fs.SpikeTrain(), P1, fs.IdentityPhi(), fs.ConstantOne(), 1.0, domain="half",
                            t_grid=fs.GridSpec.linspace(0.0, 30.0, 61))
    assert res.value == pytest.approx(1.0)


def test_stevate_transform():
    F1 = stevate_transform(fs.ConstantOne(), lambda l: np.asarray(l) ** 2, "F1")
    assert F1(2.0, 0.0) == pytest.approx(0.5)
    F2 = stevate_transform(fs.ConstantOne(), lambda l: np.asarray(l) ** 2, "F2")
    assert F2(2.0, 0.0) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        stevate_transform(fs.ConstantOne(), np.sqrt, "F3")
