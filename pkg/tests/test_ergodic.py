import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from varweyl import funcspace as fs
from varweyl.ergodic import (
    VanishingConfig,
    asymptotic_decomposition_check,
    sqrt_spike_bound,
    stepanov_vanishing_verdict,
    tirsen_transform,
    unit_spike_bound,
    vanishing_functional,
    vanishing_verdict,
)
from varweyl.apclass import ClassConfig
from varweyl.varlebesgue import window_norms

P1 = fs.ConstantExponent(1.0)


@pytest.mark.parametrize("l", [1.0, 3.0, 16.0, 100.0])
def test_unit_spike_window_bound(l):
    ts = np.linspace(0.0, 1e3, 1001)
    norms = window_norms(fs.SpikeTrain(), P1, ts, l)
    assert np.all(norms <= unit_spike_bound(l, ts) + 1e-9)


def test_sqrt_spike_bound_fails_on_long_windows():
    # height sqrt(k) on [k^2, k^2 + 1): a window [0, l] holds about sqrt(l) spikes
    # whose heights add up to order l^(3/4), which outgrows (l + t)^(1/2)
    ts = np.linspace(0.0, 1e3, 1001)
    gaps = {l: float(np.max(window_norms(fs.SpikeTrain("sqrt"), P1, ts, l) - sqrt_spike_bound(l, ts)))
            for l in (1.0, 16.0, 100.0)}
    assert gaps[1.0] < 0
    assert gaps[16.0] > 0 and gaps[100.0] > gaps[16.0]


@given(st.floats(0.1, 50.0), st.floats(0.0, 500.0))
def test_unit_spike_bound_dominates_single_window(l, t):
    v = window_norms(fs.SpikeTrain(), P1, [t], l)[0]
    assert v <= float(unit_spike_bound(l, t)) + 1e-9


@pytest.mark.parametrize("sigma,expected", [(-0.5, "satisfied-on-grid"), (-1.0, "satisfied-on-grid"),
                                            (0.0, "violated-with-witness")])
def test_unit_spike_equi_threshold(sigma, expected):
    v = vanishing_verdict(fs.SpikeTrain(), VanishingConfig(F=fs.PowerOfL(sigma), order="equi"))
    assert str(v.status) == expected


def test_sqrt_spike_weyl_and_equi_disagree():
    weyl = vanishing_verdict(fs.SpikeTrain("sqrt"), VanishingConfig(F=fs.PowerOfL(-1.0), order="weyl"))
    equi = vanishing_verdict(fs.SpikeTrain("sqrt"), VanishingConfig(F=fs.PowerOfL(-1.0), order="equi"))
    assert weyl.satisfied and equi.violated


def test_functional_of_spikes_is_bounded_by_window_bound():
    cfg = VanishingConfig(F=fs.ConstantOne())
    fv = vanishing_functional(fs.SpikeTrain(), cfg, 4.0, 100.0)
    assert fv.value <= float(unit_spike_bound(4.0, 100.0)) + 1e-9


def test_stepanov_spikes_do_not_vanish():
    v = stepanov_vanishing_verdict(fs.SpikeTrain(), P1, fs.IdentityPhi(), lambda t: 1.0,
                                   fs.GridSpec.geometric(1.0, 1e4, 9))
    assert v.violated
    assert v.detail["trailing_max"] == pytest.approx(1.0)


def test_decomposition_of_sinusoid_plus_spikes():
    v = asymptotic_decomposition_check(fs.Sinusoid(1.0), fs.SpikeTrain(), ClassConfig(eps=(0.5, 0.2)),
                                       VanishingConfig(F=fs.PowerOfL(-0.5), order="equi"))
    assert v.satisfied


@pytest.mark.parametrize("mode", ["exponent-pair", "crude", "constant"])
def test_tirsen_weights_dominate_for_long_windows(mode):
    F = fs.PowerOfL(-1.0)
    F1 = tirsen_transform(F, fs.ConstantExponent(1.0), fs.ConstantExponent(2.0), mode=mode)
    ls = np.array([1.0, 4.0, 64.0])
    # ||.||_1 on a window of length l is at most l^(1/2) ||.||_2, so F1 >= l^(1/2) F
    assert np.all(F1(ls, 0.0) >= ls ** 0.5 * F(ls, 0.0) - 1e-15)


def test_tirsen_mode_errors():
    with pytest.raises(ValueError):
        tirsen_transform(fs.PowerOfL(-1.0), P1, P1, mode="sloppy")
    with pytest.raises(ValueError):
        tirsen_transform(fs.PowerOfL(-1.0), P1, fs.PiecewiseConstantExponent([1.0], [1.0, 2.0]), mode="constant")


@pytest.mark.parametrize("kw", [dict(variant="sub3"), dict(order="both"), dict(x_points=1), dict(threshold=0.0),
                                dict(l_grid=fs.GridSpec.linspace(-1.0, 1.0, 5))])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        VanishingConfig(**kw)
