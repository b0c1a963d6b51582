import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from varweyl import funcspace as fs
from varweyl.fractional import (
    FracConfig,
    caputo_derivative,
    continuity_at_zero,
    gamma_kernel,
    kernel_semigroup,
    mild_solution_dfp,
    mild_solution_line,
    weyl_liouville_derivative,
)

IDENTITY = fs.CallableFunction(lambda t: t, lower=0.0)


@pytest.mark.parametrize("zeta", [0.3, 0.5, 0.9])
@pytest.mark.parametrize("t", [0.1, 0.5, 1.0, 2.0])
def test_caputo_power_rule(zeta, t):
    expected = t ** (1 - zeta) / math.gamma(2 - zeta)
    assert caputo_derivative(IDENTITY, zeta, t) == pytest.approx(expected, rel=1e-6)


def test_caputo_of_square():
    u = fs.CallableFunction(lambda t: t * t, lower=0.0)
    assert caputo_derivative(u, 0.5, 1.0) == pytest.approx(2.0 / math.gamma(2.5), rel=1e-6)


def test_caputo_ignores_constant_offset():
    u = fs.CallableFunction(lambda t: t + 3.0, lower=0.0)
    assert caputo_derivative(u, 0.4, 1.5) == pytest.approx(caputo_derivative(IDENTITY, 0.4, 1.5), rel=1e-9)


def test_caputo_order_one_is_derivative():
    u = fs.CallableFunction(np.sin, lower=0.0)
    assert caputo_derivative(u, 1.0, 0.7) == pytest.approx(math.cos(0.7), rel=1e-8)


@given(st.floats(0.1, 0.9), st.floats(0.1, 0.9), st.floats(0.1, 5.0))
def test_kernel_semigroup(zeta, eta, t):
    assert kernel_semigroup(zeta, eta, t) == pytest.approx(gamma_kernel(zeta + eta, t), rel=1e-6)


def test_gamma_kernel_domain():
    with pytest.raises(ValueError):
        gamma_kernel(0.5, 0.0)
    with pytest.raises(ValueError):
        gamma_kernel(0.0, 1.0)


@pytest.mark.parametrize("zeta", [0.0, 1.5])
def test_order_outside_range(zeta):
    with pytest.raises(ValueError):
        caputo_derivative(IDENTITY, zeta, 1.0)


def test_weyl_liouville_of_exponential():
    # the history integral of e^t reproduces e^t, so every order gives e^t
    u = fs.CallableFunction(np.exp)
    res = weyl_liouville_derivative(u, 0.5, 0.0, FracConfig(tail_cutoff=64.0))
    assert res.value == pytest.approx(1.0, rel=1e-5)
    assert str(res.status) == "satisfied-on-grid"


def test_weyl_liouville_of_sinusoid():
    # D^zeta sin(t) = sin(t + zeta pi / 2) for the full-history derivative
    res = weyl_liouville_derivative(fs.Sinusoid(1.0), 0.5, 0.3)
    assert res.value == pytest.approx(math.sin(0.3 + math.pi / 4), abs=2e-2)
    assert str(res.status) == "inconclusive"


def test_weyl_liouville_order_one_sign():
    res = weyl_liouville_derivative(fs.Sinusoid(1.0), 1.0, 0.3)
    assert res.value == pytest.approx(-math.cos(0.3), rel=1e-8)


def test_weyl_liouville_needs_whole_line():
    with pytest.raises(ValueError):
        weyl_liouville_derivative(IDENTITY, 0.5, 1.0)


@pytest.mark.parametrize("t", [0.5, 1.0, 3.0])
def test_mild_solution_residual(t):
    # u' = -u + f with u(0) = 0 and f = 1, solved through the resolvent e^{-t}
    S = fs.ExpDecay(1.0, 1.0, 1.0)
    f = fs.Constant(1.0, lower=0.0)
    h = 1e-4
    u = lambda s: mild_solution_dfp(S, 0.0, f, s)  # noqa: E731
    du = (u(t + h) - u(t - h)) / (2 * h)
    assert du == pytest.approx(-u(t) + 1.0, abs=1e-4)


def test_mild_solution_initial_value():
    S = fs.ExpDecay(1.0, 1.0, 1.0)
    assert mild_solution_dfp(S, 2.0, fs.Constant(0.0, lower=0.0), 1.0) == pytest.approx(2.0 * math.exp(-1.0))


def test_mild_solution_line_is_infinite_convolution():
    v = mild_solution_line(fs.ExpDecay(1.0, 1.0, 1.0), fs.Sinusoid(1.0), 1.0)
    assert v == pytest.approx(0.5 * (math.sin(1.0) - math.cos(1.0)), abs=1e-9)


def test_continuity_at_zero():
    assert continuity_at_zero(fs.ExpDecay(1.0, 1.0, 1.0)).matches
    rep = continuity_at_zero(fs.ExpDecay(1.0, 0.5, 1.0))
    assert not rep.matches and str(rep.status) == "inconclusive"


def test_config_validation():
    with pytest.raises(ValueError):
        FracConfig(step=0.0)
    with pytest.raises(ValueError):
        FracConfig(zeta=2.0)
