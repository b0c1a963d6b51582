import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from varweyl.funcspace import ExpDecay, PolyDecay
from varweyl.quadrature import adaptive_rule, fourier_half_line, integrate, panel_nodes


@pytest.mark.parametrize(
    "fn,a,b,exact",
    [
        (np.sin, 0.0, math.pi, 2.0),
        (np.exp, -1.0, 2.0, math.exp(2.0) - math.exp(-1.0)),
        (lambda x: 1.0 / (1.0 + x * x), -50.0, 50.0, 2.0 * math.atan(50.0)),
        (lambda x: np.abs(x - 0.3), 0.0, 1.0, 0.29),
    ],
)
def test_integrate_known_values(fn, a, b, exact):
    val, err = integrate(fn, a, b, breaks=[0.3], tol=1e-13)
    assert val == pytest.approx(exact, rel=1e-11, abs=1e-13)
    assert err < 1e-9


@pytest.mark.parametrize("s", [-0.5, -0.3, -0.9])
def test_graded_singularity(s):
    val, _ = integrate(lambda x: x ** s, 0.0, 1.0, singular=[(0.0, s)], tol=1e-12)
    assert val == pytest.approx(1.0 / (1.0 + s), rel=1e-9)


def test_nonintegrable_singularity_rejected():
    with pytest.raises(ValueError):
        panel_nodes(0.0, 1.0, -1.0)


def test_reversed_limits():
    assert integrate(np.cos, 1.0, 0.0)[0] == pytest.approx(-math.sin(1.0))


def test_rule_is_reusable():
    x, w, _ = adaptive_rule(np.exp, 0.0, 1.0, tol=1e-12)
    assert np.dot(w, x**2) == pytest.approx(1.0 / 3.0, rel=1e-12)
    assert np.all(np.diff(x) >= 0)


def test_noisy_integrand_terminates():
    rng = np.random.default_rng(0)

    def noisy(x):
        return 1.0 + 1e-6 * rng.standard_normal(np.shape(x))

    val, err = integrate(noisy, 0.0, 1.0, tol=1e-14)
    assert val == pytest.approx(1.0, abs=1e-5)


@given(st.floats(0.1, 5.0), st.floats(0.1, 10.0))
def test_polynomial_exact(c, L):
    val, _ = integrate(lambda x: c * x**5 - x**2, 0.0, L)
    assert val == pytest.approx(c * L**6 / 6 - L**3 / 3, rel=1e-10, abs=1e-10)


@pytest.mark.parametrize("omega", [0.5, 1.0, 3.0])
def test_fourier_exp_kernel(omega):
    assert fourier_half_line(ExpDecay(), omega) == pytest.approx(1.0 / complex(1.0, omega), rel=1e-8)


def test_fourier_poly_kernel_cos_part():
    # int_0^inf cos(w t)/(1+t^2) dt = pi/2 e^{-w}
    val = fourier_half_line(PolyDecay(1.0, 1.0, 2.0), 1.0)
    assert val.real == pytest.approx(math.pi / 2 * math.exp(-1.0), rel=1e-7)
