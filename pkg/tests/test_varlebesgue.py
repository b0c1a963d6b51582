import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from varweyl import funcspace as fs
from varweyl.varlebesgue import (
    bs_norm,
    domination_check,
    embedding_check,
    holder_check,
    jensen_check,
    luxemburg_norm,
    modular,
    stepanov_norm,
    window_norms,
    windowed_norm,
)

P = fs.ConstantExponent


def step_functions(max_pieces=6):
    """Random piecewise-constant functions supported in [0, 1]."""

    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_pieces))
        cuts = sorted(set(draw(st.lists(st.floats(0.0, 1.0), min_size=n + 1, max_size=n + 1))))
        if len(cuts) < 2:
            cuts = [0.0, 1.0]
        heights = draw(st.lists(st.floats(-5.0, 5.0), min_size=len(cuts) - 1, max_size=len(cuts) - 1))
        return fs.PiecewiseConstant(cuts, np.array(heights).reshape(-1, 1))

    return build()


class TestLuxemburg:
    @pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 4.0])
    def test_indicator_closed_form(self, p):
        f = fs.Indicator(0.0, 0.5)
        assert luxemburg_norm(f, P(p), 0.0, 1.0).value == pytest.approx(0.5 ** (1 / p), rel=1e-13)

    def test_mixed_exponent_unit_indicator(self, backend):
        p = fs.PiecewiseConstantExponent([0.5], [2.0, 4.0])
        res = luxemburg_norm(fs.Indicator(0.0, 1.0), p, 0.0, 1.0)
        assert res.value == pytest.approx(1.0, rel=1e-9)
        assert res.method == "bisection"

    def test_infinite_exponent_is_sup(self):
        f = fs.PiecewiseConstant([0.0, 0.3, 1.0], [[2.0], [-3.0]])
        assert luxemburg_norm(f, P(math.inf), 0.0, 1.0).value == pytest.approx(3.0)

    def test_smooth_function_by_quadrature(self):
        f = fs.Sinusoid(1.0)
        val = luxemburg_norm(f, P(2.0), 0.0, 2 * math.pi).value
        assert val == pytest.approx(math.sqrt(math.pi), rel=1e-10)

    def test_zero_function(self):
        assert luxemburg_norm(fs.Constant(0.0), P(3.0), 0.0, 1.0).value == 0.0

    def test_bad_interval(self):
        with pytest.raises(ValueError):
            luxemburg_norm(fs.Constant(1.0), P(2.0), 1.0, 1.0)

    @given(step_functions(), st.sampled_from([1.0, 1.5, 2.0, 4.0]))
    def test_bisection_matches_closed_form(self, f, p):
        closed = luxemburg_norm(f, P(p), 0.0, 1.0).value
        bis = luxemburg_norm(f, P(p), 0.0, 1.0, method="bisection").value
        assert bis == pytest.approx(closed, rel=1e-9, abs=1e-300)

    @given(step_functions(), st.floats(0.01, 100.0))
    def test_homogeneity(self, f, c):
        p = fs.PiecewiseConstantExponent([0.4], [1.5, 3.0])
        a = luxemburg_norm(fs.Scale(c, f), p, 0.0, 1.0).value
        b = luxemburg_norm(f, p, 0.0, 1.0).value
        assert a == pytest.approx(c * b, rel=1e-9, abs=1e-300)

    @given(step_functions())
    def test_modular_at_norm_is_one(self, f):
        p = fs.PiecewiseConstantExponent([0.5], [2.0, 3.0])
        n = luxemburg_norm(f, p, 0.0, 1.0)
        if n.value > 0:
            assert modular(f, p, 0.0, 1.0, n.value) == pytest.approx(1.0, rel=1e-8)


class TestWindows:
    def test_backends_agree(self, backend, rng):
        edges = np.sort(rng.uniform(0.0, 50.0, 41))
        f = fs.PiecewiseConstant(edges, rng.uniform(-2, 2, (40, 1)))
        p = fs.PiecewiseConstantExponent([25.0], [1.5, 3.0])
        starts = np.linspace(0.0, 45.0, 31)
        got = window_norms(f, p, starts, 5.0)
        ref = [luxemburg_norm(f, p, s, s + 5.0).value for s in starts]
        np.testing.assert_allclose(got, ref, rtol=1e-10)

    @pytest.mark.parametrize("height", [1e-89, 1e200])
    def test_extreme_heights_do_not_under_or_overflow(self, backend, height):
        f = fs.PiecewiseConstant([0.0, 1.0], [[height]])
        expected = height * 0.5 ** 0.25
        np.testing.assert_allclose(window_norms(f, P(4.0), [0.0, 0.25], 0.5), expected, rtol=1e-13)
        assert luxemburg_norm(f, P(4.0), 0.0, 0.5).value == pytest.approx(expected, rel=1e-13)

    def test_relative_window_rescales(self):
        f = fs.Indicator(0.0, 1.0)
        # the norm of u -> f(s + u l) on [0, 1] with p = 2
        assert window_norms(f, P(2.0), [0.0], 4.0, relative=True)[0] == pytest.approx(0.5)

    def test_windowed_norm(self):
        assert windowed_norm(fs.Heaviside(), P(1.0), -1.0, 3.0) == pytest.approx(2.0)

    def test_stepanov_norm_of_spikes(self):
        res = stepanov_norm(fs.SpikeTrain(), P(1.0), fs.GridSpec.linspace(0.0, 50.0, 101))
        assert res.value == pytest.approx(1.0)

    def test_bs_norm_of_sinusoid(self):
        res = bs_norm(fs.Sinusoid(1.0), P(2.0), fs.GridSpec.linspace(0.0, 2 * math.pi, 64))
        assert res.value > 0.5

    def test_domain_error(self):
        with pytest.raises(fs.DomainError):
            window_norms(fs.SpikeTrain(), P(1.0), [-1.0], 1.0)


class TestInequalities:
    @given(step_functions(), step_functions())
    def test_holder(self, u, v):
        p, r = P(2.0), P(4.0)
        q = P(4.0 / 3.0)
        assert holder_check(u, v, p, q, r, 0.0, 1.0).satisfied

    def test_holder_exponent_mismatch(self):
        with pytest.raises(ValueError):
            holder_check(fs.Constant(1.0), fs.Constant(1.0), P(2.0), P(2.0), P(2.0), 0.0, 1.0)

    @given(step_functions(), st.floats(0.1, 10.0))
    def test_embedding(self, f, l):
        p = fs.PiecewiseConstantExponent([0.5], [2.0, 3.0])
        assert embedding_check(fs.Scale(1.0, f), p, 0.0, l).satisfied

    @given(step_functions(), st.floats(0.0, 1.0))
    def test_domination(self, f, c):
        assert domination_check(fs.Scale(c, f), f, P(1.5), 0.0, 1.0).satisfied

    def test_domination_needs_pointwise_bound(self):
        v = domination_check(fs.Constant(2.0), fs.Constant(1.0), P(2.0), 0.0, 1.0)
        assert v.status.value == "inconclusive"

    @given(st.lists(st.floats(0.0, 5.0), min_size=2, max_size=20), st.floats(0.05, 0.95))
    def test_jensen_convex(self, x, r):
        assert jensen_check(fs.CatalogPhi("square"), fs.Geometric(r), x).satisfied

    @given(st.lists(st.floats(0.0, 5.0), min_size=2, max_size=20), st.floats(0.05, 0.95))
    def test_jensen_concave_reversed(self, x, r):
        assert jensen_check(fs.CatalogPhi("sqrt"), fs.Geometric(r), x).satisfied

    def test_jensen_needs_shape(self):
        phi = fs.PhiSpec(lambda x: x + np.sin(x) ** 2, "wiggle")
        with pytest.raises(ValueError):
            jensen_check(phi, fs.Geometric(0.5), [1.0, 2.0])
