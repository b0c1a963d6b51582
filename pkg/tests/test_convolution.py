import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from varweyl import funcspace as fs
from varweyl.convolution import (
    THEOREMS,
    ConvolutionConfig,
    ConvolutionFunction,
    FiniteConvolution,
    check_theorem,
    convolve_scalar,
    finite_convolution_split,
    infinite_convolution,
    kernel_scale_for,
    scalar_convolution,
    section41_bound_check,
    section41_grid,
    section41_lhs,
    series_eval,
    window_series_growth,
)

EXP = fs.ExpDecay(1.0, 1.0, 1.0)


class TestInfiniteConvolution:
    def test_sinusoid_closed_form(self):
        G = ConvolutionFunction(EXP, fs.Sinusoid(1.0))
        xs = np.linspace(-10.0, 10.0, 41)
        np.testing.assert_allclose(G.values(xs)[:, 0], 0.5 * (np.sin(xs) - np.cos(xs)), atol=1e-9)

    def test_quadrature_path_matches_closed_form(self):
        val = infinite_convolution(EXP, fs.Sinusoid(1.0), 0.7, method="quadrature")
        assert val == pytest.approx(0.5 * (math.sin(0.7) - math.cos(0.7)), abs=1e-8)

    def test_heaviside_gives_kernel_antiderivative(self):
        R = fs.ExpDecay(1.0, 0.5, 2.0)
        x = 1.3
        ref = quad(lambda s: float(R(np.array([x - s]))[0]), 0.0, x, limit=200)[0]
        assert infinite_convolution(R, fs.Heaviside(), x) == pytest.approx(ref, rel=1e-8)

    def test_period_is_kept(self):
        assert ConvolutionFunction(EXP, fs.Sinusoid(2.0)).period == pytest.approx(math.pi)


class TestFiniteConvolution:
    def test_constant_source(self):
        H = FiniteConvolution(EXP, fs.Constant(1.0, lower=0.0))
        ts = np.array([0.0, 0.5, 2.0, 40.0])
        np.testing.assert_allclose(H.values(ts)[:, 0], 1.0 - np.exp(-ts), atol=1e-12)

    @given(st.lists(st.floats(-3.0, 3.0), min_size=1, max_size=6), st.floats(0.0, 8.0))
    def test_step_source_matches_quad(self, heights, t):
        edges = np.linspace(0.0, 6.0, len(heights) + 1)
        q = fs.PiecewiseConstant(edges, np.array(heights).reshape(-1, 1))
        got = FiniteConvolution(EXP, q).values([t])[0, 0]
        pts = [e for e in edges if 0 < e < t]
        ref = quad(lambda s: math.exp(-(t - s)) * float(q.values([s])[0, 0]), 0.0, t, points=pts or None,
                   limit=200)[0] if t > 0 else 0.0
        assert got == pytest.approx(ref, abs=1e-9)

    def test_spikes_far_out(self):
        # the spike [n^2, n^2 + 1) with n = 30 seen from inside it
        H = FiniteConvolution(EXP, fs.SpikeTrain())
        assert H.values([900.5])[0, 0] == pytest.approx(1.0 - math.exp(-0.5), rel=1e-9)

    def test_split_identity(self):
        res = finite_convolution_split(EXP, fs.Sinusoid(1.0), fs.SpikeTrain(), 5.0)
        assert res.identity_gap < 1e-9
        assert res.G == pytest.approx(0.5 * (math.sin(5.0) - math.cos(5.0)), abs=1e-9)


class TestScalarConvolution:
    def test_box_against_sinusoid(self):
        psi = fs.Indicator(0.0, 1.0)
        for x in (-2.0, 0.0, 1.5):
            assert scalar_convolution(psi, fs.Sinusoid(1.0), x) == pytest.approx(math.cos(x - 1) - math.cos(x),
                                                                                abs=1e-10)

    def test_periodicity_carries_over(self):
        h = convolve_scalar(fs.Indicator(0.0, 1.0), fs.Sinusoid(1.0))
        a, b = h.values([0.3, 0.3 + 2 * math.pi])[:, 0]
        assert a == pytest.approx(b, abs=1e-10)


class TestSeries:
    def test_H_geometric_sum(self):
        ref = math.sqrt((1 - math.exp(-2.0)) / 2) / (1 - math.exp(-1.0))
        res = series_eval("H", EXP, fs.ConstantExponent(2.0), l=1.0, x=0.0)
        assert res.value == pytest.approx(ref, rel=1e-8)
        assert res.converged

    def test_W2_geometric_sum(self):
        ref = (1 - math.exp(-1.0)) / (1 - 0.5 / math.e)
        res = series_eval("W2", EXP, fs.ConstantExponent(1.0), x=0.0, b=lambda k: 0.5 ** np.asarray(k, float))
        assert res.value == pytest.approx(ref, rel=1e-8)

    def test_enclosure_contains_value(self):
        res = series_eval("H", fs.PolyDecay(1.0, 1.0, 2.0), fs.ConstantExponent(1.0), l=1.0, tol=1e-6)
        assert res.tail_lower <= res.value - res.partial_sum <= res.tail_upper

    @given(st.floats(0.1, 10.0))
    def test_H_scales_with_kernel(self, M):
        q = fs.ConstantExponent(1.5)
        a = series_eval("H", fs.ExpDecay(M, 1.0, 1.0), q, l=2.0).value
        b = series_eval("H", EXP, q, l=2.0).value
        assert a == pytest.approx(M * b, rel=1e-7)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            series_eval("Z", EXP, fs.ConstantExponent(1.0))


class TestBounds:
    def test_window_integral_k0(self):
        assert section41_lhs(0, 1.0, 2.0, 1.0, 2.0) == pytest.approx(math.pi / 8 + 0.25, rel=1e-12)

    def test_window_integral_k3(self):
        v = section41_bound_check(3, 2.0, 1.0, 1.0, 2.0)
        assert v.detail["lhs"] == pytest.approx(math.atan(8.0) - math.atan(6.0), rel=1e-12)
        assert v.satisfied

    def test_bound_fails_at_origin_for_singular_kernel(self):
        v = section41_bound_check(0, 1.0, 1.0, 0.5, 2.0)
        assert v.violated

    @pytest.mark.parametrize("beta,q", [(1.0, 1.0), (1.0, 2.0), (1.0, 4.0)])
    def test_bound_holds_for_regular_kernel(self, beta, q):
        v = section41_grid(ks=range(6), ls=(0.5, 2.0), qs=(q,), betas=(beta,), gammas=(1.5, 3.0))
        assert v.satisfied

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            section41_bound_check(0, 1.0, 4.0, 0.5, 2.0)
        with pytest.raises(ValueError):
            section41_bound_check(-1, 1.0, 1.0, 1.0, 2.0)

    def test_window_series_grows_linearly(self):
        v = window_series_growth(2.0, 1.0, 2.0, fs.GridSpec.geometric(1.0, 256.0, 9))
        assert v.violated
        assert v.detail["growth_exponent"] == pytest.approx(1.0, abs=0.05)


class TestTheorems:
    @pytest.mark.parametrize("theorem", THEOREMS)
    def test_scaled_kernel_passes(self, theorem):
        cfg = ConvolutionConfig()
        c = kernel_scale_for(theorem, cfg)
        assert not check_theorem(theorem, cfg).all_satisfied or c <= 1.0
        rep = check_theorem(theorem, cfg.with_(R=fs.ExpDecay(1.0 / c, 1.0, 1.0)))
        assert rep.all_satisfied
        assert rep.max_condition == pytest.approx(1.0, rel=1e-8)

    def test_unknown_theorem(self):
        with pytest.raises(ValueError):
            check_theorem("pythagoras", ConvolutionConfig())
