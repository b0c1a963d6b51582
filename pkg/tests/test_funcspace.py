import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from varweyl import funcspace as fs


class TestFunctions:
    def test_indicator_values_and_breakpoints(self):
        f = fs.Indicator(0.0, 0.5, height=2.0)
        np.testing.assert_array_equal(f.values([-1.0, 0.0, 0.25, 0.5, 3.0])[:, 0], [0, 2, 2, 0, 0])
        np.testing.assert_array_equal(f.breakpoints(-1.0, 1.0), [0.0, 0.5])
        assert f.sup_norm(-1.0, 1.0) == 2.0

    def test_heaviside_translate_difference(self):
        H = fs.Heaviside()
        d = fs.difference(H, 2.0)
        vals = d.values([-3.0, -1.0, 0.5])[:, 0]
        np.testing.assert_array_equal(np.abs(vals), [0.0, 1.0, 0.0])

    def test_spike_train_positions(self):
        q = fs.SpikeTrain()
        x = np.array([0.5, 1.5, 2.5, 4.0, 4.99, 5.0, 9.5, 10.2])
        np.testing.assert_array_equal(q.values(x)[:, 0], [1, 1, 0, 1, 1, 0, 1, 0])
        np.testing.assert_array_equal(q.breakpoints(3.0, 10.0), [4.0, 5.0, 9.0])

    def test_spike_train_sqrt_amplitude(self):
        q = fs.SpikeTrain("sqrt")
        assert q.values([16.5])[0, 0] == pytest.approx(2.0)
        assert q.sup_norm(0.0, 17.0) == pytest.approx(2.0)

    def test_spike_train_rejects_unknown_rule(self):
        with pytest.raises(ValueError):
            fs.SpikeTrain("cube")

    def test_periodic_wraps(self):
        f = fs.Periodic(fs.Indicator(0.0, 0.5), 1.0)
        np.testing.assert_array_equal(f.values([0.25, 1.25, -0.75, 0.75])[:, 0], [1, 1, 1, 0])
        assert f.period == 1.0

    def test_sinusoid_period(self):
        s = fs.Sinusoid(2.0)
        assert s.period == pytest.approx(math.pi)
        assert s.values([0.3])[0, 0] == pytest.approx(math.sin(0.6))

    def test_invalid_indicator(self):
        with pytest.raises(ValueError):
            fs.Indicator(1.0, 1.0)

    def test_restrict_domain(self):
        g = fs.Restrict(fs.Constant(1.0), 0.0)
        assert g.lower == 0.0


class TestExponents:
    def test_constant(self):
        p = fs.ConstantExponent(2.0)
        assert p.is_constant and p.p_minus == p.p_plus == 2.0
        assert p.conjugate().p_plus == pytest.approx(2.0)

    def test_conjugate_of_one_is_infinite(self):
        assert math.isinf(fs.ConstantExponent(1.0).conjugate().p_plus)

    def test_below_one_rejected(self):
        with pytest.raises(ValueError):
            fs.ConstantExponent(0.5)

    def test_piecewise_segments(self):
        p = fs.PiecewiseConstantExponent([0.5], [2.0, 4.0])
        assert p.p_minus == 2.0 and p.p_plus == 4.0
        np.testing.assert_array_equal(p(np.array([0.25, 0.75])), [2.0, 4.0])

    @given(st.floats(1.0, 50.0))
    def test_conjugate_relation(self, p0):
        p = fs.ConstantExponent(p0)
        q = p.conjugate()
        if p0 > 1.0:
            assert 1.0 / p0 + 1.0 / q.p_plus == pytest.approx(1.0)


class TestPhi:
    @pytest.mark.parametrize("name", ["expm1", "log1p", "cosh1", "ratio", "square", "sqrt"])
    def test_catalog_builds_and_inverts(self, name):
        phi = fs.CatalogPhi(name)
        for y in (0.1, 0.5, 0.9):
            x = phi.sup_preimage(y)
            assert float(phi(np.array([x]))[0]) == pytest.approx(y, rel=1e-9)

    def test_ratio_is_bounded(self):
        phi = fs.CatalogPhi("ratio")
        assert math.isinf(phi.sup_preimage(1.0))

    def test_false_convexity_flag_is_caught(self):
        with pytest.raises(ValueError):
            fs.PhiSpec(np.sqrt, "fake", convex=True)

    @given(st.floats(0.0, 100.0), st.floats(0.0, 100.0))
    def test_power_phi_subadditive_below_one(self, x, y):
        phi = fs.PowerPhi(0.5)
        assert phi(x + y) <= phi(x) + phi(y) + 1e-12

    def test_unknown_catalog_name(self):
        with pytest.raises(ValueError):
            fs.CatalogPhi("tanh")


class TestWeights:
    def test_power_of_l(self):
        F = fs.PowerOfL(-1.0)
        np.testing.assert_allclose(F(np.array([2.0, 4.0]), 0.0), [0.5, 0.25])

    def test_psi_power(self):
        F = fs.PsiPower.power(1.0, fs.ConstantExponent(2.0))
        assert F(4.0, 0.0) == pytest.approx(0.5)


KERNELS = [fs.ExpDecay(1.0, 1.0, 1.0), fs.ExpDecay(2.0, 0.5, 3.0), fs.PolyDecay(1.0, 1.0, 2.0),
           fs.PolyDecay(1.0, 0.5, 3.0), fs.TableKernel([0.0, 1.0, 2.0], [1.0, 0.5, 0.0])]


class TestKernels:
    @pytest.mark.parametrize("R", KERNELS, ids=repr)
    @pytest.mark.parametrize("a,b", [(0.0, 1.0), (0.3, 2.5), (1.5, 7.0)])
    def test_integral_matches_quad(self, R, a, b):
        ref = quad(lambda t: float(R(np.array([t]))[0]), a, b, limit=200, epsabs=1e-13, epsrel=1e-12)[0]
        assert R.integral(a, b) == pytest.approx(ref, rel=1e-8, abs=1e-12)

    @pytest.mark.parametrize("R", KERNELS, ids=repr)
    def test_mass_is_cumulative_difference(self, R):
        a = np.array([0.0, 0.2, 1.0, 3.0])
        b = a + np.array([0.5, 1.0, 2.0, 0.1])
        np.testing.assert_allclose(R.mass(a, b), R.cumulative(b) - R.cumulative(a), rtol=1e-10, atol=1e-15)

    def test_exp_mass_keeps_relative_accuracy_far_out(self):
        R = fs.ExpDecay(1.0, 1.0, 1.0)
        a = np.array([300.0])
        assert R.mass(a, a + 1.0)[0] == pytest.approx(math.exp(-300.0) * (1 - math.exp(-1.0)), rel=1e-12)

    def test_poly_total(self):
        assert fs.PolyDecay(1.0, 1.0, 2.0).total() == pytest.approx(math.pi / 2)

    @pytest.mark.parametrize("R", KERNELS[:4], ids=repr)
    def test_fourier_at_zero_is_total(self, R):
        assert R.fourier(0.0).real == pytest.approx(R.total(), rel=1e-8)

    def test_exp_fourier_closed_form(self):
        assert fs.ExpDecay().fourier(1.0) == pytest.approx(1.0 / complex(1.0, 1.0))

    def test_invalid_kernels(self):
        with pytest.raises(ValueError):
            fs.ExpDecay(beta=1.5)
        with pytest.raises(ValueError):
            fs.ExpDecay(c=0.0)


class TestSequencesAndGrids:
    def test_geometric_terms_and_tail(self):
        a = fs.Geometric(0.5)
        assert a.terms(50).sum() + a.tail(50) == pytest.approx(1.0)

    def test_two_sided_normalized(self):
        a = fs.TwoSidedGeometric(0.5)
        k = np.arange(-60, 61)
        assert a.term(k).sum() == pytest.approx(1.0)

    def test_geometric_grid(self):
        np.testing.assert_allclose(fs.GridSpec.geometric(1.0, 256.0, 9).points(), 2.0 ** np.arange(9))

    def test_uniform_grid(self):
        np.testing.assert_allclose(fs.GridSpec.uniform(-1.0, 1.0, 0.5).points(), [-1, -0.5, 0, 0.5, 1])

    @given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=30))
    def test_merge_breakpoints_sorted_unique(self, pts):
        out = fs.merge_breakpoints(pts)
        assert np.all(np.diff(out) > 0)
