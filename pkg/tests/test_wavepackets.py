import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qtd.errors import ZeroNormState
from qtd.numerics import integrate
from qtd.wavepackets import (Eigenstate, Mixture, PacketPairSpec,
                             SampledPacket, Superposition, density_mixture,
                             density_superposition, mixed_sampled_pair,
                             moment_diff_closed, moment_diff_quadrature,
                             normalization, superposed_sampled_pair)
from conftest import corpus_spec

# independent hand evaluations frozen from the closed expressions
K2_EXAMPLE = 1.3447071068499757e-05          # delta^2 / (2 (1 + e))
DQ_EXAMPLE = 0.0014596883944555782           # 0.02 / (4 (sqrt(2)/2 + e))
NORM_EXAMPLE = 6.422270899193501             # [sqrt(pi) 0.01 (1+1/e)]^(-1/2)
DENS_MID_EXAMPLE = 30.346789704295826        # brute-force quadrature oracle
MIX_M2_EXAMPLE = 0.0022472844910466534       # Gaussian moment identity


class TestPacketPairSpec:
    def test_range_validation(self):
        with pytest.raises(ValueError):
            PacketPairSpec(-0.1, 0.0, 0.0, 0.0, 0.01)
        with pytest.raises(ValueError):
            PacketPairSpec(np.pi / 2, 0.0, 0.0, 0.0, 0.01)
        with pytest.raises(ValueError):
            PacketPairSpec(0.3, 3.2, 0.0, 0.0, 0.01)
        with pytest.raises(ValueError):
            PacketPairSpec(0.3, 0.0, 0.0, 0.0, -1.0)

    def test_zero_norm_combination_rejected(self):
        with pytest.raises(ZeroNormState):
            PacketPairSpec(np.pi / 4, np.pi, 0.02, 0.02, 0.01)

    def test_phi_pi_allowed_when_not_degenerate(self):
        spec = PacketPairSpec(np.pi / 4, np.pi, 0.01, 0.03, 0.01)
        assert spec.norm_denominator() > 0


class TestNormalization:
    def test_single_packet(self):
        spec = PacketPairSpec(0.0, 0.7, 0.01, 0.05, 0.01)
        assert np.isclose(normalization(spec),
                          (np.sqrt(np.pi) * 0.01) ** -0.5, rtol=1e-14)

    def test_equal_weight_two_spread_separation(self):
        spec = PacketPairSpec(np.pi / 4, 0.0, 0.0, 0.02, 0.01)
        assert np.isclose(normalization(spec), NORM_EXAMPLE, rtol=1e-13)


class TestDensities:
    def test_identical_packets_reduce_to_single_gaussian(self):
        spec = PacketPairSpec(np.pi / 4, 0.0, 0.02, 0.02, 0.01)
        u = np.linspace(-0.02, 0.06, 101)
        single = np.exp(-(u - 0.02) ** 2 / 0.01 ** 2) / (np.sqrt(np.pi) * 0.01)
        assert np.allclose(density_superposition(u, spec), single, rtol=1e-12)
        assert np.allclose(density_mixture(u, spec), single, rtol=1e-12)

    def test_superposition_density_matches_brute_force(self, fig1_spec):
        val = density_superposition(0.025, fig1_spec)
        assert np.isclose(val, DENS_MID_EXAMPLE, rtol=1e-10)

    def test_mixture_theta_zero(self):
        spec = PacketPairSpec(0.0, 0.0, -0.01, 0.07, 0.02)
        u = np.linspace(-0.1, 0.1, 64)
        expect = np.exp(-(u + 0.01) ** 2 / 0.02 ** 2) / (np.sqrt(np.pi) * 0.02)
        assert np.allclose(density_mixture(u, spec), expect, rtol=1e-12)

    def test_densities_integrate_to_one_over_corpus(self, rng):
        for _ in range(1000):
            spec = corpus_spec(rng)
            lo = min(spec.u1, spec.u2) - 12 * spec.delta
            hi = max(spec.u1, spec.u2) + 12 * spec.delta
            for dens in (density_superposition, density_mixture):
                val, _ = integrate(lambda u: dens(u, spec), lo, hi)
                assert abs(val - 1.0) <= 1e-10

    def test_mixture_second_moment_identity(self):
        spec = PacketPairSpec(0.6, 0.0, -0.03, 0.07, 0.012)
        closed = Mixture(spec).moments()[1]
        assert np.isclose(closed, MIX_M2_EXAMPLE, rtol=1e-14)
        quad, _ = integrate(lambda u: u * u * density_mixture(u, spec), -0.3, 0.3)
        assert np.isclose(quad, closed, rtol=1e-11)

    def test_relabeling_symmetry(self, rng):
        for _ in range(50):
            spec = corpus_spec(rng)
            swapped = PacketPairSpec(np.pi / 2 - spec.theta, spec.phi,
                                     spec.u2, spec.u1, spec.delta)
            u = rng.uniform(-0.2, 0.2, size=16)
            assert np.allclose(density_superposition(u, spec),
                               density_superposition(u, swapped), rtol=1e-12)
            assert np.allclose(density_mixture(u, spec),
                               density_mixture(u, swapped), rtol=1e-12)


class TestMomentDiffClosed:
    def test_k1_vanishes_exactly_at_equal_weights(self, rng):
        for _ in range(100):
            spec = corpus_spec(rng)
            eq = PacketPairSpec(np.pi / 4, spec.phi, spec.u1, spec.u2, spec.delta)
            assert moment_diff_closed(eq).k1 == 0.0

    def test_identical_packets_give_zero(self):
        spec = PacketPairSpec(0.3, 0.5, 0.02, 0.02, 0.01)
        md = moment_diff_closed(spec)
        assert md.k1 == 0.0 and md.k2 == 0.0

    def test_k2_example_value(self):
        spec = PacketPairSpec(np.pi / 4, 0.0, 0.015, 0.035, 0.01)
        assert np.isclose(moment_diff_closed(spec).k2, K2_EXAMPLE, rtol=1e-13)

    def test_k1_example_value(self):
        spec = PacketPairSpec(np.pi / 8, 0.0, 0.015, 0.035, 0.01)
        assert np.isclose(moment_diff_closed(spec).k1, DQ_EXAMPLE, rtol=1e-13)

    def test_k2_invariant_under_momentum_reflection_at_equal_weights(self, rng):
        for _ in range(50):
            spec = corpus_spec(rng)
            a = PacketPairSpec(np.pi / 4, spec.phi, spec.u1, spec.u2, spec.delta)
            b = PacketPairSpec(np.pi / 4, spec.phi, -spec.u1, -spec.u2, spec.delta)
            assert moment_diff_closed(a).k2 == moment_diff_closed(b).k2

    def test_k2_independent_of_total_momentum_at_equal_weights(self):
        base = PacketPairSpec(np.pi / 4, 0.7, 0.0, 0.02, 0.01)
        shifted = PacketPairSpec(np.pi / 4, 0.7, 0.04, 0.06, 0.01)
        assert moment_diff_closed(base).k2 == moment_diff_closed(shifted).k2

    def test_overflow_safe_at_huge_separation(self):
        spec = PacketPairSpec(np.pi / 4, 0.0, -0.1, 0.1, 1e-3)
        md = moment_diff_closed(spec)   # overlap exponent = 1e4
        assert md.k1 == 0.0 and md.k2 == 0.0


class TestMomentDiffQuadrature:
    def test_identical_states_zero(self):
        spec = PacketPairSpec(0.0, 0.0, 0.02, 0.02, 0.01)
        val = moment_diff_quadrature(Superposition(spec), Mixture(spec), 1)
        assert abs(val) <= 1e-12

    def test_agrees_with_closed_form(self, rng):
        for _ in range(100):
            spec = corpus_spec(rng)
            md = moment_diff_closed(spec)
            sup, cl = Superposition(spec), Mixture(spec)
            for j, closed in ((1, md.k1), (2, md.k2)):
                oracle = moment_diff_quadrature(sup, cl, j)
                assert abs(closed - oracle) <= max(1e-10 * abs(closed), 1e-14)

    def test_even_profile_first_moment_vanishes(self, rng):
        us = np.linspace(-10.0, 10.0, 801)
        prof = np.exp(-us ** 2 / 3.0) * (1.0 + 0.4 * np.cos(1.7 * us))
        prof /= np.sqrt(np.trapezoid(prof ** 2, us))
        sup = superposed_sampled_pair(us, prof, -1.3, 2.1, np.pi / 4, 0.8)
        cl = mixed_sampled_pair(us, prof, -1.3, 2.1, np.pi / 4)
        assert abs(moment_diff_quadrature(sup, cl, 1)) <= 1e-9

    def test_rejects_mismatched_states(self):
        spec = PacketPairSpec(0.3, 0.0, 0.0, 0.02, 0.01)
        other = PacketPairSpec(0.3, 0.0, 0.0, 0.03, 0.01)
        with pytest.raises(ValueError):
            moment_diff_quadrature(Superposition(spec), Mixture(other), 1)
        with pytest.raises(TypeError):
            moment_diff_quadrature(Eigenstate(0.1), Mixture(spec), 1)


class TestSampledPacket:
    def test_normalization_enforced(self):
        us = np.linspace(-1, 1, 64)
        with pytest.raises(ValueError):
            SampledPacket(us, np.ones_like(us))

    def test_grid_must_increase(self):
        us = np.array([0.0, 1.0, 0.5])
        with pytest.raises(ValueError):
            SampledPacket(us, np.ones(3))

    def test_density_interpolates(self):
        us = np.linspace(-8.0, 8.0, 2001)
        amp = np.exp(-us ** 2 / 2.0)
        amp /= np.sqrt(np.trapezoid(amp ** 2, us))
        p = SampledPacket(us, amp)
        assert np.isclose(p.density(0.5), abs(np.interp(0.5, us, amp)) ** 2)
        assert p.density(100.0) == 0.0


@settings(max_examples=60, deadline=None)
@given(theta=st.floats(0.0, np.pi / 2 - 0.02),
       phi=st.floats(0.0, np.pi - 0.01),
       u1=st.floats(-0.08, 0.08), sep=st.floats(0.0, 0.1),
       delta=st.floats(2e-3, 0.04))
def test_property_quadrature_matches_closed(theta, phi, u1, sep, delta):
    spec = PacketPairSpec(theta, phi, u1, u1 + sep, delta)
    md = moment_diff_closed(spec)
    sup, cl = Superposition(spec), Mixture(spec)
    for j, closed in ((1, md.k1), (2, md.k2)):
        oracle = moment_diff_quadrature(sup, cl, j)
        assert abs(closed - oracle) <= max(1e-10 * abs(closed), 1e-13)
