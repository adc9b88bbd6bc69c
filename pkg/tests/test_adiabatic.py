import numpy as np
import pytest

from solsta import adiabatic
from solsta.errors import DomainError, NoRootError
from solsta.types import PhysicalConfig, SwitchingParams

PI2 = np.pi**2


class TestSwitchingG:
    def test_midpoint_value(self):
        p = SwitchingParams(g_base=2.0, a_s_amp=10.0, s_rate=1.0, t_f=100.0)
        assert adiabatic.switching_g(50.0, p) == pytest.approx(7.0, abs=1e-14)

    def test_start_value_slow_branch(self, slow_params):
        # frozen from a high-precision evaluation of the arctan form
        assert adiabatic.switching_g(0.0, slow_params) == pytest.approx(2.02026, abs=1e-4)

    def test_asymptotic_edges(self, slow_params):
        g0, gf = adiabatic.g_edges(slow_params)
        assert g0 == pytest.approx(2.0, abs=0.025)
        assert gf == pytest.approx(12.0, abs=0.025)

    def test_edges_match_pointwise_evaluation(self, slow_params, fast_params):
        for p in (slow_params, fast_params):
            g0, gf = adiabatic.g_edges(p)
            assert abs(g0 - adiabatic.switching_g(0.0, p)) < 1e-14
            assert abs(gf - adiabatic.switching_g(p.t_f, p)) < 1e-14

    def test_edge_values_frozen(self, slow_params):
        g0, gf = adiabatic.g_edges(slow_params)
        assert g0 == pytest.approx(2.02026, abs=1e-4)
        assert gf == pytest.approx(11.97974, abs=1e-4)

    def test_zero_amplitude(self):
        p = SwitchingParams(a_s_amp=0.0)
        assert adiabatic.g_edges(p) == (2.0, 2.0)

    def test_edge_sum_symmetry(self):
        for s, t_f, a_s in [(1.0, 100.0, 10.0), (10.0, 10.0, 7.5), (3.0, 0.5, 1.0)]:
            p = SwitchingParams(g_base=2.0, a_s_amp=a_s, s_rate=s, t_f=t_f)
            g0, gf = adiabatic.g_edges(p)
            assert g0 + gf == pytest.approx(2 * p.g_base + a_s, abs=1e-13)

    def test_derivative_matches_finite_difference(self, fast_params):
        t = 4.2
        h = 1e-6
        fd = (adiabatic.switching_g(t + h, fast_params)
              - adiabatic.switching_g(t - h, fast_params)) / (2 * h)
        assert adiabatic.switching_g_dot(t, fast_params) == pytest.approx(fd, rel=1e-7)


class TestKeplerPotential:
    def test_free_unit_width(self, free_config):
        u = adiabatic.kepler_potential(1.0, 0.0, free_config)
        assert u == pytest.approx(2.0 / PI2, rel=1e-14)

    def test_minimum_is_stationary(self, config):
        g = 2.02026
        a_c = adiabatic.ac_exact(g, config)
        h = 1e-6
        slope = (adiabatic.kepler_potential(a_c + h, g, config)
                 - adiabatic.kepler_potential(a_c - h, g, config)) / (2 * h)
        assert abs(slope) < 1e-8

    def test_confinement(self, config):
        g = 2.02026
        a_c = adiabatic.ac_exact(g, config)
        u_min = adiabatic.kepler_potential(a_c, g, config)
        assert adiabatic.kepler_potential(1e-3, g, config) > u_min
        assert adiabatic.kepler_potential(1e3, g, config) > u_min

    def test_domain_error(self, config):
        with pytest.raises(DomainError):
            adiabatic.kepler_potential(-0.1, 2.0, config)


class TestEquilibriumWidth:
    def test_perturbative_free_limit(self):
        cfg = PhysicalConfig(omega=0.0, n_norm=2.0)
        assert adiabatic.ac_perturbative(3.0, cfg) == 1.0 / 6.0

    def test_paper_initial_width(self, config):
        assert adiabatic.ac_perturbative(2.02026, config) == pytest.approx(0.494, abs=0.001)

    def test_paper_final_width(self, config):
        assert adiabatic.ac_perturbative(11.97974, config) == pytest.approx(0.0834, abs=0.0005)

    def test_perturbative_rejects_nonpositive_g(self, config):
        with pytest.raises(DomainError):
            adiabatic.ac_perturbative(-1.0, config)

    def test_exact_free_limit(self):
        cfg = PhysicalConfig(omega=0.0)
        assert adiabatic.ac_exact(4.0, cfg) == 0.25

    def test_exact_agrees_with_bisection_oracle(self, config):
        def bisect(g):
            lo, hi = 1e-6, 10.0
            f = lambda a: a**4 * config.omega**2 * PI2 + g * a - 1.0
            for _ in range(100):
                mid = 0.5 * (lo + hi)
                if f(mid) <= 0:
                    lo = mid
                else:
                    hi = mid
            return 0.5 * (lo + hi)

        for g in (2.02026, 5.0, 11.97974):
            assert abs(adiabatic.ac_exact(g, config) - bisect(g)) < 1e-10

    def test_quartic_residual(self, config):
        for g in np.linspace(2.0, 12.0, 21):
            a_c = adiabatic.ac_exact(float(g), config)
            residual = a_c**4 * config.omega**2 * PI2 + g * a_c - 1.0
            assert abs(residual) < 1e-12

    def test_perturbative_close_to_exact(self, config):
        for g in np.linspace(2.0, 12.0, 21):
            exact = adiabatic.ac_exact(float(g), config)
            pert = adiabatic.ac_perturbative(float(g), config)
            assert abs(exact - pert) / exact < 1e-3

    def test_perturbative_error_scales_like_omega_fourth(self):
        g = 2.5

        def gap(omega):
            cfg = PhysicalConfig(omega=omega)
            return abs(adiabatic.ac_exact(g, cfg) - adiabatic.ac_perturbative(g, cfg))

        ratio = gap(0.04) / gap(0.02)
        assert 12.0 <= ratio <= 20.0

    def test_no_root_error(self):
        cfg = PhysicalConfig(omega=0.0)
        with pytest.raises(NoRootError):
            adiabatic.ac_exact(-1.0, cfg)


class TestReferenceTrajectory:
    def test_zero_amplitude_is_constant(self, config):
        p = SwitchingParams(a_s_amp=0.0, t_f=10.0, s_rate=10.0)
        ref = adiabatic.ac_trajectory(p, config, 101)
        assert np.ptp(ref.a) == 0.0
        assert np.max(np.abs(ref.adot)) == 0.0
        assert np.max(np.abs(ref.addot)) == 0.0

    def test_edge_derivatives_nearly_flat_deep_in_tails(self, config, fast_params):
        ref = adiabatic.ac_trajectory(fast_params, config, 101)
        assert abs(ref.adot[0]) < 1e-2
        assert abs(ref.adot[-1]) < 1e-2

    def test_monotone_compression(self, config, fast_params):
        ref = adiabatic.ac_trajectory(fast_params, config, 501)
        assert np.all(np.diff(ref.a) <= 0)

    def test_endpoints_match_edge_formulas(self, config, slow_params):
        g0, gf = adiabatic.g_edges(slow_params)
        for method in ("perturbative", "exact"):
            ref = adiabatic.ac_trajectory(slow_params, config, 11, method)
            assert abs(ref.a[0] - adiabatic.ac_of_g(g0, config, method)) < 1e-12
            assert abs(ref.a[-1] - adiabatic.ac_of_g(gf, config, method)) < 1e-12

    def test_analytic_derivatives_match_finite_differences(self, config, fast_params):
        # local central differences with a step much smaller than the switch
        # timescale 1/(s pi), so FD truncation stays below the tolerance
        ref = adiabatic.ac_trajectory(fast_params, config, 41, "perturbative")
        h = 1e-5
        scale = np.max(np.abs(ref.adot))
        for i in range(1, 40):
            t = ref.times[i]
            a_plus, _, _ = adiabatic._reference_at(t + h, fast_params, config,
                                                   "perturbative")
            a_minus, _, _ = adiabatic._reference_at(t - h, fast_params, config,
                                                    "perturbative")
            fd = (a_plus - a_minus) / (2.0 * h)
            assert abs(fd - ref.adot[i]) / scale < 1e-6

    def test_exact_method_derivatives_close_to_perturbative(self, config, fast_params):
        pert = adiabatic.ac_trajectory(fast_params, config, 51, "perturbative")
        exact = adiabatic.ac_trajectory(fast_params, config, 51, "exact")
        assert np.max(np.abs(pert.a - exact.a) / exact.a) < 1e-3
        assert np.max(np.abs(pert.adot - exact.adot)) < 1e-3

    def test_minimum_samples(self, config, fast_params):
        with pytest.raises(DomainError):
            adiabatic.ac_trajectory(fast_params, config, 2)
