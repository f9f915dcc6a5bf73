"""Tests for the Bell-homodyne receiver and its variance test."""

import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import gammaincc

from helpers import conditional_fock
from qread.bell import (
    MonteCarloResult,
    ReceiverConfig,
    conditional_variance,
    monte_carlo_error,
    optimize_g_test,
    p_test,
    regularized_upper_gamma,
)
# aliased so pytest does not collect the library function as a test
from qread.bell import test_quantile as chi2_quantile
from qread.errors import ModelRegimeError
from qread.fock import helstrom_error_fock
from qread.gaussian import CellSpec, conditional_output_cm

FIG_CELL = CellSpec(r0=0.85, r1=1.0)
FIG_CONFIG = ReceiverConfig(m=10, phi=0.05)


def cell(r0, r1, nbar=0.0, eps=0.0):
    return CellSpec(r0=r0, r1=r1, nbar=nbar, eps=eps)


class TestReceiverConfig:
    def test_accepts_valid_settings(self):
        cfg = ReceiverConfig(m=16, phi=0.05)
        assert cfg.m == 16 and cfg.phi == 0.05

    @pytest.mark.parametrize("m, phi", [
        (0, 0.1), (-3, 0.1), (2.5, 0.1), (4, 0.0), (4, 1.0), (4, -0.2),
    ])
    def test_rejects_bad_settings(self, m, phi):
        with pytest.raises(ValueError):
            ReceiverConfig(m=m, phi=phi)


class TestConditionalVariance:
    def test_perfect_mirror_probed_by_vacuum(self):
        assert conditional_variance(cell(0.0, 1.0), 1, 0.0) == 1.0

    @pytest.mark.parametrize("n_s", [0.5, 2.0, 20.0])
    def test_perfect_mirror_squeezes_toward_zero(self, n_s):
        """A unit-reflectivity pure-loss cell leaves variance mu - sqrt(mu^2-1)."""
        mu = 2.0 * n_s + 1.0
        v = conditional_variance(cell(0.0, 1.0), 1, n_s)
        assert v == pytest.approx(mu - math.sqrt(mu * mu - 1.0), rel=1e-14)
        assert v < 1.0

    def test_matches_conditional_output_blocks(self):
        """V(u) is (A + B - 2C)/2 of the two-mode output covariance."""
        rng = np.random.default_rng(7)
        for _ in range(1000):
            r0, r1 = np.sort(rng.uniform(0.0, 1.0, 2))
            c = cell(float(r0), float(r1), nbar=float(rng.uniform(0, 0.2)),
                     eps=float(rng.uniform(0, 0.2)))
            n_s = float(rng.uniform(1e-3, 5.0))
            u = int(rng.integers(0, 2))
            cm = conditional_output_cm(c, u, n_s)
            block_form = 0.5 * (cm[0, 0] + cm[2, 2] - 2.0 * cm[0, 2])
            assert conditional_variance(c, u, n_s) == pytest.approx(
                block_form, abs=1e-12)

    def test_decreasing_in_reflectivity_within_regime(self):
        for n_s in (0.1, 1.0, 10.0):
            vs = [conditional_variance(cell(r, 1.0), 0, n_s)
                  for r in np.linspace(0.0, 1.0, 25)]
            assert all(a > b for a, b in zip(vs, vs[1:]))

    def test_rejects_negative_energy(self):
        with pytest.raises(ValueError, match="nonnegative"):
            conditional_variance(cell(0.0, 1.0), 1, -0.5)


class TestRegularizedUpperGamma:
    @pytest.mark.parametrize("x", [0.3, 2.3, 17.0])
    def test_unit_shape_is_plain_exponential(self, x):
        assert regularized_upper_gamma(1, x) == pytest.approx(
            math.exp(-x), rel=1e-14)

    @pytest.mark.parametrize("m", [1, 5, 100, 10 ** 5])
    def test_zero_argument_saturates(self, m):
        assert regularized_upper_gamma(m, 0.0) == 1.0

    def test_matches_density_quadrature(self):
        """Shape-10 tail at x = 10 against direct integration of the density."""

        def density(theta):
            return (theta ** 9 * math.exp(-theta / 2.0)
                    / (2.0 ** 10 * math.factorial(9)))

        oracle, err = quad(density, 20.0, np.inf)
        assert err < 1e-9
        assert regularized_upper_gamma(10, 10.0) == pytest.approx(
            oracle, abs=1e-10)

    def test_matches_library_tail_on_a_grid(self):
        for m in (1, 3, 10, 100, 1000):
            for x in (1e-8, 0.5, float(m), 3.0 * m + 10.0):
                assert regularized_upper_gamma(m, x) == pytest.approx(
                    gammaincc(m, x), rel=1e-9, abs=1e-12)

    def test_shape_cap(self):
        assert 0.0 < regularized_upper_gamma(10 ** 5, 10 ** 5 + 0.5) < 1.0
        with pytest.raises(ValueError, match="unsupported"):
            regularized_upper_gamma(10 ** 5 + 1, 1.0)

    @pytest.mark.parametrize("m, x", [(0, 1.0), (2.5, 1.0), (3, -0.1)])
    def test_rejects_bad_arguments(self, m, x):
        with pytest.raises(ValueError):
            regularized_upper_gamma(m, x)


class TestTestQuantile:
    def test_single_copy_closed_forms(self):
        """For m = 1 the tail is e^(-Q/2), so the quantile is -2 ln(phi)."""
        assert chi2_quantile(1, 0.05) == pytest.approx(
            -2.0 * math.log(0.05), rel=1e-9)
        assert chi2_quantile(1, 0.5) == pytest.approx(
            2.0 * math.log(2.0), rel=1e-9)

    def test_round_trip_definition(self):
        for m in (1, 2, 5, 17, 100, 1000):
            for phi in (1e-6, 1e-3, 0.05, 0.3, 0.7, 0.99):
                back = regularized_upper_gamma(m, chi2_quantile(m, phi) / 2.0)
                assert back == pytest.approx(phi, abs=1e-9)

    def test_monotone_in_both_arguments(self):
        qs = [chi2_quantile(1, phi) for phi in (0.01, 0.05, 0.2, 0.5)]
        assert all(a > b for a, b in zip(qs, qs[1:]))
        qs = [chi2_quantile(m, 0.05) for m in (1, 4, 16, 64)]
        assert all(a < b for a, b in zip(qs, qs[1:]))

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError, match="positive integer"):
            chi2_quantile(0, 0.05)
        with pytest.raises(ValueError, match=r"\(0, 1\)"):
            chi2_quantile(4, 1.0)


class TestPTest:
    def test_equal_reflectivities_give_coin_toss(self):
        stats = p_test(cell(0.5, 0.5), 1.0, ReceiverConfig(m=4, phi=0.1))
        assert stats.sigma == 0.0
        assert stats.p_test == 0.5

    def test_frozen_bright_memory_point(self):
        stats = p_test(FIG_CELL, 35.0, FIG_CONFIG)
        assert stats.v0 == pytest.approx(0.15721344940971882, rel=1e-12)
        assert stats.v1 == pytest.approx(0.06274606680622785, rel=1e-12)
        assert stats.sigma == pytest.approx(1.5055506649560164, rel=1e-12)
        assert stats.quantile == pytest.approx(31.41043284209445, rel=1e-9)
        assert stats.p_test == pytest.approx(0.07680978237723757, rel=1e-8)

    def test_darker_bit_has_larger_variance(self):
        stats = p_test(cell(0.3, 0.9), 4.0, ReceiverConfig(m=2, phi=0.05))
        assert stats.v0 > stats.v1
        assert stats.sigma == pytest.approx((stats.v0 - stats.v1) / stats.v1,
                                            rel=1e-15)

    def test_swapping_the_bit_labels_changes_nothing(self):
        fwd = p_test(cell(0.85, 1.0), 35.0, FIG_CONFIG)
        rev = p_test(cell(1.0, 0.85), 35.0, FIG_CONFIG)
        assert rev.p_test == fwd.p_test
        assert rev.sigma == fwd.sigma
        assert (rev.v0, rev.v1) == (fwd.v1, fwd.v0)

    @pytest.mark.parametrize("phi", [1e-4, 0.05, 0.3])
    def test_bounded_between_half_significance_and_half(self, phi):
        # the vanishing-contrast end approaches 1/2 from below but never
        # dips under phi/2 however strong the contrast becomes
        for gap in (1e-6, 1e-2, 0.5, 1.0):
            stats = p_test(cell(1.0 - gap, 1.0), 5.0,
                           ReceiverConfig(m=3, phi=phi))
            assert phi / 2.0 - 1e-12 <= stats.p_test <= 0.5

    def test_never_beats_the_optimal_measurement(self):
        """The variance test is sub-optimal: a known-best bound caps it."""
        rho0 = conditional_fock(cell(0.5, 1.0), 0, 1.0, 40)
        rho1 = conditional_fock(cell(0.5, 1.0), 1, 1.0, 40)
        optimum = helstrom_error_fock(rho0, rho1)
        for phi in (0.01, 0.05, 0.2, 0.45):
            stats = p_test(cell(0.5, 1.0), 1.0, ReceiverConfig(m=1, phi=phi))
            assert stats.p_test >= optimum - 1e-9

    def test_rejects_regime_where_variance_order_flips(self):
        # a hot external bath makes V increase with reflectivity, so the
        # one-tailed decision rule no longer reads the bit order
        with pytest.raises(ModelRegimeError, match="decreasing"):
            p_test(cell(0.5, 0.9, nbar=2.0), 0.4, ReceiverConfig(m=4, phi=0.1))

    def test_rejects_nonpositive_energy(self):
        with pytest.raises(ValueError, match="positive"):
            p_test(cell(0.5, 1.0), 0.0, FIG_CONFIG)


class TestMonteCarloError:
    def test_agrees_with_analytic_error(self):
        stats = p_test(FIG_CELL, 35.0, FIG_CONFIG)
        mc = monte_carlo_error(FIG_CELL, 35.0, FIG_CONFIG, 10 ** 5, seed=42)
        assert mc.trials == 10 ** 5
        assert abs(mc.estimate - stats.p_test) <= 3.0 * mc.std_error

    def test_full_quadrature_mode_agrees_too(self):
        """Sampling all four quadratures must reproduce the shortcut draw."""
        stats = p_test(FIG_CELL, 35.0, FIG_CONFIG)
        mc = monte_carlo_error(FIG_CELL, 35.0, FIG_CONFIG, 10 ** 5, seed=43,
                               mode="full")
        assert abs(mc.estimate - stats.p_test) <= 3.0 * mc.std_error

    def test_equal_reflectivities_estimate_half(self):
        mc = monte_carlo_error(cell(0.4, 0.4), 2.0, ReceiverConfig(m=2, phi=0.2),
                               2 * 10 ** 4, seed=5)
        assert abs(mc.estimate - 0.5) <= 3.0 * mc.std_error

    def test_same_seed_is_bit_identical(self):
        a = monte_carlo_error(FIG_CELL, 35.0, FIG_CONFIG, 10 ** 4, seed=9)
        b = monte_carlo_error(FIG_CELL, 35.0, FIG_CONFIG, 10 ** 4, seed=9)
        assert a == b

    def test_different_seeds_differ(self):
        a = monte_carlo_error(FIG_CELL, 35.0, FIG_CONFIG, 10 ** 4, seed=9)
        b = monte_carlo_error(FIG_CELL, 35.0, FIG_CONFIG, 10 ** 4, seed=10)
        assert a.estimate != b.estimate

    def test_rejects_thin_sampling_and_bad_mode(self):
        with pytest.raises(ValueError, match="1e3"):
            monte_carlo_error(FIG_CELL, 35.0, FIG_CONFIG, 999, seed=1)
        with pytest.raises(ValueError, match="mode"):
            monte_carlo_error(FIG_CELL, 35.0, FIG_CONFIG, 10 ** 4, seed=1,
                              mode="exact")


class TestOptimizeGTest:
    def test_equal_reflectivities_gain_nothing(self):
        res = optimize_g_test(cell(0.5, 0.5), 1.0, m_range=[1, 2],
                              phi_grid=[0.1, 0.3])
        assert res.best_g == 0.0
        assert np.all(res.surface == 0.0)

    def test_surface_matches_direct_evaluation(self):
        from qread.analysis import binary_entropy
        from qread.classical import classical_bound

        c = cell(0.6, 1.0)
        res = optimize_g_test(c, 8.0, m_range=[1, 4], phi_grid=[0.02, 0.2])
        floor = binary_entropy(classical_bound(c, 1, 8.0).value)
        for i, m in enumerate(res.m_values):
            for j, phi in enumerate(res.phi_values):
                stats = p_test(c, 8.0, ReceiverConfig(m=m, phi=float(phi)))
                assert res.surface[i, j] == pytest.approx(
                    floor - binary_entropy(stats.p_test), rel=1e-12)

    def test_best_point_is_the_surface_argmax(self):
        res = optimize_g_test(cell(0.6, 1.0), 8.0, m_range=[1, 2, 4, 8],
                              phi_grid=[0.01, 0.05, 0.2])
        assert res.best_g == res.surface.max()
        i = res.m_values.index(res.best_m)
        j = int(np.argmax(res.surface[i]))
        assert res.surface[i, j] == res.best_g
        assert res.best_phi == float(res.phi_values[j])

    def test_noisy_cell_needs_classical_cap(self):
        with pytest.raises(ValueError, match="m_star"):
            optimize_g_test(cell(0.85, 0.95, nbar=1e-5, eps=1e-5), 100.0,
                            m_range=[1, 2], phi_grid=[0.1])

    def test_rejects_empty_or_invalid_grids(self):
        with pytest.raises(ValueError, match="non-empty"):
            optimize_g_test(cell(0.5, 1.0), 1.0, m_range=[], phi_grid=[0.1])
        with pytest.raises(ValueError, match="non-empty"):
            optimize_g_test(cell(0.5, 1.0), 1.0, m_range=[1], phi_grid=[])
        with pytest.raises(ValueError, match=r"\(0, 1\)"):
            optimize_g_test(cell(0.5, 1.0), 1.0, m_range=[1], phi_grid=[1.5])
        with pytest.raises(ValueError, match="positive"):
            optimize_g_test(cell(0.5, 1.0), 1.0, m_range=[0, 1],
                            phi_grid=[0.1])
