"""Tests for thresholds, information gain, and parameter-plane scans."""

import math

import numpy as np
import pytest

from qread.analysis import (
    Axis,
    PureLossCoefficients,
    binary_entropy,
    find_min_bandwidth,
    ideal_gain_expr,
    ideal_threshold_curve,
    info_gain,
    scan_plane,
    threshold_energy,
)
from qread.errors import NumericalError
from qread.gaussian import CellSpec

GOLDEN_Y = (math.sqrt(5.0) - 1.0) / 2.0


def cell(r0, r1, nbar=0.0, eps=0.0):
    return CellSpec(r0=r0, r1=r1, nbar=nbar, eps=eps)


class TestBinaryEntropy:
    @pytest.mark.parametrize("p, h", [(0.0, 0.0), (1.0, 0.0), (0.5, 1.0)])
    def test_anchor_points(self, p, h):
        assert binary_entropy(p) == h

    def test_symmetry(self):
        assert binary_entropy(0.11) == pytest.approx(binary_entropy(0.89),
                                                     rel=1e-14)

    @pytest.mark.parametrize("p", [-0.1, 1.0001])
    def test_rejects_out_of_range(self, p):
        with pytest.raises(ValueError, match="0, 1"):
            binary_entropy(p)


class TestPureLossCoefficients:
    def test_frozen_half_dark_cell(self):
        co = PureLossCoefficients.from_reflectivities(0.5, 1.0, 2.0)
        assert co.x == pytest.approx(1.0 - math.sqrt(0.5), rel=1e-15)
        assert co.w == pytest.approx(0.33578643762690485, rel=1e-13)
        assert co.f == pytest.approx(0.3606737602222408, rel=1e-13)
        assert co.y == pytest.approx(math.exp(-2.0), rel=1e-15)
        assert co.c_tilde == pytest.approx(0.2105847200308848, rel=1e-13)

    def test_f_is_reciprocal_threshold_energy(self):
        """The exponent margin and the energy threshold are inverses."""
        for r0, r1 in [(0.5, 1.0), (0.0, 1.0), (0.2, 0.7)]:
            co = PureLossCoefficients.from_reflectivities(r0, r1, 1.0)
            assert co.f * threshold_energy(r0, r1) == pytest.approx(
                1.0, rel=1e-12)

    def test_equal_reflectivities_have_zero_margin(self):
        co = PureLossCoefficients.from_reflectivities(0.4, 0.4, 1.0)
        assert co.x == 0.0
        assert co.w == 0.0
        assert co.f == 0.0
        assert co.c_tilde == 0.25

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError, match=r"\[0, 1\]"):
            PureLossCoefficients.from_reflectivities(-0.1, 1.0, 1.0)
        with pytest.raises(ValueError, match="positive"):
            PureLossCoefficients.from_reflectivities(0.0, 1.0, 0.0)


class TestThresholdEnergy:
    def test_frozen_values(self):
        assert threshold_energy(0.0, 1.0) == pytest.approx(
            2.0 * math.log(2.0), rel=1e-15)
        assert threshold_energy(0.5, 1.0) == pytest.approx(
            4.0 * math.log(2.0), rel=1e-15)

    def test_symmetric_in_the_two_reflectivities(self):
        assert threshold_energy(0.3, 0.8) == threshold_energy(0.8, 0.3)

    def test_diverges_toward_equal_reflectivities(self):
        """Closing the reflectivity gap must push the threshold to infinity."""
        assert (threshold_energy(0.5, 0.6)
                > threshold_energy(0.5, 0.7)
                > threshold_energy(0.5, 1.0))

    def test_rejects_degenerate_and_out_of_range(self):
        with pytest.raises(ValueError, match="undefined"):
            threshold_energy(0.7, 0.7)
        with pytest.raises(ValueError, match=r"\[0, 1\]"):
            threshold_energy(0.2, 1.3)


class TestIdealThresholdCurve:
    def test_full_contrast_crossing_is_golden(self):
        """At x = 1 the zero-gain crossing sits at (sqrt(5) - 1) / 2."""
        p = ideal_threshold_curve(x=1.0)
        assert p.ybar == pytest.approx(GOLDEN_Y, abs=1e-11)
        assert p.nbar == pytest.approx(-math.log(GOLDEN_Y), abs=1e-10)

    def test_dark_reflectivity_zero_matches_x_one(self):
        p = ideal_threshold_curve(r0=0.0)
        assert p.x == 1.0
        assert p.nbar == pytest.approx(
            math.log(2.0 / (math.sqrt(5.0) - 1.0)), abs=1e-11)

    def test_small_separation_approaches_quarter_exponent(self):
        # The crossing climbs toward exp(-1/4) as x -> 0 but sits measurably
        # below it at x = 1e-4 (the gap decays only linearly in x).
        p = ideal_threshold_curve(x=1e-4)
        assert p.ybar == pytest.approx(0.7787910476756769, abs=1e-11)
        assert p.ybar < math.exp(-0.25)
        assert math.exp(-0.25) - p.ybar == pytest.approx(9.7354e-6, rel=1e-3)

    def test_kernel_vanishes_at_the_reported_root(self):
        for x in (1.0, 0.5, 0.07):
            p = ideal_threshold_curve(x=x)
            assert ideal_gain_expr(x, p.ybar) == pytest.approx(0.0, abs=1e-10)

    def test_kernel_sign_structure_around_the_root(self):
        """Gain is guaranteed below the crossing and ruled out above it."""
        p = ideal_threshold_curve(x=1.0)
        assert ideal_gain_expr(1.0, 0.8 * p.ybar) > 0.0
        assert ideal_gain_expr(1.0, 0.5 * (p.ybar + 1.0)) < 0.0

    def test_crossing_decreases_with_separation(self):
        xs = np.linspace(0.01, 1.0, 100)
        ybars = [ideal_threshold_curve(x=float(x)).ybar for x in xs]
        assert all(a > b for a, b in zip(ybars, ybars[1:]))

    def test_energy_threshold_range_over_dark_reflectivity(self):
        """nbar decreases from ln(2/(sqrt(5)-1)) toward 1/4 as r0 grows."""
        r0s = np.linspace(0.0, 0.98, 50)
        nbars = [ideal_threshold_curve(r0=float(r)).nbar for r in r0s]
        assert all(a > b for a, b in zip(nbars, nbars[1:]))
        assert nbars[0] == pytest.approx(math.log(2.0 / (math.sqrt(5.0) - 1.0)),
                                         abs=1e-10)
        assert all(0.25 < n <= nbars[0] for n in nbars)

    def test_rejects_conflicting_or_missing_arguments(self):
        with pytest.raises(ValueError, match="exactly one"):
            ideal_threshold_curve()
        with pytest.raises(ValueError, match="exactly one"):
            ideal_threshold_curve(x=0.5, r0=0.1)
        with pytest.raises(ValueError, match=r"\(0, 1\]"):
            ideal_threshold_curve(x=0.0)
        with pytest.raises(ValueError, match=r"\[0, 1\)"):
            ideal_threshold_curve(r0=1.0)

    def test_kernel_rejects_boundary_y(self):
        with pytest.raises(ValueError, match="strictly inside"):
            ideal_gain_expr(0.5, 1.0)
        with pytest.raises(ValueError, match="strictly inside"):
            ideal_gain_expr(0.5, 0.0)


class TestInfoGain:
    def test_frozen_ideal_memory_two_modes(self):
        res = info_gain(cell(0.0, 1.0), 2, 1.0)
        assert res.c == pytest.approx(0.10246995118967495, rel=1e-13)
        assert res.q == pytest.approx(8.0 / 81.0, rel=1e-13)
        assert res.g == pytest.approx(0.01170676555154826, rel=1e-12)

    def test_gain_positive_iff_quantum_below_classical(self):
        for r0, r1, m, n in [(0.0, 1.0, 2, 1.0), (0.5, 1.0, 1, 3.1),
                             (0.0, 0.2, 1, 0.5), (0.3, 0.5, 4, 2.0)]:
            res = info_gain(cell(r0, r1), m, n)
            assert (res.g > 0.0) == (res.q < res.c)

    def test_identical_reflectivities_yield_exact_zero(self):
        res = info_gain(cell(0.5, 0.5), 4, 1.0)
        assert res.c == 0.5
        assert res.q == 0.5
        assert res.g == 0.0

    def test_noisy_cell_requires_bandwidth_cap(self):
        with pytest.raises(ValueError, match="m_star"):
            info_gain(cell(0.85, 0.95, nbar=1e-5, eps=1e-5), 10, 100.0)

    def test_noisy_cell_with_cap(self):
        res = info_gain(cell(0.85, 0.95, nbar=1e-5, eps=1e-5), 10, 100.0,
                        m_star=1e6)
        assert res.m_star == 1e6
        assert 0.0 < res.q < 0.5
        assert 0.0 < res.c < 0.5


class TestFindMinBandwidth:
    def test_ideal_memory_at_unit_energy(self):
        assert find_min_bandwidth(cell(0.0, 1.0), 1.0, 100) == 2

    def test_equal_reflectivities_never_qualify(self):
        assert find_min_bandwidth(cell(0.5, 0.5), 1.0, 100) is None

    def test_just_above_threshold_energy(self):
        n = 1.1 * threshold_energy(0.5, 1.0)
        assert find_min_bandwidth(cell(0.5, 1.0), n, 10 ** 4) == 1

    def test_noisy_cell_with_cap_qualifies(self):
        m = find_min_bandwidth(cell(0.85, 0.95, nbar=1e-5, eps=1e-5), 100.0,
                               10 ** 4, m_star=1e6)
        assert m == 1

    def test_above_threshold_a_finite_bandwidth_always_exists(self):
        """Random separated cells driven 50% above threshold all qualify."""
        rng = np.random.default_rng(20260816)
        checked = 0
        while checked < 10:
            r0, r1 = sorted(rng.uniform(0.0, 1.0, size=2))
            if r1 - r0 <= 0.1:
                continue
            n = 1.5 * threshold_energy(r0, r1)
            m = find_min_bandwidth(cell(r0, r1), n, 10 ** 4)
            assert m is not None, (r0, r1, n)
            checked += 1

    def test_rejects_empty_search_range(self):
        with pytest.raises(ValueError, match="at least 1"):
            find_min_bandwidth(cell(0.0, 1.0), 1.0, 0)


class TestAxis:
    def test_linear_values(self):
        ax = Axis("r0", 0.0, 1.0, points=5)
        assert np.allclose(ax.values(), [0.0, 0.25, 0.5, 0.75, 1.0])

    def test_log_values(self):
        ax = Axis("N", 0.1, 10.0, points=3, scale="log")
        assert np.allclose(ax.values(), [0.1, 1.0, 10.0])

    @pytest.mark.parametrize("kwargs, msg", [
        (dict(points=1), "at least 2"),
        (dict(start=0.5, stop=0.5), "below stop"),
        (dict(scale="cubic"), "linear"),
        (dict(start=0.0, scale="log"), "positive start"),
    ])
    def test_rejects_bad_axes(self, kwargs, msg):
        base = dict(name="a", start=0.1, stop=1.0, points=4, scale="linear")
        base.update(kwargs)
        with pytest.raises(ValueError, match=msg):
            Axis(**base)


class TestScanPlane:
    def test_reflectivity_plane_shape_and_order(self):
        grid = scan_plane("r0xr1", Axis("r0", 0.0, 0.4, points=3),
                          Axis("r1", 0.6, 1.0, points=3), m=2, energy_n=1.0)
        assert len(grid.cells) == 9
        # row-major: the second coordinate varies fastest
        assert grid.cells[0].coords == (0.0, 0.6)
        assert grid.cells[1].coords == (0.0, 0.8)
        assert grid.cells[3].coords == (0.2, 0.6)

    def test_best_cell_is_the_largest_unflagged_gain(self):
        grid = scan_plane("r0xr1", Axis("r0", 0.0, 0.4, points=3),
                          Axis("r1", 0.6, 1.0, points=3), m=2, energy_n=1.0)
        best = grid.best()
        assert best is not None
        assert not best.flagged
        gains = [c.result.g for c in grid.cells
                 if c.result is not None and not c.flagged]
        assert best.result.g == max(gains)

    def test_inconclusive_points_are_flagged_not_fatal(self):
        # A scan crossing the r0 = r1 diagonal has zero-gain cells on it.
        grid = scan_plane("r0xr1", Axis("r0", 0.2, 0.8, points=4),
                          Axis("r1", 0.2, 0.8, points=4), m=2, energy_n=1.0)
        diag = [c for c in grid.cells if c.coords[0] == c.coords[1]]
        assert len(diag) == 4
        for c in diag:
            assert c.flagged
            assert c.note == "inconclusive"
            assert c.result is not None and c.result.g == 0.0

    def test_failing_points_are_flagged_with_the_reason(self):
        # The bandwidth limit of the quantum bound needs a bright cell; with
        # r1 != 1 every point must fail gracefully instead of aborting.
        grid = scan_plane("r0xN", Axis("r0", 0.0, 0.3, points=2),
                          Axis("N", 0.5, 1.0, points=2), m=None, r1=0.9)
        assert all(c.flagged and c.result is None for c in grid.cells)
        assert all("r1 = 1" in c.note for c in grid.cells)

    def test_asymptotic_plane_matches_closed_form(self):
        grid = scan_plane("r0xN", Axis("r0", 0.0, 0.3, points=2),
                          Axis("N", 0.5, 1.0, points=2), m=None)
        by_coords = {c.coords: c for c in grid.cells}
        c01 = by_coords[(0.0, 1.0)]
        assert c01.result.q == pytest.approx(0.5 * math.exp(-2.0), rel=1e-12)
        assert c01.result.m is None
        assert c01.result.g > 0.0
        c35 = by_coords[(0.3, 0.5)]
        assert c35.result.q == pytest.approx(
            0.5 * math.exp(-2.0 * 0.5 * (1.0 - math.sqrt(0.3))), rel=1e-12)

    def test_finite_bandwidth_energy_plane(self):
        grid = scan_plane("r0xN", Axis("r0", 0.0, 0.3, points=2),
                          Axis("N", 1.0, 2.0, points=2), m=4)
        assert all(c.result is not None for c in grid.cells)
        by_coords = {c.coords: c for c in grid.cells}
        direct = info_gain(cell(0.0, 1.0), 4, 2.0)
        assert by_coords[(0.0, 2.0)].result.g == direct.g

    def test_rejects_unknown_plane(self):
        with pytest.raises(ValueError, match="r0xr1"):
            scan_plane("r1xN", Axis("a", 0.0, 1.0, points=2),
                       Axis("b", 0.0, 1.0, points=2))

    def test_reflectivity_plane_needs_bandwidth_and_energy(self):
        with pytest.raises(ValueError, match="m and energy_n"):
            scan_plane("r0xr1", Axis("r0", 0.0, 1.0, points=2),
                       Axis("r1", 0.0, 1.0, points=2), m=2)

    def test_asymptotic_plane_rejects_environment_noise(self):
        with pytest.raises(ValueError, match="pure-loss"):
            scan_plane("r0xN", Axis("r0", 0.0, 0.3, points=2),
                       Axis("N", 0.5, 1.0, points=2), m=None, nbar=0.1)

    def test_noisy_plane_needs_classical_cap(self):
        with pytest.raises(ValueError, match="m_star"):
            scan_plane("r0xN", Axis("r0", 0.0, 0.3, points=2),
                       Axis("N", 0.5, 1.0, points=2), m=2, eps=1e-3)
