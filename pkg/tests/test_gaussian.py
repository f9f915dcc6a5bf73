"""Tests for the phase-space core: states, channels, and the cell output map."""

import numpy as np
import pytest

from qread.errors import NumericalError
from qread.gaussian import (
    CellSpec,
    GaussianChannel,
    GaussianState,
    TransmitterSpec,
    Z2,
    apply_bipartite,
    check_physical,
    compose,
    conditional_output_blocks,
    conditional_output_cm,
    identity_channel,
    make_attenuator,
    make_thermal_noise,
    make_tmsv,
    symplectic_eigenvalues,
    symplectic_form,
)


class TestTmsv:
    def test_vacuum_limit(self):
        state = make_tmsv(0.0)
        assert np.array_equal(state.cm, np.eye(4))
        assert np.array_equal(state.mean, np.zeros(4))

    def test_unit_photon_blocks(self):
        state = make_tmsv(1.0)
        assert np.allclose(state.cm[:2, :2], 3.0 * np.eye(2))
        assert np.allclose(state.cm[2:, 2:], 3.0 * np.eye(2))
        assert np.allclose(state.cm[:2, 2:], 2.0 * np.sqrt(2.0) * Z2)

    @pytest.mark.parametrize("n_s", [0.0, 0.1, 1.0, 7.3, 100.0])
    def test_pure_for_any_energy(self, n_s):
        nus = symplectic_eigenvalues(make_tmsv(n_s).cm)
        assert nus == pytest.approx((1.0, 1.0), abs=1e-9)

    def test_negative_energy_rejected(self):
        with pytest.raises(ValueError):
            make_tmsv(-0.5)


class TestChannels:
    def test_attenuator_identity(self):
        ch = make_attenuator(1.0, nbar=3.0)
        assert np.allclose(ch.k, np.eye(2))
        assert np.allclose(ch.n, np.zeros((2, 2)))

    def test_attenuator_vacuum_replacement(self):
        ch = make_attenuator(0.0, nbar=0.0)
        assert np.allclose(ch.k, np.zeros((2, 2)))
        assert np.allclose(ch.n, np.eye(2))

    def test_attenuator_thermal(self):
        ch = make_attenuator(0.5, nbar=2.0)
        assert np.allclose(ch.n, 2.5 * np.eye(2))

    def test_thermal_noise(self):
        assert np.allclose(make_thermal_noise(0.0).n, np.zeros((2, 2)))
        assert np.allclose(make_thermal_noise(1e-5).n, 1e-5 * np.eye(2))

    def test_noise_composition_additive(self):
        ch = compose(make_thermal_noise(0.3), make_thermal_noise(0.2))
        assert np.allclose(ch.k, np.eye(2))
        assert np.allclose(ch.n, 0.5 * np.eye(2))

    def test_compose_identity_neutral(self):
        ch = make_attenuator(0.7, nbar=0.4)
        out = compose(identity_channel(), ch)
        assert np.allclose(out.k, ch.k)
        assert np.allclose(out.n, ch.n)

    def test_loss_multiplicative(self):
        out = compose(make_attenuator(0.5), make_attenuator(0.6))
        ref = make_attenuator(0.3)
        assert np.allclose(out.k, ref.k)
        assert np.allclose(out.n, ref.n)

    @pytest.mark.parametrize("r_u,nbar,eps", [(0.5, 0.0, 0.0), (0.3, 1.2, 0.05), (0.9, 0.0, 1e-5)])
    def test_cell_chain(self, r_u, nbar, eps):
        # N(eps) o E(r, nbar) o N(eps) collapses to k = sqrt(r) I and
        # n = [r eps + (1 - r)(2 nbar + 1) + eps] I.
        noise = make_thermal_noise(eps)
        chain = compose(noise, compose(make_attenuator(r_u, nbar), noise))
        assert np.allclose(chain.k, np.sqrt(r_u) * np.eye(2))
        expected = r_u * eps + (1.0 - r_u) * (2.0 * nbar + 1.0) + eps
        assert np.allclose(chain.n, expected * np.eye(2))

    def test_invalid_reflectivity(self):
        with pytest.raises(ValueError):
            make_attenuator(1.5)
        with pytest.raises(ValueError):
            make_attenuator(0.5, nbar=-1.0)
        with pytest.raises(ValueError):
            make_thermal_noise(-0.1)


class TestSymplecticSpectrum:
    def test_vacuum(self):
        assert symplectic_eigenvalues(np.eye(2)) == pytest.approx((1.0,))

    def test_thermal_single_mode(self):
        nbar = 0.7
        assert symplectic_eigenvalues((2 * nbar + 1) * np.eye(2)) == pytest.approx((2.4,))

    def test_uncorrelated_two_mode(self):
        cm = np.diag([3.0, 3.0, 1.5, 1.5])
        assert symplectic_eigenvalues(cm) == pytest.approx((1.5, 3.0))

    def test_rejects_other_shapes(self):
        with pytest.raises(ValueError):
            symplectic_eigenvalues(np.eye(6))

    def test_symplectic_form_blocks(self):
        omega = symplectic_form(2)
        assert np.array_equal(omega[:2, :2], np.array([[0.0, 1.0], [-1.0, 0.0]]))
        assert np.array_equal(omega, -omega.T)


class TestPhysicality:
    def test_vacuum_ok(self):
        assert check_physical(np.eye(2))

    def test_below_vacuum_fails(self):
        report = check_physical(0.5 * np.eye(2))
        assert not report
        assert report.min_symplectic == pytest.approx(0.5)

    def test_asymmetric_fails(self):
        cm = np.eye(2)
        cm[0, 1] = 1e-6
        assert not check_physical(cm)

    def test_random_cell_outputs_physical(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            cell = CellSpec(
                r0=rng.uniform(0, 1),
                r1=rng.uniform(0, 1),
                nbar=rng.uniform(0, 2) * rng.integers(0, 2),
                eps=rng.uniform(0, 0.5) * rng.integers(0, 2),
            )
            n_s = rng.uniform(0, 20)
            for u in (0, 1):
                assert check_physical(conditional_output_cm(cell, u, n_s))

    def test_state_constructor_validates(self):
        with pytest.raises(ValueError):
            GaussianState(np.zeros(2), 0.5 * np.eye(2))
        bad = np.eye(4)
        bad[0, 1] = 1e-3
        with pytest.raises(ValueError):
            GaussianState(np.zeros(4), bad)


class TestBipartitePropagation:
    def test_identity_pair_is_neutral(self):
        state = make_tmsv(0.8)
        out = apply_bipartite(identity_channel(), identity_channel(), state)
        assert np.allclose(out.cm, state.cm)
        assert np.allclose(out.mean, state.mean)

    def test_signal_vacuum_replacement(self):
        out = apply_bipartite(make_attenuator(0.0), identity_channel(), make_tmsv(2.0))
        assert np.allclose(out.cm[:2, :2], np.eye(2))
        assert np.allclose(out.cm[:2, 2:], np.zeros((2, 2)))

    def test_matches_conditional_output_cm(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            cell = CellSpec(
                r0=rng.uniform(0, 1),
                r1=rng.uniform(0, 1),
                nbar=rng.uniform(0, 1.5),
                eps=rng.uniform(0, 0.3),
            )
            n_s = rng.uniform(0, 10)
            noise = make_thermal_noise(cell.eps)
            for u in (0, 1):
                s_u = compose(noise, compose(make_attenuator(cell.reflectivity(u), cell.nbar), noise))
                d = make_thermal_noise(2.0 * cell.eps)
                routed = apply_bipartite(s_u, d, make_tmsv(n_s))
                assert np.allclose(routed.cm, conditional_output_cm(cell, u, n_s), atol=1e-12)

    def test_requires_two_modes(self):
        single = GaussianState(np.zeros(2), np.eye(2))
        with pytest.raises(ValueError):
            apply_bipartite(identity_channel(), identity_channel(), single)

    def test_unphysical_channel_flagged(self):
        # A fake "channel" that strips noise below vacuum must be caught.
        bad = GaussianChannel(0.5 * np.eye(2), np.zeros((2, 2)))
        with pytest.raises(NumericalError):
            apply_bipartite(bad, bad, make_tmsv(0.0))


class TestConditionalOutput:
    def test_lossless_noiseless_keeps_tmsv(self):
        cell = CellSpec(r0=0.4, r1=1.0)
        assert np.allclose(conditional_output_cm(cell, 1, 1.3), make_tmsv(1.3).cm)

    def test_full_absorption_pure(self):
        cell = CellSpec(r0=0.0, r1=1.0, nbar=0.25, eps=0.0)
        cm = conditional_output_cm(cell, 0, 2.0)
        beta = 1.5
        assert np.allclose(cm[:2, :2], beta * np.eye(2))
        assert np.allclose(cm[:2, 2:], np.zeros((2, 2)))

    def test_block_scalars(self):
        cell = CellSpec(r0=0.3, r1=0.8, nbar=0.5, eps=0.1)
        a, b, c = conditional_output_blocks(cell, 0, 1.0)
        mu, beta = 3.0, 2.0
        assert a == pytest.approx(0.3 * (mu + 0.1) + 0.7 * beta + 0.1)
        assert b == pytest.approx(mu + 0.2)
        assert c == pytest.approx(np.sqrt(0.3 * (mu**2 - 1)))


class TestSpecs:
    def test_cell_validation(self):
        with pytest.raises(ValueError):
            CellSpec(r0=-0.1, r1=0.5)
        with pytest.raises(ValueError):
            CellSpec(r0=0.1, r1=1.2)
        with pytest.raises(ValueError):
            CellSpec(r0=0.1, r1=0.5, eps=-1e-9)
        assert CellSpec(0.2, 0.9).is_pure_loss
        assert not CellSpec(0.2, 0.9, nbar=1e-5).is_pure_loss

    def test_transmitter_energy_split(self):
        t = TransmitterSpec.epr(10, 35.0)
        assert t.l == 10
        assert t.n_s == pytest.approx(3.5)
        assert t.mu == pytest.approx(8.0)

    def test_transmitter_validation(self):
        with pytest.raises(ValueError):
            TransmitterSpec("epr", 5, 4, 1.0)
        with pytest.raises(ValueError):
            TransmitterSpec("coherent", 5, 5, 1.0)
        with pytest.raises(ValueError):
            TransmitterSpec.epr(0, 1.0)
        with pytest.raises(ValueError):
            TransmitterSpec("squeezed", 5, 5, 1.0)
