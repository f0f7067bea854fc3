"""
Tests for field reconstruction, the CF metric and the f-k spectrum
"""
import numpy as np
import pytest

from core.assembly import build_model
from core.exceptions import DomainError, UndefinedMetricError
from core.section import section_sample
from core.solver import harmonic_response
from core.wavefield import (
    cost_function,
    dispersion_wavenumber,
    envelope,
    envelope_from_samples,
    field_cost,
    far_field_stations,
    field_from_amplitude,
    near_field_cut,
    reconstruct,
    spectrum_2d,
    time_grid,
    velocity_field,
    window_grid,
    wavenumber_resolution,
)


OMEGA = 2 * np.pi * 1000.0
X = np.linspace(0.05, 1.0, 191)


def traveling(k: float):
    return field_from_amplitude(X, np.exp(-1j * k * X), OMEGA)


def standing(k: float):
    return field_from_amplitude(X, np.cos(k * X).astype(complex), OMEGA)


class TestGrids:
    """Test the analysis grids"""

    def test_default_pitch(self):
        x = window_grid((0.05, 1.0), 191, 1.22)
        assert x[1] - x[0] == pytest.approx(0.005)

    @pytest.mark.parametrize("window", [(-0.1, 1.0), (0.05, 1.3), (0.5, 0.4)])
    def test_window_outside_beam(self, window):
        with pytest.raises(DomainError):
            window_grid(window, 191, 1.22)

    def test_too_few_stations(self):
        with pytest.raises(DomainError):
            window_grid((0.05, 1.0), 10, 1.22)

    def test_time_grid_excludes_endpoint(self):
        t = time_grid(OMEGA, 8, 32)
        assert t.size == 256
        assert t[-1] < 8 * 2 * np.pi / OMEGA

    def test_time_grid_minimum_sampling(self):
        with pytest.raises(DomainError):
            time_grid(OMEGA, 8, 8)


class TestReconstruction:
    """Test w = Re(W e^{i omega t})"""

    def test_identity(self):
        W = np.exp(-1j * 30.0 * X) * (1 + 0.3 * X)
        field = field_from_amplitude(X, W, OMEGA)
        expected = np.real(W[:, None] * np.exp(1j * OMEGA * field.t_grid[None, :]))
        assert np.array_equal(field.w, expected)

    def test_constant_amplitude_oscillates_uniformly(self):
        field = field_from_amplitude(X, np.full(X.size, 2.0 + 0j), OMEGA)
        np.testing.assert_allclose(field.w, np.tile(2.0 * np.cos(OMEGA * field.t_grid), (X.size, 1)), atol=1e-14)

    def test_traveling_wave(self):
        k = 40.0
        field = traveling(k)
        expected = np.cos(OMEGA * field.t_grid[None, :] - k * X[:, None])
        np.testing.assert_allclose(field.w, expected, atol=1e-12)

    def test_reconstruct_from_solution(self, small_model):
        basis, model = small_model
        sol = harmonic_response(model, 2 * np.pi * 500.0)
        field = reconstruct(sol, basis)
        assert field.w.shape == (191, 256)
        assert field.dx == pytest.approx(0.005)


class TestEnvelope:
    """Test the per-station amplitude"""

    def test_constant(self):
        field = field_from_amplitude(X, np.full(X.size, -3.0 + 0j), OMEGA)
        np.testing.assert_allclose(envelope(field), 3.0)

    def test_traveling_is_flat(self):
        np.testing.assert_allclose(envelope(traveling(25.0)), 1.0, rtol=1e-15)

    def test_standing_has_nodes(self):
        k = 25.0
        np.testing.assert_allclose(envelope(standing(k)), np.abs(np.cos(k * X)), atol=1e-15)

    def test_sampled_envelope_within_bound(self):
        W = np.exp(-1j * 17.0 * X) * (0.5 + X) * np.exp(0.37j)
        field = field_from_amplitude(X, W, OMEGA, periods=8, nt_per_period=32)
        exact = envelope(field)
        sampled = envelope_from_samples(field)
        bound = (np.pi / 32) ** 2 / 2
        assert np.all(sampled <= exact * (1 + 1e-12))
        assert np.all(sampled >= exact * (1 - bound))

    def test_sampled_velocity_envelope(self):
        env = envelope_from_samples(traveling(25.0), velocity_field(traveling(25.0)))
        bound = (np.pi / 32) ** 2 / 2
        assert np.all(env <= 1.0)
        assert np.all(env >= 1.0 - bound)


class TestCostFunction:
    """Test CF = (max - min)/(max + min)"""

    def test_pure_traveling(self):
        assert cost_function(np.full(10, 0.7)) == 0.0

    def test_pure_standing(self):
        assert cost_function([0.0, 0.5, 1.0]) == 1.0

    def test_direct(self):
        assert cost_function([1.0, 2.0, 3.0]) == pytest.approx(0.5)

    def test_all_zero_undefined(self):
        with pytest.raises(UndefinedMetricError):
            cost_function(np.zeros(5))

    @pytest.mark.parametrize("env", [[], [1.0, -0.1], [1.0, np.nan]])
    def test_rejects_invalid(self, env):
        with pytest.raises(DomainError):
            cost_function(env)

    def test_velocity_envelope_gives_same_cf(self, small_model):
        basis, model = small_model
        sol = harmonic_response(model, 2 * np.pi * 800.0)
        field = reconstruct(sol, basis)
        displacement = cost_function(envelope(field))
        velocity = cost_function(np.abs(1j * field.omega * field.W))
        assert velocity == pytest.approx(displacement, abs=1e-12)

    def test_velocity_samples_normalized(self):
        v = velocity_field(traveling(10.0))
        assert np.max(np.abs(v)) == pytest.approx(1.0)

    def test_invariant_to_force_scale(self, baseline):
        omega = 2 * np.pi * 1500.0
        basis, unit = build_model(baseline, 40)
        _, scaled = build_model(baseline.model_copy(update={"F0": 3.0}), 40)
        cf_unit = field_cost(harmonic_response(unit, omega), basis)
        cf_scaled = field_cost(harmonic_response(scaled, omega), basis)
        assert cf_scaled == pytest.approx(cf_unit, abs=1e-12)

    def test_uses_window_stations_only(self, small_model):
        basis, model = small_model
        sol = harmonic_response(model, 2 * np.pi * 800.0)
        x = np.linspace(0.3, 0.6, 64)
        W_window = np.abs(sol.tau0 @ basis.values(x))
        assert field_cost(sol, basis, window=(0.3, 0.6), nx=64) == cost_function(W_window)


class TestSpectrum:
    """Test the frequency-wavenumber spectrum"""

    def test_axes(self):
        spectrum = spectrum_2d(traveling(60.0), zero_pad=4)
        assert np.all(np.diff(spectrum.freqs) > 0)
        assert np.all(np.diff(spectrum.wavenumbers) > 0)
        np.testing.assert_allclose(spectrum.wavenumbers, -spectrum.wavenumbers[::-1], atol=1e-9)
        assert spectrum.magnitude.min() >= 0
        assert spectrum.magnitude.max() == pytest.approx(1.0)

    def test_rightward_wave_peaks_at_positive_k(self):
        k = 60.0
        field = traveling(k)
        spectrum = spectrum_2d(field, zero_pad=4)
        f_peak, k_peak = spectrum.dominant()
        assert f_peak == pytest.approx(OMEGA / (2 * np.pi))
        assert k_peak == pytest.approx(k, abs=wavenumber_resolution(field))

    def test_leftward_wave_peaks_at_negative_k(self):
        k = 60.0
        field = field_from_amplitude(X, np.exp(1j * k * X), OMEGA)
        _, k_peak = spectrum_2d(field).dominant()
        assert k_peak == pytest.approx(-k, abs=wavenumber_resolution(field))

    def test_standing_wave_has_two_equal_peaks(self):
        k = 60.0
        spectrum = spectrum_2d(standing(k), zero_pad=4)
        row = spectrum.magnitude[np.argmax(spectrum.magnitude.max(axis=1))]
        positive = row[spectrum.wavenumbers > 0].max()
        negative = row[spectrum.wavenumbers < 0].max()
        assert positive == pytest.approx(negative, rel=0.05)

    def test_energy_concentrated_near_peak(self):
        k = 2 * np.pi * 10 / (X.size * (X[1] - X[0]))  # on an unpadded bin
        field = traveling(k)
        spectrum = spectrum_2d(field, zero_pad=1)
        power = spectrum.magnitude ** 2
        dk = wavenumber_resolution(field)
        near = np.abs(spectrum.wavenumbers - k) <= 1.01 * dk
        f_row = np.argmin(np.abs(spectrum.freqs - OMEGA / (2 * np.pi)))
        assert power[f_row, near].sum() >= 0.95 * power.sum()

    def test_rejects_non_uniform_grid(self):
        x = np.concatenate([np.linspace(0.05, 0.5, 40), np.linspace(0.52, 1.0, 40)])
        field = field_from_amplitude(x, np.ones(x.size, dtype=complex), OMEGA)
        with pytest.raises(DomainError):
            spectrum_2d(field)

    def test_rejects_small_grid(self):
        x = np.linspace(0.05, 1.0, 20)
        field = field_from_amplitude(x, np.ones(x.size, dtype=complex), OMEGA)
        with pytest.raises(DomainError):
            spectrum_2d(field)


class TestDispersion:
    """Test the flexural wavenumber"""

    def test_baseline_uniform_section(self):
        k = dispersion_wavenumber(2 * np.pi * 7000.0, 1.9688, 0.10287)
        assert k == pytest.approx(100.3, abs=0.1)

    def test_mass_scaling(self):
        k = dispersion_wavenumber(1000.0, 2.0, 0.1)
        assert dispersion_wavenumber(1000.0, 2.0, 1.6) == pytest.approx(2 * k)

    def test_stiffness_scaling(self):
        k = dispersion_wavenumber(1000.0, 2.0, 0.1)
        assert dispersion_wavenumber(1000.0, 32.0, 0.1) == pytest.approx(k / 2)

    def test_rejects_non_positive(self):
        with pytest.raises(DomainError):
            dispersion_wavenumber(0.0, 1.0, 1.0)


class TestNearField:
    """Test exclusion of the force near field from CF"""

    def test_cut_position(self, baseline):
        omega = 2 * np.pi * 2000.0
        sample = section_sample(0.0, baseline)
        k = dispersion_wavenumber(omega, sample.D.real, sample.mu)
        assert near_field_cut(baseline, omega) == pytest.approx(baseline.L3 + 3.0 / k)
        assert near_field_cut(baseline, omega, 4.0) == pytest.approx(baseline.L3 + 4.0 / k)

    def test_cut_shrinks_with_frequency(self, baseline):
        cuts = [near_field_cut(baseline, 2 * np.pi * f) for f in (250.0, 2000.0, 7000.0)]
        assert cuts[0] > cuts[1] > cuts[2] > baseline.L3

    def test_disabled(self, baseline):
        assert near_field_cut(baseline, 2 * np.pi * 2000.0, 0.0) == -np.inf

    def test_mask(self):
        x = np.linspace(0.0, 1.0, 11)
        assert far_field_stations(x, 0.25).tolist() == [False] * 3 + [True] * 8
        assert far_field_stations(x, -np.inf).all()

    def test_mask_keeps_downstream_half(self):
        x = np.linspace(0.0, 1.0, 11)
        assert far_field_stations(x, 10.0).sum() == 6

    def test_unchanged_when_cut_precedes_window(self, small_model, baseline):
        basis, model = small_model
        sol = harmonic_response(model, 2 * np.pi * 1500.0)
        assert near_field_cut(baseline, sol.omega, 1.0) < 0.05
        assert field_cost(sol, basis, cfg=baseline, near_field_decay=1.0) == field_cost(sol, basis)

    def test_excluding_stations_never_raises_cf(self, small_model, baseline):
        basis, model = small_model
        for f in (600.0, 2000.0, 2400.0):
            sol = harmonic_response(model, 2 * np.pi * f)
            assert field_cost(sol, basis, cfg=baseline) <= field_cost(sol, basis)

    def test_removes_evanescent_term(self, baseline):
        # Infinite-beam point-load response: propagating wave plus e^{-k|x - L3|}
        omega = 2 * np.pi * 2000.0
        sample = section_sample(0.0, baseline)
        k = dispersion_wavenumber(omega, sample.D.real, sample.mu)
        r = np.abs(X - baseline.L3)
        W = 1j * np.exp(-1j * k * r) + np.exp(-k * r)
        far = far_field_stations(X, near_field_cut(baseline, omega))
        assert cost_function(np.abs(W)) > 0.1
        assert cost_function(np.abs(W[far])) < 0.02
