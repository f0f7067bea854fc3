"""
Tests for mass/stiffness assembly and the load vector
"""
import numpy as np
import pytest

from core.assembly import (
    SpectralModel,
    assemble,
    build_model,
    dump_matrices,
    min_quadrature_order,
    segment_quadrature,
)
from core.basis import BasisSet
from core.exceptions import ConfigError
from models.schemas import BeamConfig


class TestQuadratureOrder:
    """Test the per-segment node rule"""

    def test_small_basis(self):
        assert min_quadrature_order(10, 3) >= 20

    def test_default_rule(self):
        assert min_quadrature_order(140, 3) == 150

    def test_exactness_bound(self):
        for n in (4, 10, 60, 140):
            for m in (1, 3, 10):
                q = min_quadrature_order(n, m)
                assert 2 * q - 1 >= 2 * (n - 3) + 3 * m

    def test_rejects_tiny_basis(self):
        with pytest.raises(ConfigError):
            min_quadrature_order(3, 3)

    def test_segments_cover_beam(self, baseline):
        nodes, weights = segment_quadrature(baseline, 12)
        assert nodes.size == 36
        assert weights.sum() == pytest.approx(baseline.L, rel=1e-14)
        assert np.all(np.diff(nodes) > 0)
        # Breakpoints never fall inside a panel
        assert np.sum(nodes < baseline.L1) == 12
        assert np.sum(nodes > baseline.L2) == 12


class TestAssemble:
    """Test the assembled matrices"""

    def test_symmetry_exact(self, small_model):
        _, model = small_model
        assert np.array_equal(model.M, model.M.T)
        assert np.array_equal(model.K, model.K.T)

    def test_rigid_rows_vanish(self, small_model):
        _, model = small_model
        assert np.all(model.K[:2, :] == 0.0)
        assert np.all(model.K[:, :2] == 0.0)

    def test_mass_positive(self, small_model):
        _, model = small_model
        rng = np.random.default_rng(7)
        for _ in range(100):
            v = rng.standard_normal(model.n)
            assert v @ model.M @ v > 0
        assert np.all(np.linalg.eigvalsh(model.M) > 0)

    def test_uniform_rigid_mass(self, uniform_beam):
        """M_00 = mu L"""
        _, model = build_model(uniform_beam, 10)
        assert model.M[0, 0] == pytest.approx(0.10287 * 1.22, rel=1e-12)

    def test_uniform_stiffness_diagonal(self, uniform_beam):
        """K_22 = D (2/L)^4 (L/2) * 9 * 2"""
        _, model = build_model(uniform_beam, 10)
        D = uniform_beam.E_b * uniform_beam.B * uniform_beam.h1 ** 3 / 12.0
        L = uniform_beam.L
        expected = D * (2.0 / L) ** 4 * (L / 2.0) * 18.0
        assert model.K[2, 2].real == pytest.approx(expected, rel=1e-12)

    def test_force_at_midpoint(self):
        cfg = BeamConfig(L3=0.61)
        _, model = build_model(cfg, 12)
        assert np.all(np.abs(model.f0[1::2]) < 1e-15)
        assert model.f0[0] == pytest.approx(1.0)

    def test_force_scales_with_amplitude(self):
        _, unit = build_model(BeamConfig(F0=1.0), 12)
        _, scaled = build_model(BeamConfig(F0=-2.5), 12)
        np.testing.assert_allclose(scaled.f0, -2.5 * unit.f0, rtol=1e-15)

    def test_elastic_stiffness_is_real(self):
        _, model = build_model(BeamConfig(eta=0.0), 30)
        assert np.all(model.K.imag == 0.0)
        assert model.is_elastic

    def test_damped_stiffness_is_complex(self, small_model):
        _, model = small_model
        assert not model.is_elastic
        assert np.max(np.abs(model.K.imag)) > 0

    def test_stiffness_homogeneous_in_moduli(self, baseline):
        _, model = build_model(baseline, 30)
        stiff = baseline.model_copy(update={"E_b": 4 * baseline.E_b, "E_vs": 4 * baseline.E_vs})
        _, scaled = build_model(stiff, 30)
        assert np.array_equal(scaled.K, 4 * model.K)
        assert np.array_equal(scaled.M, model.M)

    def test_mass_homogeneous_in_densities(self, baseline):
        _, model = build_model(baseline, 30)
        dense = baseline.model_copy(update={"rho_b": 2 * baseline.rho_b, "rho_v": 2 * baseline.rho_v})
        _, scaled = build_model(dense, 30)
        assert np.array_equal(scaled.M, 2 * model.M)
        assert np.array_equal(scaled.K, model.K)

    def test_quadrature_doubling_stable(self, baseline):
        basis = BasisSet(n=40, L=baseline.L)
        q = min_quadrature_order(40, baseline.m)
        coarse = assemble(baseline, basis, q)
        fine = assemble(baseline, basis, 2 * q)
        scale_K = np.max(np.abs(fine.K))
        scale_M = np.max(np.abs(fine.M))
        assert np.max(np.abs(coarse.K - fine.K)) < 1e-10 * scale_K
        assert np.max(np.abs(coarse.M - fine.M)) < 1e-10 * scale_M

    def test_rejects_low_quadrature(self, baseline):
        basis = BasisSet(n=20, L=baseline.L)
        with pytest.raises(ConfigError):
            assemble(baseline, basis, 5)

    def test_rejects_mismatched_length(self, baseline):
        with pytest.raises(ConfigError):
            assemble(baseline, BasisSet(n=10, L=2.0))

    def test_recombined_pair(self, small_model):
        _, model = small_model
        np.testing.assert_allclose(
            model.K_compact, model.T @ model.K @ model.T.T, rtol=0, atol=1e-12 * np.max(np.abs(model.K_compact))
        )
        assert np.array_equal(model.K_compact, model.K_compact.T)
        assert np.all(model.K_compact[:2, :] == 0.0)


class TestFromMatrices:
    """Test hand-built models"""

    def test_scalar_system(self):
        model = SpectralModel.from_matrices([[1.0]], [[4.0]], [1.0])
        assert model.n == 1
        assert model.M_compact[0, 0] == 1.0
        assert model.K_compact[0, 0] == 4.0


class TestDumpMatrices:
    """Test the debug dump"""

    def test_writes_three_files(self, small_model, output_folder):
        _, model = small_model
        paths = dump_matrices(model, output_folder / "matrices")
        assert [p.name for p in paths] == ["M.dat", "K.dat", "f0.dat"]

        K_rows = paths[1].read_text().splitlines()
        assert len(K_rows) == model.n
        # Complex entries are written as "re im" pairs
        assert len(K_rows[0].split()) == 2 * model.n

        M = np.loadtxt(paths[0])
        np.testing.assert_array_equal(M, model.M)
        f0 = np.loadtxt(paths[2])
        np.testing.assert_array_equal(f0, model.f0)
