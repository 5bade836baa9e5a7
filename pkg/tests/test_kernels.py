import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bergkit.kernels import (KernelMatrix, Weight, add_constant,
                             bergman_kernel, defect_kernel,
                             defect_kernel_matrix, factorization_residual,
                             gram_matrix, kernel_function, nevanlinna_kernel,
                             psd_check, schur_product)
from bergkit.symbols import DEFAULT_GRID, Affine, Compose, identity

SYMMETRY_RTOL = 1e-12


def sector_points(rng, size):
    r = np.exp(rng.uniform(np.log(DEFAULT_GRID.r_min),
                           np.log(DEFAULT_GRID.r_max), size))
    th = rng.uniform(-DEFAULT_GRID.aperture, DEFAULT_GRID.aperture, size)
    return r * np.exp(1j * th)


class TestWeight:
    def test_constants(self):
        w = Weight(1.0)
        assert w.norm_const == 4.0
        assert w.exponent == 3.0
        assert w.half_exponent == 1.5

    def test_rejects_alpha_at_or_below_minus_one(self):
        with pytest.raises(ValueError):
            Weight(-1.0)
        with pytest.raises(ValueError):
            Weight(-2.0)

    def test_norm_const_positive(self):
        for alpha in (-0.99, -0.5, 0.0, 3.7, 12.0):
            assert Weight(alpha).norm_const > 0


class TestBergmanKernel:
    def test_values(self):
        assert bergman_kernel(Weight(0.0), 1, 1) == pytest.approx(0.25)
        assert bergman_kernel(Weight(1.0), 1, 1) == pytest.approx(0.5)
        assert bergman_kernel(Weight(0.0), 1, 1 + 1j) == pytest.approx((3 - 4j) / 25)

    def test_rejects_outside_domain(self):
        with pytest.raises(ValueError):
            bergman_kernel(Weight(0.0), -1, 1)

    def test_kernel_function_matches(self):
        k = kernel_function(Weight(0.5), 2 + 1j)
        z = np.array([1.0, 3.0 + 2j])
        np.testing.assert_allclose(k(z),
                                   bergman_kernel(Weight(0.5), 2 + 1j, z))

    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_conjugate_symmetry(self, seed):
        rng = np.random.default_rng(seed)
        w = Weight(float(rng.uniform(-0.9, 6.0)))
        omega, z = sector_points(rng, 2)
        a = bergman_kernel(w, omega, z)
        b = bergman_kernel(w, z, omega)
        assert abs(a - np.conj(b)) <= SYMMETRY_RTOL * max(abs(a), 1e-300)


class TestGramMatrix:
    def test_single_point(self):
        m = gram_matrix(Weight(0.0), [1.0])
        np.testing.assert_allclose(m.entries, [[0.25]])

    def test_two_points(self):
        m = gram_matrix(Weight(0.0), [1.0, 2.0])
        np.testing.assert_allclose(
            m.entries, [[0.25, 1 / 9], [1 / 9, 1 / 16]])

    def test_near_duplicate_warns(self):
        m = gram_matrix(Weight(0.0), [1.0, 1.0 + 1e-9])
        assert m.conditioning_warning
        # cross-check against LAPACK's condition number
        assert np.linalg.cond(m.entries) > 1e12

    def test_well_separated_does_not_warn(self):
        m = gram_matrix(Weight(0.0), [1.0, 4.0, 16.0])
        assert not m.conditioning_warning

    def test_duplicate_points_rejected(self):
        with pytest.raises(ValueError, match="distinct"):
            gram_matrix(Weight(0.0), [1.0, 1.0])

    def test_gram_is_psd_on_random_configurations(self):
        rng = np.random.default_rng(7)
        for alpha in (0.0, 1.0, 2.7):
            for _ in range(5):
                pts = DEFAULT_GRID.sample_points(6, rng)
                assert psd_check(gram_matrix(Weight(alpha), pts)).is_psd

    def test_hermitian_defect_small(self):
        rng = np.random.default_rng(11)
        pts = sector_points(rng, 8)
        m = gram_matrix(Weight(1.3), pts)
        assert m.hermitian_defect <= 1e-12 * np.abs(m.entries).max()

    def test_audit_export(self):
        m = gram_matrix(Weight(0.0), [1.0, 2.0])
        data = m.to_dict()
        assert data["points"] == [[1.0, 0.0], [2.0, 0.0]]
        assert data["entries"][0][1] == [pytest.approx(1 / 9), 0.0]
        assert data["condition_estimate"] is not None


class TestNevanlinnaKernel:
    def test_identity_gives_all_ones(self):
        m = nevanlinna_kernel(identity(), [1.0, 2.0, 1 + 1j])
        np.testing.assert_allclose(m.entries, 1.0)

    def test_constant_one(self):
        m = nevanlinna_kernel(lambda z: np.ones_like(z), [1.0, 2.0])
        np.testing.assert_allclose(m.entries, [[1.0, 2 / 3], [2 / 3, 0.5]])

    def test_negative_real_part_fails_psd(self):
        m = nevanlinna_kernel(lambda z: -np.ones_like(z), [1.0])
        verdict = psd_check(m)
        assert not verdict.is_psd
        assert verdict.min_eigenvalue == pytest.approx(-1.0)

    def test_scalar_only_callable_supported(self):
        m = nevanlinna_kernel(lambda z: 1.0, [1.0, 2.0])
        np.testing.assert_allclose(m.entries, [[1.0, 2 / 3], [2 / 3, 0.5]])

    @pytest.mark.parametrize("psi", [
        identity(),
        lambda z: np.ones_like(z),
        lambda z: z + 1 / z,
        lambda z: 2 * z + 3,
    ])
    def test_positive_real_part_gives_psd(self, psi):
        rng = np.random.default_rng(13)
        for _ in range(5):
            pts = DEFAULT_GRID.sample_points(8, rng)
            assert psd_check(nevanlinna_kernel(psi, pts)).is_psd


class TestDefectKernel:
    def test_translation_value(self):
        assert defect_kernel(Affine(1, 1), 1.0, 1, 1, 1) == pytest.approx(1.0)

    def test_identity_vanishes(self):
        assert defect_kernel(identity(), 1.0, 3, 2 + 1j, 1) == pytest.approx(0.0)

    def test_exact_dilation_vanishes(self):
        assert defect_kernel(Affine(2, 0), 0.5, 2, 1, 1) == pytest.approx(0.0)

    def test_matrix_values(self):
        m = defect_kernel_matrix(Affine(1, 1), 1.0, 1, [1.0, 2.0])
        np.testing.assert_allclose(m.entries, [[1.0, 2 / 3], [2 / 3, 0.5]])
        assert m.hermitian_defect <= 1e-12 * np.abs(m.entries).max()
        verdict = psd_check(m)
        assert verdict.is_psd  # det = 1/18 > 0

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            defect_kernel(identity(), -1.0, 1, 1, 1)
        with pytest.raises(ValueError):
            defect_kernel(identity(), 1.0, 0, 1, 1)

    @pytest.mark.parametrize("phi", [
        Affine(1, 1),
        Affine(2, 1),
        Compose(Affine(2, 1), Affine(3, 0)),
    ])
    @pytest.mark.parametrize("n", [1, 2, 4, 8])
    def test_dyadic_powers_psd_at_true_lambda(self, phi, n):
        lam = phi.known_lambda
        rng = np.random.default_rng(17)
        for _ in range(5):
            pts = DEFAULT_GRID.sample_points(8, rng)
            assert psd_check(defect_kernel_matrix(phi, lam, n, pts)).is_psd


class TestFactorization:
    def pairs(self, count=50, seed=0):
        rng = np.random.default_rng(seed)
        return np.stack([sector_points(rng, count),
                         sector_points(rng, count)], axis=1)

    def test_translation_level0(self):
        assert factorization_residual(Affine(1, 1), 1.0, 0, self.pairs()) <= 1e-12

    def test_affine_level1(self):
        assert factorization_residual(Affine(2, 1), 0.5, 1, self.pairs()) <= 1e-10

    def test_identity_exact_zero(self):
        assert factorization_residual(identity(), 1.0, 2, self.pairs()) == 0.0

    def test_levels_up_to_two(self):
        pairs = self.pairs(200, seed=3)
        for level in (0, 1, 2):
            for phi in (Affine(2, 1), Affine(0.5, 2)):
                residual = factorization_residual(phi, 1 / phi.a, level, pairs)
                assert residual <= 1e-10


class TestMatrixOps:
    def test_schur_identity(self):
        m = KernelMatrix.build([1.0, 2.0], np.eye(2), "eye")
        out = schur_product(m, m)
        np.testing.assert_allclose(out.entries, np.eye(2))
        assert psd_check(out).is_psd

    def test_add_constant_to_zero(self):
        m = KernelMatrix.build([1.0, 2.0], np.zeros((2, 2)), "zero")
        out = add_constant(m, 1.0)
        np.testing.assert_allclose(out.entries, 1.0)
        assert psd_check(out).is_psd

    def test_add_constant_rejects_negative(self):
        m = KernelMatrix.build([1.0], np.eye(1), "eye")
        with pytest.raises(ValueError):
            add_constant(m, -0.5)

    def test_schur_requires_same_points(self):
        m1 = KernelMatrix.build([1.0, 2.0], np.eye(2), "a")
        m2 = KernelMatrix.build([1.0, 3.0], np.eye(2), "b")
        with pytest.raises(ValueError):
            schur_product(m1, m2)

    def test_schur_product_of_psd_defect_matrices_is_psd(self):
        m = defect_kernel_matrix(Affine(1, 1), 1.0, 1, [1.0, 2.0, 3.0])
        verdict = psd_check(schur_product(m, m))
        assert verdict.is_psd


class TestPsdCheck:
    def test_identity(self):
        verdict = psd_check(np.eye(3))
        assert verdict.is_psd
        assert verdict.min_eigenvalue == pytest.approx(1.0)
        assert verdict.witness is None

    def test_indefinite_with_witness(self):
        m = np.array([[1.0, 2.0], [2.0, 1.0]])
        verdict = psd_check(m)
        assert not verdict.is_psd
        assert verdict.min_eigenvalue == pytest.approx(-1.0)
        c = np.array(verdict.witness)
        assert (c.conj() @ m @ c).real < 0

    def test_threshold_scales_with_trace(self):
        verdict = psd_check(1e6 * np.eye(4))
        assert verdict.threshold == pytest.approx(1e-9 * 1e6)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="Hermitian"):
            psd_check(np.array([[1.0, 1.0], [0.0, 1.0]]))

    def test_accepts_kernel_matrix_inputs(self):
        assert psd_check(gram_matrix(Weight(0.0), [1.0, 2.0])).is_psd

    def test_verdict_round_trips_to_json(self):
        verdict = psd_check(np.array([[1.0, 2.0], [2.0, 1.0]]))
        data = verdict.to_dict()
        assert data["is_psd"] is False
        assert len(data["witness"]) == 2
