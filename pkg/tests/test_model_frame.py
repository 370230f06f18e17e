import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kahlercontact.errors import (
    DegenerateInputError,
    InvalidDimensionError,
    NoRealStructureError,
    WrongAmbientError,
)
from kahlercontact.model_frame import (
    AmbientSpec,
    gram_schmidt,
    make_model_frame,
    orthonormal_complement,
    real_structure_residuals,
    rotate_real_structure,
)


class TestMakeModelFrame:
    def test_structures_exact_n3(self):
        F = make_model_frame(3, True)
        I = np.eye(6)
        assert np.array_equal(F.J @ F.J, -I)
        assert np.array_equal(F.A @ F.A, I)
        assert np.array_equal(F.A @ F.J, -F.J @ F.A)

    def test_no_real_structure_rejects_quadric(self):
        F = make_model_frame(2, False)
        assert not F.has_real_structure
        with pytest.raises(NoRealStructureError):
            AmbientSpec.quadric(F, 1)

    def test_v_totally_real_n4(self):
        F = make_model_frame(4, True)
        for i in range(4):
            for j in range(4):
                assert F.je(i) @ F.e(j) == 0.0
        assert np.abs(F.V.T @ F.J @ F.V).max() == 0.0

    def test_basis_convention(self):
        F = make_model_frame(3)
        for k in range(3):
            np.testing.assert_array_equal(F.J @ F.e(k), F.je(k))
            np.testing.assert_array_equal(F.J @ F.je(k), -F.e(k))
            np.testing.assert_array_equal(F.A @ F.e(k), F.e(k))
            np.testing.assert_array_equal(F.A @ F.je(k), -F.je(k))

    @pytest.mark.parametrize("n", [1, 0, -3, 2.5])
    def test_bad_dimension(self, n):
        with pytest.raises(InvalidDimensionError):
            make_model_frame(n)

    @pytest.mark.parametrize("n", range(2, 9))
    def test_residuals_below_tolerance(self, n):
        res = make_model_frame(n).structure_residuals()
        assert max(res.values()) < 1e-12

    def test_arrays_are_read_only(self):
        F = make_model_frame(2)
        with pytest.raises(ValueError):
            F.J[0, 0] = 1.0


class TestAmbientSpec:
    def test_csf_needs_frame_without_a(self):
        with pytest.raises(WrongAmbientError):
            AmbientSpec.csf(make_model_frame(3, True), 4.0)

    @pytest.mark.parametrize("eps", [0, 2, -2, True])
    def test_quadric_sign(self, eps):
        with pytest.raises(WrongAmbientError):
            AmbientSpec.quadric(make_model_frame(3), eps)

    def test_describe(self):
        F = make_model_frame(3)
        assert AmbientSpec.quadric(F, 1).describe() == "Q^3"
        assert AmbientSpec.quadric(F, -1).describe() == "Q^3*"


class TestRotateRealStructure:
    def test_zero_angle(self):
        F = make_model_frame(3)
        np.testing.assert_array_equal(rotate_real_structure(F, 0.0), F.A)

    def test_pi_gives_minus_a(self):
        F = make_model_frame(3)
        As = rotate_real_structure(F, np.pi)
        np.testing.assert_allclose(As, -F.A, atol=1e-15)
        assert max(real_structure_residuals(F, As).values()) < 1e-12

    def test_pi_over_3_involution(self):
        F = make_model_frame(3)
        As = rotate_real_structure(F, np.pi / 3)
        assert np.linalg.norm(As @ As - np.eye(6), 2) < 1e-12

    def test_missing_a(self):
        with pytest.raises(NoRealStructureError):
            rotate_real_structure(make_model_frame(3, False), 0.1)

    @settings(max_examples=100, deadline=None)
    @given(s=st.floats(-10, 10), n=st.integers(2, 6))
    def test_circle_members_are_real_structures(self, s, n):
        F = make_model_frame(n)
        assert max(real_structure_residuals(F, rotate_real_structure(F, s)).values()) < 1e-12


class TestOrthonormalComplement:
    def test_coordinate_case(self):
        F = make_model_frame(3)
        B = orthonormal_complement(F, [F.e(0)])
        assert B.shape == (6, 5)
        np.testing.assert_allclose(B.T @ B, np.eye(5), atol=1e-14)
        assert np.abs(F.e(0) @ B).max() < 1e-15

    def test_contact_distribution(self):
        F = make_model_frame(4)
        rng = np.random.default_rng(1)
        N = rng.standard_normal(8)
        N /= np.linalg.norm(N)
        B = orthonormal_complement(F, [N, F.J @ N])
        assert B.shape == (8, 6)
        np.testing.assert_allclose(B.T @ B, np.eye(6), atol=1e-13)
        assert np.abs(N @ B).max() < 1e-13
        assert np.abs((F.J @ N) @ B).max() < 1e-13

    def test_near_dependent_input(self):
        F = make_model_frame(3)
        v, w = F.e(0), F.e(1)
        with pytest.raises(DegenerateInputError):
            orthonormal_complement(F, [v, v + 1e-12 * w])

    @settings(max_examples=50, deadline=None)
    @given(seed=st.integers(0, 2**31 - 1), k=st.integers(1, 5))
    def test_random_inputs(self, seed, k):
        F = make_model_frame(3)
        V = np.random.default_rng(seed).standard_normal((k, 6))
        B = orthonormal_complement(F, list(V))
        assert B.shape == (6, 6 - k)
        np.testing.assert_allclose(B.T @ B, np.eye(6 - k), atol=1e-12)
        assert np.abs(V @ B).max() < 1e-10 * np.abs(V).max()


def test_gram_schmidt_rows():
    rng = np.random.default_rng(0)
    Q = gram_schmidt(rng.standard_normal((4, 6)))
    np.testing.assert_allclose(Q @ Q.T, np.eye(4), atol=1e-14)
