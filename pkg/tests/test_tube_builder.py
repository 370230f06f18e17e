import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kahlercontact.contact_core import (
    asquared_residual,
    contact_defect,
    hopf_data,
    pairing_check,
    trace_identities,
)
from kahlercontact.curvature import normal_jacobi_operator
from kahlercontact.errors import FocalRangeError, InvalidDimensionError, ParameterError
from kahlercontact.model_frame import AmbientSpec, make_model_frame
from kahlercontact.singular_normals import NormalKind, classify_normal
from kahlercontact.tube_builder import (
    FOCAL_RADIUS_QN,
    PrincipalProfile,
    dual_complex_core_data,
    focal_distances,
    jacobi_ode_oracle,
    jacobi_solution,
    profile_shape_operator,
    sphere_core_data,
    tube_curvature,
    tube_profile_theorem1,
    tube_profile_theorem2,
    weingarten_curvatures,
)

SQ2 = math.sqrt(2)


class TestJacobi:
    def test_no_focal_point_before_bound(self):
        r0 = 0.7
        alpha = -SQ2 / math.tan(SQ2 * r0)
        f, _ = jacobi_solution(2.0, 1.0, -alpha, r0)
        assert f == pytest.approx(math.cos(SQ2 * r0) + math.sin(SQ2 * r0) / math.tan(SQ2 * r0))
        assert f > 0

    @pytest.mark.parametrize("r", [0.0, 0.5, 3.0, 100.0])
    def test_flat_constant(self, r):
        assert jacobi_solution(0.0, 1.0, 0.0, r) == (1.0, 0.0)

    @pytest.mark.parametrize("r", [0.5, 2.0, 8.0])
    def test_bounded_decay(self, r):
        f, fp = jacobi_solution(-2.0, 1.0, -SQ2, r)
        assert f == pytest.approx(math.exp(-SQ2 * r), rel=1e-12)
        assert fp == pytest.approx(-SQ2 * math.exp(-SQ2 * r), rel=1e-12)

    def test_oracle_cos(self):
        f, _ = jacobi_ode_oracle(2.0, 1.0, 0.0, 0.5, step=1e-4)
        assert abs(f - math.cos(SQ2 * 0.5)) < 1e-10

    def test_oracle_linear(self):
        f, fp = jacobi_ode_oracle(0.0, 0.3, -1.7, 2.0)
        assert f == pytest.approx(0.3 - 3.4, abs=1e-12)
        assert fp == pytest.approx(-1.7, abs=1e-15)

    def test_oracle_hyperbolic(self):
        f, fp = jacobi_ode_oracle(-2.0, 0.4, 1.1, 1.0)
        c, s = math.cosh(SQ2), math.sinh(SQ2)
        assert abs(f - (0.4 * c + 1.1 * s / SQ2)) < 1e-10
        assert abs(fp - (0.4 * SQ2 * s + 1.1 * c)) < 1e-10

    def test_oracle_step(self):
        with pytest.raises(ParameterError):
            jacobi_ode_oracle(1.0, 1.0, 0.0, 1.0, step=0.0)

    @settings(max_examples=100, deadline=None)
    @given(
        kappa=st.floats(-4, 4),
        f0=st.floats(-1, 1),
        f0p=st.floats(-1, 1),
        r=st.floats(1e-3, 3),
    )
    def test_closed_form_vs_rk4(self, kappa, f0, f0p, r):
        a = jacobi_solution(kappa, f0, f0p, r)
        b = jacobi_ode_oracle(kappa, f0, f0p, r)
        assert abs(a[0] - b[0]) < 1e-8 and abs(a[1] - b[1]) < 1e-8

    @settings(max_examples=50, deadline=None)
    @given(kappa=st.floats(-4, 4), r=st.floats(0, 3))
    def test_satisfies_ode(self, kappa, r):
        # f'' = -kappa f, checked through the derivative of f'
        h = 1e-5
        fpp = (jacobi_solution(kappa, 1.0, 0.5, r + h)[1] - jacobi_solution(kappa, 1.0, 0.5, r - h)[1]) / (2 * h)
        assert fpp == pytest.approx(-kappa * jacobi_solution(kappa, 1.0, 0.5, r)[0], abs=1e-7)


class TestTheorem1:
    def test_spot_values(self):
        p = tube_profile_theorem1(3, 0.3)
        assert p.alpha == pytest.approx(-3.1308914361898825, abs=1e-12)
        assert p.mu == pytest.approx(0.6387957042783595, abs=1e-12)
        assert p.rho == pytest.approx(0.3193978521391797, abs=1e-12)
        assert p.alpha * p.rho == pytest.approx(-1.0, abs=1e-12)
        assert p.lam == 0.0
        assert p.multiplicities() == {"alpha": 1, "lambda": 2, "mu": 2}

    def test_spot_values_match_rk4(self):
        # Q^{n-1} core at distance r: alpha from the core-normal field,
        # mu from the core-tangent kappa = 2 field
        r = 0.3
        f, fp = jacobi_ode_oracle(2.0, 0.0, 1.0, r)
        assert abs(-fp / f - tube_profile_theorem1(3, r).alpha) < 1e-8
        f, fp = jacobi_ode_oracle(2.0, 1.0, 0.0, r)
        assert abs(-fp / f - tube_profile_theorem1(3, r).mu) < 1e-8

    @pytest.mark.parametrize("r", [0.0, -0.1, FOCAL_RADIUS_QN, 2.0])
    def test_focal_range(self, r):
        with pytest.raises(FocalRangeError):
            tube_profile_theorem1(3, r)

    def test_middle_radius(self):
        n = 4
        p = tube_profile_theorem1(n, math.pi / (4 * SQ2))
        assert p.alpha == pytest.approx(-SQ2, abs=1e-14)
        assert p.mu == pytest.approx(SQ2, abs=1e-14)
        assert p.mean_curvature() == pytest.approx(-SQ2 + (n - 1) * SQ2, abs=1e-13)

    def test_needs_n3(self):
        with pytest.raises(InvalidDimensionError):
            tube_profile_theorem1(2, 0.3)

    def test_mu_times_minus_alpha(self):
        for r in np.linspace(0.01, FOCAL_RADIUS_QN - 0.01, 50):
            p = tube_profile_theorem1(3, r)
            assert abs(-p.mu * p.alpha - 2.0) < 1e-12

    def test_eigenspaces(self):
        p = tube_profile_theorem1(3, 0.4)
        cs, sd = profile_shape_operator(p)
        for key, B in p.eigenspaces().items():
            np.testing.assert_allclose(sd.S @ B, p.principal_curvatures()[key] * B, atol=1e-14)
        F = p.ambient.frame
        # T_mu = V(A) cap C, T_lambda = JV(A) cap C
        assert np.abs(F.A @ p.eigenspaces()["mu"] - p.eigenspaces()["mu"]).max() == 0.0
        assert np.abs(F.A @ p.eigenspaces()["lambda"] + p.eigenspaces()["lambda"]).max() == 0.0
        np.testing.assert_allclose(cs.phi @ p.eigenspaces()["lambda"], -p.eigenspaces()["mu"], atol=1e-15)

    def test_assembled_operator(self):
        p = tube_profile_theorem1(3, 0.3)
        cs, sd = profile_shape_operator(p)
        assert contact_defect(cs, sd) < 1e-12
        assert asquared_residual(cs, sd, p.ambient) < 1e-12
        assert classify_normal(p.ambient.frame, cs.N).kind is NormalKind.A_PRINCIPAL

    def test_invariants_rejected(self):
        spec = AmbientSpec.quadric(make_model_frame(3), 1)
        with pytest.raises(ParameterError):
            PrincipalProfile(spec, 3, 0.3, -1.0, 0.0, 2.0, 0.5, "x")
        with pytest.raises(ParameterError):
            PrincipalProfile(spec, 3, 0.3, -1.0, 0.0, 2.0, 1.1, "x")


class TestTheorem2:
    def test_horosphere(self):
        p = tube_profile_theorem2(2, 3)
        assert p.alpha == p.mu == SQ2
        assert p.rho == pytest.approx(1 / SQ2)
        assert p.r is None
        assert p.mean_curvature() == pytest.approx(3 * SQ2, abs=1e-14)

    def test_case1_r1(self):
        # alpha = sqrt2 coth(sqrt2), mu = sqrt2 tanh(sqrt2)
        p = tube_profile_theorem2(1, 3, 1.0)
        assert p.alpha == pytest.approx(1.5918916555204876, abs=1e-12)
        assert p.mu == pytest.approx(1.2563669098108796, abs=1e-12)
        assert p.alpha * p.rho == pytest.approx(1.0, abs=1e-12)

    def test_case3_swaps_case1(self):
        p1, p3 = tube_profile_theorem2(1, 4, 1.0), tube_profile_theorem2(3, 4, 1.0)
        assert p3.alpha == pytest.approx(p1.mu, abs=1e-15)
        assert p3.mu == pytest.approx(p1.alpha, abs=1e-15)

    @pytest.mark.parametrize("case", [1, 3])
    @pytest.mark.parametrize("r", [0.0, -1.0, None])
    def test_radius_required(self, case, r):
        with pytest.raises(ParameterError):
            tube_profile_theorem2(case, 3, r)

    def test_bad_case(self):
        with pytest.raises(ParameterError):
            tube_profile_theorem2(4, 3, 1.0)

    @pytest.mark.parametrize("case,r", [(1, 0.5), (1, 2.0), (2, None), (3, 0.5), (3, 2.0)])
    @pytest.mark.parametrize("n", [3, 4])
    def test_contact_suite(self, case, r, n):
        p = tube_profile_theorem2(case, n, r)
        cs, sd = profile_shape_operator(p)
        assert contact_defect(cs, sd) < 1e-10
        assert abs(sd.alpha * sd.rho - 1) < 1e-12
        assert hopf_data(cs, sd)[1] < 1e-12
        assert pairing_check(cs, sd) < 1e-10
        assert asquared_residual(cs, sd, p.ambient) < 1e-12
        assert trace_identities(cs, sd, p.ambient).max() < 1e-10

    def test_horosphere_pairing(self):
        assert pairing_check(*profile_shape_operator(tube_profile_theorem2(2, 4))) < 1e-12


class TestWeingarten:
    @pytest.mark.parametrize("r", np.linspace(0.05, FOCAL_RADIUS_QN - 0.05, 9))
    def test_theorem1(self, r):
        p = tube_profile_theorem1(3, r)
        got = weingarten_curvatures(p)
        for k, v in p.principal_curvatures().items():
            assert abs(got[k] - v) < 1e-10 * max(1, abs(v))

    @pytest.mark.parametrize("case,r", [(1, 0.3), (1, 1.0), (2, None), (3, 0.3), (3, 2.0)])
    def test_theorem2(self, case, r):
        p = tube_profile_theorem2(case, 3, r)
        got = weingarten_curvatures(p)
        for k, v in p.principal_curvatures().items():
            assert abs(got[k] - v) < 1e-10 * max(1, abs(v))

    def test_sphere_core_reading(self):
        # the same profile seen from a real form S^n at the complementary radius
        r = 0.3
        p = tube_profile_theorem1(3, r)
        R = FOCAL_RADIUS_QN - r
        # inward normal: sign flip; S^n is totally geodesic with kappa 2 on JN, 0 on lambda
        assert -tube_curvature(2.0, R, None) == pytest.approx(p.mu, rel=1e-12)
        assert -tube_curvature(2.0, R, 0.0) == pytest.approx(p.alpha, rel=1e-12)
        assert -tube_curvature(0.0, R, None) == pytest.approx(1 / R, rel=1e-12)

    def test_core_eigenvalues_match_jacobi_operator(self):
        # kappa values used above are the spectrum of R_N at an A-principal N
        for eps in (1, -1):
            spec = AmbientSpec.quadric(make_model_frame(3), eps)
            w = set(np.round(np.linalg.eigvalsh(normal_jacobi_operator(spec, spec.frame.e(0))), 12))
            assert w == {0.0, 2.0 * eps}


class TestFocal:
    def test_sphere_core(self):
        spec = AmbientSpec.quadric(make_model_frame(3), 1)
        roots = focal_distances(spec, sphere_core_data(), 2.0)
        assert abs(roots[0] - math.pi / (2 * SQ2)) < 1e-10
        assert abs(roots[0] - 1.1107207345) < 1e-10

    def test_dual_core_none(self):
        spec = AmbientSpec.quadric(make_model_frame(4), -1)
        assert focal_distances(spec, dual_complex_core_data(), 10.0) == []

    def test_cos_minus_sin(self):
        spec = AmbientSpec.quadric(make_model_frame(3), 1)
        roots = focal_distances(spec, [(2.0, SQ2)], 1.0)
        assert roots == [pytest.approx(math.pi / (4 * SQ2), abs=1e-12)]

    def test_periodic_zeros(self):
        spec = AmbientSpec.quadric(make_model_frame(3), 1)
        roots = focal_distances(spec, [(2.0, 0.0)], 6.0)
        expected = [(2 * k + 1) * math.pi / (2 * SQ2) for k in range(3)]
        np.testing.assert_allclose(roots, expected, atol=1e-11)

    def test_rejects_foreign_kappa(self):
        spec = AmbientSpec.quadric(make_model_frame(3), 1)
        with pytest.raises(ParameterError):
            focal_distances(spec, [(3.0, 0.0)], 1.0)

    def test_rmax(self):
        spec = AmbientSpec.quadric(make_model_frame(3), 1)
        with pytest.raises(ParameterError):
            focal_distances(spec, sphere_core_data(), 0.0)
