"""Fundamental forms, per-normal curvatures, decomposition, intrinsic K."""

import math

import numpy as np
import pytest

from mgcl.conformal import chart_jet, solve_chart
from mgcl.curvature import (
    curvature_in_direction,
    curvature_report,
    fundamental_forms,
    gauss_decomposition,
    intrinsic_gauss,
    minimality_residual,
)
from mgcl.errors import GeometryError, NumericalConsistencyError, PreconditionError
from mgcl.surfaces import (
    NormalFrame,
    eval_jet,
    make_family,
    orthonormal_frame,
)

from conftest import random_disc_points
from oracles import fd_surface_jet, shape_operator_curvatures


def _forms_at(surface, point, basis="ortho"):
    jet = eval_jet(surface, point)
    return fundamental_forms(jet, orthonormal_frame(jet), basis=basis)


class TestFundamentalForms:
    def test_z2_origin(self, z2_surface):
        forms = _forms_at(z2_surface, (0.0, 0.0))
        np.testing.assert_array_equal(forms.h, np.eye(2))
        assert forms.W == 1.0
        np.testing.assert_allclose(forms.L[0], [[2, 0], [0, -2]], atol=1e-14)
        np.testing.assert_allclose(forms.L[1], [[0, 2], [2, 0]], atol=1e-14)

    def test_plane_second_form_vanishes(self, tilted_plane):
        for p in random_disc_points(10, 1.0, 29):
            forms = _forms_at(tilted_plane, p)
            assert np.max(np.abs(forms.L)) == 0.0

    def test_z2_metric_at_half(self, z2_surface):
        forms = _forms_at(z2_surface, (0.5, 0.0))
        np.testing.assert_allclose(forms.h, 2.0 * np.eye(2), atol=1e-14)
        assert forms.W == pytest.approx(2.0, abs=1e-14)

    def test_det_identity(self, scherk_surface, z2_surface):
        for surface in (scherk_surface, z2_surface):
            for p in random_disc_points(40, 1.0, 31):
                forms = _forms_at(surface, p)
                det = np.linalg.det(forms.h)
                assert abs(forms.W**2 - det) / det < 1e-10

    def test_l_matrices_match_fd_jets(self, z2_surface, scherk_surface):
        for surface in (z2_surface, scherk_surface):
            for x, y in random_disc_points(100, 1.0, 37, margin=0.97):
                jet = eval_jet(surface, (x, y))
                frame = orthonormal_frame(jet)
                forms = fundamental_forms(jet, frame)
                _, _, d2_fd = fd_surface_jet(surface, x, y)
                second = d2_fd @ frame.ortho.T
                l_fd = np.stack(
                    [[second[0], second[1]], [second[1], second[2]]], axis=0
                ).transpose(2, 0, 1)
                assert np.max(np.abs(l_fd - forms.L)) < 1e-5

    def test_degenerate_metric_rejected(self, z2_surface):
        jet = eval_jet(z2_surface, (0.0, 0.0))
        broken = NormalFrame(raw=jet.d2.copy()[:2], ortho=np.eye(4)[2:], at=jet)
        collapsed = type(jet)(
            jet.point,
            jet.value.copy(),
            np.vstack([jet.d1[0], jet.d1[0]]),  # rank-1 tangent plane
            jet.d2.copy(),
        )
        with pytest.raises(GeometryError):
            fundamental_forms(collapsed, broken)


class TestCurvatureInDirection:
    def test_z2_origin_both_normals(self, z2_surface):
        forms = _forms_at(z2_surface, (0.0, 0.0))
        for idx in (0, 1):
            c = curvature_in_direction(forms, idx)
            assert c.H == pytest.approx(0.0, abs=1e-14)
            assert c.K == pytest.approx(-4.0, abs=1e-12)
            assert (c.kappa1, c.kappa2) == pytest.approx((2.0, -2.0), abs=1e-12)

    def test_plane_zero(self, tilted_plane):
        forms = _forms_at(tilted_plane, (0.1, 0.4))
        c = curvature_in_direction(forms, 0)
        assert (c.H, c.K, c.kappa1, c.kappa2) == (0, 0, 0, 0)

    def test_paraboloid_mean_curvature(self):
        par = make_family("custom", ["x^2"], 1.0)
        c = curvature_in_direction(_forms_at(par, (0.0, 0.0)), 0)
        assert c.H == pytest.approx(1.0, abs=1e-14)
        assert c.K == pytest.approx(0.0, abs=1e-14)

    def test_matches_shape_operator_eigensolve(self, scherk_surface, z2_surface):
        for surface in (scherk_surface, z2_surface):
            for p in random_disc_points(50, 1.0, 41):
                forms = _forms_at(surface, p)
                for i in range(forms.L.shape[0]):
                    c = curvature_in_direction(forms, i)
                    k1, k2 = shape_operator_curvatures(forms.h, forms.L[i])
                    assert c.kappa1 == pytest.approx(k1, rel=1e-9, abs=1e-9)
                    assert c.kappa2 == pytest.approx(k2, rel=1e-9, abs=1e-9)

    def test_ordering_and_relations(self, scherk_surface):
        for p in random_disc_points(30, 1.0, 43):
            forms = _forms_at(scherk_surface, p)
            c = curvature_in_direction(forms, 0)
            assert c.kappa1 >= c.kappa2
            assert c.H == pytest.approx((c.kappa1 + c.kappa2) / 2, abs=1e-10)
            assert c.K == pytest.approx(c.kappa1 * c.kappa2, abs=1e-10)

    def test_discriminant_error(self, z2_surface):
        # A consistent (h, W, L) triple always has H^2 >= K; force the
        # error path with an inconsistent W.
        forms = _forms_at(z2_surface, (0.0, 0.0))
        hacked = type(forms)(
            h=np.eye(2),
            W=2.0,  # inconsistent with det h = 1
            L=np.array([[[1.0, 0.0], [0.0, 1.0]]]),
            basis="ortho",
            frame=forms.frame,
        )
        with pytest.raises(NumericalConsistencyError):
            curvature_in_direction(hacked, 0)


class TestMinimality:
    def test_analytic_fixtures(self, z2_surface, scherk_surface, tilted_plane):
        pts = random_disc_points(100, 1.0, 47)
        for surface in (
            tilted_plane,
            z2_surface,
            make_family("holomorphic", [0, 0, 0, 1], 1.0),
            make_family("holomorphic", [0, 3, 1], 1.0),
            scherk_surface,
        ):
            assert minimality_residual(surface, pts) < 1e-10

    def test_paraboloid_control(self):
        pts = random_disc_points(100, 1.0, 47)
        par = make_family("custom", ["x^2"], 1.0)
        res = minimality_residual(par, pts)
        assert res > 0.5
        # At the origin the normalized residual equals |H| = 1.
        assert minimality_residual(par, [(0.0, 0.0)]) == pytest.approx(1.0, abs=1e-14)

    def test_chart_path(self, scherk_chart):
        pts = [(0.6 * math.cos(t), 0.6 * math.sin(t)) for t in np.linspace(0, 6.0, 20)]
        assert minimality_residual(scherk_chart, pts) < 5e-3

    def test_empty_points_rejected(self, z2_surface):
        with pytest.raises(PreconditionError):
            minimality_residual(z2_surface, [])

    def test_wrong_type_rejected(self):
        with pytest.raises(TypeError):
            minimality_residual("not a surface", [(0.0, 0.0)])


class TestGaussDecomposition:
    def test_z2_origin(self, z2_surface):
        k_total, parts = gauss_decomposition(_forms_at(z2_surface, (0.0, 0.0)))
        assert k_total == pytest.approx(-8.0, abs=1e-12)
        np.testing.assert_allclose(parts, [-4.0, -4.0], atol=1e-12)

    def test_plane_zero(self, tilted_plane):
        k_total, _ = gauss_decomposition(_forms_at(tilted_plane, (0.3, 0.3)))
        assert k_total == 0.0

    def test_scherk_single_normal(self, scherk_surface):
        forms = _forms_at(scherk_surface, (0.2, -0.5))
        k_total, parts = gauss_decomposition(forms)
        assert k_total == parts[0]

    def test_raw_basis_rejected(self, z2_surface):
        forms = _forms_at(z2_surface, (0.5, 0.0), basis="raw")
        # (the raw basis at this point happens to be orthonormal, but the
        # contract rejects it regardless)
        with pytest.raises(PreconditionError):
            gauss_decomposition(forms)

    def test_closed_form_along_axis(self, z2_surface):
        for x in (0.1, 0.25, 0.6, 0.9):
            k_total, _ = gauss_decomposition(_forms_at(z2_surface, (x, 0.0)))
            closed = -8.0 / (1.0 + 4.0 * x * x) ** 3
            assert k_total == pytest.approx(closed, rel=1e-12)


class TestIntrinsicGauss:
    def test_z2_closed_form(self, z2_surface):
        chart = solve_chart(z2_surface)
        assert intrinsic_gauss(chart, (0.0, 0.0)) == pytest.approx(-8.0, abs=1e-5)
        assert intrinsic_gauss(chart, (0.25, 0.0)) == pytest.approx(
            -8.0 / 1.25**3, abs=1e-5
        )

    def test_plane_zero(self):
        chart = solve_chart(make_family("plane", [0.0, 0.0], 1.0))
        assert abs(intrinsic_gauss(chart, (0.3, -0.4))) < 1e-10

    def test_fd_fallback_agrees(self, z2_surface, scherk_chart):
        chart = solve_chart(z2_surface)
        for p in [(0.0, 0.0), (0.2, 0.3), (-0.4, 0.1)]:
            a = intrinsic_gauss(chart, p)
            b = intrinsic_gauss(chart, p, method="fd")
            assert a == pytest.approx(b, rel=1e-5, abs=1e-6)
        a = intrinsic_gauss(scherk_chart, (0.25, -0.3))
        b = intrinsic_gauss(scherk_chart, (0.25, -0.3), method="fd")
        assert a == pytest.approx(b, rel=1e-4, abs=1e-6)

    def test_matches_decomposition_on_fast_paths(self, z2_surface):
        chart = solve_chart(z2_surface)
        for u, v in random_disc_points(50, 0.9, 53):
            k_intr = intrinsic_gauss(chart, (u, v))
            k_total, _ = gauss_decomposition(
                _forms_at(z2_surface, chart.graph_point((u, v)))
            )
            assert abs(k_total - k_intr) < 1e-6

    def test_solved_chart_tolerance_ladder(self, scherk_surface, scherk_chart):
        for u, v in random_disc_points(20, 0.7, 59):
            k_intr = intrinsic_gauss(scherk_chart, (u, v))
            k_total, _ = gauss_decomposition(
                _forms_at(scherk_surface, scherk_chart.graph_point((u, v)))
            )
            assert abs(k_total - k_intr) <= 10 * scherk_chart.tol


class TestCurvatureReport:
    def test_z2_full_report(self, z2_surface):
        chart = solve_chart(z2_surface)
        rep = curvature_report(z2_surface, chart, (0.0, 0.0))
        assert rep.K_total == pytest.approx(-8.0, abs=1e-12)
        assert rep.K_intrinsic == pytest.approx(-8.0, abs=1e-6)
        for c in rep.per_normal:
            assert c.kappa_sq_sum == pytest.approx(8.0, abs=1e-10)
            assert c.kappa_sq_sum == pytest.approx(2 * (2 * c.H**2 - c.K), abs=1e-10)

    def test_json_field_names(self, z2_surface):
        chart = solve_chart(z2_surface)
        d = curvature_report(z2_surface, chart, (0.1, 0.2)).to_json_dict()
        assert set(d) == {"point", "per_normal", "K_total", "K_intrinsic"}
        assert set(d["per_normal"][0]) == {"H", "K", "kappa1", "kappa2"}

    def test_minimal_identity_kappa_vs_gauss(self, scherk_surface, scherk_chart):
        rep = curvature_report(scherk_surface, scherk_chart, (0.3, 0.2))
        for c in rep.per_normal:
            assert c.kappa_sq_sum == pytest.approx(-2 * c.K, abs=1e-10)


class TestFrameMixInvariance:
    def test_aggregates_invariant(self, z2_surface):
        jet = eval_jet(z2_surface, (0.3, -0.2))
        frame = orthonormal_frame(jet)
        forms = fundamental_forms(jet, frame)
        k_tot, _ = gauss_decomposition(forms)
        ksq = sum(
            curvature_in_direction(forms, i).kappa_sq_sum for i in range(len(frame))
        )
        rng = np.random.default_rng(61)
        for _ in range(5):
            q, _ = np.linalg.qr(rng.normal(size=(2, 2)))
            mixed = NormalFrame(raw=frame.raw.copy(), ortho=q @ frame.ortho, at=jet)
            mforms = fundamental_forms(jet, mixed)
            mk, parts = gauss_decomposition(mforms)
            mksq = sum(
                curvature_in_direction(mforms, i).kappa_sq_sum
                for i in range(len(frame))
            )
            assert abs(mk - k_tot) < 1e-9
            assert abs(mksq - ksq) < 1e-9
            assert parts.shape == (2,)
