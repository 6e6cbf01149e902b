"""Conformal charts: boundary curves, Douglas energy, the chart solve."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mgcl.conformal import (
    BoundaryMap,
    boundary_curve,
    chart_jet,
    dirichlet_energy,
    export_chart,
    import_chart,
    solve_chart,
    surface_area,
)
from mgcl.errors import ConvergenceError, DomainError, PreconditionError
from mgcl.surfaces import make_family

from conftest import random_disc_points


class TestBoundaryCurve:
    def test_plane(self, tilted_plane):
        np.testing.assert_allclose(boundary_curve(tilted_plane, 0.0), [1, 0, 1], atol=1e-15)

    def test_z2_at_half_pi(self, z2_surface):
        # z = i: z^2 = -1.
        np.testing.assert_allclose(
            boundary_curve(z2_surface, math.pi / 2), [0, 1, -1, 0], atol=1e-15
        )

    def test_scherk_at_pi(self, scherk_surface):
        np.testing.assert_allclose(
            boundary_curve(scherk_surface, math.pi),
            [-1, 0, math.log(math.cos(1.0))],
            atol=1e-12,
        )


class TestDirichletEnergy:
    def test_flat_disc_is_pi(self):
        flat = make_family("plane", [0.0, 0.0], 1.0)
        assert dirichlet_energy(BoundaryMap.identity(), flat, 32) == pytest.approx(
            math.pi, rel=1e-12
        )

    def test_z2_is_three_pi(self, z2_surface):
        # Modes k=1 from (u, v) and k=2 from the quadratic heights; equals
        # the area integral of W = 1 + 4 r^2 by quadrature.
        e = dirichlet_energy(BoundaryMap.identity(), z2_surface, 32)
        assert e == pytest.approx(3 * math.pi, rel=1e-12)
        assert e == pytest.approx(surface_area(z2_surface), rel=1e-10)

    def test_non_monotone_rejected(self, z2_surface):
        bad = BoundaryMap(0.0, np.array([1.2]), np.array([0.0]))
        with pytest.raises(PreconditionError):
            dirichlet_energy(bad, z2_surface, 16)

    def test_energy_at_least_area(self, scherk_surface):
        area = surface_area(scherk_surface)
        rng = np.random.default_rng(4)
        for _ in range(8):
            alpha = rng.uniform(-1, 1, 6) * 0.3 / np.arange(1, 7) ** 2
            beta = rng.uniform(-1, 1, 6) * 0.3 / np.arange(1, 7) ** 2
            bm = BoundaryMap(0.0, alpha, beta)
            if bm.min_slope() <= 0:
                continue
            assert dirichlet_energy(bm, scherk_surface, 48) >= area - 1e-6

    @given(
        a1=st.floats(-0.25, 0.25),
        a2=st.floats(-0.12, 0.12),
        b2=st.floats(-0.12, 0.12),
    )
    @settings(max_examples=15, deadline=None)
    def test_energy_minimal_at_identity_for_holomorphic(self, z2_surface, a1, a2, b2):
        # Graph coordinates of holomorphic graphs are isothermal, so the
        # identity map is a Douglas minimizer: any monotone competitor
        # has at least the area 3*pi.
        bm = BoundaryMap(0.0, np.array([a1, a2]), np.array([0.0, b2]))
        if bm.min_slope() <= 0.05:
            return
        assert dirichlet_energy(bm, z2_surface, 32) >= 3 * math.pi - 1e-9


class TestSolveChartFastPath:
    def test_holomorphic_fast(self, z2_surface):
        chart = solve_chart(z2_surface)
        assert chart.fast_path
        assert chart.residuals.conformality < 1e-10
        assert chart.residuals.harmonicity < 1e-12
        assert chart.min_plane_jacobian > 0
        np.testing.assert_allclose(chart.plane_origin(), [0, 0], atol=1e-14)

    def test_chart_matches_scaled_graph(self):
        radius = 2.0
        z2 = make_family("holomorphic", [0, 0, 1], radius)
        chart = solve_chart(z2)
        jets = chart.series.value(np.array([0.35]), np.array([-0.15]))
        x, y = radius * 0.35, radius * -0.15
        z = complex(x, y)
        np.testing.assert_allclose(
            jets[0], [x, y, (z * z).real, (z * z).imag], atol=1e-11
        )

    def test_flat_plane_fast(self):
        chart = solve_chart(make_family("plane", [0.0, 0.0], 1.0))
        assert chart.fast_path
        assert chart.residuals.conformality < 1e-12


class TestSolveChartDouglas:
    def test_scherk_contract(self, scherk_surface, scherk_chart):
        chart = scherk_chart
        assert not chart.fast_path
        assert chart.residuals.conformality <= 1e-3
        assert chart.min_plane_jacobian > 0
        assert float(np.hypot(*chart.plane_origin())) <= 1e-8
        area = surface_area(scherk_surface)
        assert abs(chart.residuals.energy - area) / area <= 2e-3
        assert chart.boundary_map.is_strictly_increasing()
        # psi(0) = 0 rotation normalization.
        assert abs(chart.boundary_map.psi[0]) < 1e-10

    def test_tilted_plane_converges(self, tilted_plane):
        chart = solve_chart(tilted_plane, modes=32, grid=(32, 128), tol=1e-3)
        assert chart.residuals.conformality <= 1e-3
        assert chart.min_plane_jacobian > 0
        area = surface_area(tilted_plane)
        assert area == pytest.approx(math.pi * math.sqrt(2.0), rel=1e-10)
        assert abs(chart.residuals.energy - area) / area <= 2e-3

    def test_unreachable_tolerance_raises(self, scherk_surface):
        with pytest.raises(ConvergenceError) as err:
            solve_chart(scherk_surface, modes=8, grid=(16, 64), tol=1e-12)
        assert err.value.best_residual is not None
        assert err.value.best_residual > 1e-12

    def test_parameter_guards(self, scherk_surface):
        with pytest.raises(PreconditionError):
            solve_chart(scherk_surface, modes=4)
        with pytest.raises(PreconditionError):
            solve_chart(scherk_surface, tol=0.0)


class TestChartJet:
    def test_plane_chart_second_derivatives_vanish(self):
        chart = solve_chart(make_family("plane", [0.0, 0.0], 1.0))
        jet = chart_jet(chart, (0.0, 0.0))
        assert np.max(np.abs(jet.d2)) < 1e-12

    def test_z2_chart_uu_norm(self, z2_surface):
        chart = solve_chart(z2_surface)
        jet = chart_jet(chart, (0.0, 0.0))
        assert np.linalg.norm(jet.d2[0]) == pytest.approx(2.0, abs=1e-12)

    def test_harmonic_at_random_points(self, scherk_chart):
        for u, v in random_disc_points(50, 1.0, 23, margin=0.95):
            jet = chart_jet(scherk_chart, (u, v))
            assert np.max(np.abs(jet.d2[0] + jet.d2[2])) < 1e-12

    def test_boundary_rejected(self, scherk_chart):
        with pytest.raises(DomainError):
            chart_jet(scherk_chart, (1.0, 0.0))
        with pytest.raises(DomainError):
            chart_jet(scherk_chart, (0.8, 0.61))


class TestChartExportImport:
    def test_roundtrip_bit_exact(self, scherk_chart, tmp_path):
        csv_path = tmp_path / "chart.csv"
        sidecar = tmp_path / "chart.json"
        export_chart(scherk_chart, csv_path, sidecar)
        loaded = import_chart(sidecar)
        for p in [(0.0, 0.0), (0.31, -0.12), (-0.7, 0.55)]:
            a = chart_jet(scherk_chart, p)
            b = chart_jet(loaded, p)
            assert np.array_equal(a.value, b.value)
            assert np.array_equal(a.d1, b.d1)
            assert np.array_equal(a.d2, b.d2)
        assert loaded.residuals == scherk_chart.residuals
        assert loaded.modes == scherk_chart.modes

    def test_csv_shape(self, z2_surface, tmp_path):
        chart = solve_chart(z2_surface, grid=(8, 32))
        csv_path = tmp_path / "c.csv"
        export_chart(chart, csv_path, tmp_path / "c.json")
        lines = csv_path.read_text().strip().splitlines()
        assert lines[0] == "u,v,X1,X2,X3,X4"
        assert len(lines) == 1 + 8 * 32


class TestChartGridProperties:
    def test_conformality_relations_on_grid(self, scherk_chart):
        jets = scherk_chart.series.jets2(scherk_chart.grid_u, scherk_chart.grid_v)
        xu, xv = jets["du"], jets["dv"]
        e = np.einsum("pi,pi->p", xu, xu)
        g = np.einsum("pi,pi->p", xv, xv)
        f = np.einsum("pi,pi->p", xu, xv)
        rel = (np.abs(e - g) + 2 * np.abs(f)) / (e + g)
        assert np.max(rel) <= scherk_chart.tol

    def test_metric_is_conformal_within_tol(self, scherk_chart):
        # h11 = h22 = W and h12 = 0 at chart tolerance (scaled).
        jets = scherk_chart.series.jets2(scherk_chart.grid_u, scherk_chart.grid_v)
        xu, xv = jets["du"], jets["dv"]
        h11 = np.einsum("pi,pi->p", xu, xu)
        h22 = np.einsum("pi,pi->p", xv, xv)
        h12 = np.einsum("pi,pi->p", xu, xv)
        w = np.sqrt(h11 * h22 - h12**2)
        scale = h11 + h22
        assert np.max(np.abs(h11 - w) / scale) < scherk_chart.tol
        assert np.max(np.abs(h22 - w) / scale) < scherk_chart.tol
        assert np.max(np.abs(h12) / scale) < scherk_chart.tol
