"""Executable acceptance suite: nine checks with pinned tolerances.

Each check returns a CheckResult and measures its own wall time against
a fixed budget. `run_all` warms the JIT kernels first so no check pays
compilation cost, then prints one pass/fail line per check.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .conformal import chart_jet, solve_chart, surface_area
from .curvature import (
    curvature_in_direction,
    curvature_report,
    fundamental_forms,
    gauss_decomposition,
    intrinsic_gauss,
    minimality_residual,
)
from .estimates import (
    bernstein_decay,
    bound_ratio,
    heinz_probe,
    schauder_probe,
    theorem_bound_check,
    theta_sweep,
)
from .surfaces import (
    NormalFrame,
    eval_jet,
    make_family,
    orthonormal_frame,
    rotate_surface,
)

_POINT_SEED = 20250809


@dataclass(frozen=True)
class CheckResult:
    index: int
    name: str
    passed: bool
    details: str
    elapsed: float
    budget: float

    @property
    def in_budget(self) -> bool:
        return self.elapsed < self.budget

    def line(self) -> str:
        status = "PASS" if (self.passed and self.in_budget) else "FAIL"
        return (
            f"[{self.index}] {self.name:<28s} {status}  "
            f"{self.details}  ({self.elapsed:.2f}s < {self.budget:.0f}s)"
        )


def _random_disc_points(count: int, radius: float, seed: int, margin: float = 0.999):
    rng = np.random.default_rng(seed)
    r = radius * margin * np.sqrt(rng.uniform(0.0, 1.0, count))
    a = rng.uniform(0.0, 2.0 * np.pi, count)
    return list(zip(r * np.cos(a), r * np.sin(a)))


def _minimal_fixtures():
    return [
        ("plane", make_family("plane", [1.0, 0.5], 1.0)),
        ("z^2", make_family("holomorphic", [0, 0, 1], 1.0)),
        ("z^3", make_family("holomorphic", [0, 0, 0, 1], 1.0)),
        ("z^2+3z", make_family("holomorphic", [0, 3, 1], 1.0)),
        ("scherk", make_family("scherk", [], 1.0)),
    ]


def _analytic_chart_fixtures():
    return [
        ("flat plane", make_family("plane", [0.0, 0.0], 1.0)),
        ("z^2", make_family("holomorphic", [0, 0, 1], 1.0)),
        ("z^3", make_family("holomorphic", [0, 0, 0, 1], 1.0)),
        ("z^2+3z", make_family("holomorphic", [0, 3, 1], 1.0)),
    ]


def check_lemma_minimality() -> CheckResult:
    """Minimality residual < 1e-10 on minimal fixtures, > 0.5 on control."""
    t0 = time.perf_counter()
    points = _random_disc_points(100, 1.0, _POINT_SEED)
    worst = 0.0
    ok = True
    for _, surface in _minimal_fixtures():
        res = minimality_residual(surface, points)
        worst = max(worst, res)
        ok = ok and res < 1e-10
    control = minimality_residual(make_family("custom", ["x^2"], 1.0), points)
    ok = ok and control > 0.5
    return CheckResult(
        1,
        "lemma-minimality",
        ok,
        f"max residual {worst:.2e} < 1e-10, control {control:.3f} > 0.5",
        time.perf_counter() - t0,
        5.0,
    )


def check_sharpness_fixture() -> CheckResult:
    """Quadratic holomorphic graph at the origin: K parts -4, total -8."""
    t0 = time.perf_counter()
    z2 = make_family("holomorphic", [0, 0, 1], 1.0)
    chart = solve_chart(z2)
    rep = curvature_report(z2, chart, (0.0, 0.0))
    errs = [
        abs(rep.per_normal[0].K + 4.0),
        abs(rep.per_normal[1].K + 4.0),
        abs(rep.K_total + 8.0),
        abs(rep.per_normal[0].kappa_sq_sum - 8.0),
        abs(rep.per_normal[1].kappa_sq_sum - 8.0),
    ]
    worst = max(errs)
    return CheckResult(
        2,
        "sharpness-fixture",
        worst < 1e-9,
        f"max deviation {worst:.2e} < 1e-9",
        time.perf_counter() - t0,
        1.0,
    )


def check_gauss_decomposition() -> CheckResult:
    """sum K_N vs intrinsic -Lap(log W)/(2W) within 1e-6 on analytic fixtures."""
    t0 = time.perf_counter()
    worst = 0.0
    for _, surface in _analytic_chart_fixtures():
        chart = solve_chart(surface)
        pts = _random_disc_points(50, 0.9, _POINT_SEED + 1)
        for u, v in pts:
            jet = eval_jet(surface, chart.graph_point((u, v)))
            k_total, _ = gauss_decomposition(
                fundamental_forms(jet, orthonormal_frame(jet))
            )
            k_intr = intrinsic_gauss(chart, (u, v))
            worst = max(worst, abs(k_total - k_intr))
    z2 = make_family("holomorphic", [0, 0, 1], 1.0)
    chart = solve_chart(z2)
    jet = eval_jet(z2, (0.25, 0.0))
    k_total, _ = gauss_decomposition(fundamental_forms(jet, orthonormal_frame(jet)))
    k_intr = intrinsic_gauss(chart, (0.25, 0.0))
    closed = -8.0 / 1.25**3
    spot = max(abs(k_total - closed), abs(k_intr - closed))
    ok = worst < 1e-6 and spot < 1e-6
    return CheckResult(
        3,
        "gauss-decomposition",
        ok,
        f"max |sum-intrinsic| {worst:.2e} < 1e-6, closed-form spot {spot:.2e}",
        time.perf_counter() - t0,
        5.0,
    )


def check_conformal_mapper() -> CheckResult:
    """Fast path < 1e-10 on holomorphic; full solve contract on scherk."""
    t0 = time.perf_counter()
    ok = True
    notes = []
    worst_fast = 0.0
    for name, surface in _analytic_chart_fixtures()[1:]:
        chart = solve_chart(surface)
        worst_fast = max(worst_fast, chart.residuals.conformality)
        ok = ok and chart.fast_path and chart.residuals.conformality < 1e-10
    notes.append(f"fast-path residual {worst_fast:.1e}")
    scherk = make_family("scherk", [], 1.0)
    chart = solve_chart(scherk, modes=32, grid=(64, 256), tol=1e-3)
    area = surface_area(scherk)
    gap = abs(chart.residuals.energy - area) / area
    center = float(np.hypot(*chart.plane_origin()))
    ok = ok and chart.residuals.conformality <= 1e-3
    ok = ok and chart.min_plane_jacobian > 0.0
    ok = ok and center <= 1e-8
    ok = ok and gap <= 2e-3
    notes.append(
        f"scherk residual {chart.residuals.conformality:.1e}, det>{chart.min_plane_jacobian:.2f}, "
        f"|F*(0)| {center:.1e}, energy gap {gap:.1e}"
    )
    return CheckResult(
        4, "conformal-mapper", ok, "; ".join(notes), time.perf_counter() - t0, 60.0
    )


def check_bound_mechanics() -> CheckResult:
    """Chain 2W(0,0) = R^2 |grad F(0,0)|^2 = 2 and the final bound."""
    t0 = time.perf_counter()
    z2 = make_family("holomorphic", [0, 0, 1], 1.0)
    chart = solve_chart(z2)
    cjet = chart_jet(chart, (0.0, 0.0))
    h = cjet.d1 @ cjet.d1.T
    two_w = 2.0 * float(np.sqrt(h[0, 0] * h[1, 1] - h[0, 1] ** 2))
    grad_sq = float(np.sum(cjet.d1[:, :2] ** 2))
    chain_err = max(abs(two_w - 2.0), abs(grad_sq - 2.0), abs(two_w - grad_sq))
    ok = chain_err < 1e-12
    for c1, c2 in [(2.0, 2.0), (2.5, 2.0), (2.0, 1.5), (10.0, 0.1)]:
        bc = theorem_bound_check(z2, c1, c2, chart=chart)
        ok = ok and bc.satisfied and bc.chain_ok
    return CheckResult(
        5,
        "bound-mechanics",
        ok,
        f"chain deviation {chain_err:.2e} < 1e-12, bound satisfied for C1>=2, C2<=2",
        time.perf_counter() - t0,
        1.0,
    )


def check_theta_sweep() -> CheckResult:
    """Quadratic-family ratio curve matches 8R^4/(R^2+R^4), asymptote ~8."""
    t0 = time.perf_counter()
    radii = [2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0]
    curve = theta_sweep({"kind": "holomorphic", "params": [0, 0, 1]}, radii)
    closed = 8.0 * curve.radii**4 / (curve.radii**2 + curve.radii**4)
    rel = float(np.max(np.abs(curve.ratios - closed) / closed))
    increasing = bool(np.all(np.diff(curve.ratios) > 0.0))
    ok = (
        rel < 1e-6
        and increasing
        and 7.9 <= curve.asymptote <= 8.0
        and len(curve.failures) == 0
    )
    return CheckResult(
        6,
        "theta-sweep",
        ok,
        f"max rel err {rel:.2e} < 1e-6, increasing={increasing}, "
        f"asymptote {curve.asymptote:.6f} in [7.9, 8.0]",
        time.perf_counter() - t0,
        120.0,
    )


def check_bernstein_decay() -> CheckResult:
    """Decay slopes 2w-4 within 0.05; plane-family ratios identically zero."""
    t0 = time.perf_counter()
    radii = [2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0]
    ok = True
    worst = 0.0
    for omega in (0.0, 1.0, 1.5, 1.99):
        table = bernstein_decay(1.0, omega, 8.0, radii)
        worst = max(worst, abs(table.slope - table.expected_slope))
        ok = ok and table.slope_ok and table.bounds[-1] < table.bounds[0]
    plane_curve = theta_sweep({"kind": "plane", "params": [1.0, 0.5]}, radii[:4])
    ok = ok and plane_curve.degenerate and bool(np.all(plane_curve.ratios == 0.0))
    return CheckResult(
        7,
        "bernstein-decay",
        ok,
        f"max slope deviation {worst:.2e} < 0.05, plane ratios all zero",
        time.perf_counter() - t0,
        1.0,
    )


def check_probes() -> CheckResult:
    """Witness values, positivity, and bit-identical reproducibility."""
    t0 = time.perf_counter()
    sp1 = schauder_probe(1000, 42)
    sp2 = schauder_probe(1000, 42)
    hp1 = heinz_probe(1000, 7)
    hp2 = heinz_probe(1000, 7)
    ok = sp1.statistic >= 2.0
    ok = ok and sp1.baseline["value"] == 2.0
    ok = ok and abs(hp1.baseline["value"] - 2.0) <= 1e-12
    ok = ok and 0.0 < hp1.statistic <= 2.0 + 1e-12
    reproducible = (
        sp1.statistic == sp2.statistic
        and sp1.witness == sp2.witness
        and hp1.statistic == hp2.statistic
        and hp1.witness == hp2.witness
    )
    ok = ok and reproducible
    return CheckResult(
        8,
        "probes",
        ok,
        f"schauder {sp1.statistic:.4f} >= 2, heinz witness "
        f"{hp1.baseline['value']:.12f}, min {hp1.statistic:.4f} > 0, "
        f"reproducible={reproducible}",
        time.perf_counter() - t0,
        30.0,
    )


def _mixed_frame_aggregates(surface, point, seed):
    jet = eval_jet(surface, point)
    frame = orthonormal_frame(jet)
    forms = fundamental_forms(jet, frame)
    m = len(frame)
    k_tot, _ = gauss_decomposition(forms)
    kappa_sq = sum(
        curvature_in_direction(forms, i).kappa_sq_sum for i in range(m)
    )
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.normal(size=(m, m)))
    mixed = NormalFrame(raw=frame.raw.copy(), ortho=q @ frame.ortho, at=jet)
    forms_m = fundamental_forms(jet, mixed)
    k_tot_m, _ = gauss_decomposition(forms_m)
    kappa_sq_m = sum(
        curvature_in_direction(forms_m, i).kappa_sq_sum for i in range(m)
    )
    return abs(k_tot - k_tot_m), abs(kappa_sq - kappa_sq_m)


def check_invariances() -> CheckResult:
    """Frame mixing, graph-vs-chart parametrization, domain rotation."""
    t0 = time.perf_counter()
    ok = True

    # Frame-rotation invariance of the aggregates.
    mix_err = 0.0
    for i, point in enumerate([(0.0, 0.0), (0.3, -0.2), (-0.5, 0.4)]):
        for j, surface in enumerate(
            [
                make_family("holomorphic", [0, 0, 1], 1.0),
                make_family("holomorphic", [0, 3, 1], 1.0),
                make_family("plane", [1.0, 0.0, 1.0, 0.0], 1.0),
            ]
        ):
            dk, dks = _mixed_frame_aggregates(surface, point, 1000 + 10 * i + j)
            mix_err = max(mix_err, dk, dks)
    ok = ok and mix_err < 1e-9

    # Parametrization invariance on the solved scherk chart.
    scherk = make_family("scherk", [], 1.0)
    chart = solve_chart(scherk, modes=32, grid=(64, 256), tol=1e-3)
    par_err = 0.0
    for t in np.linspace(0.0, 2.0 * np.pi, 12, endpoint=False):
        u, v = 0.7 * np.cos(t), 0.7 * np.sin(t)
        cjet = chart_jet(chart, (u, v))
        gjet = eval_jet(scherk, chart.graph_point((u, v)))
        frame = orthonormal_frame(gjet)
        forms_c = fundamental_forms(cjet, frame)
        forms_g = fundamental_forms(gjet, frame)
        for i in range(len(frame)):
            cc = curvature_in_direction(forms_c, i)
            cg = curvature_in_direction(forms_g, i)
            par_err = max(par_err, abs(cc.H - cg.H), abs(cc.K - cg.K))
    ok = ok and par_err <= 10.0 * chart.tol

    # Domain-rotation invariance of the bound ratio (radial sup fixtures).
    rot_err = 0.0
    for surface in [
        make_family("holomorphic", [0, 0, 1], 3.0),
        make_family("holomorphic", [0, 0, 0, 1], 2.0),
    ]:
        base = bound_ratio(surface)
        for angle in (0.731, 2.113):
            rot_err = max(rot_err, abs(bound_ratio(rotate_surface(surface, angle)) - base))
    ok = ok and rot_err < 1e-8

    return CheckResult(
        9,
        "invariance-suite",
        ok,
        f"frame-mix {mix_err:.1e} < 1e-9, parametrization {par_err:.1e} <= "
        f"{10 * chart.tol:.0e}, rotation {rot_err:.1e} < 1e-8",
        time.perf_counter() - t0,
        30.0,
    )


_CHECKS = (
    check_lemma_minimality,
    check_sharpness_fixture,
    check_gauss_decomposition,
    check_conformal_mapper,
    check_bound_mechanics,
    check_theta_sweep,
    check_bernstein_decay,
    check_probes,
    check_invariances,
)


def run_all(printer=print) -> list:
    """Run every acceptance check; one line per check via `printer`."""
    _kernels.warmup()
    results = []
    for check in _CHECKS:
        result = check()
        results.append(result)
        if printer is not None:
            printer(result.line())
    return results
