"""Conformal reparametrization of graph surfaces over the unit disc.

The chart is the harmonic extension of reparametrized boundary data.
Minimizing the Dirichlet energy of that extension over boundary
correspondences psi (the Douglas functional) makes the extension
conformal; a disc automorphism then restores the normalization
F*(0, 0) = (0, 0) and the rotation convention psi(0) = 0, both of which
leave harmonicity and conformality intact.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq, minimize

from .errors import ConvergenceError, DomainError, PreconditionError
from .harmonic import (
    DiscAutomorphism,
    HarmonicDiscSeries,
    find_plane_zero,
    harmonic_extension,
)
from .surfaces import GraphSurface, Jet2, eval_jet_batch, make_family

_CENTER_TOL_REL = 1e-9
_CENTER_MAX_PASSES = 8


@dataclass(frozen=True)
class BoundaryMap:
    """Monotone circle correspondence psi(t) = t + offset + Fourier tail."""

    offset: float = 0.0
    sin_coef: np.ndarray = None  # alpha_m, m = 1..M
    cos_coef: np.ndarray = None  # beta_m

    def __post_init__(self):
        sin_c = np.zeros(0) if self.sin_coef is None else np.asarray(self.sin_coef, float)
        cos_c = np.zeros(0) if self.cos_coef is None else np.asarray(self.cos_coef, float)
        if sin_c.shape != cos_c.shape:
            raise ValueError("sin and cos coefficient arrays must have equal length")
        object.__setattr__(self, "sin_coef", sin_c)
        object.__setattr__(self, "cos_coef", cos_c)

    @classmethod
    def identity(cls) -> "BoundaryMap":
        return cls(0.0, np.zeros(0), np.zeros(0))

    def angles(self, theta):
        theta = np.asarray(theta, dtype=np.float64)
        out = theta + self.offset
        for m in range(1, self.sin_coef.shape[0] + 1):
            out = out + self.sin_coef[m - 1] * np.sin(m * theta)
            out = out + self.cos_coef[m - 1] * np.cos(m * theta)
        return out

    def slope(self, theta):
        theta = np.asarray(theta, dtype=np.float64)
        out = np.ones_like(theta)
        for m in range(1, self.sin_coef.shape[0] + 1):
            out = out + m * self.sin_coef[m - 1] * np.cos(m * theta)
            out = out - m * self.cos_coef[m - 1] * np.sin(m * theta)
        return out

    def min_slope(self, n: int = 4096) -> float:
        theta = 2.0 * np.pi * np.arange(n) / n
        return float(np.min(self.slope(theta)))


@dataclass(frozen=True)
class BoundaryTable:
    """Sampled boundary correspondence of a finished chart."""

    theta: np.ndarray
    psi: np.ndarray
    fourier_offset: float
    fourier_sin: np.ndarray
    fourier_cos: np.ndarray

    def is_strictly_increasing(self) -> bool:
        d = np.diff(np.append(self.psi, self.psi[0] + 2.0 * np.pi))
        return bool(np.all(d > 0.0))


@dataclass(frozen=True)
class ResidualStats:
    conformality: float
    harmonicity: float
    energy: float


@dataclass(frozen=True)
class ConformalChart:
    """Conformal parametrization of a graph surface over the unit disc."""

    surface: GraphSurface
    series: HarmonicDiscSeries
    boundary_map: BoundaryTable
    center_shift: DiscAutomorphism
    grid_shape: tuple
    grid_u: np.ndarray
    grid_v: np.ndarray
    values: np.ndarray
    residuals: ResidualStats
    min_plane_jacobian: float
    modes: int
    tol: float
    fast_path: bool
    iterations: int

    @property
    def ambient_dim(self) -> int:
        return self.series.ncomp

    def plane_origin(self) -> np.ndarray:
        """F*(0,0), the image of the chart origin in the (x, y) plane."""
        return self.series.value(0.0, 0.0)[0, :2]

    def graph_point(self, point) -> tuple:
        """Map a chart point (u, v) to its graph coordinates (x, y)."""
        val = self.series.value(point[0], point[1])[0]
        return (float(val[0]), float(val[1]))


def boundary_curve(surface: GraphSurface, psi: float) -> np.ndarray:
    """Boundary contour point X(R cos psi, R sin psi)."""
    vals = _boundary_values(surface, np.array([float(psi)]))
    return vals[0]


def _boundary_values(surface: GraphSurface, psi):
    x = surface.radius * np.cos(psi)
    y = surface.radius * np.sin(psi)
    value, _, _ = eval_jet_batch(surface, x, y, clip_domain=False)
    return value


def _boundary_values_tangents(surface: GraphSurface, psi):
    r = surface.radius
    x = r * np.cos(psi)
    y = r * np.sin(psi)
    value, d1, _ = eval_jet_batch(surface, x, y, clip_domain=False)
    tangent = -r * np.sin(psi)[:, None] * d1[:, 0, :] + r * np.cos(psi)[:, None] * d1[:, 1, :]
    return value, tangent


def _spectral_energy(spec: np.ndarray, m: int, modes: int) -> float:
    k = np.arange(1, modes + 1)
    band = spec[1 : modes + 1]
    return float(2.0 * np.pi / m**2 * np.sum(k[:, None] * np.abs(band) ** 2))


def dirichlet_energy(
    boundary_map: BoundaryMap,
    surface: GraphSurface,
    modes: int,
    samples: int | None = None,
) -> float:
    """Energy of the harmonic extension of the reparametrized boundary curve.

    Computed spectrally as (pi/2) * sum_k k (|a_k|^2 + |b_k|^2) over the
    kept band; at least the surface area, with equality exactly at a
    conformal extension.
    """
    if boundary_map.min_slope() <= 0.0:
        raise PreconditionError("boundary map must be strictly increasing")
    m = samples or max(8 * modes, 256)
    if m < 2 * modes + 1:
        raise PreconditionError(f"{m} samples alias {modes} modes")
    theta = 2.0 * np.pi * np.arange(m) / m
    psi = boundary_map.angles(theta)
    vals = _boundary_values(surface, psi)
    spec = np.fft.rfft(vals, axis=0)
    return _spectral_energy(spec, m, modes)


def surface_area(surface: GraphSurface, n_r: int = 96, n_theta: int = 512) -> float:
    """Area of the graph by Gauss-Legendre x trapezoid quadrature of W dx dy."""
    nodes, weights = np.polynomial.legendre.leggauss(n_r)
    t = 0.5 * (nodes + 1.0)
    wt = 0.5 * weights
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    rr, aa = np.meshgrid(surface.radius * t, theta, indexing="ij")
    xs = (rr * np.cos(aa)).ravel()
    ys = (rr * np.sin(aa)).ravel()
    _, d1, _ = eval_jet_batch(surface, xs, ys, clip_domain=False)
    h11 = np.einsum("pi,pi->p", d1[:, 0, :], d1[:, 0, :])
    h22 = np.einsum("pi,pi->p", d1[:, 1, :], d1[:, 1, :])
    h12 = np.einsum("pi,pi->p", d1[:, 0, :], d1[:, 1, :])
    w = np.sqrt(h11 * h22 - h12 * h12).reshape(n_r, n_theta)
    radial = w.sum(axis=1) * (2.0 * np.pi / n_theta)
    return float(surface.radius**2 * np.sum(wt * t * radial))


def _grid_nodes(grid_shape):
    n_r, n_t = grid_shape
    radii = (np.arange(1, n_r + 1) - 0.5) / n_r
    angles = 2.0 * np.pi * np.arange(n_t) / n_t
    rr, aa = np.meshgrid(radii, angles, indexing="ij")
    return (rr * np.cos(aa)).ravel(), (rr * np.sin(aa)).ravel()


def _residuals_on_grid(series: HarmonicDiscSeries, us, vs):
    jets = series.jets2(us, vs)
    xu, xv = jets["du"], jets["dv"]
    e = np.einsum("pi,pi->p", xu, xu)
    g = np.einsum("pi,pi->p", xv, xv)
    f = np.einsum("pi,pi->p", xu, xv)
    conf = np.max((np.abs(e - g) + 2.0 * np.abs(f)) / (e + g))
    lap = jets["duu"] + jets["dvv"]
    r = np.sqrt(us * us + vs * vs)
    scale = 1.0 - r
    sup = max(series.sup_value_norm(), 1e-300)
    harm = np.max(np.linalg.norm(lap, axis=1) * scale**2) / sup
    det = xu[:, 0] * xv[:, 1] - xu[:, 1] * xv[:, 0]
    return float(conf), float(harm), float(np.min(det))


def _assemble_chart(
    surface: GraphSurface,
    psi_map: BoundaryMap,
    mobius: DiscAutomorphism,
    modes: int,
    grid_shape,
    tol: float,
    fast_path: bool,
    iterations: int,
    n_samp: int,
) -> ConformalChart:
    theta = 2.0 * np.pi * np.arange(n_samp) / n_samp
    tau = mobius.boundary_angle(theta)
    psi = psi_map.angles(tau)
    vals = _boundary_values(surface, psi)
    series = harmonic_extension(vals, modes)

    psi_wrapped = psi - 2.0 * np.pi * np.round(psi[0] / (2.0 * np.pi))
    diff = psi_wrapped - theta
    spec = np.fft.rfft(diff)
    n_keep = min(modes, n_samp // 2 - 1)
    table = BoundaryTable(
        theta=theta,
        psi=psi_wrapped,
        fourier_offset=float(spec[0].real / n_samp),
        fourier_sin=-2.0 * spec[1 : n_keep + 1].imag / n_samp,
        fourier_cos=2.0 * spec[1 : n_keep + 1].real / n_samp,
    )

    us, vs = _grid_nodes(grid_shape)
    values = series.value(us, vs)
    conf, harm, min_det = _residuals_on_grid(series, us, vs)
    residuals = ResidualStats(
        conformality=conf, harmonicity=harm, energy=series.dirichlet_energy()
    )
    return ConformalChart(
        surface=surface,
        series=series,
        boundary_map=table,
        center_shift=mobius,
        grid_shape=tuple(grid_shape),
        grid_u=us,
        grid_v=vs,
        values=values,
        residuals=residuals,
        min_plane_jacobian=min_det,
        modes=modes,
        tol=tol,
        fast_path=fast_path,
        iterations=iterations,
    )


def _center_and_rotate(
    surface, psi_map, mobius, modes, grid_shape, tol, fast_path, iterations, n_samp
):
    radius = surface.radius
    chart = _assemble_chart(
        surface, psi_map, mobius, modes, grid_shape, tol, fast_path, iterations, n_samp
    )
    for _ in range(_CENTER_MAX_PASSES):
        origin = chart.plane_origin()
        if np.hypot(origin[0], origin[1]) <= _CENTER_TOL_REL * radius:
            break
        w0 = find_plane_zero(chart.series)
        mobius = mobius.compose(DiscAutomorphism.from_center(w0))
        chart = _assemble_chart(
            surface, psi_map, mobius, modes, grid_shape, tol, fast_path, iterations, n_samp
        )

    # Fix the residual rotation so the boundary map sends angle 0 to angle 0.
    def wrapped_psi_at(rho: float) -> float:
        ang = float(np.angle(mobius(np.exp(1j * rho))))
        val = float(psi_map.angles(np.array([ang]))[0])
        return (val + np.pi) % (2.0 * np.pi) - np.pi

    rhos = np.linspace(-np.pi, np.pi, 2049)
    vals = np.array([wrapped_psi_at(r) for r in rhos])
    j = int(np.argmin(np.abs(vals)))
    rho_star = rhos[j]
    if abs(vals[j]) > 1e-13:
        lo = max(j - 1, 0)
        hi = min(j + 1, len(rhos) - 1)
        if vals[lo] * vals[hi] < 0.0 and abs(vals[lo]) < 1.0 and abs(vals[hi]) < 1.0:
            rho_star = brentq(wrapped_psi_at, rhos[lo], rhos[hi], xtol=1e-15)
    if abs(rho_star) > 1e-15:
        mobius = mobius.compose(DiscAutomorphism.rotation(float(rho_star)))
        chart = _assemble_chart(
            surface, psi_map, mobius, modes, grid_shape, tol, fast_path, iterations, n_samp
        )
    return chart


class _DouglasObjective:
    """Truncated spectral Dirichlet energy over boundary reparametrizations.

    Variables are (offset, alpha_1..alpha_M, beta_1..beta_M) of
    psi(t) = t + offset + sum(alpha_m sin mt + beta_m cos mt). The energy
    band is truncated at `band` modes. Monotonicity enters as a smooth
    hinge penalty on the slope that is inactive at any valid minimizer.
    The Moebius flat directions of the Douglas functional are left in the
    problem; the chart normalization is restored afterwards by an explicit
    disc automorphism, which changes neither harmonicity nor conformality.
    """

    def __init__(self, surface, band, m_psi, n_samp, margin=0.02, penalty=1e4):
        self.surface = surface
        self.band = band
        self.m_psi = m_psi
        self.n_samp = n_samp
        self.margin = margin
        self.penalty = penalty
        theta = 2.0 * np.pi * np.arange(n_samp) / n_samp
        self.theta = theta
        ms = np.arange(1, m_psi + 1)
        sin_b = np.sin(np.outer(ms, theta))
        cos_b = np.cos(np.outer(ms, theta))
        dsin = ms[:, None] * np.cos(np.outer(ms, theta))
        dcos = -ms[:, None] * np.sin(np.outer(ms, theta))
        self.psi_jac = np.vstack([np.ones(n_samp), sin_b, cos_b])  # (nvars, nsamp)
        self.slope_jac = np.vstack([np.zeros(n_samp), dsin, dcos])
        self.nvars = 1 + 2 * m_psi

    def boundary_map(self, t) -> BoundaryMap:
        return BoundaryMap(
            float(t[0]), t[1 : 1 + self.m_psi].copy(), t[1 + self.m_psi :].copy()
        )

    def __call__(self, t):
        psi = self.theta + self.psi_jac.T @ t
        slope = 1.0 + self.slope_jac.T @ t
        vals, tangents = _boundary_values_tangents(self.surface, psi)
        m = self.n_samp
        spec = np.fft.rfft(vals, axis=0)
        energy = _spectral_energy(spec, m, self.band)
        dspec = np.zeros_like(spec)
        k = np.arange(1, self.band + 1)
        dspec[1 : self.band + 1] = k[:, None] * spec[1 : self.band + 1]
        radial = np.fft.irfft(dspec, n=m, axis=0)
        de_dpsi = (2.0 * np.pi / m) * np.einsum("pi,pi->p", radial, tangents)
        grad = self.psi_jac @ de_dpsi
        gap = self.margin - slope
        active = gap > 0.0
        if np.any(active):
            energy += self.penalty * float(np.sum(gap[active] ** 2)) / m
        dpen = np.where(active, -2.0 * self.penalty * gap / m, 0.0)
        grad = grad + self.slope_jac @ dpen
        return energy, grad


def solve_chart(
    surface: GraphSurface,
    modes: int = 32,
    grid=(64, 256),
    tol: float = 1e-3,
    max_iter: int = 2000,
) -> ConformalChart:
    """Build the conformal chart of a graph surface over the unit disc.

    Fast path: when the graph coordinates are already isothermal (identity
    boundary map within tol), the scaled identity chart is returned
    without optimization; this covers every holomorphic graph. Otherwise
    the Dirichlet energy is minimized over boundary correspondences,
    escalating the internal Fourier band of psi and of the energy until
    the chart truncated at `modes` meets the tolerance; the chart is then
    re-centered and rotated into the normalization F*(0,0) = (0,0),
    psi(0) = 0.
    """
    if modes < 8:
        raise PreconditionError(f"modes must be >= 8, got {modes}")
    if not tol > 0.0:
        raise PreconditionError("tol must be positive")
    n_samp_final = max(16 * modes, 1024)

    identity_chart = _center_and_rotate(
        surface, BoundaryMap.identity(), DiscAutomorphism.identity(),
        modes, grid, tol, True, 0, n_samp_final,
    )
    if identity_chart.residuals.conformality <= tol:
        return identity_chart

    # Stage escalation: psi modes at band/2 are enough once the band
    # resolves the boundary data of the conformal parametrization.
    stages = [
        (max(modes // 2, 2), modes),
        (modes, 2 * modes),
        (2 * modes, 4 * modes),
        (3 * modes, 6 * modes),
    ]
    best_chart = None
    t_prev = None
    m_prev = 0
    total_iters = 0
    for m_psi, band in stages:
        n_samp = max(8 * band, 512)
        obj = _DouglasObjective(surface, band, m_psi, n_samp)
        t0 = np.zeros(obj.nvars)
        if t_prev is not None:
            t0[0] = t_prev[0]
            t0[1 : 1 + m_prev] = t_prev[1 : 1 + m_prev]
            t0[1 + m_psi : 1 + m_psi + m_prev] = t_prev[1 + m_prev :]
        result = minimize(
            obj,
            t0,
            jac=True,
            method="L-BFGS-B",
            options={
                "maxiter": max_iter,
                "maxfun": 4 * max_iter,
                "ftol": 1e-18,
                "gtol": 1e-14,
                "maxcor": min(100, obj.nvars),
            },
        )
        total_iters += int(result.nit)
        t_prev, m_prev = result.x, m_psi
        psi_map = obj.boundary_map(result.x)
        if psi_map.min_slope() <= 0.0:
            continue
        chart = _center_and_rotate(
            surface, psi_map, DiscAutomorphism.identity(),
            modes, grid, tol, False, total_iters, n_samp_final,
        )
        if best_chart is None or (
            chart.residuals.conformality < best_chart.residuals.conformality
        ):
            best_chart = chart
        if chart.residuals.conformality <= tol:
            break
    if best_chart is None:
        raise ConvergenceError(
            "boundary map lost monotonicity at every stage", best_residual=None
        )
    if best_chart.residuals.conformality > tol:
        raise ConvergenceError(
            f"conformality residual {best_chart.residuals.conformality:.3e} above "
            f"tolerance {tol:.1e} after {total_iters} iterations",
            best_residual=best_chart.residuals.conformality,
        )
    if not best_chart.boundary_map.is_strictly_increasing():
        raise ConvergenceError("assembled boundary table is not strictly increasing")
    origin = best_chart.plane_origin()
    if np.hypot(origin[0], origin[1]) > 1e-8 * surface.radius:
        raise ConvergenceError(
            f"chart centering failed, |F*(0,0)| = {np.hypot(*origin):.3e}"
        )
    return best_chart


def chart_jet(chart: ConformalChart, point) -> Jet2:
    """Exact jet of the truncated chart series at an interior point."""
    u, v = float(point[0]), float(point[1])
    if u * u + v * v >= 1.0:
        raise DomainError(f"chart jets are interior objects, got |w| = {math.hypot(u, v):.6g}")
    jets = chart.series.jets2(u, v)
    return Jet2(
        (u, v),
        jets["value"][0],
        np.vstack([jets["du"][0], jets["dv"][0]]),
        np.vstack([jets["duu"][0], jets["duv"][0], jets["dvv"][0]]),
    )


def export_chart(chart: ConformalChart, csv_path, sidecar_path) -> None:
    """Write grid samples as CSV and the exact series as a JSON sidecar."""
    n = chart.ambient_dim
    header = "u,v," + ",".join(f"X{i + 1}" for i in range(n))
    with open(csv_path, "w") as fh:
        fh.write(header + "\n")
        for i in range(chart.grid_u.shape[0]):
            row = [chart.grid_u[i], chart.grid_v[i], *chart.values[i]]
            fh.write(",".join(f"{x:.17g}" for x in row) + "\n")
    payload = {
        "surface": chart.surface.describe(),
        "modes": chart.modes,
        "tol": chart.tol,
        "fast_path": chart.fast_path,
        "iterations": chart.iterations,
        "grid_shape": list(chart.grid_shape),
        "cos_coef": chart.series.cos_coef.tolist(),
        "sin_coef": chart.series.sin_coef.tolist(),
        "residuals": {
            "conformality": chart.residuals.conformality,
            "harmonicity": chart.residuals.harmonicity,
            "energy": chart.residuals.energy,
        },
        "min_plane_jacobian": chart.min_plane_jacobian,
        "center_shift": {
            "alpha": [chart.center_shift.alpha.real, chart.center_shift.alpha.imag],
            "beta": [chart.center_shift.beta.real, chart.center_shift.beta.imag],
        },
        "psi": {
            "offset": chart.boundary_map.fourier_offset,
            "sin": chart.boundary_map.fourier_sin.tolist(),
            "cos": chart.boundary_map.fourier_cos.tolist(),
            "theta": chart.boundary_map.theta.tolist(),
            "samples": chart.boundary_map.psi.tolist(),
        },
    }
    with open(sidecar_path, "w") as fh:
        json.dump(payload, fh, indent=1)


def import_chart(sidecar_path) -> ConformalChart:
    """Rebuild a chart from its sidecar; jets reproduce bit-exactly."""
    with open(sidecar_path) as fh:
        payload = json.load(fh)
    desc = payload["surface"]
    surface = make_family("custom", desc["heights"], desc["radius"])
    surface = replace(surface, family=desc["family"])
    series = HarmonicDiscSeries(
        np.asarray(payload["cos_coef"], dtype=np.float64),
        np.asarray(payload["sin_coef"], dtype=np.float64),
    )
    table = BoundaryTable(
        theta=np.asarray(payload["psi"]["theta"]),
        psi=np.asarray(payload["psi"]["samples"]),
        fourier_offset=payload["psi"]["offset"],
        fourier_sin=np.asarray(payload["psi"]["sin"]),
        fourier_cos=np.asarray(payload["psi"]["cos"]),
    )
    shift = DiscAutomorphism(
        complex(*payload["center_shift"]["alpha"]),
        complex(*payload["center_shift"]["beta"]),
    )
    grid_shape = tuple(payload["grid_shape"])
    us, vs = _grid_nodes(grid_shape)
    values = series.value(us, vs)
    res = payload["residuals"]
    return ConformalChart(
        surface=surface,
        series=series,
        boundary_map=table,
        center_shift=shift,
        grid_shape=grid_shape,
        grid_u=us,
        grid_v=vs,
        values=values,
        residuals=ResidualStats(res["conformality"], res["harmonicity"], res["energy"]),
        min_plane_jacobian=payload["min_plane_jacobian"],
        modes=payload["modes"],
        tol=payload["tol"],
        fast_path=payload["fast_path"],
        iterations=payload["iterations"],
    )
