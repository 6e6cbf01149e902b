"""Fundamental forms and per-normal curvatures of graph surfaces.

Per-normal quantities follow the scalar pipeline

    H_N = (L11 h22 - 2 L12 h12 + L22 h11) / (2 W^2)
    K_N = (L11 L22 - L12^2) / W^2
    kappa = H_N +- sqrt(H_N^2 - K_N)

with L_{N,ij} = X_{ij} . N and W^2 = det h. All quantities are
parametrization invariants, so graph-coordinate jets and conformal-chart
jets must agree at matched geometric points; the intrinsic Gauss
curvature -Lap(log W)/(2W) of a conformal chart provides an independent
cross-check of the frame decomposition K = sum_N K_N.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .conformal import ConformalChart, chart_jet
from .errors import (
    GeometryError,
    NumericalConsistencyError,
    PreconditionError,
)
from .surfaces import GraphSurface, Jet2, NormalFrame, eval_jet, orthonormal_frame
from .tolerances import ANALYTIC_TOL, gauss_cross_tolerance

_DISC_CLAMP = 1e-12
_ORTHO_CHECK_TOL = 1e-10


@dataclass(frozen=True)
class FundamentalForms:
    """First form h, area element W, and one second-form matrix per normal."""

    h: np.ndarray  # (2, 2)
    W: float
    L: np.ndarray  # (m, 2, 2)
    basis: str  # "ortho" or "raw"
    frame: NormalFrame

    def __post_init__(self):
        self.h.setflags(write=False)
        self.L.setflags(write=False)


@dataclass(frozen=True)
class DirectionalCurvature:
    H: float
    K: float
    kappa1: float
    kappa2: float

    @property
    def kappa_sq_sum(self) -> float:
        return self.kappa1**2 + self.kappa2**2


@dataclass(frozen=True)
class CurvatureReport:
    point: tuple
    per_normal: tuple
    K_total: float
    K_intrinsic: float
    frame: NormalFrame

    def to_json_dict(self) -> dict:
        return {
            "point": list(self.point),
            "per_normal": [
                {"H": c.H, "K": c.K, "kappa1": c.kappa1, "kappa2": c.kappa2}
                for c in self.per_normal
            ],
            "K_total": self.K_total,
            "K_intrinsic": self.K_intrinsic,
        }


def fundamental_forms(jet: Jet2, frame: NormalFrame, basis: str = "ortho") -> FundamentalForms:
    """First and second fundamental forms of a jet against a normal frame."""
    if basis not in ("ortho", "raw"):
        raise ValueError(f"basis must be 'ortho' or 'raw', got {basis!r}")
    d1 = jet.d1
    h = d1 @ d1.T
    w2 = h[0, 0] * h[1, 1] - h[0, 1] * h[1, 0]
    if not w2 > 0.0:
        raise GeometryError(f"degenerate metric, det h = {w2:.3e}")
    normals = frame.ortho if basis == "ortho" else frame.raw
    second = jet.d2 @ normals.T  # (3, m)
    m = normals.shape[0]
    ell = np.empty((m, 2, 2))
    ell[:, 0, 0] = second[0]
    ell[:, 0, 1] = second[1]
    ell[:, 1, 0] = second[1]
    ell[:, 1, 1] = second[2]
    return FundamentalForms(h=h, W=float(np.sqrt(w2)), L=ell, basis=basis, frame=frame)


def curvature_in_direction(forms: FundamentalForms, idx: int) -> DirectionalCurvature:
    """Mean, Gauss, and principal curvatures toward frame normal `idx`."""
    if not 0 <= idx < forms.L.shape[0]:
        raise IndexError(f"normal index {idx} out of range")
    ell = forms.L[idx]
    h = forms.h
    w2 = forms.W**2
    mean = (ell[0, 0] * h[1, 1] - 2.0 * ell[0, 1] * h[0, 1] + ell[1, 1] * h[0, 0]) / (2.0 * w2)
    gauss = (ell[0, 0] * ell[1, 1] - ell[0, 1] ** 2) / w2
    disc = mean * mean - gauss
    if disc < -_DISC_CLAMP:
        raise NumericalConsistencyError(
            f"negative principal-curvature discriminant {disc:.3e} "
            f"below the clamp window {-_DISC_CLAMP:.0e}"
        )
    root = float(np.sqrt(max(disc, 0.0)))
    return DirectionalCurvature(
        H=float(mean), K=float(gauss), kappa1=float(mean + root), kappa2=float(mean - root)
    )


def _forms_at_chart_point(chart: ConformalChart, point) -> FundamentalForms:
    cjet = chart_jet(chart, point)
    frame = orthonormal_frame(eval_jet(chart.surface, chart.graph_point(point)))
    return fundamental_forms(cjet, frame)


def minimality_residual(target, points) -> float:
    """Scale-normalized sup of |H_N| over sample points and frame normals.

    `target` is a GraphSurface (points in graph coordinates, exact jets)
    or a ConformalChart (points in chart coordinates). Each term is
    |H_N| * W / (1 + |det L_N|); the weight is 1 for flat directions and
    keeps the certificate finite on strongly curved samples. H_N is
    linear in N, so vanishing on a spanning frame certifies vanishing for
    every unit normal field.
    """
    points = list(points)
    if len(points) == 0:
        raise PreconditionError("need at least one sample point")
    worst = 0.0
    for p in points:
        if isinstance(target, GraphSurface):
            jet = eval_jet(target, p)
            forms = fundamental_forms(jet, orthonormal_frame(jet))
        elif isinstance(target, ConformalChart):
            forms = _forms_at_chart_point(target, p)
        else:
            raise TypeError(f"expected GraphSurface or ConformalChart, got {type(target)!r}")
        for i in range(forms.L.shape[0]):
            ell = forms.L[i]
            cur = curvature_in_direction(forms, i)
            det_l = ell[0, 0] * ell[1, 1] - ell[0, 1] ** 2
            worst = max(worst, abs(cur.H) * forms.W / (1.0 + abs(det_l)))
    return worst


def gauss_decomposition(forms: FundamentalForms):
    """K_total = sum of K_N over the orthonormal frame, plus the parts."""
    if forms.basis != "ortho":
        raise PreconditionError(
            "Gauss decomposition requires the orthonormalized frame; "
            "raw graph normals are not mutually orthogonal"
        )
    gram = forms.frame.ortho @ forms.frame.ortho.T
    if np.max(np.abs(gram - np.eye(gram.shape[0]))) > _ORTHO_CHECK_TOL:
        raise PreconditionError("frame failed the orthonormality check")
    parts = np.array(
        [curvature_in_direction(forms, i).K for i in range(forms.L.shape[0])]
    )
    return float(parts.sum()), parts


def intrinsic_gauss(chart: ConformalChart, point, method: str = "analytic") -> float:
    """Intrinsic Gauss curvature -Lap(log W)/(2 W) of a conformal chart.

    The analytic path differentiates the truncated series (third
    derivatives are exact for the truncation); the finite-difference path
    is a Richardson-extrapolated 5-point Laplacian of log W, kept as an
    independent oracle.
    """
    u, v = float(point[0]), float(point[1])
    if method == "fd":
        return _intrinsic_gauss_fd(chart, u, v)
    if method != "analytic":
        raise ValueError(f"method must be 'analytic' or 'fd', got {method!r}")
    j = chart.series.jets3(u, v)
    xu, xv = j["du"][0], j["dv"][0]
    xuu, xuv, xvv = j["duu"][0], j["duv"][0], j["dvv"][0]
    xuuu, xuuv, xuvv, xvvv = j["duuu"][0], j["duuv"][0], j["duvv"][0], j["dvvv"][0]

    h11 = xu @ xu
    h12 = xu @ xv
    h22 = xv @ xv
    q = h11 * h22 - h12 * h12
    if q <= 1e-24:
        raise GeometryError(f"area element below floor, W^2 = {q:.3e}")
    w = float(np.sqrt(q))

    h11_u = 2.0 * (xuu @ xu)
    h11_v = 2.0 * (xuv @ xu)
    h22_u = 2.0 * (xuv @ xv)
    h22_v = 2.0 * (xvv @ xv)
    h12_u = xuu @ xv + xu @ xuv
    h12_v = xuv @ xv + xu @ xvv
    q_u = h11_u * h22 + h11 * h22_u - 2.0 * h12 * h12_u
    q_v = h11_v * h22 + h11 * h22_v - 2.0 * h12 * h12_v

    h11_uu = 2.0 * (xuuu @ xu + xuu @ xuu)
    h11_vv = 2.0 * (xuvv @ xu + xuv @ xuv)
    h22_uu = 2.0 * (xuuv @ xv + xuv @ xuv)
    h22_vv = 2.0 * (xvvv @ xv + xvv @ xvv)
    h12_uu = xuuu @ xv + 2.0 * (xuu @ xuv) + xu @ xuuv
    h12_vv = xuvv @ xv + 2.0 * (xuv @ xvv) + xu @ xvvv
    q_uu = h11_uu * h22 + 2.0 * h11_u * h22_u + h11 * h22_uu - 2.0 * (h12_u**2 + h12 * h12_uu)
    q_vv = h11_vv * h22 + 2.0 * h11_v * h22_v + h11 * h22_vv - 2.0 * (h12_v**2 + h12 * h12_vv)

    lap_log_w = 0.5 * ((q_uu + q_vv) / q - (q_u**2 + q_v**2) / (q * q))
    return float(-lap_log_w / (2.0 * w))


def _log_w(chart: ConformalChart, us, vs):
    j = chart.series.jets2(np.asarray(us), np.asarray(vs))
    h11 = np.einsum("pi,pi->p", j["du"], j["du"])
    h22 = np.einsum("pi,pi->p", j["dv"], j["dv"])
    h12 = np.einsum("pi,pi->p", j["du"], j["dv"])
    q = h11 * h22 - h12 * h12
    if np.any(q <= 1e-24):
        raise GeometryError("area element below floor in stencil")
    return 0.5 * np.log(q)


def _intrinsic_gauss_fd(chart: ConformalChart, u: float, v: float, step: float = 1e-3) -> float:
    def five_point(h):
        us = np.array([u + h, u - h, u, u, u])
        vs = np.array([v, v, v + h, v - h, v])
        f = _log_w(chart, us, vs)
        return (f[0] + f[1] + f[2] + f[3] - 4.0 * f[4]) / (h * h)

    d1 = five_point(step)
    d2 = five_point(step / 2.0)
    lap = (4.0 * d2 - d1) / 3.0
    w = float(np.exp(_log_w(chart, np.array([u]), np.array([v]))[0]))
    return float(-lap / (2.0 * w))


def curvature_report(surface: GraphSurface, chart: ConformalChart, point) -> CurvatureReport:
    """Full per-normal curvature report at a chart point (u, v).

    Per-normal values use exact graph-coordinate jets at the matched
    geometric point; K_intrinsic comes from the chart. Internal checks:
    kappa1^2 + kappa2^2 = 2 (2 H^2 - K) per normal, and the decomposition
    sum K_N must match K_intrinsic within the tolerance ladder.
    """
    u, v = float(point[0]), float(point[1])
    jet = eval_jet(surface, chart.graph_point((u, v)))
    frame = orthonormal_frame(jet)
    forms = fundamental_forms(jet, frame)
    per = tuple(curvature_in_direction(forms, i) for i in range(len(frame)))
    for c in per:
        identity_gap = abs(c.kappa_sq_sum - 2.0 * (2.0 * c.H**2 - c.K))
        scale = 1.0 + abs(c.kappa_sq_sum)
        if identity_gap > ANALYTIC_TOL * scale:
            raise NumericalConsistencyError(
                f"kappa identity violated by {identity_gap:.3e}"
            )
    k_total, _ = gauss_decomposition(forms)
    k_intr = intrinsic_gauss(chart, (u, v))
    tol = gauss_cross_tolerance(chart) * (1.0 + abs(k_total))
    if abs(k_total - k_intr) > tol:
        raise NumericalConsistencyError(
            f"Gauss decomposition {k_total:.6e} vs intrinsic {k_intr:.6e} "
            f"differ beyond {tol:.1e}"
        )
    return CurvatureReport(
        point=(u, v), per_normal=per, K_total=k_total, K_intrinsic=k_intr, frame=frame
    )
