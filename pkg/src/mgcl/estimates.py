"""Empirical probes of the curvature-bound constants and scaling sweeps.

The central quantity is the dimensionless ratio

    R^4 * max_N (kappa_{N,1}^2 + kappa_{N,2}^2)(0,0) / sup|X|^2

which every graph surface bounds from below. Monte Carlo probes bracket
the harmonic interior-estimate constant (from below) and the univalent
gradient constant (from above); both inject deterministic witnesses so
their headline statistics are seed independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .conformal import ConformalChart, chart_jet, solve_chart
from .curvature import curvature_in_direction, fundamental_forms
from .errors import PreconditionError
from .harmonic import HarmonicDiscSeries, find_plane_zero, harmonic_extension
from .surfaces import eval_jet, make_family, orthonormal_frame, sup_norm

SWEEP_SUP_SAMPLES = 128  # 128 radii x 512 angles for every sweep sup-norm


@dataclass(frozen=True)
class ProbeReport:
    kind: str
    samples: int
    statistic: float
    witness: dict
    seed: int
    baseline: dict = None
    skipped: int = 0
    regenerated: int = 0

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "samples": self.samples,
            "statistic": self.statistic,
            "witness": self.witness,
            "baseline": self.baseline,
            "seed": self.seed,
            "skipped": self.skipped,
            "regenerated": self.regenerated,
        }


@dataclass(frozen=True)
class BoundCurve:
    family: dict
    radii: np.ndarray
    ratios: np.ndarray
    kappa_sq_max: np.ndarray
    sup_norms: np.ndarray
    fitted_exponent: float
    asymptote: float
    failures: tuple
    degenerate: bool


@dataclass(frozen=True)
class BoundCheck:
    lhs: float
    rhs: float
    satisfied: bool
    two_w_origin: float
    grad_f_sq_scaled: float
    chain_ok: bool
    c1: float
    c2: float

    def to_json_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "satisfied": self.satisfied,
            "two_w_origin": self.two_w_origin,
            "grad_f_sq_scaled": self.grad_f_sq_scaled,
            "chain_ok": self.chain_ok,
            "C1": self.c1,
            "C2": self.c2,
        }


@dataclass(frozen=True)
class DecayTable:
    radii: np.ndarray
    bounds: np.ndarray
    slope: float
    expected_slope: float
    slope_ok: bool


def _origin_kappa_sq_max(surface) -> float:
    jet = eval_jet(surface, (0.0, 0.0))
    forms = fundamental_forms(jet, orthonormal_frame(jet))
    return max(
        curvature_in_direction(forms, i).kappa_sq_sum for i in range(forms.L.shape[0])
    )


def bound_ratio(surface, sup_samples: int = SWEEP_SUP_SAMPLES) -> float:
    """R^4 max_N (kappa1^2 + kappa2^2)(0,0) / sup|X|^2, a lower bound witness.

    The chart normalization sends (u,v) = (0,0) to graph coordinates
    (0,0) and curvatures are parametrization invariants, so the origin
    curvatures come from exact graph jets.
    """
    kappa_sq = _origin_kappa_sq_max(surface)
    sup = sup_norm(surface, sup_samples)
    return float(surface.radius**4 * kappa_sq / sup**2)


def fit_loglog_slope(radii, values) -> float:
    """Least-squares slope of log(value) vs log(R) over the upper half.

    Only the upper half of the radius list enters, suppressing
    preasymptotic bias; NaN when fewer than two usable points remain.
    """
    radii = np.asarray(radii, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    n = radii.shape[0]
    lo = n - max(n // 2, 2)
    sel = slice(max(lo, 0), n)
    r = radii[sel]
    v = values[sel]
    good = np.isfinite(v) & (v > 0.0)
    if good.sum() < 2:
        return float("nan")
    coeffs = np.polyfit(np.log(r[good]), np.log(v[good]), 1)
    return float(coeffs[0])


def richardson_asymptote(radii, values) -> float:
    """Limit estimate from the last three points of a converging sequence.

    The convergence order is estimated from the difference ratio and
    snapped to the nearest integer when it is close to one, which keeps
    the extrapolation one-sided for clean power-law errors.
    """
    values = np.asarray(values, dtype=np.float64)
    radii = np.asarray(radii, dtype=np.float64)
    good = np.isfinite(values)
    v = values[good]
    r = radii[good]
    if v.shape[0] == 0:
        return float("nan")
    if v.shape[0] < 3:
        return float(v[-1])
    d1 = v[-2] - v[-3]
    d2 = v[-1] - v[-2]
    if abs(d2) < 1e-15 * (1.0 + abs(v[-1])) or d1 * d2 <= 0.0:
        return float(v[-1])
    rate = d1 / d2
    if rate <= 1.0 + 1e-9:
        return float(v[-1])
    rho = r[-1] / r[-2]
    if rho <= 1.0:
        return float(v[-1])
    order = np.log(rate) / np.log(rho)
    snapped = np.round(order)
    if snapped >= 1.0 and abs(order - snapped) <= 0.25:
        rate = rho**snapped
    return float(v[-1] + d2 / (rate - 1.0))


def theta_sweep(family: dict, radii) -> BoundCurve:
    """Bound ratios of one family across radii plus fit diagnostics.

    `family` is a descriptor {"kind": ..., "params": [...]}. Radii that
    fail keep a failure marker instead of aborting the sweep.
    """
    radii = np.asarray(list(radii), dtype=np.float64)
    if radii.shape[0] < 4:
        raise PreconditionError(f"need at least 4 radii, got {radii.shape[0]}")
    if np.any(np.diff(radii) <= 0.0):
        raise PreconditionError("radii must be strictly increasing")
    ratios = np.full(radii.shape, np.nan)
    kappas = np.full(radii.shape, np.nan)
    sups = np.full(radii.shape, np.nan)
    failures = []
    for i, r in enumerate(radii):
        try:
            surface = make_family(family["kind"], family.get("params", []), float(r))
            kappas[i] = _origin_kappa_sq_max(surface)
            sups[i] = sup_norm(surface, SWEEP_SUP_SAMPLES)
            ratios[i] = float(r**4 * kappas[i] / sups[i] ** 2)
        except Exception as exc:  # sweep continues; row carries the marker
            failures.append((i, f"{type(exc).__name__}: {exc}"))
    finite = ratios[np.isfinite(ratios)]
    degenerate = finite.shape[0] > 0 and bool(np.all(finite == 0.0))
    exponent = float("nan") if degenerate else fit_loglog_slope(radii, ratios)
    asymptote = 0.0 if degenerate else richardson_asymptote(radii, ratios)
    return BoundCurve(
        family=dict(family),
        radii=radii,
        ratios=ratios,
        kappa_sq_max=kappas,
        sup_norms=sups,
        fitted_exponent=exponent,
        asymptote=asymptote,
        failures=tuple(failures),
        degenerate=degenerate,
    )


def _sample_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(index)])


class _PolarBasis:
    """Cached r^k cos(kt), r^k sin(kt) tables for fast sup-norm scans."""

    def __init__(self, degree: int, n_r: int = 64, n_theta: int = 256):
        radii = np.arange(1, n_r + 1) / n_r
        angles = 2.0 * np.pi * np.arange(n_theta) / n_theta
        rr, aa = np.meshgrid(radii, angles, indexing="ij")
        rs = np.append(rr.ravel(), 0.0)
        ts = np.append(aa.ravel(), 0.0)
        k = np.arange(degree + 1)
        rk = rs[None, :] ** k[:, None]
        self.cos_tab = rk * np.cos(k[:, None] * ts[None, :])  # (K+1, npts)
        self.sin_tab = rk * np.sin(k[:, None] * ts[None, :])
        self.npts = rs.shape[0]

    def sup_norms(self, cos_coef, sin_coef) -> np.ndarray:
        """Max |field| per sample; coefficient arrays (ns, ncomp, K+1)."""
        a = cos_coef.copy()
        a[:, :, 0] *= 0.5
        ns, ncomp, nk = a.shape
        vals = a.reshape(ns * ncomp, nk) @ self.cos_tab
        vals += sin_coef.reshape(ns * ncomp, nk) @ self.sin_tab
        vals = vals.reshape(ns, ncomp, self.npts)
        return np.sqrt(np.max(np.einsum("scp,scp->sp", vals, vals), axis=1))


def schauder_probe(
    count: int,
    seed: int,
    degree: int = 16,
    components: int = 3,
    chunk: int = 256,
) -> ProbeReport:
    """Empirical lower bracket of the interior second-derivative constant.

    Samples random truncated harmonic fields (coefficients k^-2 uniform),
    reports max over samples and index pairs of |X_{ij}(0,0)| / sup|X|.
    The deterministic witness u^2 - v^2 (ratio exactly 2) is always in
    the pool, so the statistic is at least 2 for every seed.
    """
    if count < 1:
        raise PreconditionError("count must be >= 1")
    basis = _PolarBasis(degree)
    decay = np.ones(degree + 1)
    ks = np.arange(1, degree + 1)
    decay[1:] = 1.0 / ks**2

    # Deterministic witness: single-component field u^2 - v^2.
    wit_cos = np.zeros((1, 1, degree + 1))
    wit_cos[0, 0, 2] = 1.0
    wit_sin = np.zeros_like(wit_cos)
    wit_sup = basis.sup_norms(wit_cos, wit_sin)[0]
    best_ratio = 2.0 * 1.0 / wit_sup
    witness = {"sample": "witness Re z^2", "ratio": best_ratio, "sup": wit_sup}
    baseline = {"witness": "Re z^2", "value": float(best_ratio)}

    skipped = 0
    idx = 0
    while idx < count:
        block = min(chunk, count - idx)
        cos_c = np.empty((block, components, degree + 1))
        sin_c = np.empty((block, components, degree + 1))
        for j in range(block):
            rng = _sample_rng(seed, idx + j)
            cos_c[j] = rng.uniform(-1.0, 1.0, (components, degree + 1)) * decay
            sin_c[j] = rng.uniform(-1.0, 1.0, (components, degree + 1)) * decay
            sin_c[j, :, 0] = 0.0
        sups = basis.sup_norms(cos_c, sin_c)
        # Second derivatives at the origin live entirely in the k = 2 modes.
        d_uu = 2.0 * np.linalg.norm(cos_c[:, :, 2], axis=1)
        d_uv = 2.0 * np.linalg.norm(sin_c[:, :, 2], axis=1)
        dmax = np.maximum(d_uu, d_uv)
        for j in range(block):
            if sups[j] <= 0.0:
                skipped += 1
                continue
            ratio = dmax[j] / sups[j]
            if ratio > best_ratio:
                best_ratio = ratio
                witness = {"sample": idx + j, "ratio": ratio, "sup": float(sups[j])}
        idx += block
    return ProbeReport(
        kind="schauder",
        samples=count,
        statistic=float(best_ratio),
        witness=witness,
        seed=seed,
        baseline=baseline,
        skipped=skipped,
    )


def _univalent_gradient_sq(series: HarmonicDiscSeries) -> float | None:
    """|grad F|^2 at the relocated zero of a univalent harmonic disc map."""
    w0 = find_plane_zero(series)
    val = series.value(w0.real, w0.imag)[0]
    if math.hypot(val[0], val[1]) > 1e-10:
        return None
    jets = series.jets2(w0.real, w0.imag)
    grad_sq = float(
        jets["du"][0, 0] ** 2
        + jets["dv"][0, 0] ** 2
        + jets["du"][0, 1] ** 2
        + jets["dv"][0, 1] ** 2
    )
    return (1.0 - abs(w0) ** 2) ** 2 * grad_sq


def heinz_probe(
    count: int,
    seed: int,
    degree: int = 8,
    amplitude: float = 0.35,
    modes: int = 64,
    boundary_samples: int = 512,
    max_regen: int = 50,
) -> ProbeReport:
    """Empirical upper bracket of the univalent gradient constant.

    Samples monotone circle homeomorphisms psi, extends e^{i psi}
    harmonically (univalent onto the disc by convexity of the target),
    relocates the zero to the origin by a disc automorphism, and takes
    the min of |grad F(0,0)|^2. The identity witness contributes the
    exact value 2.
    """
    if count < 1:
        raise PreconditionError("count must be >= 1")
    theta = 2.0 * np.pi * np.arange(boundary_samples) / boundary_samples
    ms = np.arange(1, degree + 1)
    sin_tab = np.sin(np.outer(ms, theta))
    cos_tab = np.cos(np.outer(ms, theta))
    dsin_tab = ms[:, None] * np.cos(np.outer(ms, theta))
    dcos_tab = -ms[:, None] * np.sin(np.outer(ms, theta))
    decay = amplitude / ms**2

    def extension_of(psi):
        data = np.column_stack([np.cos(psi), np.sin(psi)])
        return harmonic_extension(data, modes)

    best = _univalent_gradient_sq(extension_of(theta))
    witness = {"sample": "witness identity", "value": best}
    baseline = {"witness": "identity", "value": float(best)}
    skipped = 0
    regenerated = 0
    for i in range(count):
        rng = _sample_rng(seed, i)
        value = None
        for _ in range(max_regen):
            alpha = rng.uniform(-1.0, 1.0, degree) * decay
            beta = rng.uniform(-1.0, 1.0, degree) * decay
            slope = 1.0 + alpha @ dsin_tab + beta @ dcos_tab
            if np.min(slope) <= 0.05:
                regenerated += 1
                continue
            psi = theta + alpha @ sin_tab + beta @ cos_tab
            value = _univalent_gradient_sq(extension_of(psi))
            break
        if value is None:
            skipped += 1
            continue
        if value < best:
            best = value
            witness = {"sample": i, "value": value}
    return ProbeReport(
        kind="heinz",
        samples=count,
        statistic=float(best),
        witness=witness,
        seed=seed,
        baseline=baseline,
        skipped=skipped,
        regenerated=regenerated,
    )


def theorem_bound_check(
    surface,
    c1: float,
    c2: float,
    chart: ConformalChart | None = None,
    sup_samples: int = SWEEP_SUP_SAMPLES,
) -> BoundCheck:
    """Evaluate both sides of the origin curvature bound for given constants.

    lhs = max_N (kappa1^2 + kappa2^2)(0,0); rhs = 16 C1^2 C2^-2 sup|X|^2 / R^4.
    Also evaluates the intermediate chain 2 W(0,0) >= R^2 |grad F(0,0)|^2
    directly from the chart (F = F*/R).
    """
    if not (c1 > 0.0 and c2 > 0.0):
        raise PreconditionError("C1 and C2 must be positive")
    if chart is None:
        chart = solve_chart(surface)
    lhs = _origin_kappa_sq_max(surface)
    sup = sup_norm(surface, sup_samples)
    rhs = 16.0 * c1**2 / c2**2 * sup**2 / surface.radius**4

    cjet = chart_jet(chart, (0.0, 0.0))
    h = cjet.d1 @ cjet.d1.T
    two_w = 2.0 * float(np.sqrt(h[0, 0] * h[1, 1] - h[0, 1] ** 2))
    grad_f_star_sq = float(np.sum(cjet.d1[:, :2] ** 2))
    chain_ok = two_w >= grad_f_star_sq - 1e-9 * (1.0 + abs(two_w))
    return BoundCheck(
        lhs=float(lhs),
        rhs=float(rhs),
        satisfied=bool(lhs <= rhs * (1.0 + 1e-12)),
        two_w_origin=two_w,
        grad_f_sq_scaled=grad_f_star_sq,
        chain_ok=bool(chain_ok),
        c1=c1,
        c2=c2,
    )


def bernstein_decay(omega_cap: float, omega: float, theta: float, radii) -> DecayTable:
    """Tabulate the scaled bound Theta*Omega^2*R^{2 omega - 4} over radii.

    The log-log slope must equal 2*omega - 4 (within 0.05) and the bound
    must decay to zero; omega >= 2 is rejected, which is exactly the
    sharpness boundary where the quadratic-growth family escapes.
    """
    if not (0.0 <= omega < 2.0):
        raise PreconditionError(f"omega must lie in [0, 2), got {omega}")
    if not (omega_cap > 0.0 and theta > 0.0):
        raise PreconditionError("Omega and Theta must be positive")
    radii = np.asarray(list(radii), dtype=np.float64)
    if radii.shape[0] < 4 or np.any(np.diff(radii) <= 0.0):
        raise PreconditionError("need at least 4 strictly increasing radii")
    bounds = theta * omega_cap**2 * radii ** (2.0 * omega - 4.0)
    slope = fit_loglog_slope(radii, bounds)
    expected = 2.0 * omega - 4.0
    return DecayTable(
        radii=radii,
        bounds=bounds,
        slope=slope,
        expected_slope=expected,
        slope_ok=bool(abs(slope - expected) <= 0.05),
    )


def consistency_check(surface, schauder_stat: float, heinz_stat: float) -> dict:
    """Compare a surface's ratio against 16 C1^2/C2^2 from probe brackets.

    Returns a finding dict; `consistent` False is a reportable finding,
    never a silent drop.
    """
    ratio = bound_ratio(surface)
    bound = 16.0 * schauder_stat**2 / heinz_stat**2
    return {
        "ratio": ratio,
        "bound": bound,
        "consistent": bool(ratio <= bound * (1.0 + 1e-12)),
        "surface": surface.describe(),
    }
