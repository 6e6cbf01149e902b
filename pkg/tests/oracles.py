"""Independent numerical oracles used to pin expected values in tests.

Everything here deliberately avoids the library's analytic paths:
central finite differences, brute-force grid maxima, quadrature, and a
generalized eigenvalue solve stand against exact jets, spectral
energies, and the closed-form principal curvature pipeline.
"""

import numpy as np
from scipy.linalg import eigh


def fd_jet(f, x, y, h=1e-4):
    """Central-difference jet (f, fx, fy, fxx, fxy, fyy) of a callable."""
    return np.array(
        [
            f(x, y),
            (f(x + h, y) - f(x - h, y)) / (2 * h),
            (f(x, y + h) - f(x, y - h)) / (2 * h),
            (f(x + h, y) - 2 * f(x, y) + f(x - h, y)) / h**2,
            (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h))
            / (4 * h**2),
            (f(x, y + h) - 2 * f(x, y) + f(x, y - h)) / h**2,
        ]
    )


def fd_surface_jet(surface, x, y, h=1e-4):
    """Finite-difference value/d1/d2 arrays of the immersion."""
    from mgcl.surfaces import eval_jet_batch

    def val(xx, yy):
        v, _, _ = eval_jet_batch(surface, np.array([xx]), np.array([yy]), clip_domain=False)
        return v[0]

    value = val(x, y)
    d1 = np.stack(
        [
            (val(x + h, y) - val(x - h, y)) / (2 * h),
            (val(x, y + h) - val(x, y - h)) / (2 * h),
        ]
    )
    d2 = np.stack(
        [
            (val(x + h, y) - 2 * value + val(x - h, y)) / h**2,
            (val(x + h, y + h) - val(x + h, y - h) - val(x - h, y + h) + val(x - h, y - h))
            / (4 * h**2),
            (val(x, y + h) - 2 * value + val(x, y - h)) / h**2,
        ]
    )
    return value, d1, d2


def brute_sup(surface, n=100000, seed=5):
    """Monte Carlo + boundary scan lower bound for sup |X|."""
    from mgcl.surfaces import eval_jet_batch

    rng = np.random.default_rng(seed)
    r = surface.radius * np.sqrt(rng.uniform(0, 1, n))
    a = rng.uniform(0, 2 * np.pi, n)
    ab = np.linspace(0, 2 * np.pi, 4096, endpoint=False)
    xs = np.concatenate([r * np.cos(a), surface.radius * np.cos(ab)])
    ys = np.concatenate([r * np.sin(a), surface.radius * np.sin(ab)])
    value, _, _ = eval_jet_batch(surface, xs, ys, clip_domain=False)
    return float(np.max(np.linalg.norm(value, axis=1)))


def minimal_equation_residual(surface, n=32):
    """Max |div(grad phi / sqrt(1 + |grad phi|^2))| over a grid, by FD."""
    h = 1e-5
    worst = 0.0
    rs = np.linspace(0.05, 0.9 * surface.radius, n // 4)
    ts = np.linspace(0, 2 * np.pi, n, endpoint=False)
    for field in surface.heights:

        def flux(xx, yy):
            j = field.jet_batch(np.array([xx]), np.array([yy]))[0]
            gx, gy = j[1], j[2]
            w = np.sqrt(1.0 + gx * gx + gy * gy)
            return gx / w, gy / w

        for r in rs:
            for t in ts:
                x, y = r * np.cos(t), r * np.sin(t)
                fx_p, _ = flux(x + h, y)
                fx_m, _ = flux(x - h, y)
                _, fy_p = flux(x, y + h)
                _, fy_m = flux(x, y - h)
                div = (fx_p - fx_m) / (2 * h) + (fy_p - fy_m) / (2 * h)
                worst = max(worst, abs(div))
    return worst


def shape_operator_curvatures(h, ell):
    """Principal curvatures via the generalized symmetric eigenproblem."""
    vals = eigh(ell, h, eigvals_only=True)
    return float(vals[1]), float(vals[0])  # kappa1 >= kappa2


def quadrature_dirichlet_energy(series, n_r=256, n_t=512):
    """(1/2) integral |grad X|^2 over the disc by quadrature of the series."""
    nodes, weights = np.polynomial.legendre.leggauss(n_r)
    t = 0.5 * (nodes + 1.0)
    wt = 0.5 * weights
    ang = 2 * np.pi * np.arange(n_t) / n_t
    rr, aa = np.meshgrid(t, ang, indexing="ij")
    us = (rr * np.cos(aa)).ravel()
    vs = (rr * np.sin(aa)).ravel()
    j = series.jets2(us, vs)
    dens = np.einsum("pi,pi->p", j["du"], j["du"]) + np.einsum(
        "pi,pi->p", j["dv"], j["dv"]
    )
    dens = dens.reshape(n_r, n_t)
    radial = dens.sum(axis=1) * (2 * np.pi / n_t)
    return float(0.5 * np.sum(wt * t * radial))
