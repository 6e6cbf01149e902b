"""Harmonic maps of the unit disc as truncated Fourier-Poisson series.

X(r, t) = a0/2 + sum_{k=1}^K r^k (a_k cos kt + b_k sin kt), componentwise.
Writing each component as Re g(w) for the complex polynomial
g(w) = a0/2 + sum (a_k - i b_k) w^k turns every derivative of the series
into a polynomial evaluation, so interior jets of any order are exact for
the truncated representation and harmonicity holds by construction.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import AliasingError, DomainError

_MIN_BOUNDARY_SAMPLES = 64


@dataclass(frozen=True)
class HarmonicDiscSeries:
    """Truncated harmonic series on the unit disc, one row per component.

    cos_coef[:, k] holds a_k (column 0 stores a0), sin_coef[:, k] holds
    b_k (column 0 unused).
    """

    cos_coef: np.ndarray  # (ncomp, K+1)
    sin_coef: np.ndarray  # (ncomp, K+1)

    def __post_init__(self):
        self.cos_coef.setflags(write=False)
        self.sin_coef.setflags(write=False)

    @property
    def modes(self) -> int:
        return self.cos_coef.shape[1] - 1

    @property
    def ncomp(self) -> int:
        return self.cos_coef.shape[0]

    def _complex_coef(self):
        cre = self.cos_coef.copy()
        cim = -self.sin_coef.copy()
        cre[:, 0] *= 0.5
        cim[:, 0] = 0.0
        return cre, cim

    def value(self, us, vs) -> np.ndarray:
        us = np.atleast_1d(np.asarray(us, dtype=np.float64))
        vs = np.atleast_1d(np.asarray(vs, dtype=np.float64))
        cre, cim = self._complex_coef()
        out_re, _ = K.poly_derivs(cre, cim, us, vs, 0)
        return out_re[:, :, 0]

    def jets2(self, us, vs):
        """Value and first/second partials, each of shape (p, ncomp)."""
        us = np.atleast_1d(np.asarray(us, dtype=np.float64))
        vs = np.atleast_1d(np.asarray(vs, dtype=np.float64))
        cre, cim = self._complex_coef()
        gre, gim = K.poly_derivs(cre, cim, us, vs, 2)
        return {
            "value": gre[:, :, 0],
            "du": gre[:, :, 1],
            "dv": -gim[:, :, 1],
            "duu": gre[:, :, 2],
            "duv": -gim[:, :, 2],
            "dvv": -gre[:, :, 2],
        }

    def jets3(self, us, vs):
        """jets2 plus the four third partials (exact for the truncation)."""
        us = np.atleast_1d(np.asarray(us, dtype=np.float64))
        vs = np.atleast_1d(np.asarray(vs, dtype=np.float64))
        cre, cim = self._complex_coef()
        gre, gim = K.poly_derivs(cre, cim, us, vs, 3)
        return {
            "value": gre[:, :, 0],
            "du": gre[:, :, 1],
            "dv": -gim[:, :, 1],
            "duu": gre[:, :, 2],
            "duv": -gim[:, :, 2],
            "dvv": -gre[:, :, 2],
            "duuu": gre[:, :, 3],
            "duuv": -gim[:, :, 3],
            "duvv": -gre[:, :, 3],
            "dvvv": gim[:, :, 3],
        }

    def dirichlet_energy(self) -> float:
        k = np.arange(self.modes + 1, dtype=np.float64)
        return float(
            0.5
            * math.pi
            * np.sum(k * (self.cos_coef**2 + self.sin_coef**2))
        )

    def sup_value_norm(self, n_r: int = 64, n_theta: int = 256) -> float:
        """Max Euclidean norm over a polar grid of the closed disc."""
        radii = np.arange(1, n_r + 1) / n_r
        angles = 2.0 * np.pi * np.arange(n_theta) / n_theta
        rr, aa = np.meshgrid(radii, angles, indexing="ij")
        us = np.append((rr * np.cos(aa)).ravel(), 0.0)
        vs = np.append((rr * np.sin(aa)).ravel(), 0.0)
        vals = self.value(us, vs)
        return float(np.max(np.linalg.norm(vals, axis=1)))


def harmonic_extension(boundary_samples, modes: int) -> HarmonicDiscSeries:
    """Harmonic interior extension of uniformly sampled boundary data.

    `boundary_samples` has shape (M, ncomp) with row j sampled at angle
    2*pi*j/M. Truncation keeps `modes` Fourier modes; M must be at least
    max(64, 2*modes + 1) to prevent aliasing of the kept band.
    """
    vals = np.asarray(boundary_samples, dtype=np.float64)
    if vals.ndim == 1:
        vals = vals[:, None]
    m = vals.shape[0]
    if m < _MIN_BOUNDARY_SAMPLES:
        raise AliasingError(
            f"need at least {_MIN_BOUNDARY_SAMPLES} boundary samples, got {m}"
        )
    if m < 2 * modes + 1:
        raise AliasingError(
            f"{m} samples alias the requested {modes} modes "
            f"(need at least {2 * modes + 1})"
        )
    spec = np.fft.rfft(vals, axis=0)
    kmax = min(modes, spec.shape[0] - 1)
    cos_coef = np.zeros((vals.shape[1], modes + 1))
    sin_coef = np.zeros((vals.shape[1], modes + 1))
    cos_coef[:, : kmax + 1] = 2.0 * spec[: kmax + 1].real.T / m
    sin_coef[:, 1 : kmax + 1] = -2.0 * spec[1 : kmax + 1].imag.T / m
    return HarmonicDiscSeries(cos_coef, sin_coef)


def find_plane_zero(series: HarmonicDiscSeries) -> complex:
    """Damped Newton root of the first two series components inside the disc."""
    w = 0.0 + 0.0j
    best_w, best_res = w, np.inf
    for _ in range(60):
        jets = series.jets2(w.real, w.imag)
        fval = jets["value"][0, :2]
        res = float(np.hypot(fval[0], fval[1]))
        if res < best_res:
            best_w, best_res = w, res
        if res < 1e-14:
            return w
        jac = np.array(
            [[jets["du"][0, 0], jets["dv"][0, 0]], [jets["du"][0, 1], jets["dv"][0, 1]]]
        )
        try:
            step = np.linalg.solve(jac, fval)
        except np.linalg.LinAlgError:
            break
        wn = w - complex(step[0], step[1])
        if abs(wn) > 0.999:
            wn = wn / abs(wn) * 0.999
        w = wn
    return best_w


@dataclass(frozen=True)
class DiscAutomorphism:
    """Moebius transform of the unit disc in SU(1,1) normal form.

    phi(w) = (alpha w + beta) / (conj(beta) w + conj(alpha)) with
    |alpha|^2 - |beta|^2 = 1; composition is matrix multiplication.
    """

    alpha: complex
    beta: complex

    @classmethod
    def identity(cls) -> "DiscAutomorphism":
        return cls(1.0 + 0.0j, 0.0j)

    @classmethod
    def from_center(cls, w0: complex) -> "DiscAutomorphism":
        """The automorphism w -> (w + w0)/(1 + conj(w0) w), mapping 0 to w0."""
        aw = abs(w0)
        if aw >= 1.0:
            raise DomainError(f"automorphism center must lie inside the disc, |w0|={aw}")
        lam = 1.0 / math.sqrt(1.0 - aw * aw)
        return cls(lam + 0.0j, lam * w0)

    @classmethod
    def rotation(cls, rho: float) -> "DiscAutomorphism":
        return cls(cmath.exp(0.5j * rho), 0.0j)

    def compose(self, other: "DiscAutomorphism") -> "DiscAutomorphism":
        """Returns self after other: (self.compose(other))(w) = self(other(w))."""
        a = self.alpha * other.alpha + self.beta * np.conj(other.beta)
        b = self.alpha * other.beta + self.beta * np.conj(other.alpha)
        return DiscAutomorphism(complex(a), complex(b))

    def __call__(self, w):
        w = np.asarray(w, dtype=np.complex128)
        return (self.alpha * w + self.beta) / (np.conj(self.beta) * w + np.conj(self.alpha))

    def deriv(self, w):
        w = np.asarray(w, dtype=np.complex128)
        den = np.conj(self.beta) * w + np.conj(self.alpha)
        return 1.0 / (den * den)

    @property
    def center_image(self) -> complex:
        """phi(0), i.e. where the automorphism sends the origin."""
        return complex(self.beta / np.conj(self.alpha))

    def boundary_angle(self, theta):
        """Continuous increasing lift of theta -> arg(phi(e^{i theta}))."""
        theta = np.atleast_1d(np.asarray(theta, dtype=np.float64))
        raw = np.angle(self(np.exp(1j * theta)))
        lifted = np.unwrap(raw)
        # Anchor the branch so the lift stays within one turn of the input.
        lifted += 2.0 * np.pi * np.round((theta[0] - lifted[0]) / (2.0 * np.pi))
        return lifted
