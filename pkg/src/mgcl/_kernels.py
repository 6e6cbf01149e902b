"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

Two kernels dominate runtime everywhere in the package:

* ``tape_jets``   -- second-order jet evaluation of a compiled expression
                     tape at many points (height fields of graph surfaces),
* ``poly_derivs`` -- simultaneous evaluation of complex polynomials and
                     their first three derivatives at many points (harmonic
                     disc series: charts, probes, residual grids).

Backend selection: the environment variable ``MGCL_NUMBA`` picks the path.
``0/false/off`` forces the numpy fallback, ``1/true/on`` requires numba,
anything else (or unset) uses numba when it is importable. Both
implementations are exported regardless of the active choice so the
benchmark in ``benchmarks/bench_kernels.py`` can time them side by side.
"""

from __future__ import annotations

import os

import numpy as np

# Tape opcodes. A tape slot is (code, arg1, arg2, const); arg fields index
# earlier slots, const carries literal values and integer power exponents.
OP_CONST = 0
OP_X = 1
OP_Y = 2
OP_ADD = 3
OP_SUB = 4
OP_MUL = 5
OP_DIV = 6
OP_POW = 7
OP_NEG = 8
OP_SIN = 9
OP_COS = 10
OP_EXP = 11
OP_LOG = 12
OP_ATAN = 13

# Jet slot layout: (f, fx, fy, fxx, fxy, fyy).


def _tape_jets_numpy(codes, a1, a2, consts, xs, ys):
    n = xs.shape[0]
    ns = codes.shape[0]
    regs = np.empty((ns, 6, n))
    zeros = np.zeros(n)
    ones = np.ones(n)
    with np.errstate(all="ignore"):
        for s in range(ns):
            c = codes[s]
            r = regs[s]
            if c == OP_CONST:
                r[0] = consts[s]
                r[1:] = 0.0
            elif c == OP_X:
                r[0] = xs
                r[1] = ones
                r[2:] = 0.0
            elif c == OP_Y:
                r[0] = ys
                r[1] = zeros
                r[2] = ones
                r[3:] = 0.0
            elif c == OP_ADD:
                np.add(regs[a1[s]], regs[a2[s]], out=r)
            elif c == OP_SUB:
                np.subtract(regs[a1[s]], regs[a2[s]], out=r)
            elif c == OP_MUL:
                f = regs[a1[s]]
                g = regs[a2[s]]
                r[0] = f[0] * g[0]
                r[1] = f[1] * g[0] + f[0] * g[1]
                r[2] = f[2] * g[0] + f[0] * g[2]
                r[3] = f[3] * g[0] + 2.0 * f[1] * g[1] + f[0] * g[3]
                r[4] = f[4] * g[0] + f[1] * g[2] + f[2] * g[1] + f[0] * g[4]
                r[5] = f[5] * g[0] + 2.0 * f[2] * g[2] + f[0] * g[5]
            elif c == OP_DIV:
                f = regs[a1[s]]
                g = regs[a2[s]]
                h = f[0] / g[0]
                hx = (f[1] - h * g[1]) / g[0]
                hy = (f[2] - h * g[2]) / g[0]
                r[0] = h
                r[1] = hx
                r[2] = hy
                r[3] = (f[3] - 2.0 * hx * g[1] - h * g[3]) / g[0]
                r[4] = (f[4] - hx * g[2] - hy * g[1] - h * g[4]) / g[0]
                r[5] = (f[5] - 2.0 * hy * g[2] - h * g[5]) / g[0]
            elif c == OP_POW:
                u = regs[a1[s]]
                p = consts[s]
                up = u[0] ** p
                up1 = p * u[0] ** (p - 1.0)
                up2 = p * (p - 1.0) * u[0] ** (p - 2.0)
                r[0] = up
                r[1] = up1 * u[1]
                r[2] = up1 * u[2]
                r[3] = up2 * u[1] * u[1] + up1 * u[3]
                r[4] = up2 * u[1] * u[2] + up1 * u[4]
                r[5] = up2 * u[2] * u[2] + up1 * u[5]
            elif c == OP_NEG:
                np.negative(regs[a1[s]], out=r)
            else:
                u = regs[a1[s]]
                if c == OP_SIN:
                    d1 = np.cos(u[0])
                    d2 = -np.sin(u[0])
                    r[0] = np.sin(u[0])
                elif c == OP_COS:
                    d1 = -np.sin(u[0])
                    d2 = -np.cos(u[0])
                    r[0] = np.cos(u[0])
                elif c == OP_EXP:
                    r[0] = np.exp(u[0])
                    d1 = r[0]
                    d2 = r[0]
                elif c == OP_LOG:
                    r[0] = np.log(u[0])
                    d1 = 1.0 / u[0]
                    d2 = -d1 * d1
                else:  # OP_ATAN
                    r[0] = np.arctan(u[0])
                    d1 = 1.0 / (1.0 + u[0] * u[0])
                    d2 = -2.0 * u[0] * d1 * d1
                r[1] = d1 * u[1]
                r[2] = d1 * u[2]
                r[3] = d2 * u[1] * u[1] + d1 * u[3]
                r[4] = d2 * u[1] * u[2] + d1 * u[4]
                r[5] = d2 * u[2] * u[2] + d1 * u[5]
    return np.ascontiguousarray(regs[ns - 1].T)


def _poly_derivs_numpy(cre, cim, us, vs, nder):
    ncomp, nk = cre.shape
    npts = us.shape[0]
    w = us + 1j * vs
    coef = cre + 1j * cim  # (ncomp, K+1)
    out = np.zeros((npts, ncomp, nder + 1), dtype=np.complex128)
    # Extended Horner, vectorized over points: d[m] accumulates p^(m)/m!.
    d = np.zeros((nder + 1, ncomp, npts), dtype=np.complex128)
    d[0] = coef[:, nk - 1][:, None]
    for k in range(nk - 2, -1, -1):
        for m in range(nder, 0, -1):
            d[m] = d[m] * w + d[m - 1]
        d[0] = d[0] * w + coef[:, k][:, None]
    fact = 1.0
    for m in range(nder + 1):
        if m > 1:
            fact *= m
        out[:, :, m] = (d[m] * fact).T
    return out.real.copy(), out.imag.copy()


_env = os.environ.get("MGCL_NUMBA", "auto").strip().lower()
_want_numba = _env not in ("0", "false", "off", "no")
_force_numba = _env in ("1", "true", "on", "yes")

tape_jets_numba = None
poly_derivs_numba = None

if _want_numba:
    try:
        from numba import njit
    except ImportError:
        if _force_numba:
            raise
        njit = None
else:
    njit = None

if njit is not None:

    @njit(cache=True, error_model="numpy")
    def _tape_jets_nb(codes, a1, a2, consts, xs, ys):  # pragma: no cover
        n = xs.shape[0]
        ns = codes.shape[0]
        out = np.empty((n, 6))
        regs = np.empty((ns, 6))
        for p in range(n):
            x = xs[p]
            y = ys[p]
            for s in range(ns):
                c = codes[s]
                if c == OP_CONST:
                    regs[s, 0] = consts[s]
                    for q in range(1, 6):
                        regs[s, q] = 0.0
                elif c == OP_X:
                    regs[s, 0] = x
                    regs[s, 1] = 1.0
                    regs[s, 2] = 0.0
                    regs[s, 3] = 0.0
                    regs[s, 4] = 0.0
                    regs[s, 5] = 0.0
                elif c == OP_Y:
                    regs[s, 0] = y
                    regs[s, 1] = 0.0
                    regs[s, 2] = 1.0
                    regs[s, 3] = 0.0
                    regs[s, 4] = 0.0
                    regs[s, 5] = 0.0
                elif c == OP_ADD:
                    i = a1[s]
                    j = a2[s]
                    for q in range(6):
                        regs[s, q] = regs[i, q] + regs[j, q]
                elif c == OP_SUB:
                    i = a1[s]
                    j = a2[s]
                    for q in range(6):
                        regs[s, q] = regs[i, q] - regs[j, q]
                elif c == OP_MUL:
                    i = a1[s]
                    j = a2[s]
                    f0 = regs[i, 0]
                    f1 = regs[i, 1]
                    f2 = regs[i, 2]
                    g0 = regs[j, 0]
                    g1 = regs[j, 1]
                    g2 = regs[j, 2]
                    regs[s, 0] = f0 * g0
                    regs[s, 1] = f1 * g0 + f0 * g1
                    regs[s, 2] = f2 * g0 + f0 * g2
                    regs[s, 3] = regs[i, 3] * g0 + 2.0 * f1 * g1 + f0 * regs[j, 3]
                    regs[s, 4] = regs[i, 4] * g0 + f1 * g2 + f2 * g1 + f0 * regs[j, 4]
                    regs[s, 5] = regs[i, 5] * g0 + 2.0 * f2 * g2 + f0 * regs[j, 5]
                elif c == OP_DIV:
                    i = a1[s]
                    j = a2[s]
                    g0 = regs[j, 0]
                    h = regs[i, 0] / g0
                    hx = (regs[i, 1] - h * regs[j, 1]) / g0
                    hy = (regs[i, 2] - h * regs[j, 2]) / g0
                    regs[s, 0] = h
                    regs[s, 1] = hx
                    regs[s, 2] = hy
                    regs[s, 3] = (regs[i, 3] - 2.0 * hx * regs[j, 1] - h * regs[j, 3]) / g0
                    regs[s, 4] = (regs[i, 4] - hx * regs[j, 2] - hy * regs[j, 1] - h * regs[j, 4]) / g0
                    regs[s, 5] = (regs[i, 5] - 2.0 * hy * regs[j, 2] - h * regs[j, 5]) / g0
                elif c == OP_POW:
                    i = a1[s]
                    pw = consts[s]
                    u0 = regs[i, 0]
                    up = u0 ** pw
                    up1 = pw * u0 ** (pw - 1.0)
                    up2 = pw * (pw - 1.0) * u0 ** (pw - 2.0)
                    u1 = regs[i, 1]
                    u2 = regs[i, 2]
                    regs[s, 0] = up
                    regs[s, 1] = up1 * u1
                    regs[s, 2] = up1 * u2
                    regs[s, 3] = up2 * u1 * u1 + up1 * regs[i, 3]
                    regs[s, 4] = up2 * u1 * u2 + up1 * regs[i, 4]
                    regs[s, 5] = up2 * u2 * u2 + up1 * regs[i, 5]
                elif c == OP_NEG:
                    i = a1[s]
                    for q in range(6):
                        regs[s, q] = -regs[i, q]
                else:
                    i = a1[s]
                    u0 = regs[i, 0]
                    if c == OP_SIN:
                        v = np.sin(u0)
                        d1 = np.cos(u0)
                        d2 = -v
                    elif c == OP_COS:
                        v = np.cos(u0)
                        d1 = -np.sin(u0)
                        d2 = -v
                    elif c == OP_EXP:
                        v = np.exp(u0)
                        d1 = v
                        d2 = v
                    elif c == OP_LOG:
                        v = np.log(u0)
                        d1 = 1.0 / u0
                        d2 = -d1 * d1
                    else:
                        v = np.arctan(u0)
                        d1 = 1.0 / (1.0 + u0 * u0)
                        d2 = -2.0 * u0 * d1 * d1
                    u1 = regs[i, 1]
                    u2 = regs[i, 2]
                    regs[s, 0] = v
                    regs[s, 1] = d1 * u1
                    regs[s, 2] = d1 * u2
                    regs[s, 3] = d2 * u1 * u1 + d1 * regs[i, 3]
                    regs[s, 4] = d2 * u1 * u2 + d1 * regs[i, 4]
                    regs[s, 5] = d2 * u2 * u2 + d1 * regs[i, 5]
            for q in range(6):
                out[p, q] = regs[ns - 1, q]
        return out

    @njit(cache=True, error_model="numpy")
    def _poly_derivs_nb(cre, cim, us, vs, nder):  # pragma: no cover
        ncomp, nk = cre.shape
        npts = us.shape[0]
        out_re = np.zeros((npts, ncomp, nder + 1))
        out_im = np.zeros((npts, ncomp, nder + 1))
        d = np.zeros(nder + 1, dtype=np.complex128)
        for p in range(npts):
            w = complex(us[p], vs[p])
            for c in range(ncomp):
                for m in range(nder + 1):
                    d[m] = 0.0
                d[0] = complex(cre[c, nk - 1], cim[c, nk - 1])
                for k in range(nk - 2, -1, -1):
                    for m in range(nder, 0, -1):
                        d[m] = d[m] * w + d[m - 1]
                    d[0] = d[0] * w + complex(cre[c, k], cim[c, k])
                fact = 1.0
                for m in range(nder + 1):
                    if m > 1:
                        fact *= m
                    out_re[p, c, m] = d[m].real * fact
                    out_im[p, c, m] = d[m].imag * fact
        return out_re, out_im

    tape_jets_numba = _tape_jets_nb
    poly_derivs_numba = _poly_derivs_nb

tape_jets_numpy = _tape_jets_numpy
poly_derivs_numpy = _poly_derivs_numpy

USING_NUMBA = tape_jets_numba is not None

if USING_NUMBA:
    tape_jets = tape_jets_numba
    poly_derivs = poly_derivs_numba
else:
    tape_jets = tape_jets_numpy
    poly_derivs = poly_derivs_numpy


def backend_name() -> str:
    return "numba" if USING_NUMBA else "numpy"


def warmup() -> None:
    """Trigger JIT compilation so timed paths do not pay for it."""
    codes = np.array([OP_X, OP_Y, OP_MUL], dtype=np.int64)
    a1 = np.array([-1, -1, 0], dtype=np.int64)
    a2 = np.array([-1, -1, 1], dtype=np.int64)
    consts = np.zeros(3)
    pts = np.array([0.1, 0.2])
    tape_jets(codes, a1, a2, consts, pts, pts)
    cre = np.array([[1.0, 0.5]])
    cim = np.array([[0.0, 0.25]])
    poly_derivs(cre, cim, pts, pts, 3)
