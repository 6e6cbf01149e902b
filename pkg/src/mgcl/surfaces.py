"""Graph surfaces X(x, y) = (x, y, phi_1, ..., phi_{n-2}) over a disc.

Provides jet evaluation of the immersion, the standard raw unit normal
basis of a graph, its Gram-Schmidt orthonormalization, sup-norm scans,
and the built-in surface families used as fixtures throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ArityError,
    ConditioningError,
    DomainError,
    ParseError,
    PreconditionError,
)
from .expressions import (
    VAR_X,
    VAR_Y,
    Expr,
    ScalarField2D,
    add,
    const,
    div,
    mul,
    parse_expression,
    powi,
    sub,
    substitute,
    unary,
)

_BOUNDARY_SLACK = 1e-12


@dataclass(frozen=True)
class Jet2:
    """Second-order jet of an R^n valued map at one parameter point.

    d1 rows are the two first partials, d2 rows are (11, 12, 22); the
    mixed partial has a single slot, so symmetry is structural.
    """

    point: tuple
    value: np.ndarray
    d1: np.ndarray  # (2, n)
    d2: np.ndarray  # (3, n)

    def __post_init__(self):
        for arr in (self.value, self.d1, self.d2):
            arr.setflags(write=False)

    @property
    def ambient_dim(self) -> int:
        return self.value.shape[0]


@dataclass(frozen=True)
class GraphSurface:
    """Immersion (x, y, phi_1, ..., phi_{n-2}) over the closed disc B_R."""

    heights: tuple
    radius: float
    family: str = "custom"

    def __post_init__(self):
        if len(self.heights) < 1:
            raise ArityError("a graph surface needs at least one height field")
        if not (self.radius > 0.0) or not math.isfinite(self.radius):
            raise DomainError(f"radius must be positive, got {self.radius}")
        object.__setattr__(self, "heights", tuple(self.heights))

    @property
    def ambient_dim(self) -> int:
        return 2 + len(self.heights)

    def describe(self) -> dict:
        return {
            "family": self.family,
            "radius": self.radius,
            "heights": [h.to_text() for h in self.heights],
        }


def make_family(kind: str, params, radius: float) -> GraphSurface:
    """Construct a built-in surface family.

    kinds: ``plane`` (params a1, b1, a2, b2, ... one pair per height),
    ``holomorphic`` (complex polynomial coefficients c0..cd, heights
    Re Phi and Im Phi, ambient dimension 4), ``scherk`` (no params,
    radius below pi/2), ``custom`` (expression strings).
    """
    if kind == "plane":
        params = [float(p) for p in params]
        if len(params) == 0:
            raise ArityError("plane family needs at least one (a, b) pair")
        if len(params) % 2 != 0:
            raise ArityError("plane family params must be (a, b) pairs")
        heights = []
        for i in range(0, len(params), 2):
            a, b = params[i], params[i + 1]
            expr = add(mul(const(a), VAR_X), mul(const(b), VAR_Y))
            heights.append(ScalarField2D(expr, name=f"{a}*x + {b}*y"))
        return GraphSurface(tuple(heights), radius, family="plane")

    if kind == "holomorphic":
        coeffs = [complex(c) for c in params]
        if len(coeffs) == 0:
            raise ArityError("holomorphic family needs polynomial coefficients")
        re_expr, im_expr = _holomorphic_parts(coeffs)
        label = _poly_label(coeffs)
        return GraphSurface(
            (
                ScalarField2D(re_expr, name=f"Re({label})"),
                ScalarField2D(im_expr, name=f"Im({label})"),
            ),
            radius,
            family="holomorphic",
        )

    if kind == "scherk":
        if len(list(params)) != 0:
            raise ArityError("scherk family takes no params")
        if radius >= math.pi / 2 - 1e-9:
            raise DomainError(
                f"scherk radius must stay below pi/2 (cos positivity), got {radius}"
            )
        expr = unary("log", div(unary("cos", VAR_X), unary("cos", VAR_Y)))
        return GraphSurface(
            (ScalarField2D(expr, name="log(cos(x)/cos(y))"),),
            radius,
            family="scherk",
        )

    if kind == "custom":
        texts = list(params)
        if len(texts) == 0:
            raise ArityError("custom family needs at least one expression string")
        heights = []
        for t in texts:
            if not isinstance(t, str):
                raise ParseError(f"custom heights must be strings, got {t!r}")
            heights.append(ScalarField2D.parse(t))
        return GraphSurface(tuple(heights), radius, family="custom")

    raise ValueError(f"unknown family kind {kind!r}")


def _holomorphic_parts(coeffs) -> tuple[Expr, Expr]:
    """Expand Re and Im of sum_k c_k z^k as shared expression DAGs."""
    re_k, im_k = const(1.0), const(0.0)  # z^0
    re_terms: list[Expr] = []
    im_terms: list[Expr] = []
    for k, c in enumerate(coeffs):
        if k > 0:
            re_next = sub(mul(re_k, VAR_X), mul(im_k, VAR_Y))
            im_next = add(mul(re_k, VAR_Y), mul(im_k, VAR_X))
            re_k, im_k = re_next, im_next
        a, b = c.real, c.imag
        if a != 0.0 or b != 0.0:
            re_terms.append(_lin_comb(a, re_k, -b, im_k))
            im_terms.append(_lin_comb(a, im_k, b, re_k))
    re_expr = _sum_terms(re_terms)
    im_expr = _sum_terms(im_terms)
    return re_expr, im_expr


def _lin_comb(a: float, ea: Expr, b: float, eb: Expr) -> Expr:
    terms = []
    if a != 0.0:
        terms.append(ea if a == 1.0 else mul(const(a), ea))
    if b != 0.0:
        terms.append(eb if b == 1.0 else mul(const(b), eb))
    return _sum_terms(terms)


def _sum_terms(terms) -> Expr:
    if not terms:
        return const(0.0)
    out = terms[0]
    for t in terms[1:]:
        out = add(out, t)
    return out


def _poly_label(coeffs) -> str:
    parts = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        cz = f"{c.real:g}" if c.imag == 0 else f"({c.real:g}{c.imag:+g}i)"
        if k == 0:
            parts.append(cz)
        else:
            zk = "z" if k == 1 else f"z^{k}"
            parts.append(zk if c == 1 else f"{cz}*{zk}")
    return " + ".join(parts) if parts else "0"


def rotate_surface(surface: GraphSurface, angle: float) -> GraphSurface:
    """Precompose the heights with a rotation of the (x, y) domain."""
    c, s = math.cos(angle), math.sin(angle)
    x_rot = add(mul(const(c), VAR_X), mul(const(-s), VAR_Y))
    y_rot = add(mul(const(s), VAR_X), mul(const(c), VAR_Y))
    heights = tuple(
        ScalarField2D(substitute(h.expression, x_rot, y_rot), name=f"rot({h.name})")
        for h in surface.heights
    )
    return GraphSurface(heights, surface.radius, family=surface.family)


def eval_jet_batch(surface: GraphSurface, xs, ys, clip_domain: bool = True):
    """Jets of the immersion at many points.

    Returns (value, d1, d2) with shapes (p, n), (p, 2, n), (p, 3, n).
    The first two ambient slots carry the exact graph pattern.
    """
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    ys = np.ascontiguousarray(ys, dtype=np.float64)
    if clip_domain:
        r2max = surface.radius**2 * (1.0 + _BOUNDARY_SLACK)
        rr = xs * xs + ys * ys
        if np.any(rr > r2max):
            bad = int(np.argmax(rr))
            raise DomainError(
                f"point ({xs[bad]:.6g}, {ys[bad]:.6g}) outside closed disc "
                f"of radius {surface.radius:.6g}"
            )
    p = xs.shape[0]
    n = surface.ambient_dim
    value = np.zeros((p, n))
    d1 = np.zeros((p, 2, n))
    d2 = np.zeros((p, 3, n))
    value[:, 0] = xs
    value[:, 1] = ys
    d1[:, 0, 0] = 1.0
    d1[:, 1, 1] = 1.0
    for s, h in enumerate(surface.heights):
        jet = h.jet_batch(xs, ys)
        value[:, 2 + s] = jet[:, 0]
        d1[:, 0, 2 + s] = jet[:, 1]
        d1[:, 1, 2 + s] = jet[:, 2]
        d2[:, 0, 2 + s] = jet[:, 3]
        d2[:, 1, 2 + s] = jet[:, 4]
        d2[:, 2, 2 + s] = jet[:, 5]
    return value, d1, d2


def eval_jet(surface: GraphSurface, point) -> Jet2:
    """Exact second-order jet of the immersion at one point of B_R."""
    x, y = float(point[0]), float(point[1])
    value, d1, d2 = eval_jet_batch(surface, np.array([x]), np.array([y]))
    return Jet2((x, y), value[0], d1[0], d2[0])


def _is_graph_jet(jet: Jet2) -> bool:
    return (
        jet.d1[0, 0] == 1.0
        and jet.d1[0, 1] == 0.0
        and jet.d1[1, 0] == 0.0
        and jet.d1[1, 1] == 1.0
        and np.all(jet.d2[:, :2] == 0.0)
    )


def raw_normals(jet: Jet2) -> np.ndarray:
    """The standard unit normal basis of a graph at a jet, one row per height.

    Row s is (-phi_{s,x}, -phi_{s,y}, 0, ..., 1 at slot 2+s, ..., 0)
    divided by sqrt(1 + |grad phi_s|^2).
    """
    if not _is_graph_jet(jet):
        raise PreconditionError(
            "jet is not in graph form (x, y, heights); "
            "raw normals are defined for graph parametrizations only"
        )
    n = jet.ambient_dim
    m = n - 2
    out = np.zeros((m, n))
    for s in range(m):
        gx = jet.d1[0, 2 + s]
        gy = jet.d1[1, 2 + s]
        scale = 1.0 / math.sqrt(1.0 + gx * gx + gy * gy)
        out[s, 0] = -gx * scale
        out[s, 1] = -gy * scale
        out[s, 2 + s] = scale
    return out


@dataclass(frozen=True)
class NormalFrame:
    """Raw graph normal basis and its Gram-Schmidt orthonormalization."""

    raw: np.ndarray  # (n-2, n)
    ortho: np.ndarray  # (n-2, n)
    at: Jet2

    def __post_init__(self):
        self.raw.setflags(write=False)
        self.ortho.setflags(write=False)

    def __len__(self) -> int:
        return self.raw.shape[0]


_GRAM_DET_FLOOR = 1e-14


def orthonormal_frame(jet: Jet2) -> NormalFrame:
    """Orthonormalize the raw normal basis (modified Gram-Schmidt, listed order).

    The first output vector equals the first raw normal; the span is
    preserved. Near-dependent input raises ConditioningError with the
    Gram determinant attached.
    """
    raw = raw_normals(jet)
    gram = raw @ raw.T
    det = float(np.linalg.det(gram))
    if det <= _GRAM_DET_FLOOR:
        raise ConditioningError(
            f"raw normal basis nearly dependent (Gram determinant {det:.3e})",
            gram_det=det,
        )
    m = raw.shape[0]
    ortho = raw.copy()
    for i in range(m):
        v = ortho[i]
        for _ in range(2):  # re-orthogonalized MGS pass
            for j in range(i):
                v = v - (v @ ortho[j]) * ortho[j]
        nv = np.linalg.norm(v)
        if nv < 1e-12:
            raise ConditioningError(
                f"Gram-Schmidt breakdown at vector {i} (norm {nv:.3e})",
                gram_det=det,
            )
        ortho[i] = v / nv
    return NormalFrame(raw=raw, ortho=ortho, at=jet)


def sup_norm(surface: GraphSurface, samples_per_axis: int) -> float:
    """Max of |X| over a nested polar grid including the boundary circle.

    Radii are R*k/m for k = 1..m plus the center, angles 2*pi*j/(4m);
    doubling m refines the grid in a nested way, so the scan is monotone
    nondecreasing under refinement.
    """
    m = int(samples_per_axis)
    if m < 16:
        raise ValueError(f"samples_per_axis must be >= 16, got {m}")
    radii = surface.radius * (np.arange(1, m + 1) / m)
    angles = 2.0 * np.pi * np.arange(4 * m) / (4 * m)
    rr, aa = np.meshgrid(radii, angles, indexing="ij")
    xs = (rr * np.cos(aa)).ravel()
    ys = (rr * np.sin(aa)).ravel()
    xs = np.append(xs, 0.0)
    ys = np.append(ys, 0.0)
    # Rounding can push boundary nodes marginally outside the closed disc.
    value, _, _ = eval_jet_batch(surface, xs, ys, clip_domain=False)
    return float(np.max(np.linalg.norm(value, axis=1)))
