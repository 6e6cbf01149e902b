"""Minimal self-contained SVG line plots for sweep and decay reports.

The writer is deliberately hand-rolled: output bytes depend only on the
data and style (the only run-dependent line is the leading version
comment), and the files reference no external assets.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from . import __version__

_WIDTH = 640
_HEIGHT = 440
_MARGIN_L = 72
_MARGIN_R = 24
_MARGIN_T = 36
_MARGIN_B = 56


@dataclass(frozen=True)
class PlotStyle:
    title: str = ""
    x_label: str = "R"
    y_label: str = "value"
    x_log: bool = False
    y_log: bool = False
    asymptote: float | None = None


def _nice_ticks(lo: float, hi: float, target: int = 5):
    if hi <= lo:
        hi = lo + 1.0
    span = hi - lo
    step = 10.0 ** math.floor(math.log10(span / target))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if span / (step * mult) <= target:
            step *= mult
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-12 * span:
        ticks.append(0.0 if abs(t) < 1e-12 * span else t)
        t += step
    return ticks


def _log_ticks(lo: float, hi: float):
    lo_e = math.floor(math.log10(lo))
    hi_e = math.ceil(math.log10(hi))
    return [10.0**e for e in range(lo_e, hi_e + 1) if lo <= 10.0**e <= hi * (1 + 1e-12)]


def _fmt(v: float) -> str:
    return f"{v:g}"


def emit_plot(points, style: PlotStyle, path) -> bool:
    """Write a line plot; returns False (with a warning) for empty data."""
    pts = [
        (float(x), float(y))
        for x, y in points
        if math.isfinite(x) and math.isfinite(y)
    ]
    if style.x_log:
        pts = [p for p in pts if p[0] > 0.0]
    if style.y_log:
        pts = [p for p in pts if p[1] > 0.0]
    if not pts:
        warnings.warn("emit_plot: no finite data points, file not written")
        return False

    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if style.asymptote is not None and math.isfinite(style.asymptote):
        if not style.y_log or style.asymptote > 0:
            y_lo = min(y_lo, style.asymptote)
            y_hi = max(y_hi, style.asymptote)

    def pad(lo, hi, logscale):
        if logscale:
            llo, lhi = math.log10(lo), math.log10(hi)
            span = max(lhi - llo, 1e-3)
            return 10 ** (llo - 0.05 * span), 10 ** (lhi + 0.05 * span)
        span = max(hi - lo, 1e-12 * (1 + abs(hi)))
        return lo - 0.05 * span, hi + 0.05 * span

    x_lo, x_hi = pad(x_lo, x_hi, style.x_log)
    y_lo, y_hi = pad(y_lo, y_hi, style.y_log)

    inner_w = _WIDTH - _MARGIN_L - _MARGIN_R
    inner_h = _HEIGHT - _MARGIN_T - _MARGIN_B

    def sx(x):
        t = (math.log10(x) - math.log10(x_lo)) / (math.log10(x_hi) - math.log10(x_lo)) \
            if style.x_log else (x - x_lo) / (x_hi - x_lo)
        return _MARGIN_L + t * inner_w

    def sy(y):
        t = (math.log10(y) - math.log10(y_lo)) / (math.log10(y_hi) - math.log10(y_lo)) \
            if style.y_log else (y - y_lo) / (y_hi - y_lo)
        return _MARGIN_T + (1.0 - t) * inner_h

    x_ticks = _log_ticks(x_lo, x_hi) if style.x_log else _nice_ticks(x_lo, x_hi)
    y_ticks = _log_ticks(y_lo, y_hi) if style.y_log else _nice_ticks(y_lo, y_hi)

    el = []
    el.append(f"<!-- mgcl {__version__} -->")
    el.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" '
        f'height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">'
    )
    el.append(f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>')
    el.append(
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{inner_w}" '
        f'height="{inner_h}" fill="none" stroke="black" stroke-width="1"/>'
    )
    for t in x_ticks:
        px = sx(t)
        el.append(
            f'<line x1="{px:.2f}" y1="{_MARGIN_T + inner_h}" x2="{px:.2f}" '
            f'y2="{_MARGIN_T + inner_h + 5}" stroke="black" stroke-width="1"/>'
        )
        el.append(
            f'<text x="{px:.2f}" y="{_MARGIN_T + inner_h + 18}" font-family="monospace" '
            f'font-size="11" text-anchor="middle">{_fmt(t)}</text>'
        )
    for t in y_ticks:
        py = sy(t)
        el.append(
            f'<line x1="{_MARGIN_L - 5}" y1="{py:.2f}" x2="{_MARGIN_L}" '
            f'y2="{py:.2f}" stroke="black" stroke-width="1"/>'
        )
        el.append(
            f'<text x="{_MARGIN_L - 8}" y="{py + 4:.2f}" font-family="monospace" '
            f'font-size="11" text-anchor="end">{_fmt(t)}</text>'
        )
    if style.title:
        el.append(
            f'<text x="{_WIDTH / 2:.0f}" y="{_MARGIN_T - 12}" font-family="monospace" '
            f'font-size="14" text-anchor="middle">{style.title}</text>'
        )
    el.append(
        f'<text x="{_MARGIN_L + inner_w / 2:.0f}" y="{_HEIGHT - 16}" '
        f'font-family="monospace" font-size="12" text-anchor="middle">{style.x_label}</text>'
    )
    el.append(
        f'<text x="18" y="{_MARGIN_T + inner_h / 2:.0f}" font-family="monospace" '
        f'font-size="12" text-anchor="middle" transform="rotate(-90 18 '
        f'{_MARGIN_T + inner_h / 2:.0f})">{style.y_label}</text>'
    )
    if style.asymptote is not None and math.isfinite(style.asymptote):
        if not style.y_log or style.asymptote > 0:
            py = sy(style.asymptote)
            el.append(
                f'<line x1="{_MARGIN_L}" y1="{py:.2f}" x2="{_MARGIN_L + inner_w}" '
                f'y2="{py:.2f}" stroke="#888888" stroke-width="1" stroke-dasharray="6,4"/>'
            )
            el.append(
                f'<text x="{_MARGIN_L + inner_w - 4}" y="{py - 5:.2f}" '
                f'font-family="monospace" font-size="11" text-anchor="end" '
                f'fill="#555555">asymptote {_fmt(style.asymptote)}</text>'
            )
    if len(pts) > 1:
        path_d = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
        el.append(
            f'<polyline points="{path_d}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>'
        )
    for x, y in pts:
        el.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" fill="#1f77b4"/>')
    el.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(el) + "\n")
    return True
