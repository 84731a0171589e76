"""
wavedfs.svgplot — minimal hand-rolled SVG line plots.

Emits self-contained SVG documents with axes, tick labels, and polylines;
log-scale axes are supported for SNR/QFI plots.  Output is deterministic
apart from a version comment line.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

from . import __version__

__all__ = ["line_plot"]

_W, _H = 640, 440
_ML, _MR, _MT, _MB = 70, 20, 30, 50


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _ticks(lo: float, hi: float, log: bool) -> list:
    if log:
        lo_e, hi_e = math.floor(lo), math.ceil(hi)
        step = max(1, (hi_e - lo_e) // 8)
        return [float(e) for e in range(int(lo_e), int(hi_e) + 1, step)]
    span = hi - lo or 1.0
    step = 10 ** math.floor(math.log10(span / 4))
    for mult in (1, 2, 5, 10):
        if span / (step * mult) <= 8:
            step *= mult
            break
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-12 * span:
        out.append(t)
        t += step
    return out


def line_plot(series: Sequence[dict], title: str = "",
              xlabel: str = "", ylabel: str = "",
              logy: bool = False, logx: bool = False) -> str:
    """Render one or more line series to an SVG document string.

    Each series is a dict with keys "x", "y" (sequences) and optional
    "label", "color".  Non-positive values are dropped on log axes.
    """
    palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
               "#8c564b", "#17becf"]
    pts = []
    for s in series:
        xs, ys = [], []
        for x, y in zip(s["x"], s["y"]):
            if logx and x <= 0 or logy and y <= 0:
                continue
            xs.append(math.log10(x) if logx else float(x))
            ys.append(math.log10(y) if logy else float(y))
        pts.append((xs, ys))
    all_x = [x for xs, _ in pts for x in xs] or [0.0, 1.0]
    all_y = [y for _, ys in pts for y in ys] or [0.0, 1.0]
    x0, x1 = min(all_x), max(all_x)
    y0, y1 = min(all_y), max(all_y)
    if x0 == x1:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y0 == y1:
        y0, y1 = y0 - 0.5, y1 + 0.5

    def sx(x):
        return _ML + (x - x0) / (x1 - x0) * (_W - _ML - _MR)

    def sy(y):
        return _H - _MB - (y - y0) / (y1 - y0) * (_H - _MT - _MB)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" '
           f'height="{_H}" viewBox="0 0 {_W} {_H}">',
           f"<!-- wavedfs {__version__} -->",
           f'<rect width="{_W}" height="{_H}" fill="white"/>']
    # axes
    out.append(f'<line x1="{_ML}" y1="{_H - _MB}" x2="{_W - _MR}" '
               f'y2="{_H - _MB}" stroke="black"/>')
    out.append(f'<line x1="{_ML}" y1="{_MT}" x2="{_ML}" y2="{_H - _MB}" '
               f'stroke="black"/>')
    for t in _ticks(x0, x1, logx):
        px = sx(t)
        label = f"1e{int(t)}" if logx else _fmt(t)
        out.append(f'<line x1="{px:.1f}" y1="{_H - _MB}" x2="{px:.1f}" '
                   f'y2="{_H - _MB + 5}" stroke="black"/>')
        out.append(f'<text x="{px:.1f}" y="{_H - _MB + 18}" font-size="11" '
                   f'text-anchor="middle">{label}</text>')
    for t in _ticks(y0, y1, logy):
        py = sy(t)
        label = f"1e{int(t)}" if logy else _fmt(t)
        out.append(f'<line x1="{_ML - 5}" y1="{py:.1f}" x2="{_ML}" '
                   f'y2="{py:.1f}" stroke="black"/>')
        out.append(f'<text x="{_ML - 8}" y="{py + 4:.1f}" font-size="11" '
                   f'text-anchor="end">{label}</text>')
    if title:
        out.append(f'<text x="{_W / 2}" y="{_MT - 10}" font-size="14" '
                   f'text-anchor="middle">{title}</text>')
    if xlabel:
        out.append(f'<text x="{_W / 2}" y="{_H - 12}" font-size="12" '
                   f'text-anchor="middle">{xlabel}</text>')
    if ylabel:
        out.append(f'<text x="16" y="{_H / 2}" font-size="12" '
                   f'text-anchor="middle" '
                   f'transform="rotate(-90 16 {_H / 2})">{ylabel}</text>')
    for idx, (s, (xs, ys)) in enumerate(zip(series, pts)):
        color = s.get("color", palette[idx % len(palette)])
        path = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))
        out.append(f'<polyline points="{path}" fill="none" '
                   f'stroke="{color}" stroke-width="1.5"/>')
        if s.get("label"):
            ly = _MT + 16 + 16 * idx
            out.append(f'<line x1="{_W - _MR - 120}" y1="{ly - 4}" '
                       f'x2="{_W - _MR - 95}" y2="{ly - 4}" '
                       f'stroke="{color}" stroke-width="1.5"/>')
            out.append(f'<text x="{_W - _MR - 90}" y="{ly}" font-size="11">'
                       f'{s["label"]}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
