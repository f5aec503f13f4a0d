"""Minimal static SVG line charts (no plotting dependency)."""
from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

from .ldp import ExponentCurve

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf")
W, H = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 160, 30, 50


def _label(c: ExponentCurve, i: int) -> str:
    if "label" in c.meta:
        return str(c.meta["label"])
    parts = [f"{k}={c.meta[k]:.3g}" if isinstance(c.meta[k], float) else f"{k}={c.meta[k]}"
             for k in ("q", "p", "quantity") if k in c.meta]
    return ", ".join(parts) or f"series {i}"


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    step = 10 ** math.floor(math.log10((hi - lo) / count))
    for mult in (1, 2, 5, 10):
        if (hi - lo) / (step * mult) <= count:
            step *= mult
            break
    start = math.ceil(lo / step) * step
    return [start + i * step for i in range(int((hi - start) / step + 1e-9) + 1)]


def render_svg_text(curves: Sequence[ExponentCurve], log_y: bool = False, title: str = "",
                    xlabel: str = "", ylabel: str = "") -> str:
    pts = []
    for c in curves:
        for x, y in list(zip(c.xs, c.ys)) + list(c.markers):
            if math.isfinite(x) and math.isfinite(y) and (y > 0 or not log_y):
                pts.append((float(x), math.log10(y) if log_y else float(y)))
    if pts:
        x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
        y0, y1 = min(p[1] for p in pts), max(p[1] for p in pts)
    else:
        x0, x1, y0, y1 = 0.0, 1.0, 0.0, 1.0
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    pw, ph = W - LEFT - RIGHT, H - TOP - BOTTOM

    def sx(x):
        return LEFT + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return TOP + (1.0 - (y - y0) / (y1 - y0)) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="11">',
           f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>']
    for t in _ticks(x0, x1):
        out.append(f'<line x1="{sx(t):.2f}" y1="{TOP + ph}" x2="{sx(t):.2f}" y2="{TOP + ph + 4}" stroke="#333"/>')
        out.append(f'<text x="{sx(t):.2f}" y="{TOP + ph + 16}" text-anchor="middle">{t:.3g}</text>')
    for t in _ticks(y0, y1):
        lab = f"1e{t:.3g}" if log_y else f"{t:.3g}"
        out.append(f'<line x1="{LEFT - 4}" y1="{sy(t):.2f}" x2="{LEFT}" y2="{sy(t):.2f}" stroke="#333"/>')
        out.append(f'<text x="{LEFT - 6}" y="{sy(t) + 4:.2f}" text-anchor="end">{lab}</text>')
    if title:
        out.append(f'<text x="{LEFT + pw / 2}" y="{TOP - 10}" text-anchor="middle" font-size="13">{escape(title)}</text>')
    if xlabel:
        out.append(f'<text x="{LEFT + pw / 2}" y="{H - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    if ylabel:
        out.append(f'<text x="16" y="{TOP + ph / 2}" text-anchor="middle" '
                   f'transform="rotate(-90 16 {TOP + ph / 2})">{escape(ylabel)}</text>')

    for i, c in enumerate(curves):
        color = _COLORS[i % len(_COLORS)]
        segs, cur = [], []
        for x, y in zip(c.xs, c.ys):
            if math.isfinite(y) and (y > 0 or not log_y):
                cur.append(f"{sx(x):.2f},{sy(math.log10(y) if log_y else y):.2f}")
            elif cur:
                segs.append(cur)
                cur = []
        if cur:
            segs.append(cur)
        for seg in segs:
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{" ".join(seg)}"/>')
        for x, y in c.markers:
            if math.isfinite(y) and (y > 0 or not log_y):
                yy = math.log10(y) if log_y else y
                out.append(f'<circle cx="{sx(x):.2f}" cy="{sy(yy):.2f}" r="4" fill="none" stroke="{color}"/>')
        ly = TOP + 14 + 16 * i
        out.append(f'<line x1="{W - RIGHT + 10}" y1="{ly - 4}" x2="{W - RIGHT + 30}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{W - RIGHT + 34}" y="{ly}">{escape(_label(c, i))}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_svg(curves: Sequence[ExponentCurve], path, log_y: bool = False, **labels) -> None:
    path = Path(path)
    try:
        path.write_text(render_svg_text(curves, log_y=log_y, **labels))
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
