"""Minimal SVG line plots with byte-stable output."""
from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 640, 420
MARGIN = 60
STYLES = ("stroke:#1f4e79;stroke-width:1.5", "stroke:#b03a2e;stroke-width:1.5;stroke-dasharray:6,4")


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def line_plot(x, curves: list[tuple[str, np.ndarray]], xlabel: str = "", ylabel: str = "",
              title: str = "") -> str:
    """Render ``curves`` (label, y-values) against a shared ``x`` as an SVG document."""
    x = np.asarray(x, dtype=float)
    ys = [np.asarray(y, dtype=float) for _, y in curves]
    x0, x1 = float(x.min()), float(x.max())
    y0 = min(0.0, min(float(y.min()) for y in ys))
    y1 = max(float(y.max()) for y in ys)
    if y1 == y0:
        y1 = y0 + 1.0
    pw, ph = WIDTH - 2 * MARGIN, HEIGHT - 2 * MARGIN

    def sx(v):
        return MARGIN + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return HEIGHT - MARGIN - (v - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<line x1="{MARGIN}" y1="{_fmt(sy(0.0))}" x2="{WIDTH - MARGIN}" y2="{_fmt(sy(0.0))}" '
        'style="stroke:black;stroke-width:1"/>',
        f'<line x1="{_fmt(sx(min(max(0.0, x0), x1)))}" y1="{MARGIN}" '
        f'x2="{_fmt(sx(min(max(0.0, x0), x1)))}" y2="{HEIGHT - MARGIN}" style="stroke:black;stroke-width:1"/>',
    ]
    for v, anchor in ((x0, "start"), (x1, "end")):
        out.append(f'<text x="{_fmt(sx(v))}" y="{HEIGHT - MARGIN + 18}" font-size="12" '
                   f'text-anchor="{anchor}">{v:g}</text>')
    out.append(f'<text x="{MARGIN - 6}" y="{_fmt(sy(y1))}" font-size="12" text-anchor="end">{y1:.4g}</text>')
    if xlabel:
        out.append(f'<text x="{WIDTH / 2:g}" y="{HEIGHT - 15}" font-size="14" '
                   f'text-anchor="middle">{escape(xlabel)}</text>')
    if ylabel:
        out.append(f'<text x="15" y="{HEIGHT / 2:g}" font-size="14" text-anchor="middle" '
                   f'transform="rotate(-90 15 {HEIGHT / 2:g})">{escape(ylabel)}</text>')
    if title:
        out.append(f'<text x="{WIDTH / 2:g}" y="25" font-size="15" text-anchor="middle">{escape(title)}</text>')
    for i, ((label, _), y) in enumerate(zip(curves, ys)):
        pts = " ".join(f"{_fmt(sx(a))},{_fmt(sy(b))}" for a, b in zip(x, y))
        style = STYLES[i % len(STYLES)]
        out.append(f'<polyline fill="none" style="{style}" points="{pts}"/>')
        ly = MARGIN + 10 + 20 * i
        out.append(f'<line x1="{WIDTH - MARGIN - 90}" y1="{ly}" x2="{WIDTH - MARGIN - 60}" y2="{ly}" '
                   f'style="{style}"/>')
        out.append(f'<text x="{WIDTH - MARGIN - 52}" y="{ly + 4}" font-size="13">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
