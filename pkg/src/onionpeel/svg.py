"""Minimal, dependency-free SVG scatter plots.

Output is a pure function of the inputs (fixed number formatting, no
timestamps), so the same data always gives the same bytes.
"""
from __future__ import annotations

import numpy as np

__all__ = ["scatter_svg"]

RING_COLORS = ("#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#17becf", "#7f7f7f")


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def scatter_svg(
    points,
    highlight_ids=(),
    rings=(),
    width: int = 640,
    height: int = 480,
    margin: int = 24,
    title: str | None = None,
) -> str:
    """Scatter plot of ``points`` with highlighted outliers and optional rings.

    ``rings`` is a sequence of index sequences, each drawn as a closed polygon
    (e.g. hull layers, outermost first).
    """
    xy = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    if len(xy):
        lo, hi = xy.min(axis=0), xy.max(axis=0)
    else:
        lo, hi = np.zeros(2), np.ones(2)
    span = np.where(hi - lo > 0, hi - lo, 1.0)
    sx = (width - 2 * margin) / span[0]
    sy = (height - 2 * margin) / span[1]

    def px(p):
        return margin + (p[0] - lo[0]) * sx, height - margin - (p[1] - lo[1]) * sy

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        safe = title.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
        out.append(f'<text x="{margin}" y="{margin - 8}" font-size="12" font-family="sans-serif">{safe}</text>')

    for depth, ring in enumerate(rings):
        ring = list(ring)
        if len(ring) < 2:
            continue
        coords = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in (px(xy[i]) for i in ring))
        color = RING_COLORS[depth % len(RING_COLORS)]
        out.append(
            f'<polygon points="{coords}" fill="none" stroke="{color}" stroke-width="0.8" '
            f'stroke-opacity="0.7"/>'
        )

    marked = set(int(i) for i in highlight_ids)
    out.append('<g fill="#444444" fill-opacity="0.6">')
    for i, p in enumerate(xy):
        if i not in marked:
            cx, cy = px(p)
            out.append(f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="1.8"/>')
    out.append("</g>")
    if marked:
        out.append('<g stroke="#d62728" stroke-width="1.6">')
        for i in sorted(marked):
            cx, cy = px(xy[i])
            out.append(
                f'<path d="M{_fmt(cx - 4)},{_fmt(cy - 4)}L{_fmt(cx + 4)},{_fmt(cy + 4)}'
                f'M{_fmt(cx - 4)},{_fmt(cy + 4)}L{_fmt(cx + 4)},{_fmt(cy - 4)}"/>'
            )
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
