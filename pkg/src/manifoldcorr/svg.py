"""Standalone SVG scatter plots with optional manifold overlays.

No plotting framework: the writer emits a fixed-layout document whose
bytes depend only on the input coordinates, so figures diff cleanly in
tests.
"""

from __future__ import annotations

import numpy as np

_POINT_STYLE = 'fill="#33658a" fill-opacity="0.55" stroke="none"'
_LINE_STYLE = 'fill="none" stroke="#d1495b" stroke-width="1.6"'


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def render_scatter(points, polylines=(), width=640, height=480, margin=40.0,
                   point_radius=2.0, comment: str | None = None) -> str:
    """Render 2-d points (and optional polyline overlays) as an SVG string."""
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != 2:
        raise ValueError("render_scatter needs n x 2 points")
    polylines = [np.asarray(p, dtype=np.float64) for p in polylines]
    stack = [points] + [p for p in polylines if p.size]
    allpts = np.vstack(stack)
    lo = allpts.min(axis=0)
    hi = allpts.max(axis=0)
    span = np.where(hi - lo > 0.0, hi - lo, 1.0)
    sx = (width - 2 * margin) / span[0]
    sy = (height - 2 * margin) / span[1]

    def to_px(p):
        x = margin + (p[:, 0] - lo[0]) * sx
        y = height - margin - (p[:, 1] - lo[1]) * sy
        return x, y

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
    ]
    if comment is not None:
        lines.append(f"<!-- {comment} -->")
    lines.append(f'<rect width="{width}" height="{height}" fill="white"/>')
    lines.append('<g id="data">')
    px, py = to_px(points)
    for x, y in zip(px, py):
        lines.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{point_radius}" {_POINT_STYLE}/>')
    lines.append("</g>")
    if polylines:
        lines.append('<g id="manifold">')
        for poly in polylines:
            if not poly.size:
                continue
            qx, qy = to_px(poly)
            pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in zip(qx, qy))
            lines.append(f'<polyline points="{pts}" {_LINE_STYLE}/>')
        lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
