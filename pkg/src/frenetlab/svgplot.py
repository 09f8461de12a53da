"""Deterministic SVG emission: three orthographic projections of a 3-d polyline.

One <svg> root holds three <g> panels (XY, XZ, YZ projections) laid out
side by side.  The viewBox is computed from the sample bounds with a 5%
margin and all coordinates use fixed 6-decimal formatting, so identical
input always produces byte-identical output.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError

__all__ = ["render_projections", "write_svg"]

_PANEL = 100.0   # logical size of one projection box
_GAP = 20.0      # spacing between panels
_LABEL_H = 12.0  # caption strip height

_PROJECTIONS = (("XY", 0, 1), ("XZ", 0, 2), ("YZ", 1, 2))


def _fmt(v: float) -> str:
    return f"{v:.6f}"


def render_projections(points, title: str = "") -> str:
    """Render an (n, 3) polyline as three labeled orthographic projections."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3 or pts.shape[0] < 2:
        raise DomainError("render_projections needs an (n, 3) array with n >= 2")
    if not np.all(np.isfinite(pts)):
        raise DomainError("render_projections requires finite coordinates")

    width = 3 * _PANEL + 2 * _GAP
    height = _PANEL + _LABEL_H
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
    ]
    if title:
        parts.append(
            f'<title>{title}</title>'
        )
    for panel, (label, ax, ay) in enumerate(_PROJECTIONS):
        u = pts[:, ax]
        v = pts[:, ay]
        du = float(u.max() - u.min())
        dv = float(v.max() - v.min())
        extent = max(du, dv, 1e-12)
        margin = 0.05 * extent
        scale = _PANEL / (extent + 2.0 * margin)
        # center the drawing inside its panel, y axis pointing up
        cu = 0.5 * (u.max() + u.min())
        cv = 0.5 * (v.max() + v.min())
        x0 = panel * (_PANEL + _GAP) + 0.5 * _PANEL
        y0 = 0.5 * _PANEL
        sx = x0 + (u - cu) * scale
        sy = y0 - (v - cv) * scale
        coords = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in zip(sx, sy))
        parts.append(f'<g id="{label}">')
        parts.append(
            f'<polyline fill="none" stroke="#1f3a93" stroke-width="0.6" points="{coords}"/>'
        )
        parts.append(
            f'<text x="{_fmt(x0)}" y="{_fmt(_PANEL + _LABEL_H - 3.0)}" '
            f'font-size="8" text-anchor="middle" font-family="monospace">{label}</text>'
        )
        parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_svg(path, points, title: str = "") -> None:
    data = render_projections(points, title=title)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(data)
