"""Minimal SVG 1.1 figures for 2-d scenes: a body outline, ellipsoids as
64-segment polylines, contact points as dots.  Output is a plain string
with deterministic float formatting, so figures are byte-reproducible."""

from __future__ import annotations

import numpy as np

from .bodies import ConvexBody, norm_many
from .numerics import sym_eigen

_COLORS = ["#1f6fb2", "#b2451f", "#3a8c3f", "#7d3ab2", "#b29a1f"]
_BODY_SAMPLES = 256
_ELLIPSE_SEGMENTS = 64


def _body_outline(body: ConvexBody) -> np.ndarray:
    ang = 2.0 * np.pi * np.arange(_BODY_SAMPLES) / _BODY_SAMPLES
    dirs = np.column_stack([np.cos(ang), np.sin(ang)])
    return dirs / norm_many(body, dirs)[:, None]


def _ellipse_outline(q: np.ndarray) -> np.ndarray:
    vals, vecs = sym_eigen(q)
    axes = vecs @ np.diag(vals**-0.5)
    ang = 2.0 * np.pi * np.arange(_ELLIPSE_SEGMENTS + 1) / _ELLIPSE_SEGMENTS
    circle = np.column_stack([np.cos(ang), np.sin(ang)])
    return circle @ axes.T


def _points_attr(pts: np.ndarray) -> str:
    return " ".join(f"{float(x)!r},{float(-y)!r}" for x, y in pts)


def render_svg(body: ConvexBody, ellipsoids, contacts=None) -> str:
    """Compose the scene; viewport auto-fits all elements with 10% margin."""
    if body.dim != 2:
        raise ValueError("figures are 2-d only")
    outline = _body_outline(body)
    outline = np.vstack([outline, outline[:1]])
    curves = [_ellipse_outline(e.q) for e in ellipsoids]
    dots = np.atleast_2d(np.asarray(contacts, dtype=float)) if contacts is not None and len(contacts) else np.empty((0, 2))
    cloud = np.vstack([outline] + curves + ([dots] if dots.size else []))
    lo = cloud.min(axis=0)
    hi = cloud.max(axis=0)
    span = np.maximum(hi - lo, 1e-9)
    pad = 0.1 * float(np.max(span))
    x0, y0 = float(lo[0] - pad), float(-(hi[1] + pad))
    w, h = float(span[0] + 2 * pad), float(span[1] + 2 * pad)
    stroke = 0.004 * max(w, h)
    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{x0!r} {y0!r} {w!r} {h!r}" width="640" height="{640.0 * h / w!r}">'
    ]
    parts.append(f'<polyline points="{_points_attr(outline)}" fill="none" '
                 f'stroke="#222222" stroke-width="{stroke!r}"/>')
    for i, curve in enumerate(curves):
        color = _COLORS[i % len(_COLORS)]
        parts.append(f'<polyline points="{_points_attr(curve)}" fill="none" '
                     f'stroke="{color}" stroke-width="{stroke!r}"/>')
    for x, y in dots:
        parts.append(f'<circle cx="{float(x)!r}" cy="{float(-y)!r}" '
                     f'r="{2.0 * stroke!r}" fill="#b2451f"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
