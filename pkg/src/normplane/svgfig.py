"""Hand-rolled SVG emitter for sphere figures.

Conventions: viewBox [-1.6, 1.6]^2 with the y axis flipped to mathematical
orientation; sphere black, inner discs green, outer discs red, image spheres
blue.
"""

from __future__ import annotations

import numpy as np

VIEW = 1.6
SIZE = 640

_STYLE = {
    "sphere": ("black", 0.012),
    "inner": ("green", 0.008),
    "outer": ("red", 0.008),
    "image": ("blue", 0.008),
    "ellipse": ("green", 0.008),
    "axis": ("#bbbbbb", 0.004),
}


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _polyline(points: np.ndarray, kind: str) -> str:
    color, width = _STYLE[kind]
    coords = " ".join(f"{_fmt(p[0])},{_fmt(p[1])}" for p in points)
    return (
        f'<polyline points="{coords}" fill="none" stroke="{color}" '
        f'stroke-width="{width}" />'
    )


def _circle(center, radius: float, kind: str) -> str:
    color, width = _STYLE[kind]
    return (
        f'<circle cx="{_fmt(center[0])}" cy="{_fmt(center[1])}" r="{_fmt(radius)}" '
        f'fill="none" stroke="{color}" stroke-width="{width}" />'
    )


def render_model(model, overlays: dict | None = None) -> str:
    """SVG figure of the unit sphere with optional overlays.

    overlays keys: "discs" -> iterable of (Disc, "inner"|"outer");
    "ellipses" -> iterable of Ellipse; "images" -> iterable of 2x2 matrices
    whose sphere images are drawn in blue.
    """
    overlays = overlays or {}
    cache = model.sphere_cache()
    pts = np.vstack([cache["points"], cache["points"][:1]])  # closed polyline
    body = [
        _polyline(np.array([[-VIEW, 0], [VIEW, 0]]), "axis"),
        _polyline(np.array([[0, -VIEW], [0, VIEW]]), "axis"),
        _polyline(pts, "sphere"),
    ]
    for disc, kind in overlays.get("discs", ()):
        body.append(_circle((disc.center.x1, disc.center.x2), disc.radius, kind))
    for ellipse in overlays.get("ellipses", ()):
        body.append(_polyline(_closed(ellipse.boundary_points(256)), "ellipse"))
    for mat in overlays.get("images", ()):
        body.append(_polyline(_closed(cache["points"] @ np.asarray(mat, float).T), "image"))
    inner = "\n".join(body)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="{-VIEW} {-VIEW} {2 * VIEW} {2 * VIEW}">\n'
        f'<g transform="scale(1,-1)">\n{inner}\n</g>\n</svg>\n'
    )


def _closed(points: np.ndarray) -> np.ndarray:
    return np.vstack([points, points[:1]])
