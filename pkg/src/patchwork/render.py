"""Deterministic SVG rendering of tilings, patterns, distortion hulls and
matched certificate copies.

Element order is fixed (tiles, pattern points, cube hull, markers) and all
coordinates are printed with 4 decimal places, so identical inputs yield
byte-identical documents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PatchworkError
from .geometry import Patch, Pattern

_DEFAULT_STYLES = {
    "tiles": 'fill="#e8e4d8" stroke="#444444" stroke-width="0.02"',
    "pattern": 'fill="#1f5fbf"',
    "cube_hull": 'fill="none" stroke="#bf3f1f" stroke-width="0.03" stroke-dasharray="0.1,0.06"',
    "markers": 'fill="none" stroke="#1f8f3f" stroke-width="0.04"',
}


@dataclass(frozen=True)
class RenderSpec:
    viewport: tuple  # ((xmin, ymin), (xmax, ymax))
    scale: float = 60.0
    styles: dict = field(default_factory=dict)
    output: str | None = None

    def __post_init__(self):
        (x0, y0), (x1, y1) = self.viewport
        if not (x1 > x0 and y1 > y0):
            raise PatchworkError("render viewport is empty")


def _c(x: float) -> str:
    v = round(float(x), 4)
    if v == 0.0:
        v = 0.0
    return f"{v:.4f}"


def _ring_path(ring: np.ndarray) -> str:
    pts = " L ".join(f"{_c(p[0])} {_c(p[1])}" for p in ring)
    return f"M {pts} Z"


def cube_hull_points(F, q: int) -> np.ndarray:
    """Vertices of the convex hull of {sum alpha_i v_i : |alpha_i| <= q}."""
    pts = F.as_array() if isinstance(F, Pattern) else np.asarray(F, dtype=float)
    import itertools

    corners = np.array([np.asarray(a) @ pts
                        for a in itertools.product((-q, q), repeat=len(pts))],
                       dtype=float)
    if len(np.unique(np.round(corners, 9), axis=0)) < 3:
        return corners
    from scipy.spatial import ConvexHull

    hull = ConvexHull(corners)
    return corners[hull.vertices]


def render_svg(layers: dict, spec: RenderSpec) -> str:
    """Render the given layers into a standalone SVG document.

    ``layers`` may contain: "tiles" (Patch), "pattern" (Pattern or point
    list), "cube_hull" (point list, drawn as a closed polygon), "markers"
    (point list, drawn as circles).
    """
    (x0, y0), (x1, y1) = spec.viewport
    s = spec.scale
    w, h = (x1 - x0) * s, (y1 - y0) * s
    styles = dict(_DEFAULT_STYLES)
    styles.update(spec.styles)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_c(w)}" '
           f'height="{_c(h)}" viewBox="{_c(x0)} {_c(-y1)} {_c(x1 - x0)} {_c(y1 - y0)}">',
           f'<g transform="scale(1,-1)">']
    tiles = layers.get("tiles")
    if tiles is not None:
        if not isinstance(tiles, Patch):
            raise PatchworkError("tiles layer must be a Patch")
        for t in tiles:
            d = " ".join([_ring_path(t.outer)] + [_ring_path(hh) for hh in t.holes])
            out.append(f'<path {styles["tiles"]} fill-rule="evenodd" d="{d}"/>')
    pattern = layers.get("pattern")
    if pattern is not None:
        pts = pattern.points if isinstance(pattern, Pattern) else pattern
        for p in pts:
            out.append(f'<circle {styles["pattern"]} cx="{_c(p[0])}" '
                       f'cy="{_c(p[1])}" r="0.08"/>')
    hull = layers.get("cube_hull")
    if hull is not None:
        hull = np.asarray(hull, dtype=float)
        if len(hull) >= 2:
            # fixed vertex order: start at the lexicographically least point
            k = int(np.lexsort((hull[:, 1], hull[:, 0]))[0])
            hull = np.roll(hull, -k, axis=0)
            out.append(f'<path {styles["cube_hull"]} d="{_ring_path(hull)}"/>')
    markers = layers.get("markers")
    if markers is not None:
        for p in markers:
            out.append(f'<circle {styles["markers"]} cx="{_c(p[0])}" '
                       f'cy="{_c(p[1])}" r="0.18"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_bt_certificate(cert, tiling_window: Patch, spec: RenderSpec) -> str:
    """Certificate figure: the tiling, the scaled pattern positions, the
    distortion hull around each, and one marker per matched copy."""
    markers = []
    pattern_pts = []
    V = cert.F.as_array()
    for e in cert.entries:
        t = np.asarray(e.t, dtype=float)
        for i in range(len(V)):
            center = e.lam * V[i] + t
            pattern_pts.append(tuple(center))
            w = e.w(cert.F, i)
            markers.append(tuple(center + w + np.asarray(e.gs[i].v, dtype=float)))
    hull = cube_hull_points(cert.F, max(cert.q, 1))
    return render_svg({"tiles": tiling_window, "pattern": pattern_pts,
                       "cube_hull": hull, "markers": markers}, spec)
