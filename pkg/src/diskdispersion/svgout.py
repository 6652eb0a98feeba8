"""SVG rendering of planar instances and solutions, for eyeballing solver
output. Disk outlines, the container squares when the solution came from
the projection LP, the selected points, and the closest pair highlighted.
"""

from __future__ import annotations

import numpy as np

from .geometry import BallInstance
from .projection_lp import UnsupportedDimensionError

_WIDTH = 640.0


def _closest_pair(points: np.ndarray):
    n = points.shape[0]
    if n < 2:
        return None
    best = (np.inf, 0, 1)
    for i in range(n):
        diff = points[i + 1 :] - points[i]
        if diff.size == 0:
            continue
        dist = np.sqrt(np.sum(diff * diff, axis=1))
        j = int(np.argmin(dist))
        if dist[j] < best[0]:
            best = (float(dist[j]), i, i + 1 + j)
    return best


def render_svg(inst: BallInstance, points=None, algorithm: str = "") -> str:
    """SVG text for a planar instance; points and algorithm are optional.

    Element classes: ``disk`` outlines, ``container`` squares (only for
    projection-LP solutions), ``point`` markers, ``min-pair`` segment.
    """
    if inst.dimension != 2:
        raise UnsupportedDimensionError("SVG rendering is planar only (d = 2)")
    pts = None if points is None else np.asarray(points, dtype=float)

    lo = np.min(inst.centers - inst.radii[:, None], axis=0)
    hi = np.max(inst.centers + inst.radii[:, None], axis=0)
    span = np.maximum(hi - lo, 1e-9)
    margin = 0.05 * float(np.max(span))
    lo -= margin
    hi += margin
    span = hi - lo
    scale = _WIDTH / float(span[0])
    height = float(span[1]) * scale
    stroke = max(float(np.max(span)) / 400.0, 1e-6)

    def sx(x: float) -> float:
        return (x - lo[0]) * scale

    def sy(y: float) -> float:
        return height - (y - lo[1]) * scale  # flip so +y points up

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {_WIDTH:.2f} {height:.2f}">'
    ]
    for i in range(inst.n):
        cx, cy = inst.centers[i]
        out.append(
            f'<circle class="disk" cx="{sx(cx):.3f}" cy="{sy(cy):.3f}" '
            f'r="{inst.radii[i] * scale:.3f}" fill="none" stroke="#446" '
            f'stroke-width="{stroke * scale:.3f}"/>'
        )
    if algorithm == "a2":
        for i in range(inst.n):
            cx, cy = inst.centers[i]
            half = inst.radii[i] / 2.0
            out.append(
                f'<rect class="container" x="{sx(cx - half):.3f}" y="{sy(cy + half):.3f}" '
                f'width="{2 * half * scale:.3f}" height="{2 * half * scale:.3f}" '
                f'fill="none" stroke="#2a7" stroke-dasharray="4 3" '
                f'stroke-width="{stroke * scale:.3f}"/>'
            )
    if pts is not None:
        pair = _closest_pair(pts)
        if pair is not None and np.isfinite(pair[0]):
            _, i, j = pair
            out.append(
                f'<line class="min-pair" x1="{sx(pts[i, 0]):.3f}" y1="{sy(pts[i, 1]):.3f}" '
                f'x2="{sx(pts[j, 0]):.3f}" y2="{sy(pts[j, 1]):.3f}" '
                f'stroke="#d33" stroke-width="{2 * stroke * scale:.3f}"/>'
            )
        for p in pts:
            out.append(
                f'<circle class="point" cx="{sx(p[0]):.3f}" cy="{sy(p[1]):.3f}" '
                f'r="{3 * stroke * scale:.3f}" fill="#d33"/>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def save_svg(inst: BallInstance, points, algorithm: str, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_svg(inst, points, algorithm))
