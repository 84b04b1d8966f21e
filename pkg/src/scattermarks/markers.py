"""Marker glyph rasterization and cluster re-visualization.

A mark is a glyph drawn at a real-valued center with a radius measured to
the glyph's farthest point (circumradius): a circle's radius, half the
diagonal of a square or diamond, the circumradius of an equilateral
triangle, the half-length of the bars of a plus.  A pixel belongs to the
raster when its integer center passes the point-in-shape test; centers are
kept as reals and rounding happens only there.

Hollow variants are the filled shape minus the same shape with its radius
reduced by the stroke width.  The benchmark generator draws with the same
geometry, so a perfectly generated mark round-trips through the pipeline
with zero symmetric difference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

_SQRT2 = math.sqrt(2.0)
_SQRT3_2 = math.sqrt(3.0) / 2.0

# Absolute slack in point-in-shape tests.  Radii measured off rasters (max
# pixel distance) reproduce the source shape only up to float rounding;
# without slack, boundary pixels drop out and perfect marks stop
# round-tripping.
_EPS = 1e-7


class MarkerType(Enum):
    CIRCLE = "circle"
    HOLLOW_CIRCLE = "hollow_circle"
    SQUARE = "square"
    HOLLOW_SQUARE = "hollow_square"
    DIAMOND = "diamond"
    HOLLOW_DIAMOND = "hollow_diamond"
    TRIANGLE_UP = "triangle_up"
    HOLLOW_TRIANGLE_UP = "hollow_triangle_up"
    TRIANGLE_DOWN = "triangle_down"
    HOLLOW_TRIANGLE_DOWN = "hollow_triangle_down"
    PLUS = "plus"

    @property
    def hollow(self) -> bool:
        return self.value.startswith("hollow_")

    @property
    def filled_kind(self) -> "MarkerType":
        """The filled shape this glyph is derived from (itself when filled)."""
        if self.hollow:
            return MarkerType(self.value[len("hollow_"):])
        return self


ALL_MARKERS: tuple[MarkerType, ...] = tuple(MarkerType)

DEFAULT_STROKE_WIDTH = 2.0


@dataclass(frozen=True)
class Mark:
    """One located or ground-truth mark."""

    x: float
    y: float
    radius: float
    marker: MarkerType | None = None

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError(f"mark radius must be >= 0, got {self.radius}")

    @property
    def center(self) -> tuple[float, float]:
        return (self.x, self.y)


def plus_bar_thickness(radius: float) -> float:
    """Bar thickness of the plus glyph: max(1, round(r/2))."""
    return max(1.0, float(round(radius / 2.0)))


def _filled_membership(kind: MarkerType, dx: np.ndarray, dy: np.ndarray, r: float) -> np.ndarray:
    """Point-in-shape test for the filled form of ``kind`` (y axis points down)."""
    if kind is MarkerType.CIRCLE:
        return dx * dx + dy * dy <= r * r + _EPS
    if kind is MarkerType.SQUARE:
        half_side = r / _SQRT2
        return np.maximum(np.abs(dx), np.abs(dy)) <= half_side + _EPS
    if kind is MarkerType.DIAMOND:
        return np.abs(dx) + np.abs(dy) <= r + _EPS
    if kind in (MarkerType.TRIANGLE_UP, MarkerType.TRIANGLE_DOWN):
        # Equilateral triangle inscribed in the radius-r circle.  Apex-up in
        # screen terms means the apex at smaller y.
        if kind is MarkerType.TRIANGLE_DOWN:
            dy = -dy
        # Vertices: (0, -r), (-sqrt(3)/2 r, r/2), (sqrt(3)/2 r, r/2)
        below_base = dy <= r / 2.0 + _EPS
        # Edge from apex to each base corner: |dx| * (3/2) <= (dy + r) * sqrt(3)/2
        inside_slants = np.abs(dx) * 1.5 <= (dy + r) * _SQRT3_2 + _EPS
        return below_base & inside_slants
    if kind is MarkerType.PLUS:
        t = plus_bar_thickness(r) / 2.0
        horiz = (np.abs(dx) <= r + _EPS) & (np.abs(dy) <= t + _EPS)
        vert = (np.abs(dy) <= r + _EPS) & (np.abs(dx) <= t + _EPS)
        return horiz | vert
    raise ValueError(f"no filled geometry for {kind}")


def rasterize_mark(mark: Mark, stroke_width: float | None = None) -> set[tuple[int, int]]:
    """Integer pixels covered by ``mark``; never empty.

    ``stroke_width`` is required for hollow kinds.  A degenerate raster
    (e.g. radius 0 at a fractional center) falls back to the single pixel
    nearest the center.
    """
    if mark.marker is None:
        raise ValueError("mark has no marker type")
    kind = mark.marker
    if kind.hollow and stroke_width is None:
        raise ValueError(f"{kind.value} needs a stroke_width")
    r = float(mark.radius)
    cx, cy = mark.x, mark.y

    reach = r + plus_bar_thickness(r) if kind.filled_kind is MarkerType.PLUS else r
    x_lo, x_hi = math.floor(cx - reach), math.ceil(cx + reach)
    y_lo, y_hi = math.floor(cy - reach), math.ceil(cy + reach)
    gx, gy = np.meshgrid(np.arange(x_lo, x_hi + 1), np.arange(y_lo, y_hi + 1))
    dx = gx - cx
    dy = gy - cy

    inside = _filled_membership(kind.filled_kind, dx, dy, r)
    if kind.hollow:
        inner_r = max(r - float(stroke_width), 0.0)
        if inner_r > 0:
            inside &= ~_filled_membership(kind.filled_kind, dx, dy, inner_r)

    pts = set(zip(gx[inside].tolist(), gy[inside].tolist()))
    if not pts:
        pts = {(int(round(cx)), int(round(cy)))}
    return pts


def revisualize(clustering, marker: MarkerType, stroke_width: float | None = None) -> set[tuple[int, int]]:
    """Union of one mark per cluster, drawn at the centroid with the cluster radius."""
    pixels: set[tuple[int, int]] = set()
    for (cx, cy), r in zip(clustering.centroids, clustering.radii):
        pixels |= rasterize_mark(Mark(float(cx), float(cy), float(r), marker), stroke_width)
    return pixels
