"""Image loading, binarization and connected-region extraction.

Marks are assumed dark on a light background; ``invert=True`` flips that.
Regions are 8-connected so diagonally-touching glyph lobes (e.g. the tips
of a triangle or plus) stay in one region.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import ndimage

# ITU-R BT.601 luma weights for RGB -> gray conversion
_LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])

# 3x3 all-ones structuring element = 8-connectivity
_CONN8 = np.ones((3, 3), dtype=int)


@dataclass(frozen=True, eq=False)
class GrayImage:
    """A grayscale image; ``values`` is a (height, width) uint8 array."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.uint8)
        if v.ndim != 2 or v.shape[0] == 0 or v.shape[1] == 0:
            raise ValueError(f"expected a nonempty 2-D array, got shape {v.shape}")
        object.__setattr__(self, "values", v)

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class BinaryRegion:
    """A nonempty 8-connected set of foreground pixels.

    Pixels are (x, y) integer pairs with x = column, y = row.
    ``bounding_box`` is the tight (min_x, min_y, max_x, max_y).
    """

    pixels: frozenset[tuple[int, int]]
    bounding_box: tuple[int, int, int, int]

    @classmethod
    def from_pixels(cls, pixels) -> "BinaryRegion":
        px = frozenset((int(x), int(y)) for x, y in pixels)
        if not px:
            raise ValueError("a region must contain at least one pixel")
        xs = [p[0] for p in px]
        ys = [p[1] for p in px]
        return cls(pixels=px, bounding_box=(min(xs), min(ys), max(xs), max(ys)))

    @property
    def size(self) -> int:
        return len(self.pixels)

    @cached_property
    def coords(self) -> np.ndarray:
        """Pixel coordinates as a (N, 2) float array in a fixed (y, x) sort order."""
        pts = np.array(sorted(self.pixels, key=lambda p: (p[1], p[0])), dtype=float)
        pts.setflags(write=False)
        return pts

    def mask(self) -> tuple[np.ndarray, tuple[int, int]]:
        """Boolean mask cropped to the bounding box, plus the (min_x, min_y) offset."""
        x0, y0, x1, y1 = self.bounding_box
        m = np.zeros((y1 - y0 + 1, x1 - x0 + 1), dtype=bool)
        for x, y in self.pixels:
            m[y - y0, x - x0] = True
        return m, (x0, y0)


def load_png(path) -> GrayImage:
    """Load an 8-bit gray or RGB(A) PNG, converting color to BT.601 luminance."""
    from PIL import Image

    with Image.open(path) as im:
        arr = np.asarray(im)
    if arr.ndim == 2:
        return GrayImage(arr.astype(np.uint8))
    if arr.ndim == 3 and arr.shape[2] in (3, 4):
        gray = arr[:, :, :3].astype(float) @ _LUMA_WEIGHTS
        return GrayImage(np.clip(np.rint(gray), 0, 255).astype(np.uint8))
    raise ValueError(f"unsupported image shape {arr.shape}")


def otsu_threshold(values: np.ndarray) -> int:
    """Otsu's threshold t on a uint8 image: maximizes between-class variance
    of the split {v <= t} / {v > t}.  Ties go to the smallest t."""
    hist = np.bincount(np.asarray(values, dtype=np.uint8).ravel(), minlength=256).astype(float)
    total = hist.sum()
    w0 = np.cumsum(hist)
    w1 = total - w0
    cum_mean = np.cumsum(hist * np.arange(256))
    mean0 = np.divide(cum_mean, w0, out=np.zeros(256), where=w0 > 0)
    mean1 = np.divide(cum_mean[-1] - cum_mean, w1, out=np.zeros(256), where=w1 > 0)
    between = w0 * w1 * (mean0 - mean1) ** 2
    return int(np.argmax(between))


def binarize(image: GrayImage, threshold="auto", invert: bool = False) -> set[tuple[int, int]]:
    """Foreground pixels of ``image``: luminance strictly below ``threshold``.

    ``threshold="auto"`` picks it with Otsu's method.  ``invert=True`` flips
    the image first (for light marks on a dark background).  The result may
    be empty or cover the whole image; callers decide what to do then.
    """
    values = image.values
    if invert:
        values = 255 - values
    if threshold == "auto":
        cut = otsu_threshold(values) + 1  # foreground = {v <= otsu t} = {v < t + 1}
    else:
        cut = float(threshold)
    ys, xs = np.nonzero(values < cut)
    return set(zip(xs.tolist(), ys.tolist()))


def connected_regions(foreground, min_pixels: int = 1) -> list[BinaryRegion]:
    """Partition a pixel set into maximal 8-connected regions.

    Regions smaller than ``min_pixels`` are dropped (noise).  The result is
    sorted by the (min_y, min_x) of each bounding box, so ordering is stable
    across runs.
    """
    pixels = list(foreground)
    if not pixels:
        return []
    xs = np.array([p[0] for p in pixels], dtype=int)
    ys = np.array([p[1] for p in pixels], dtype=int)
    x0, y0 = xs.min(), ys.min()
    grid = np.zeros((ys.max() - y0 + 1, xs.max() - x0 + 1), dtype=bool)
    grid[ys - y0, xs - x0] = True
    labels, count = ndimage.label(grid, structure=_CONN8)
    regions = []
    for k in range(1, count + 1):
        ky, kx = np.nonzero(labels == k)
        if len(ky) < min_pixels:
            continue
        px = frozenset(zip((kx + x0).tolist(), (ky + y0).tolist()))
        bbox = (int(kx.min() + x0), int(ky.min() + y0), int(kx.max() + x0), int(ky.max() + y0))
        regions.append(BinaryRegion(pixels=px, bounding_box=bbox))
    regions.sort(key=lambda r: (r.bounding_box[1], r.bounding_box[0]))
    return regions
