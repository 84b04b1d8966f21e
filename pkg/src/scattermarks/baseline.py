"""Filter-based comparator: Gaussian smoothing plus peak picking.

Reimplementation of the classic fixed-kernel approach: convolve the
binarized foreground with a normalized Gaussian of size k (sigma = k/4)
and report local maxima above a relative threshold, non-maximum-suppressed
within k/2 pixels.  The kernel size can be fixed or derived from the
single-mark size estimate (k ~ diameter of a disk with the single-mark
area).  Output is the same MarkSet shape the annealing locator produces,
so the metric consumes both identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage
from scipy.signal import fftconvolve

from .locator import MarkSet, LocatedMark, classify_single, rsma
from .markers import ALL_MARKERS
from .raster import GrayImage, binarize, connected_regions


@dataclass(frozen=True)
class FilterConfig:
    kernel_size: object = "rsma"   # odd int >= 3, or "rsma"
    peak_rel_threshold: float = 0.3
    threshold: object = "auto"
    invert: bool = False
    min_region_px: int = 4


def _odd_kernel(k: float) -> int:
    k = int(round(k))
    if k % 2 == 0:
        k += 1
    return max(3, k)


def gaussian_kernel(size: int) -> np.ndarray:
    """Normalized 2-D Gaussian of the given odd size, sigma = size / 4."""
    if size < 3 or size % 2 == 0:
        raise ValueError(f"kernel size must be odd and >= 3, got {size}")
    sigma = size / 4.0
    half = size // 2
    ax = np.arange(-half, half + 1, dtype=float)
    g = np.exp(-(ax ** 2) / (2 * sigma ** 2))
    kernel = np.outer(g, g)
    return kernel / kernel.sum()


def find_peaks(response: np.ndarray, min_distance: float, rel_threshold: float):
    """Local maxima above rel_threshold * max, greedily suppressed within
    min_distance (strongest first; ties resolve by (y, x) order)."""
    peak_max = response.max()
    if peak_max <= 0:
        return []
    local_max = response == ndimage.maximum_filter(response, size=3)
    candidates = np.argwhere(local_max & (response > rel_threshold * peak_max))
    if len(candidates) == 0:
        return []
    values = response[candidates[:, 0], candidates[:, 1]]
    order = np.lexsort((candidates[:, 1], candidates[:, 0], -values))
    kept: list[tuple[int, int]] = []
    min_sq = min_distance ** 2
    for idx in order:
        y, x = int(candidates[idx, 0]), int(candidates[idx, 1])
        if all((y - ky) ** 2 + (x - kx) ** 2 > min_sq for ky, kx in kept):
            kept.append((y, x))
    return kept


def rsma_kernel_size(expected_size: float) -> int:
    """Kernel size from the mean single-mark pixel count: the diameter of a
    disk with that area, rounded to an odd size."""
    return _odd_kernel(round(2.0 * math.sqrt(expected_size / math.pi)))


def filter_locate(image: GrayImage, config: FilterConfig = FilterConfig(),
                  source: str = "") -> MarkSet:
    """Locate marks by smoothing the foreground and picking peaks."""
    import time

    start = time.perf_counter()
    foreground = binarize(image, config.threshold, config.invert)
    if not foreground:
        return MarkSet([], source_image=source,
                       timing_ms=(time.perf_counter() - start) * 1000.0)

    if config.kernel_size == "rsma":
        regions = connected_regions(foreground, min_pixels=config.min_region_px)
        expected = None
        if regions:
            estimate = rsma(regions, ALL_MARKERS)
            expected = estimate.expected_size
        if expected is None:
            k = 9  # no singles to measure; small generic kernel
        else:
            k = rsma_kernel_size(expected)
    else:
        k = _odd_kernel(float(config.kernel_size))

    indicator = np.zeros(image.values.shape, dtype=float)
    for x, y in foreground:
        indicator[y, x] = 1.0
    response = fftconvolve(indicator, gaussian_kernel(k), mode="same")

    peaks = find_peaks(response, min_distance=k / 2.0,
                       rel_threshold=config.peak_rel_threshold)
    marks = [LocatedMark(float(x), float(y), k / 2.0, None, region_id=i)
             for i, (y, x) in enumerate(peaks)]
    return MarkSet(marks, source_image=source,
                   timing_ms=(time.perf_counter() - start) * 1000.0)
