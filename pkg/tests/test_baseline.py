"""Gaussian-filter baseline."""

import numpy as np
import pytest

from scattermarks.baseline import (FilterConfig, filter_locate, find_peaks,
                                   gaussian_kernel, rsma_kernel_size)
from scattermarks.markers import Mark, MarkerType, rasterize_mark
from scattermarks.raster import GrayImage


def paint(pixel_sets, size=(160, 120)):
    canvas = np.full((size[1], size[0]), 255, dtype=np.uint8)
    for pixels in pixel_sets:
        for x, y in pixels:
            canvas[y, x] = 0
    return GrayImage(canvas)


def test_kernel_normalized_and_odd():
    k = gaussian_kernel(9)
    assert k.shape == (9, 9)
    assert k.sum() == pytest.approx(1.0)
    assert k[4, 4] == k.max()
    with pytest.raises(ValueError):
        gaussian_kernel(8)


def test_single_circle_single_peak():
    image = paint([rasterize_mark(Mark(50, 60, 6, MarkerType.CIRCLE))])
    result = filter_locate(image, FilterConfig(kernel_size=11))
    assert len(result.marks) == 1
    mark = result.marks[0]
    assert abs(mark.x - 50) <= 1 and abs(mark.y - 60) <= 1


def test_two_distant_circles_two_peaks():
    image = paint([rasterize_mark(Mark(40, 60, 6, MarkerType.CIRCLE)),
                   rasterize_mark(Mark(90, 60, 6, MarkerType.CIRCLE))])
    result = filter_locate(image, FilterConfig(kernel_size=11))
    assert len(result.marks) == 2
    xs = sorted(m.x for m in result.marks)
    assert abs(xs[0] - 40) <= 1 and abs(xs[1] - 90) <= 1


def test_translation_invariance():
    def peaks_at(cx, cy):
        image = paint([rasterize_mark(Mark(cx, cy, 6, MarkerType.CIRCLE))])
        result = filter_locate(image, FilterConfig(kernel_size=11))
        return [(m.x - cx, m.y - cy) for m in result.marks]

    assert peaks_at(50, 50) == peaks_at(70, 65)


def test_rsma_kernel_size_from_mark_area():
    # a radius-6 disk has 113 pixels; the matched kernel is its diameter,
    # rounded to odd
    assert rsma_kernel_size(113) == 13
    assert rsma_kernel_size(63) == 9


def test_rsma_kernel_path_runs():
    image = paint([rasterize_mark(Mark(40, 60, 6, MarkerType.CIRCLE)),
                   rasterize_mark(Mark(90, 60, 6, MarkerType.CIRCLE))])
    result = filter_locate(image, FilterConfig(kernel_size="rsma"))
    assert len(result.marks) == 2


def test_blank_image_no_marks():
    image = GrayImage(np.full((40, 40), 255, dtype=np.uint8))
    result = filter_locate(image, FilterConfig(kernel_size=9))
    assert result.marks == []


def test_find_peaks_nms_radius():
    response = np.zeros((30, 30))
    response[10, 10] = 1.0
    response[10, 13] = 0.9   # within min_distance of the stronger peak
    response[10, 25] = 0.8
    peaks = find_peaks(response, min_distance=5.0, rel_threshold=0.3)
    assert (10, 10) in peaks and (10, 25) in peaks
    assert (10, 13) not in peaks


def test_marks_have_no_marker_type():
    image = paint([rasterize_mark(Mark(50, 60, 6, MarkerType.CIRCLE))])
    result = filter_locate(image, FilterConfig(kernel_size=11))
    assert result.marks[0].marker is None
    payload = result.to_dict()
    assert payload["marks"][0]["marker"] is None
