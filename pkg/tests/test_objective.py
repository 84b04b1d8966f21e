"""The localization loss and its components."""

import math

import numpy as np
import pytest

from scattermarks.markers import Mark, MarkerType, rasterize_mark
from scattermarks.objective import LossEvaluator, LossParams, loss, sym_diff_size
from scattermarks.raster import BinaryRegion


def circle_region(cx=50.0, cy=50.0, r=9.85):
    return BinaryRegion.from_pixels(rasterize_mark(Mark(cx, cy, r, MarkerType.CIRCLE)))


def three_circle_region(radius=10.0, sep_ratio=1.25):
    sep = radius * sep_ratio
    h = sep * math.sqrt(3) / 2
    centers = [(40.0, 40.0), (40.0 + sep, 40.0), (40.0 + sep / 2, 40.0 + h)]
    pixels = set()
    for cx, cy in centers:
        pixels |= rasterize_mark(Mark(cx, cy, radius, MarkerType.CIRCLE))
    return BinaryRegion.from_pixels(pixels)


def test_sym_diff_trivial_cases():
    a = {(0, 0), (1, 0), (2, 0)}
    assert sym_diff_size(a, a) == 0
    b = {(5, 5), (6, 5), (7, 5), (8, 5)}
    assert sym_diff_size(a, b) == 7
    ten = {(i, 0) for i in range(1, 11)}
    shifted = {(i, 0) for i in range(6, 16)}
    assert sym_diff_size(ten, shifted) == 10


def test_breakdown_on_perfect_circle():
    # region built by the rasterizer itself: the n=1 round-trip is exact,
    # so the whole loss reduces to the alpha * n * sqrt(F) term
    region = circle_region()
    params = LossParams(alpha=1.1, beta=1.0, space_factor=30.0)
    n_max = params.n_max(region.size)
    assert n_max == region.size // 30
    result = loss(region, 1, MarkerType.CIRCLE, params, seed=0)
    assert result.sym_diff == 0.0
    assert result.count_prior == pytest.approx(math.sqrt(30.0))
    assert result.radius_prior == 0.0
    assert result.total == pytest.approx(1.1 * math.sqrt(30.0))


def test_radius_prior_zero_for_single_cluster():
    region = three_circle_region()
    result = loss(region, 1, MarkerType.DIAMOND, LossParams(), seed=3)
    assert result.radius_prior == 0.0


def test_total_composition():
    region = three_circle_region()
    params = LossParams(alpha=1.5, beta=5.0, space_factor=40.0)
    ev = LossEvaluator(region, params, seed=1)
    for n in (1, 2, 5):
        b = ev.loss(n, MarkerType.CIRCLE)
        assert b.total == pytest.approx(
            b.sym_diff + 1.5 * b.count_prior + 5.0 * b.radius_prior, abs=1e-9)
        expected_g = (n / ev.n_max) * b.sym_diff + n * math.sqrt(40.0)
        assert b.count_prior == pytest.approx(expected_g, abs=1e-9)


def test_beta_zero_removes_radius_prior():
    region = three_circle_region()
    with_beta = LossEvaluator(region, LossParams(1.1, 1.0, 50.0), seed=2)
    without = LossEvaluator(region, LossParams(1.1, 0.0, 50.0), seed=2)
    for n in (2, 4):
        a = with_beta.loss(n, MarkerType.CIRCLE)
        b = without.loss(n, MarkerType.CIRCLE)
        assert b.total == pytest.approx(b.sym_diff + 1.1 * b.count_prior, abs=1e-9)
        assert a.sym_diff == b.sym_diff and a.count_prior == b.count_prior


def test_count_prior_strictly_increasing_in_n_for_fixed_f():
    params = LossParams(space_factor=25.0)
    n_max = 10
    f = 123.0
    values = [(n / n_max) * f + n * math.sqrt(25.0) for n in range(1, n_max + 1)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_f_at_singleton_count_not_above_f_at_one():
    # raw symmetric difference, outside the n <= n_max search constraint:
    # with one cluster per pixel every mark has radius 0 and redraws exactly
    # its own pixel, so f vanishes
    from scattermarks.clustering import kmeans
    from scattermarks.markers import revisualize

    region = three_circle_region(radius=5.0, sep_ratio=1.2)
    f_one = sym_diff_size(region.pixels,
                          revisualize(kmeans(region, 1, seed=0), MarkerType.CIRCLE))
    f_all = sym_diff_size(region.pixels,
                          revisualize(kmeans(region, region.size, seed=0), MarkerType.CIRCLE))
    assert f_all <= f_one
    assert f_all == 0


def test_deterministic_per_seed():
    region = three_circle_region()
    params = LossParams(1.1, 1.0, 45.0)
    a = LossEvaluator(region, params, seed=9)
    b = LossEvaluator(region, params, seed=9)
    for n in (2, 3, 7):
        assert a.loss(n, MarkerType.SQUARE).total == b.loss(n, MarkerType.SQUARE).total


def test_clustering_shared_across_markers():
    region = three_circle_region()
    ev = LossEvaluator(region, LossParams(), seed=0)
    ev.loss(3, MarkerType.CIRCLE)
    c1 = ev.clustering(3)
    ev.loss(3, MarkerType.SQUARE)
    assert ev.clustering(3) is c1


def test_n_out_of_range_rejected():
    region = circle_region()
    ev = LossEvaluator(region, LossParams(space_factor=30.0), seed=0)
    with pytest.raises(ValueError):
        ev.loss(0, MarkerType.CIRCLE)
    with pytest.raises(ValueError):
        ev.loss(ev.n_max + 1, MarkerType.CIRCLE)


def test_n_max_floors_to_one():
    region = circle_region(r=3.0)  # 29 pixels
    params = LossParams(space_factor=50.0)
    assert params.n_max(region.size) == 1


def test_invalid_params_rejected():
    with pytest.raises(ValueError):
        LossParams(alpha=-0.1)
    with pytest.raises(ValueError):
        LossParams(space_factor=1.0)


def test_global_minimum_at_three_circles():
    # the loss with strong priors singles out the true decomposition while
    # the raw symmetric difference alone bottoms out at a high cluster count
    region = three_circle_region(radius=10.0, sep_ratio=1.25)
    params = LossParams(alpha=1.5, beta=5.0, space_factor=region.size / 15.5)
    ev = LossEvaluator(region, params, seed=0)
    markers = (MarkerType.CIRCLE, MarkerType.SQUARE, MarkerType.DIAMOND)
    table = {(n, m): ev.loss(n, m) for n in range(1, ev.n_max + 1) for m in markers}
    best_L = min(table, key=lambda k: table[k].total)
    best_f = min(table, key=lambda k: (table[k].sym_diff, k[0]))
    assert best_L == (3, MarkerType.CIRCLE)
    assert best_f[0] != 3
