"""Seeded k-means over pixel coordinates."""

from itertools import product

import numpy as np
import pytest

from scattermarks.clustering import _kmeanspp_init, _lloyd, cluster_radius, kmeans
from scattermarks.raster import BinaryRegion


def blob(cx, cy, half=1):
    return {(cx + dx, cy + dy) for dx in range(-half, half + 1)
            for dy in range(-half, half + 1)}


def brute_force_partition(points, n):
    """Exhaustive minimum-WCSS partition of <= ~12 points into n nonempty
    groups (first point pinned to group 0 to cut symmetry)."""
    points = np.asarray(points, dtype=float)
    best_wcss, best_labels = None, None
    for rest in product(range(n), repeat=len(points) - 1):
        labels = np.array((0,) + rest)
        if len(set(labels.tolist())) != n:
            continue
        wcss = 0.0
        for k in range(n):
            group = points[labels == k]
            wcss += ((group - group.mean(axis=0)) ** 2).sum()
        if best_wcss is None or wcss < best_wcss:
            best_wcss, best_labels = wcss, labels
    return best_wcss, best_labels


def test_single_cluster_is_mean_and_radius():
    region = BinaryRegion.from_pixels({(0, 0), (0, 2), (4, 0), (4, 2)})
    result = kmeans(region, 1, seed=0)
    assert np.allclose(result.centroids[0], [2.0, 1.0])
    expected_radius = np.sqrt(2.0 ** 2 + 1.0 ** 2)
    assert result.radii[0] == pytest.approx(expected_radius)


def test_two_symmetric_groups():
    region = BinaryRegion.from_pixels({(0, 0), (0, 1), (10, 0), (10, 1)})
    result = kmeans(region, 2, seed=1)
    got = sorted(map(tuple, result.centroids))
    assert np.allclose(got, [(0.0, 0.5), (10.0, 0.5)])


def test_three_blobs_match_exhaustive_oracle():
    pixels = blob(0, 0, 1) | blob(20, 0, 1) | blob(10, 18, 1)
    region = BinaryRegion.from_pixels(pixels)
    # oracle on a subsample is infeasible beyond ~12 points; use blob centers
    # of a reduced 9-point version with the same layout
    small = {(0, 0), (0, 1), (1, 0), (20, 0), (20, 1), (21, 0), (10, 18), (10, 19), (11, 18)}
    small_region = BinaryRegion.from_pixels(small)
    oracle_wcss, _ = brute_force_partition(small_region.coords, 3)
    result = kmeans(small_region, 3, seed=2)
    assert result.inertia == pytest.approx(oracle_wcss, abs=1e-9)

    full = kmeans(region, 3, seed=2)
    for centroid in full.centroids:
        dists = [np.hypot(centroid[0] - cx, centroid[1] - cy)
                 for cx, cy in ((0, 0), (20, 0), (10, 18))]
        assert min(dists) < 1.0  # one centroid per blob


def test_deterministic_per_seed():
    rng = np.random.default_rng(7)
    pixels = {(int(x), int(y)) for x, y in rng.integers(0, 50, size=(120, 2))}
    region = BinaryRegion.from_pixels(pixels)
    a = kmeans(region, 5, seed=42)
    b = kmeans(region, 5, seed=42)
    assert np.array_equal(a.centroids, b.centroids)
    assert np.array_equal(a.assignment, b.assignment)
    assert np.array_equal(a.radii, b.radii)
    c = kmeans(region, 5, seed=43)
    assert not np.array_equal(a.centroids, c.centroids)


def test_wcss_never_increases_across_lloyd_iterations():
    rng = np.random.default_rng(3)
    points = rng.uniform(0, 30, size=(60, 2)).round()
    init = _kmeanspp_init(points, 4, np.random.default_rng(0))
    _, _, _, history = _lloyd(points, init)
    for earlier, later in zip(history, history[1:]):
        assert later <= earlier + 1e-9


def test_singletons_when_n_equals_point_count():
    region = BinaryRegion.from_pixels({(0, 0), (3, 1), (7, 2), (2, 9)})
    result = kmeans(region, 4, seed=0)
    assert sorted(result.assignment.tolist()) == [0, 1, 2, 3]
    assert np.all(result.radii == 0.0)


def test_centroid_mean_invariant_and_no_empty_clusters():
    rng = np.random.default_rng(9)
    pixels = {(int(x), int(y)) for x, y in rng.integers(0, 25, size=(80, 2))}
    region = BinaryRegion.from_pixels(pixels)
    for n in (2, 5, 9):
        result = kmeans(region, n, seed=5)
        counts = np.bincount(result.assignment, minlength=n)
        assert counts.min() >= 1
        for k in range(n):
            group = region.coords[result.assignment == k]
            assert np.allclose(result.centroids[k], group.mean(axis=0), atol=1e-9)
            assert result.radii[k] == pytest.approx(
                cluster_radius(group, result.centroids[k]))


def test_invalid_cluster_counts():
    region = BinaryRegion.from_pixels({(0, 0), (1, 0)})
    with pytest.raises(ValueError):
        kmeans(region, 0, seed=0)
    with pytest.raises(ValueError):
        kmeans(region, 3, seed=0)


def test_cluster_radius_examples():
    assert cluster_radius([(0, 0)], (0, 0)) == 0.0
    assert cluster_radius([(0, 0), (0, 2)], (0, 1)) == 1.0
    with pytest.raises(ValueError):
        cluster_radius(np.empty((0, 2)), (0, 0))


def test_cluster_radius_of_rasterized_disk():
    # all integer points within distance 2 of the center: the radius must
    # come back as exactly 2 (the oracle enumerates the disk)
    disk = [(x, y) for x in range(-3, 4) for y in range(-3, 4) if x * x + y * y <= 4]
    assert len(disk) == 13
    assert cluster_radius(disk, (0, 0)) == 2.0
