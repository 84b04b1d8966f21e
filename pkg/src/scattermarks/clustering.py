"""Seeded k-means over a region's pixel coordinates.

Each pixel is a 2-feature data point (its x, y position).  Results are
bit-identical for a given (region, n, seed): k-means++ seeding draws from
a generator keyed by (seed, n, restart), nearest-centroid ties break to
the lowest cluster index, and the kept restart is the deterministic
argmin of inertia with the same tie-break.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_LLOYD_ITERATIONS = 100
DEFAULT_RESTARTS = 3

# Points per block when forming point-to-centroid distance matrices, to
# bound memory on large regions.
_CHUNK = 4096


@dataclass(frozen=True, eq=False)
class Clustering:
    """n clusters over a region's pixels.

    ``assignment[i]`` indexes the cluster of ``region.coords[i]``;
    ``radii[k]`` is the max distance from centroid k to its pixels;
    every centroid is the mean of its assigned pixels.
    """

    centroids: np.ndarray   # (n, 2) float, [x, y]
    assignment: np.ndarray  # (N,) int
    radii: np.ndarray       # (n,) float
    inertia: float

    @property
    def n(self) -> int:
        return len(self.centroids)


def cluster_radius(pixels: np.ndarray, centroid) -> float:
    """Max Euclidean distance from ``centroid`` to any of ``pixels``."""
    pts = np.asarray(pixels, dtype=float)
    if pts.size == 0:
        raise ValueError("cluster radius of an empty pixel set is undefined")
    return float(np.sqrt(((pts - np.asarray(centroid, dtype=float)) ** 2).sum(axis=1)).max())


def _nearest(points: np.ndarray, centroids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Index of the nearest centroid per point (ties -> lowest index) and the
    squared distance to it."""
    n_pts = len(points)
    labels = np.empty(n_pts, dtype=np.intp)
    sq = np.empty(n_pts, dtype=float)
    c_sq = (centroids ** 2).sum(axis=1)
    for start in range(0, n_pts, _CHUNK):
        block = points[start:start + _CHUNK]
        d2 = (block ** 2).sum(axis=1)[:, None] + c_sq[None, :] - 2.0 * block @ centroids.T
        np.maximum(d2, 0.0, out=d2)
        idx = np.argmin(d2, axis=1)
        labels[start:start + _CHUNK] = idx
        sq[start:start + _CHUNK] = d2[np.arange(len(block)), idx]
    return labels, sq


def _kmeanspp_init(points: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding: first center uniform, then proportional to squared
    distance from the chosen set."""
    n_pts = len(points)
    centers = np.empty((n, 2), dtype=float)
    first = int(rng.integers(n_pts))
    centers[0] = points[first]
    min_sq = ((points - centers[0]) ** 2).sum(axis=1)
    for k in range(1, n):
        total = min_sq.sum()
        if total <= 0.0:
            # all remaining points coincide with chosen centers
            idx = int(rng.integers(n_pts))
        else:
            idx = int(rng.choice(n_pts, p=min_sq / total))
        centers[k] = points[idx]
        min_sq = np.minimum(min_sq, ((points - centers[k]) ** 2).sum(axis=1))
    return centers


def _repair_empty(points, centroids, labels, sq):
    """Reseed each empty cluster on the point currently farthest from its
    assigned centroid.  Moving that point can only lower the total WCSS.
    Donors must keep at least one pixel, so no new empty cluster appears."""
    counts = np.bincount(labels, minlength=len(centroids))
    for k in np.nonzero(counts == 0)[0]:
        eligible = counts[labels] >= 2
        far = int(np.argmax(np.where(eligible, sq, -1.0)))
        counts[labels[far]] -= 1
        counts[k] += 1
        centroids[k] = points[far]
        labels[far] = k
        sq[far] = 0.0
    return labels


def _update_means(points, labels, n):
    sums = np.zeros((n, 2), dtype=float)
    np.add.at(sums, labels, points)
    counts = np.bincount(labels, minlength=n).astype(float)
    return sums / counts[:, None]


def _lloyd(points: np.ndarray, centers: np.ndarray, max_iter: int = MAX_LLOYD_ITERATIONS):
    """Lloyd iterations to an assignment fixpoint (or the iteration cap).

    Every iteration ends with a mean update, so the returned centroids are
    exactly the means of the returned assignment even at the cap.  Returns
    (labels, centroids, inertia, per-iteration WCSS history).
    """
    centroids = centers.copy()
    n = len(centroids)
    labels = None
    history: list[float] = []
    for _ in range(max_iter):
        new_labels, sq = _nearest(points, centroids)
        new_labels = _repair_empty(points, centroids, new_labels, sq)
        converged = labels is not None and np.array_equal(new_labels, labels)
        labels = new_labels
        centroids = _update_means(points, labels, n)
        history.append(float(((points - centroids[labels]) ** 2).sum()))
        if converged:
            break
    return labels, centroids, history[-1], history


def _radii(points: np.ndarray, centroids: np.ndarray, labels: np.ndarray) -> np.ndarray:
    dist = np.sqrt(((points - centroids[labels]) ** 2).sum(axis=1))
    out = np.zeros(len(centroids), dtype=float)
    np.maximum.at(out, labels, dist)
    return out


def kmeans(region, n: int, seed: int, restarts: int = DEFAULT_RESTARTS,
           max_iter: int = MAX_LLOYD_ITERATIONS) -> Clustering:
    """Cluster a region's pixels into ``n`` groups, deterministically per seed.

    Runs ``restarts`` independent k-means++ starts and keeps the lowest
    inertia (ties -> lowest restart index).
    """
    points = region.coords if hasattr(region, "coords") else np.asarray(region, dtype=float)
    n_pts = len(points)
    if n < 1:
        raise ValueError(f"cluster count must be >= 1, got {n}")
    if n > n_pts:
        raise ValueError(f"cannot form {n} clusters from {n_pts} pixels")

    if n == 1:
        centroid = points.mean(axis=0, keepdims=True)
        labels = np.zeros(n_pts, dtype=np.intp)
        return Clustering(centroid, labels, _radii(points, centroid, labels),
                          float(((points - centroid) ** 2).sum()))
    if n == n_pts:
        # every pixel its own cluster; radii are all zero
        labels = np.arange(n_pts, dtype=np.intp)
        return Clustering(points.copy(), labels, np.zeros(n_pts), 0.0)

    best = None
    for restart in range(restarts):
        rng = np.random.default_rng([int(seed) & 0xFFFFFFFF, n, restart])
        centers = _kmeanspp_init(points, n, rng)
        labels, centroids, inertia, _ = _lloyd(points, centers, max_iter)
        if best is None or inertia < best[0]:
            best = (inertia, labels, centroids)
    inertia, labels, centroids = best
    return Clustering(centroids, labels, _radii(points, centroids, labels), inertia)
