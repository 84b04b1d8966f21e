"""The localization loss for one connected region.

For a candidate (cluster count n, marker type m) the loss combines

  sym_diff      pixel count of the symmetric difference between the region
                and its re-visualization on the n-cluster k-means result,
  count_prior   (n / n_max) * sym_diff + n * sqrt(space_factor), pushing
                toward the fewest marks that still explain the region,
  radius_prior  population standard deviation of the n cluster radii,
                pulling same-size marks toward equal radii (0 when n = 1),

as  total = sym_diff + alpha * count_prior + beta * radius_prior.

``space_factor`` converts region size into the cluster-count search bound
n_max = max(1, floor(|region| / space_factor)).

Clustering is independent of the marker type, so a per-region evaluator
caches one clustering per n and shares it across all markers; this is the
dominant cost saver.  Everything is deterministic given the seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .clustering import Clustering, kmeans
from .markers import MarkerType, revisualize


@dataclass(frozen=True)
class LossParams:
    """Weights and search-space setting for the loss."""

    alpha: float = 1.1
    beta: float = 1.0
    space_factor: float = 60.0

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be >= 0")
        if self.space_factor <= 1:
            raise ValueError("space_factor must be > 1")

    def n_max(self, region_size: int) -> int:
        """Largest admissible cluster count for a region of the given size."""
        return max(1, int(region_size / self.space_factor))


@dataclass(frozen=True)
class LossBreakdown:
    sym_diff: float
    count_prior: float
    radius_prior: float
    total: float


def sym_diff_size(a: set, b: set) -> int:
    """|a symmetric-difference b|."""
    return len(a ^ b)


class LossEvaluator:
    """Caches clusterings per n and loss values per (n, marker) for one region."""

    def __init__(self, region, params: LossParams, seed: int, stroke_width: float | None = None):
        self.region = region
        self.params = params
        self.seed = int(seed)
        self.stroke_width = stroke_width
        self.n_max = params.n_max(region.size)
        self._clusterings: dict[int, Clustering] = {}
        self._losses: dict[tuple[int, MarkerType], LossBreakdown] = {}

    def clustering(self, n: int) -> Clustering:
        c = self._clusterings.get(n)
        if c is None:
            c = kmeans(self.region, n, self.seed)
            self._clusterings[n] = c
        return c

    def loss(self, n: int, marker: MarkerType) -> LossBreakdown:
        if not 1 <= n <= self.n_max:
            raise ValueError(f"n={n} outside [1, {self.n_max}]")
        key = (n, marker)
        cached = self._losses.get(key)
        if cached is None:
            cached = self._evaluate(n, marker)
            self._losses[key] = cached
        return cached

    def _evaluate(self, n: int, marker: MarkerType) -> LossBreakdown:
        p = self.params
        clusters = self.clustering(n)
        revis = revisualize(clusters, marker, self.stroke_width)
        f = float(sym_diff_size(self.region.pixels, revis))
        g = (n / self.n_max) * f + n * math.sqrt(p.space_factor)
        h = float(np.std(clusters.radii)) if n > 1 else 0.0
        return LossBreakdown(f, g, h, f + p.alpha * g + p.beta * h)


def loss(region, n: int, marker: MarkerType, params: LossParams, seed: int,
         stroke_width: float | None = None) -> LossBreakdown:
    """One-shot loss evaluation (no cache reuse across calls)."""
    return LossEvaluator(region, params, seed, stroke_width).loss(n, marker)
