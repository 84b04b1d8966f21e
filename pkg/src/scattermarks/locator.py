"""End-to-end mark localization for one image.

Pipeline: binarize, split into connected regions, recognize isolated
single marks, derive the space-setting factor from their average size
(the RSMA step), then anneal every multi-mark region and assemble the
located marks.  Every random draw descends from one master seed, so a
run is fully deterministic.
"""

from __future__ import annotations

import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from statistics import median

import numpy as np

from .annealing import AnnealParams, anneal
from .clustering import kmeans
from .markers import ALL_MARKERS, DEFAULT_STROKE_WIDTH, Mark, MarkerType, rasterize_mark
from .objective import LossEvaluator, LossParams, sym_diff_size
from .raster import BinaryRegion, GrayImage, binarize, connected_regions

# Fallback space factor when no region classifies as a single mark;
# mid-range of the band where performance is flat.
FALLBACK_SPACE_FACTOR = 60.0

# Stroke widths tried when fitting the border thickness of hollow singles.
_STROKE_CANDIDATES = range(1, 9)


@dataclass(frozen=True)
class LocatorConfig:
    threshold: object = "auto"      # luminance cutoff, or "auto" for Otsu
    invert: bool = False
    min_region_px: int = 4
    markers: tuple[MarkerType, ...] = ALL_MARKERS
    alpha: float = 1.1
    beta: float = 1.0
    gamma_s: float = 1.5
    gamma_m: float = 1.5
    space_factor: float | None = None   # None -> RSMA estimate
    kappa: float = 0.8
    single_threshold: float = 0.2
    restrict_marker: bool = True
    stroke_width: float | None = None   # None -> RSMA estimate, fallback 2
    seed: int = 0
    workers: int = 1


@dataclass(frozen=True)
class RegionResult:
    region_id: int
    n: int
    marker: MarkerType
    loss: float
    single: bool
    size: int
    elapsed_ms: float


@dataclass(frozen=True)
class LocatedMark:
    x: float
    y: float
    radius: float
    marker: MarkerType | None
    region_id: int


@dataclass(frozen=True)
class RsmaEstimate:
    """Marker size/type estimated from isolated single marks."""

    single_mark_sizes: tuple[int, ...]
    expected_size: float | None
    estimated_marker: MarkerType | None
    estimated_stroke: float
    kappa: float
    space_factor: float
    used_fallback: bool


@dataclass
class MarkSet:
    marks: list[LocatedMark]
    source_image: str = ""
    regions: list[RegionResult] = field(default_factory=list)
    timing_ms: float = 0.0

    def centers(self) -> np.ndarray:
        return np.array([(m.x, m.y) for m in self.marks], dtype=float).reshape(-1, 2)

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "image": self.source_image,
            "marks": [
                {"x": m.x, "y": m.y, "radius": m.radius,
                 "marker": m.marker.value if m.marker else None,
                 "region_id": m.region_id}
                for m in self.marks
            ],
            "regions": [
                {"region_id": r.region_id, "n": r.n,
                 "marker": r.marker.value if r.marker else None,
                 "loss": r.loss, "single": r.single, "size": r.size}
                for r in self.regions
            ],
        }
        if include_timing:
            out["timing_ms"] = self.timing_ms
        return out


def classify_single(region: BinaryRegion, markers, stroke_width: float = DEFAULT_STROKE_WIDTH,
                    tau: float = 0.2) -> tuple[bool, MarkerType, float]:
    """Decide whether a region is one isolated mark.

    Evaluates the n=1 symmetric difference for every marker; the region is
    a single when the best relative difference is at most ``tau``.  Returns
    (is_single, best marker, best relative difference).
    """
    markers = tuple(markers)
    if not markers:
        raise ValueError("marker set must be nonempty")
    clusters = kmeans(region, 1, seed=0)
    best_marker, best_f = None, None
    cx, cy = clusters.centroids[0]
    r = float(clusters.radii[0])
    for marker in markers:
        raster = rasterize_mark(Mark(float(cx), float(cy), r, marker), stroke_width)
        f = sym_diff_size(region.pixels, raster)
        if best_f is None or f < best_f:
            best_marker, best_f = marker, f
    ratio = best_f / region.size
    return ratio <= tau, best_marker, ratio


def fit_stroke_width(region: BinaryRegion, marker: MarkerType) -> int:
    """Border thickness of a hollow single mark, by trying integer widths
    and keeping the best n=1 re-visualization fit."""
    clusters = kmeans(region, 1, seed=0)
    cx, cy = clusters.centroids[0]
    r = float(clusters.radii[0])
    best_w, best_f = 1, None
    for w in _STROKE_CANDIDATES:
        raster = rasterize_mark(Mark(float(cx), float(cy), r, marker), float(w))
        f = sym_diff_size(region.pixels, raster)
        if best_f is None or f < best_f:
            best_w, best_f = w, f
    return best_w


def rsma(regions, markers, kappa: float = 0.8,
         stroke_width: float = DEFAULT_STROKE_WIDTH, tau: float = 0.2,
         fallback: float = FALLBACK_SPACE_FACTOR,
         classifications=None) -> RsmaEstimate:
    """Estimate marker size, type, stroke and the space factor from singles.

    ``classifications`` may carry precomputed classify_single results in
    region order.  The factor kappa * E(size) is clamped below the smallest
    multi-mark region so its search space stays nonempty.
    """
    if not regions:
        raise ValueError("rsma needs at least one region")
    markers = tuple(markers)
    if classifications is None:
        classifications = [classify_single(r, markers, stroke_width, tau) for r in regions]

    singles = [(reg, cls[1]) for reg, cls in zip(regions, classifications) if cls[0]]
    multi_sizes = [reg.size for reg, cls in zip(regions, classifications) if not cls[0]]

    if not singles:
        return RsmaEstimate((), None, None, stroke_width, kappa, fallback, used_fallback=True)

    sizes = tuple(reg.size for reg, _ in singles)
    expected = float(np.mean(sizes))
    modal = Counter(m for _, m in singles).most_common()
    top = max(count for _, count in modal)
    estimated_marker = min((m for m, count in modal if count == top),
                           key=lambda m: list(MarkerType).index(m))

    if estimated_marker.hollow:
        fits = [fit_stroke_width(reg, estimated_marker)
                for reg, m in singles if m == estimated_marker]
        estimated_stroke = float(median(fits))
    else:
        estimated_stroke = float(stroke_width)

    factor = kappa * expected
    if multi_sizes:
        factor = min(factor, min(multi_sizes) - 1.0)
    factor = max(factor, 2.0)
    return RsmaEstimate(sizes, expected, estimated_marker, estimated_stroke,
                        kappa, factor, used_fallback=False)


def _region_seed(master_seed: int, region_id: int) -> int:
    """Stable per-region RNG seed derived from the master seed."""
    return int(np.random.SeedSequence([int(master_seed) & 0xFFFFFFFF, region_id])
               .generate_state(1)[0])


def _locate_region(region, region_id, is_single, best_marker, anneal_markers,
                   config: LocatorConfig, space_factor: float, stroke: float):
    start = time.perf_counter()
    if is_single:
        clusters = kmeans(region, 1, seed=0)
        cx, cy = clusters.centroids[0]
        marks = [LocatedMark(float(cx), float(cy), float(clusters.radii[0]),
                             best_marker, region_id)]
        elapsed = (time.perf_counter() - start) * 1000.0
        info = RegionResult(region_id, 1, best_marker, 0.0, True, region.size, elapsed)
        return marks, info

    loss_params = LossParams(alpha=config.alpha, beta=config.beta, space_factor=space_factor)
    seed = _region_seed(config.seed, region_id)
    evaluator = LossEvaluator(region, loss_params, seed,
                              stroke_width=stroke)
    result = anneal(region, anneal_markers, loss_params,
                    AnnealParams(gamma_s=config.gamma_s, gamma_m=config.gamma_m, seed=seed),
                    evaluator=evaluator)
    clusters = evaluator.clustering(result.best_n)
    marks = [LocatedMark(float(cx), float(cy), float(r), result.best_marker, region_id)
             for (cx, cy), r in zip(clusters.centroids, clusters.radii)]
    elapsed = (time.perf_counter() - start) * 1000.0
    info = RegionResult(region_id, result.best_n, result.best_marker,
                        result.best_loss, False, region.size, elapsed)
    return marks, info


def locate(image: GrayImage, config: LocatorConfig = LocatorConfig(),
           source: str = "") -> MarkSet:
    """Locate all marks in a scatter image."""
    start = time.perf_counter()
    foreground = binarize(image, config.threshold, config.invert)
    regions = connected_regions(foreground, min_pixels=config.min_region_px)
    if not regions:
        return MarkSet([], source_image=source,
                       timing_ms=(time.perf_counter() - start) * 1000.0)

    default_stroke = config.stroke_width if config.stroke_width is not None else DEFAULT_STROKE_WIDTH
    classifications = [
        classify_single(r, config.markers, default_stroke, config.single_threshold)
        for r in regions
    ]
    estimate = rsma(regions, config.markers, config.kappa, default_stroke,
                    config.single_threshold, classifications=classifications)

    space_factor = config.space_factor if config.space_factor is not None else estimate.space_factor
    stroke = config.stroke_width if config.stroke_width is not None else estimate.estimated_stroke
    if config.restrict_marker and estimate.estimated_marker is not None:
        anneal_markers = (estimate.estimated_marker,)
    else:
        anneal_markers = config.markers

    jobs = [
        (region, rid, cls[0], cls[1])
        for rid, (region, cls) in enumerate(zip(regions, classifications))
    ]

    def run(job):
        region, rid, is_single, best_marker = job
        return _locate_region(region, rid, is_single, best_marker, anneal_markers,
                              config, space_factor, stroke)

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(run, jobs))
    else:
        outcomes = [run(job) for job in jobs]

    marks: list[LocatedMark] = []
    infos: list[RegionResult] = []
    for region_marks, info in outcomes:   # region id order is preserved by map
        marks.extend(region_marks)
        infos.append(info)
    return MarkSet(marks, source_image=source, regions=infos,
                   timing_ms=(time.perf_counter() - start) * 1000.0)
