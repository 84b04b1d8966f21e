"""Locate overlapping scatter marks in rasterized scatter images.

The pipeline binarizes a scatter image, splits the foreground into
connected regions, and for each region searches for the cluster count and
marker type whose re-visualization (marks redrawn at k-means centroids)
best matches the region under a symmetric-difference loss with priors.
The search is an adaptive simulated annealing.  A synthetic benchmark
generator, an assignment-cost metric and a Gaussian-filter baseline are
included for evaluation.
"""

from .raster import GrayImage, BinaryRegion, binarize, connected_regions, load_png
from .markers import MarkerType, Mark, ALL_MARKERS, rasterize_mark, revisualize
from .clustering import Clustering, kmeans, cluster_radius
from .objective import LossParams, LossBreakdown, LossEvaluator, loss, sym_diff_size
from .annealing import AnnealParams, AnnealResult, anneal, exhaustive_search
from .locator import LocatorConfig, MarkSet, RsmaEstimate, classify_single, rsma, locate
from .benchgen import (BenchmarkCase, SuiteSpec, desk_suite_spec, generate_case,
                       generate_suite, overlap_severity, paper_suite_spec)
from .metric import AcbReport, acb_score, capped_distance, assignment_cost
from .baseline import FilterConfig, filter_locate

__version__ = "0.1.0"

__all__ = [
    "GrayImage", "BinaryRegion", "binarize", "connected_regions", "load_png",
    "MarkerType", "Mark", "ALL_MARKERS", "rasterize_mark", "revisualize",
    "Clustering", "kmeans", "cluster_radius",
    "LossParams", "LossBreakdown", "LossEvaluator", "loss", "sym_diff_size",
    "AnnealParams", "AnnealResult", "anneal", "exhaustive_search",
    "LocatorConfig", "MarkSet", "RsmaEstimate", "classify_single", "rsma", "locate",
    "BenchmarkCase", "SuiteSpec", "desk_suite_spec", "generate_case", "generate_suite",
    "overlap_severity", "paper_suite_spec",
    "AcbReport", "acb_score", "capped_distance", "assignment_cost",
    "FilterConfig", "filter_locate",
]
