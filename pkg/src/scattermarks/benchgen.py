"""Synthetic scatter-image benchmark with ground truth.

Cases sample 2-D points from isotropic Gaussian blobs or from a normally
distributed hypercube classification layout (the scikit-learn generators),
scale them into a bare plot area, and draw one mark per point with the
same glyph geometry the locator re-visualizes with, so a disjoint case
round-trips exactly.  A third layout, ``uniform_disjoint``, places marks
on a seeded jittered grid with a minimum separation, guaranteeing
severity 0.  Each case carries its marks, marker type and an
overlapping-severity annotation.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .markers import Mark, MarkerType, plus_bar_thickness, rasterize_mark
from .raster import GrayImage

DISTRIBUTIONS = ("gaussian_blobs", "hypercube_classes", "uniform_disjoint")

DEFAULT_PLOT_SIZE = (480, 480)
DEFAULT_MARGIN = 10
DEFAULT_MARK_RADIUS = 6.0
DEFAULT_STROKE = 2.0

# Blob parameter grid for the full-scale suite: (cluster count, cluster std
# in sampling units; centers are drawn from a box of side 10).
PAPER_BLOB_PARAMS = tuple(
    {"centers": c, "cluster_std": s} for c in (3, 5) for s in (0.5, 1.0, 2.0)
)
PAPER_VARIANTS = tuple(
    [("gaussian_blobs", p) for p in PAPER_BLOB_PARAMS]
    + [("hypercube_classes", {})] * 3
)


@dataclass(frozen=True)
class BenchmarkCase:
    name: str
    image: GrayImage
    truth: tuple[Mark, ...]
    marker: MarkerType
    q: int
    severity: float
    distribution: str
    seed: int

    def truth_centers(self) -> np.ndarray:
        return np.array([(m.x, m.y) for m in self.truth], dtype=float)


@dataclass(frozen=True)
class SuiteSpec:
    """What to generate: every marker x every Q x every variant.

    A variant is a (distribution, params) pair.  ``hollow_variants``, when
    set, replaces the variant list for hollow marker kinds.
    """

    markers: tuple[MarkerType, ...] = tuple(MarkerType)
    q_values: tuple[int, ...] = (100, 400, 700)
    variants: tuple = PAPER_VARIANTS
    hollow_variants: tuple | None = None
    seed: int = 0
    mark_radius: float = DEFAULT_MARK_RADIUS
    stroke_width: float = DEFAULT_STROKE
    size: tuple[int, int] = DEFAULT_PLOT_SIZE
    margin: int = DEFAULT_MARGIN

    def variants_for(self, marker: MarkerType) -> tuple:
        if marker.hollow and self.hollow_variants is not None:
            return self.hollow_variants
        return self.variants

    @property
    def total_cases(self) -> int:
        return sum(
            len(self.q_values) * len(self.variants_for(m)) for m in self.markers
        )

    def to_dict(self) -> dict:
        out = {
            "markers": [m.value for m in self.markers],
            "q_values": list(self.q_values),
            "variants": [[d, dict(p)] for d, p in self.variants],
            "seed": self.seed,
            "mark_radius": self.mark_radius,
            "stroke_width": self.stroke_width,
            "size": list(self.size),
            "margin": self.margin,
        }
        if self.hollow_variants is not None:
            out["hollow_variants"] = [[d, dict(p)] for d, p in self.hollow_variants]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "SuiteSpec":
        kwargs = {}
        if "markers" in data:
            kwargs["markers"] = tuple(MarkerType(m) for m in data["markers"])
        if "q_values" in data:
            kwargs["q_values"] = tuple(int(q) for q in data["q_values"])
        if "variants" in data:
            kwargs["variants"] = tuple((d, dict(p)) for d, p in data["variants"])
        if data.get("hollow_variants") is not None:
            kwargs["hollow_variants"] = tuple((d, dict(p)) for d, p in data["hollow_variants"])
        if "size" in data:
            kwargs["size"] = tuple(data["size"])
        for key in ("seed", "mark_radius", "stroke_width", "margin"):
            if key in data:
                kwargs[key] = data[key]
        return cls(**kwargs)


def paper_suite_spec(seed: int = 0) -> SuiteSpec:
    """The full-scale suite shape: 11 markers x 3 counts x 9 images = 297."""
    return SuiteSpec(seed=seed)


def desk_suite_spec(seed: int = 0) -> SuiteSpec:
    """A small mixed-severity suite: 11 markers x Q=100 x 3 cases.

    Filled kinds get sparse-to-dense Gaussian blobs; hollow kinds get
    disjoint layouts (overlapping thin rings are ill-posed for any
    locator and swamp the comparison).  Marks are drawn large enough
    that two-mark regions keep a nontrivial search space even under a
    coarse space factor.
    """
    return SuiteSpec(
        q_values=(100,),
        variants=(
            ("gaussian_blobs", {"centers": 3, "cluster_std": 1.0}),
            ("gaussian_blobs", {"centers": 5, "cluster_std": 0.5}),
            ("gaussian_blobs", {"centers": 4, "cluster_std": 0.35}),
        ),
        hollow_variants=(
            ("uniform_disjoint", {}),
            ("uniform_disjoint", {}),
            ("uniform_disjoint", {}),
        ),
        seed=seed,
        mark_radius=12.0,
        stroke_width=3.0,
        size=(720, 720),
        margin=24,
    )


def overlap_severity(per_mark_rasters) -> float:
    """1 - |union| / sum of per-mark pixel counts; 0 when disjoint."""
    rasters = list(per_mark_rasters)
    if not rasters:
        raise ValueError("severity of an empty mark list is undefined")
    union: set = set()
    total = 0
    for raster in rasters:
        union |= raster
        total += len(raster)
    return 1.0 - len(union) / total


def glyph_reach(marker: MarkerType, radius: float) -> float:
    """Distance from center to the farthest point of the glyph."""
    if marker.filled_kind is MarkerType.PLUS:
        half_t = plus_bar_thickness(radius) / 2.0
        return math.hypot(radius, half_t)
    return radius


def sample_points(distribution: str, q: int, params: dict, seed: int) -> np.ndarray:
    """Draw q raw 2-D points from the named distribution (pre-scaling)."""
    if distribution == "gaussian_blobs":
        from sklearn.datasets import make_blobs

        centers = int(params.get("centers", 3))
        std = float(params.get("cluster_std", 1.0))
        if centers < 1 or std <= 0:
            raise ValueError(f"bad blob params {params}")
        pts, _ = make_blobs(n_samples=q, n_features=2, centers=centers,
                            cluster_std=std, center_box=(0.0, 10.0),
                            random_state=seed)
        return pts
    if distribution == "hypercube_classes":
        from sklearn.datasets import make_classification

        if q < 4:
            raise ValueError("hypercube sampling needs q >= 4")
        pts, _ = make_classification(
            n_samples=q, n_features=2, n_informative=2, n_redundant=0,
            n_classes=2, n_clusters_per_class=int(params.get("clusters_per_class", 2)),
            class_sep=float(params.get("class_sep", 2.0)), flip_y=0.0,
            random_state=seed)
        return pts
    raise ValueError(f"unknown distribution {distribution!r}")


def sample_disjoint(q: int, size, margin: int, min_distance: float, seed: int) -> np.ndarray:
    """q points on a seeded jittered grid with pairwise distance > min_distance."""
    width, height = size
    side = math.ceil(math.sqrt(q))
    usable_w = width - 1 - 2 * margin
    usable_h = height - 1 - 2 * margin
    cell = min(usable_w, usable_h) / side
    jitter = (cell - min_distance) / 2.0
    if jitter < 0:
        raise ValueError(
            f"cannot place {q} marks with separation {min_distance} in {size}")
    rng = np.random.default_rng(seed)
    chosen = rng.choice(side * side, size=q, replace=False)
    rows, cols = np.divmod(chosen, side)
    cx = margin + (cols + 0.5) * (usable_w / side)
    cy = margin + (rows + 0.5) * (usable_h / side)
    offsets = rng.uniform(-jitter, jitter, size=(2, q))
    return np.column_stack([cx + offsets[0], cy + offsets[1]])


def scale_to_plot(points: np.ndarray, size=DEFAULT_PLOT_SIZE, margin: int = DEFAULT_MARGIN) -> np.ndarray:
    """Min-max scale points into [margin, size - margin] per axis."""
    width, height = size
    pts = np.asarray(points, dtype=float)
    lo = pts.min(axis=0)
    span = pts.max(axis=0) - lo
    out = np.empty_like(pts)
    for axis, extent in enumerate((width, height)):
        usable = extent - 1 - 2 * margin
        if span[axis] > 0:
            out[:, axis] = margin + (pts[:, axis] - lo[axis]) / span[axis] * usable
        else:
            out[:, axis] = margin + usable / 2.0
    return out


def generate_case(marker: MarkerType, q: int, distribution: str, params: dict | None = None,
                  seed: int = 0, name: str = "", radius: float = DEFAULT_MARK_RADIUS,
                  stroke_width: float = DEFAULT_STROKE, size=DEFAULT_PLOT_SIZE,
                  margin: int = DEFAULT_MARGIN) -> BenchmarkCase:
    """Generate one synthetic scatter image with ground truth."""
    if q < 1:
        raise ValueError("q must be >= 1")
    params = params or {}
    if distribution == "uniform_disjoint":
        min_distance = float(params.get("min_distance",
                                        2.0 * glyph_reach(marker, radius) + 1.0))
        centers = sample_disjoint(q, size, margin, min_distance, seed)
    else:
        centers = scale_to_plot(sample_points(distribution, q, params, seed), size, margin)

    width, height = size
    canvas = np.full((height, width), 255, dtype=np.uint8)
    truth = []
    rasters = []
    for cx, cy in centers:
        mark = Mark(float(cx), float(cy), radius, marker)
        raster = rasterize_mark(mark, stroke_width)
        rasters.append(raster)
        truth.append(mark)
        for x, y in raster:
            if 0 <= x < width and 0 <= y < height:
                canvas[y, x] = 0

    return BenchmarkCase(
        name=name or f"{marker.value}_q{q}_s{seed}",
        image=GrayImage(canvas), truth=tuple(truth), marker=marker, q=q,
        severity=overlap_severity(rasters), distribution=distribution, seed=seed,
    )


def _case_seed(master: int, index: int) -> int:
    return int(np.random.SeedSequence([int(master) & 0xFFFFFFFF, index]).generate_state(1)[0])


def generate_suite(spec: SuiteSpec, out_dir: str | Path | None = None):
    """Generate all cases of a suite; optionally write PNG + truth JSON + manifest.

    Returns (cases, manifest).  Case seeds derive from the suite seed and the
    case index, so the suite is reproducible and the manifest hash stable.
    """
    cases: list[BenchmarkCase] = []
    index = 0
    for marker in spec.markers:
        for q in spec.q_values:
            for variant, (distribution, params) in enumerate(spec.variants_for(marker)):
                seed = _case_seed(spec.seed, index)
                name = f"{marker.value}_q{q}_{variant:02d}"
                cases.append(generate_case(
                    marker, q, distribution, dict(params), seed=seed, name=name,
                    radius=spec.mark_radius, stroke_width=spec.stroke_width,
                    size=spec.size, margin=spec.margin))
                index += 1

    manifest = {
        "spec": spec.to_dict(),
        "cases": [
            {"name": c.name, "image": f"{c.name}.png", "truth": f"{c.name}.json",
             "marker": c.marker.value, "q": c.q, "severity": c.severity,
             "distribution": c.distribution, "seed": c.seed}
            for c in cases
        ],
    }
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for case in cases:
            save_case(case, out)
        (out / "manifest.json").write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    return cases, manifest


def truth_dict(case: BenchmarkCase) -> dict:
    return {
        "image": f"{case.name}.png",
        "marker": case.marker.value,
        "q": case.q,
        "severity": case.severity,
        "distribution": case.distribution,
        "seed": case.seed,
        "marks": [
            {"x": m.x, "y": m.y, "radius": m.radius, "marker": m.marker.value}
            for m in case.truth
        ],
    }


def save_case(case: BenchmarkCase, out_dir: str | Path) -> None:
    from PIL import Image

    out = Path(out_dir)
    Image.fromarray(case.image.values, mode="L").save(out / f"{case.name}.png")
    (out / f"{case.name}.json").write_text(
        json.dumps(truth_dict(case), sort_keys=True, indent=2) + "\n")


def manifest_hash(manifest: dict) -> str:
    return hashlib.sha256(json.dumps(manifest, sort_keys=True).encode()).hexdigest()
