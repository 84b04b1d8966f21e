"""Synthetic benchmark generation and overlapping severity."""

import json

import numpy as np
import pytest

from scattermarks.benchgen import (SuiteSpec, desk_suite_spec, generate_case,
                                   generate_suite, glyph_reach, manifest_hash,
                                   overlap_severity, paper_suite_spec,
                                   sample_disjoint, scale_to_plot)
from scattermarks.markers import MarkerType


def test_severity_disjoint_is_zero():
    sets = [{(0, 0), (1, 0)}, {(5, 5)}, {(9, 9), (9, 8)}]
    assert overlap_severity(sets) == 0.0


def test_severity_identical_pair_is_half():
    s = {(0, 0), (1, 0), (0, 1)}
    assert overlap_severity([s, set(s)]) == 0.5


def test_severity_coincident_q_marks():
    s = {(x, y) for x in range(4) for y in range(4)}
    for q in (2, 5, 9):
        assert overlap_severity([set(s) for _ in range(q)]) == pytest.approx(1 - 1 / q)


def test_severity_partial_overlap():
    a = {(i, 0) for i in range(10)}
    b = {(i, 0) for i in range(6, 16)}
    assert len(a) == len(b) == 10 and len(a & b) == 4
    assert overlap_severity([a, b]) == pytest.approx(0.2)


def test_single_mark_case_severity_zero():
    case = generate_case(MarkerType.CIRCLE, 1, "gaussian_blobs", seed=0)
    assert case.severity == 0.0
    assert len(case.truth) == 1


def test_case_determinism():
    a = generate_case(MarkerType.DIAMOND, 40, "gaussian_blobs",
                      {"centers": 3, "cluster_std": 0.8}, seed=9)
    b = generate_case(MarkerType.DIAMOND, 40, "gaussian_blobs",
                      {"centers": 3, "cluster_std": 0.8}, seed=9)
    assert np.array_equal(a.image.values, b.image.values)
    assert a.truth == b.truth
    assert a.severity == b.severity


def test_blob_std_drives_severity():
    tight, loose = [], []
    for seed in range(5):
        tight.append(generate_case(MarkerType.CIRCLE, 80, "gaussian_blobs",
                                   {"centers": 3, "cluster_std": 0.3}, seed=seed).severity)
        loose.append(generate_case(MarkerType.CIRCLE, 80, "gaussian_blobs",
                                   {"centers": 3, "cluster_std": 2.0}, seed=seed).severity)
    assert np.mean(tight) > np.mean(loose)


def test_hypercube_distribution():
    case = generate_case(MarkerType.PLUS, 50, "hypercube_classes", seed=4)
    assert len(case.truth) == 50
    assert case.distribution == "hypercube_classes"


def test_unknown_distribution_rejected():
    with pytest.raises(ValueError):
        generate_case(MarkerType.CIRCLE, 10, "donuts", seed=0)


def test_degenerate_blob_params_rejected():
    with pytest.raises(ValueError):
        generate_case(MarkerType.CIRCLE, 10, "gaussian_blobs",
                      {"centers": 0, "cluster_std": 1.0}, seed=0)
    with pytest.raises(ValueError):
        generate_case(MarkerType.CIRCLE, 10, "gaussian_blobs",
                      {"centers": 3, "cluster_std": -1.0}, seed=0)


def test_disjoint_distribution_guarantees_severity_zero():
    for marker in (MarkerType.CIRCLE, MarkerType.HOLLOW_TRIANGLE_DOWN, MarkerType.PLUS):
        case = generate_case(marker, 60, "uniform_disjoint", seed=3,
                             radius=8.0, size=(640, 640), margin=16)
        assert case.severity == 0.0


def test_sample_disjoint_respects_min_distance():
    pts = sample_disjoint(50, (500, 500), 12, min_distance=20.0, seed=1)
    d2 = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2)
    np.fill_diagonal(d2, np.inf)
    assert np.sqrt(d2.min()) > 20.0


def test_sample_disjoint_overflow_rejected():
    with pytest.raises(ValueError):
        sample_disjoint(1000, (100, 100), 10, min_distance=30.0, seed=0)


def test_scale_to_plot_bounds():
    rng = np.random.default_rng(0)
    pts = rng.normal(0, 5, size=(200, 2))
    scaled = scale_to_plot(pts, size=(480, 480), margin=10)
    assert scaled.min() >= 10
    assert scaled.max() <= 469


def test_marks_fit_inside_plot():
    case = generate_case(MarkerType.PLUS, 30, "gaussian_blobs",
                         {"centers": 3, "cluster_std": 0.5}, seed=2,
                         radius=6.0, size=(480, 480), margin=10)
    reach = glyph_reach(MarkerType.PLUS, 6.0)
    for mark in case.truth:
        assert reach <= mark.x <= 479 - reach + 1
        assert reach <= mark.y <= 479 - reach + 1


def test_paper_suite_shape():
    spec = paper_suite_spec()
    assert spec.total_cases == 297
    assert len(spec.markers) == 11
    assert spec.q_values == (100, 400, 700)


def test_small_suite_shape_and_determinism(tmp_path):
    spec = SuiteSpec(markers=(MarkerType.CIRCLE,), q_values=(100,),
                     variants=tuple([("gaussian_blobs", {"centers": 3, "cluster_std": 1.0})] * 9),
                     seed=5)
    assert spec.total_cases == 9
    cases, manifest = generate_suite(spec, tmp_path / "a")
    assert len(cases) == 9
    _, manifest2 = generate_suite(spec, tmp_path / "b")
    assert manifest_hash(manifest) == manifest_hash(manifest2)
    assert (tmp_path / "a" / "manifest.json").read_bytes() == \
           (tmp_path / "b" / "manifest.json").read_bytes()
    for case in cases:
        assert (tmp_path / "a" / f"{case.name}.png").exists()
        truth = json.loads((tmp_path / "a" / f"{case.name}.json").read_text())
        assert len(truth["marks"]) == 100
        assert truth["severity"] == case.severity


def test_suite_spec_roundtrip():
    spec = desk_suite_spec(seed=3)
    assert spec.total_cases == 33
    again = SuiteSpec.from_dict(json.loads(json.dumps(spec.to_dict())))
    assert again == spec


def test_desk_suite_hollow_kinds_disjoint():
    spec = desk_suite_spec()
    for marker in spec.markers:
        for dist, _ in spec.variants_for(marker):
            if marker.hollow:
                assert dist == "uniform_disjoint"


def test_severity_empty_list_rejected():
    with pytest.raises(ValueError):
        overlap_severity([])
