"""Command-line interface.

Subcommands:
  locate    binarize images and locate marks (annealing or filter method),
            one prediction JSON per image, optional overlay PNGs
  generate  synthesize a benchmark suite with ground truth + manifest
  evaluate  score prediction JSONs against truth JSONs (ACB), CSV + figures
  sweep     parameter studies: alpha_beta grid, sa_params vs exhaustive,
            space_factor stability over a suite

All randomness flows from --seed; per-image and per-region streams are
derived by stable hashing, so outputs are byte-reproducible.  Exit codes:
0 ok, 1 metric assertion failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from .annealing import AnnealParams, anneal, exhaustive_search
from .baseline import FilterConfig, filter_locate
from .benchgen import SuiteSpec, desk_suite_spec, generate_suite, paper_suite_spec
from .locator import LocatorConfig, MarkSet, locate
from .markers import ALL_MARKERS, Mark, MarkerType, rasterize_mark
from .metric import acb_score
from .objective import LossEvaluator, LossParams
from .raster import BinaryRegion, connected_regions, load_png

DEFAULT_LAMBDAS = (1.0, 5.0, 10.0)


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------

def _parse_threshold(text: str):
    return "auto" if text == "auto" else int(text)


def _parse_markers(text: str) -> tuple[MarkerType, ...]:
    if text == "all":
        return ALL_MARKERS
    try:
        return tuple(MarkerType(name.strip()) for name in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(","))


def _parse_space_factor(text: str):
    return None if text == "rsma" else float(text)


def _parse_kernel(text: str):
    return "rsma" if text == "rsma" else int(text)


def _image_seed(master: int, name: str) -> int:
    digest = hashlib.sha256(f"{master}:{name}".encode()).digest()
    return int.from_bytes(digest[:4], "big")


def _write_json(path: Path, data) -> None:
    path.write_text(json.dumps(data, sort_keys=True, indent=2) + "\n")


def _input_images(path: Path) -> list[Path]:
    if path.is_dir():
        return sorted(path.glob("*.png"))
    return [path]


# ---------------------------------------------------------------------------
# locate
# ---------------------------------------------------------------------------

def _add_locator_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--alpha", type=float, default=1.1)
    sub.add_argument("--beta", type=float, default=1.0)
    sub.add_argument("--gamma-s", type=float, default=1.5)
    sub.add_argument("--gamma-m", type=float, default=1.5)
    sub.add_argument("--space-factor", type=_parse_space_factor, default=None,
                     help='a number, or "rsma" (default) to estimate from single marks')
    sub.add_argument("--kappa", type=float, default=0.8)
    sub.add_argument("--markers", type=_parse_markers, default=ALL_MARKERS,
                     help='comma list of marker names, or "all"')
    sub.add_argument("--no-restrict-marker", action="store_true",
                     help="anneal over the full marker set even when RSMA found a modal marker")
    sub.add_argument("--stroke-width", type=float, default=None)
    sub.add_argument("--threshold", type=_parse_threshold, default="auto")
    sub.add_argument("--invert", action="store_true")
    sub.add_argument("--min-region-px", type=int, default=4)
    sub.add_argument("--workers", type=int, default=1)


def cmd_locate(args) -> int:
    in_path = Path(args.input)
    if not in_path.exists():
        print(f"error: input {in_path} does not exist", file=sys.stderr)
        return 2
    images = _input_images(in_path)
    if not images:
        print(f"error: no PNG images under {in_path}", file=sys.stderr)
        return 2
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    timings = []
    for img_path in images:
        try:
            image = load_png(img_path)
        except Exception as exc:
            print(f"error: cannot read {img_path}: {exc}", file=sys.stderr)
            return 2
        seed = _image_seed(args.seed, img_path.stem)
        start = time.perf_counter()
        if args.method == "filter":
            result = filter_locate(image, FilterConfig(
                kernel_size=args.kernel_size, threshold=args.threshold,
                invert=args.invert, min_region_px=args.min_region_px),
                source=img_path.name)
        else:
            config = LocatorConfig(
                threshold=args.threshold, invert=args.invert,
                min_region_px=args.min_region_px, markers=args.markers,
                alpha=args.alpha, beta=args.beta,
                gamma_s=args.gamma_s, gamma_m=args.gamma_m,
                space_factor=args.space_factor, kappa=args.kappa,
                restrict_marker=not args.no_restrict_marker,
                stroke_width=args.stroke_width, seed=seed, workers=args.workers)
            result = locate(image, config, source=img_path.name)
        elapsed_ms = (time.perf_counter() - start) * 1000.0
        timings.append((img_path.stem, elapsed_ms))

        payload = result.to_dict(include_timing=args.timing)
        payload["params"] = {
            "method": args.method, "seed": args.seed,
            "alpha": args.alpha, "beta": args.beta,
            "gamma_s": args.gamma_s, "gamma_m": args.gamma_m,
            "space_factor": args.space_factor, "kappa": args.kappa,
        }
        _write_json(out_dir / f"{img_path.stem}.json", payload)

        if args.overlay:
            from . import report

            report.save_overlay(image, result.marks, out_dir / f"{img_path.stem}_overlay.png")

    if args.timing:
        with open(out_dir / "timings.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["case", "timing_ms"])
            for name, ms in timings:
                writer.writerow([name, f"{ms:.3f}"])
    print(f"located marks in {len(images)} image(s) -> {out_dir}")
    return 0


# ---------------------------------------------------------------------------
# generate
# ---------------------------------------------------------------------------

def cmd_generate(args) -> int:
    if args.spec:
        spec_path = Path(args.spec)
        if not spec_path.exists():
            print(f"error: spec file {spec_path} does not exist", file=sys.stderr)
            return 2
        try:
            spec = SuiteSpec.from_dict(json.loads(spec_path.read_text()))
        except (ValueError, KeyError, TypeError) as exc:
            print(f"error: bad suite spec: {exc}", file=sys.stderr)
            return 2
        if args.seed is not None:
            spec = SuiteSpec.from_dict({**spec.to_dict(), "seed": args.seed})
    elif args.preset == "paper":
        spec = paper_suite_spec(seed=args.seed or 0)
    elif args.preset == "desk":
        spec = desk_suite_spec(seed=args.seed or 0)
    else:
        variants = tuple(
            ("gaussian_blobs", {"centers": c, "cluster_std": s})
            for c, s in ((3, 1.0), (5, 0.5), (4, 0.35))[: args.cases]
        )
        spec = SuiteSpec(markers=args.markers, q_values=tuple(args.q_values),
                         variants=variants, seed=args.seed or 0,
                         mark_radius=args.radius, stroke_width=args.stroke)

    out_dir = Path(args.out)
    cases, manifest = generate_suite(spec, out_dir)

    from . import report

    report.save_severity_histogram([c.severity for c in cases],
                                   out_dir / "severity_hist.png")
    print(f"generated {len(cases)} cases -> {out_dir}")
    return 0


# ---------------------------------------------------------------------------
# evaluate
# ---------------------------------------------------------------------------

def _load_marks(path: Path) -> list[dict]:
    data = json.loads(path.read_text())
    return data.get("marks", [])


def cmd_evaluate(args) -> int:
    pred_dir, truth_dir = Path(args.pred), Path(args.truth)
    if not pred_dir.is_dir() or not truth_dir.is_dir():
        print("error: --pred and --truth must be directories", file=sys.stderr)
        return 2
    pred_files = sorted(p for p in pred_dir.glob("*.json") if p.name != "manifest.json")
    if not pred_files:
        print(f"error: no prediction JSONs in {pred_dir}", file=sys.stderr)
        return 2

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []          # (case, severity, lambda, score)
    timing_values = []
    for pred_path in pred_files:
        truth_path = truth_dir / pred_path.name
        if not truth_path.exists():
            print(f"error: no truth file for {pred_path.name}", file=sys.stderr)
            return 2
        truth_data = json.loads(truth_path.read_text())
        truth_xy = np.array([[m["x"], m["y"]] for m in truth_data["marks"]], dtype=float)
        pred_data = json.loads(pred_path.read_text())
        pred_xy = np.array([[m["x"], m["y"]] for m in pred_data.get("marks", [])],
                           dtype=float).reshape(-1, 2)
        severity = truth_data.get("severity")
        if "timing_ms" in pred_data:
            timing_values.append(float(pred_data["timing_ms"]))
        for lam in args.lambdas:
            score = acb_score(truth_xy, pred_xy, lam=lam).score
            rows.append((pred_path.stem, severity, lam, score))

    with open(out_dir / "scores.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["case", "severity", "lambda", "score"])
        for case, severity, lam, score in rows:
            writer.writerow([case, "" if severity is None else f"{severity:.6f}",
                             f"{lam:g}", f"{score:.6f}"])

    with open(out_dir / "aggregate.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        header = ["lambda", "mean", "std", "cases"]
        if timing_values:
            header += ["time_mean_ms", "time_std_ms"]
        writer.writerow(header)
        for lam in args.lambdas:
            scores = np.array([r[3] for r in rows if r[2] == lam])
            line = [f"{lam:g}", f"{scores.mean():.6f}", f"{scores.std():.6f}", len(scores)]
            if timing_values:
                tv = np.array(timing_values)
                line += [f"{tv.mean():.3f}", f"{tv.std():.3f}"]
            writer.writerow(line)

    from . import report

    first_lam = args.lambdas[0]
    sev_rows = [(c, s, v) for c, s, lam, v in rows if lam == first_lam and s is not None]
    if sev_rows:
        report.save_score_vs_severity(sev_rows, out_dir / "acb_vs_severity.png", first_lam)

    mean_first = float(np.mean([r[3] for r in rows if r[2] == first_lam]))
    print(f"evaluated {len(pred_files)} case(s); mean ACB[lambda={first_lam:g}] = {mean_first:.3f}")
    if args.assert_min_mean is not None and mean_first < args.assert_min_mean:
        print(f"assertion failed: {mean_first:.3f} < {args.assert_min_mean}", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def demo_region(radius: float = 10.0, overlap: float = 1.4) -> BinaryRegion:
    """Three partially overlapping filled circles, the classic hard case."""
    sep = radius * overlap
    h = sep * np.sqrt(3) / 2
    centers = [(40.0, 40.0), (40.0 + sep, 40.0), (40.0 + sep / 2, 40.0 + h)]
    pixels: set = set()
    for cx, cy in centers:
        pixels |= rasterize_mark(Mark(cx, cy, radius, MarkerType.CIRCLE))
    return BinaryRegion.from_pixels(pixels)


def _sweep_region(args) -> BinaryRegion | None:
    if args.image:
        path = Path(args.image)
        if not path.exists():
            print(f"error: {path} does not exist", file=sys.stderr)
            return None
        from .raster import binarize

        image = load_png(path)
        regions = connected_regions(binarize(image), min_pixels=4)
        if not regions:
            print("error: no foreground regions in the image", file=sys.stderr)
            return None
        return max(regions, key=lambda r: r.size)
    return demo_region()


def _sweep_alpha_beta(args, out_dir: Path) -> int:
    region = _sweep_region(args)
    if region is None:
        return 2
    markers = (MarkerType.CIRCLE, MarkerType.SQUARE, MarkerType.DIAMOND)
    from . import report

    with open(out_dir / "alpha_beta.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["space_factor", "alpha", "beta", "estimated_n", "marker", "loss"])
        for factor in args.factors:
            grid = np.zeros((len(args.betas), len(args.alphas)))
            for j, beta in enumerate(args.betas):
                for i, alpha in enumerate(args.alphas):
                    params = LossParams(alpha=alpha, beta=beta, space_factor=factor)
                    n, marker, value, _, _ = exhaustive_search(
                        region, markers, params, seed=args.seed)
                    writer.writerow([f"{factor:g}", f"{alpha:g}", f"{beta:g}",
                                     n, marker.value, f"{value:.3f}"])
                    grid[j, i] = n
            report.save_grid_heatmap(
                args.alphas, args.betas, grid,
                out_dir / f"alpha_beta_F{factor:g}.png",
                f"Estimated mark count (space factor {factor:g})", "estimated n")
    print(f"alpha/beta sweep -> {out_dir}")
    return 0


def _sweep_sa_params(args, out_dir: Path) -> int:
    region = _sweep_region(args)
    if region is None:
        return 2
    markers = (MarkerType.CIRCLE, MarkerType.SQUARE, MarkerType.DIAMOND)
    params = LossParams(alpha=args.alpha, beta=args.beta, space_factor=args.factor)

    start = time.perf_counter()
    greedy_n, greedy_marker, greedy_loss, greedy_evals, _ = exhaustive_search(
        region, markers, params, seed=args.seed)
    greedy_time = time.perf_counter() - start

    rows = []
    for gs in args.gammas:
        for gm in args.gammas:
            start = time.perf_counter()
            result = anneal(region, markers, params,
                            AnnealParams(gamma_s=gs, gamma_m=gm, seed=args.seed))
            elapsed = time.perf_counter() - start
            rows.append((gs, gm, elapsed, result.best_n, result.unique_evaluations,
                         result.best_loss))

    with open(out_dir / "sa_params.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["gamma_s", "gamma_m", "time_s", "estimated_n",
                         "unique_evaluations", "loss", "greedy_n", "greedy_time_s",
                         "greedy_evaluations", "greedy_loss"])
        for gs, gm, elapsed, n, evals, value in rows:
            writer.writerow([f"{gs:g}", f"{gm:g}", f"{elapsed:.4f}", n, evals,
                             f"{value:.3f}", greedy_n, f"{greedy_time:.4f}",
                             greedy_evals, f"{greedy_loss:.3f}"])

    from . import report

    report.save_sa_sweep([(r[0], r[1], r[2], r[3], r[4]) for r in rows],
                         greedy_time, greedy_n, out_dir / "sa_params.png")
    print(f"sa_params sweep -> {out_dir} (exhaustive: n={greedy_n}, {greedy_time:.2f}s)")
    return 0


def _sweep_space_factor(args, out_dir: Path) -> int:
    suite = Path(args.suite)
    truth_files = sorted(p for p in suite.glob("*.json") if p.name != "manifest.json")
    if not truth_files:
        print(f"error: no truth JSONs in {suite}", file=sys.stderr)
        return 2

    from . import report

    means, stds = [], []
    with open(out_dir / "space_factor.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["space_factor", "mean_acb", "std_acb", "cases"])
        for factor in args.factors:
            scores = []
            for truth_path in truth_files:
                truth_data = json.loads(truth_path.read_text())
                image = load_png(suite / truth_data["image"])
                config = LocatorConfig(space_factor=factor,
                                       seed=_image_seed(args.seed, truth_path.stem))
                found = locate(image, config, source=truth_data["image"])
                truth_xy = np.array([[m["x"], m["y"]] for m in truth_data["marks"]])
                scores.append(acb_score(truth_xy, found.centers(), lam=1.0).score)
            scores = np.array(scores)
            means.append(scores.mean())
            stds.append(scores.std())
            writer.writerow([f"{factor:g}", f"{scores.mean():.6f}",
                             f"{scores.std():.6f}", len(scores)])
            print(f"  F={factor:g}: mean ACB = {scores.mean():.3f}")

    report.save_factor_curve(args.factors, means, stds, out_dir / "space_factor.png")
    print(f"space_factor sweep -> {out_dir}")
    return 0


def cmd_sweep(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.kind == "alpha_beta":
        return _sweep_alpha_beta(args, out_dir)
    if args.kind == "sa_params":
        return _sweep_sa_params(args, out_dir)
    return _sweep_space_factor(args, out_dir)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scattermarks",
        description="Locate overlapping scatter marks in rasterized scatter images.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_locate = sub.add_parser("locate", help="locate marks in PNG image(s)")
    p_locate.add_argument("input", help="a PNG file or a directory of PNGs")
    p_locate.add_argument("--out", required=True)
    p_locate.add_argument("--method", choices=("anneal", "filter"), default="anneal")
    p_locate.add_argument("--kernel-size", type=_parse_kernel, default="rsma",
                          help="filter method: odd kernel size or 'rsma'")
    p_locate.add_argument("--seed", type=int, default=0)
    p_locate.add_argument("--overlay", action="store_true",
                          help="write an overlay PNG per image")
    p_locate.add_argument("--timing", action="store_true",
                          help="include wall-clock timing in outputs (non-reproducible)")
    _add_locator_args(p_locate)
    p_locate.set_defaults(func=cmd_locate)

    p_gen = sub.add_parser("generate", help="generate a synthetic benchmark suite")
    p_gen.add_argument("--out", required=True)
    p_gen.add_argument("--spec", help="suite spec JSON file")
    p_gen.add_argument("--preset", choices=("paper", "desk"),
                       help="a built-in suite shape")
    p_gen.add_argument("--markers", type=_parse_markers, default=ALL_MARKERS)
    p_gen.add_argument("--q-values", type=lambda s: [int(v) for v in s.split(",")],
                       default=[100])
    p_gen.add_argument("--cases", type=int, default=3,
                       help="blob variants per (marker, q) for the flag-built spec")
    p_gen.add_argument("--radius", type=float, default=6.0)
    p_gen.add_argument("--stroke", type=float, default=2.0)
    p_gen.add_argument("--seed", type=int, default=None)
    p_gen.set_defaults(func=cmd_generate)

    p_eval = sub.add_parser("evaluate", help="score predictions against ground truth")
    p_eval.add_argument("--pred", required=True)
    p_eval.add_argument("--truth", required=True)
    p_eval.add_argument("--out", required=True)
    p_eval.add_argument("--lambdas", type=_parse_floats, default=DEFAULT_LAMBDAS)
    p_eval.add_argument("--assert-min-mean", type=float, default=None,
                        help="exit 1 when the first-lambda mean falls below this")
    p_eval.set_defaults(func=cmd_evaluate)

    p_sweep = sub.add_parser("sweep", help="parameter studies")
    p_sweep.add_argument("kind", choices=("alpha_beta", "sa_params", "space_factor"))
    p_sweep.add_argument("--out", required=True)
    p_sweep.add_argument("--image", help="PNG whose largest region is studied")
    p_sweep.add_argument("--suite", help="generated suite dir (space_factor)")
    p_sweep.add_argument("--alphas", type=_parse_floats,
                         default=tuple(np.round(np.arange(0.0, 3.01, 0.5), 3)))
    p_sweep.add_argument("--betas", type=_parse_floats,
                         default=tuple(np.round(np.arange(0.0, 101.0, 20.0), 3)))
    p_sweep.add_argument("--gammas", type=_parse_floats, default=(1.0, 1.5, 2.0))
    p_sweep.add_argument("--factors", type=_parse_floats, default=(10.0, 60.0, 150.0))
    p_sweep.add_argument("--factor", type=float, default=60.0)
    p_sweep.add_argument("--alpha", type=float, default=1.5)
    p_sweep.add_argument("--beta", type=float, default=5.0)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
