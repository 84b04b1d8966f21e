"""Figure rendering for the CLI report paths.

Every function writes a PNG next to the delimited output it illustrates:
the suite severity histogram, the score-vs-severity scatter, sweep
heatmaps/curves, and located-mark overlays.  Uses the Agg backend so the
CLI works headless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_severity_histogram(severities, path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(severities, bins=np.arange(0.0, 1.05, 0.05), color="#4878a8", edgecolor="white")
    ax.set_xlabel("overlapping severity")
    ax.set_ylabel("cases")
    ax.set_title("Severity distribution of the generated suite")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_score_vs_severity(rows, path, lam: float = 1.0) -> None:
    """rows: (case, severity, score) triples for one lambda."""
    sev = [r[1] for r in rows]
    score = [r[2] for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.scatter(sev, score, s=24, color="#b04848", alpha=0.8)
    ax.set_xlabel("overlapping severity")
    ax.set_ylabel(f"ACB score (lambda={lam:g})")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title("Localization score vs overlapping severity")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_grid_heatmap(alphas, betas, values, path, title: str, value_label: str) -> None:
    """Heatmap of values[j, i] over a beta (rows) x alpha (cols) grid."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    im = ax.imshow(values, origin="lower", aspect="auto",
                   extent=(min(alphas), max(alphas), min(betas), max(betas)),
                   cmap="viridis")
    fig.colorbar(im, ax=ax, label=value_label)
    ax.set_xlabel("alpha")
    ax.set_ylabel("beta")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_sa_sweep(rows, greedy_time, greedy_n, path) -> None:
    """rows: (gamma_s, gamma_m, elapsed_s, estimated_n, evaluations)."""
    labels = [f"{gs:g}/{gm:g}" for gs, gm, *_ in rows]
    times = [r[2] for r in rows]
    ns = [r[3] for r in rows]
    x = np.arange(len(rows))
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    ax1.bar(x, times, color="#4878a8")
    ax1.axhline(greedy_time, color="#b04848", linestyle="--", label="exhaustive")
    ax1.set_xticks(x, labels, rotation=45)
    ax1.set_xlabel("gamma_s / gamma_m")
    ax1.set_ylabel("time (s)")
    ax1.legend()
    ax2.plot(x, ns, "o-", color="#4878a8")
    ax2.axhline(greedy_n, color="#b04848", linestyle="--", label="exhaustive n")
    ax2.set_xticks(x, labels, rotation=45)
    ax2.set_xlabel("gamma_s / gamma_m")
    ax2.set_ylabel("estimated mark count")
    ax2.legend()
    fig.suptitle("Annealing vs exhaustive search")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_factor_curve(factors, means, stds, path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.errorbar(factors, means, yerr=stds, fmt="o-", color="#4878a8", capsize=4)
    ax.set_xlabel("space factor")
    ax.set_ylabel("mean ACB (lambda=1)")
    ax.set_ylim(0, 1)
    ax.set_title("Score stability over the space factor")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_overlay(image, marks, path) -> None:
    """The input image with located centers drawn as dots."""
    fig, ax = plt.subplots(figsize=(6, 6 * image.height / image.width))
    ax.imshow(image.values, cmap="gray", vmin=0, vmax=255)
    if len(marks):
        xs = [m.x for m in marks]
        ys = [m.y for m in marks]
        ax.scatter(xs, ys, s=12, color="#d03030", marker=".")
    ax.set_axis_off()
    fig.tight_layout(pad=0.1)
    fig.savefig(path, dpi=120)
    plt.close(fig)


def ensure_dir(path) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p
