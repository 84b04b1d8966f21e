"""Assignment-cost-based (ACB) scoring of predictions against ground truth.

Each truth/prediction pair gets a Mahalanobis distance (under the truth
covariance) divided by lambda and capped at 1; a square cost matrix padded
with 1 is solved as a minimum-cost assignment, and the score is
1 - cost / max(|truth|, |predicted|).  lambda sets how far a pair may sit
and still count: at lambda=1, anything beyond one standard deviation of
the truth layout costs the full 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment


@dataclass(frozen=True)
class AcbReport:
    score: float
    lam: float
    pair_count: int
    cost: float
    pairs: tuple[tuple[int, int, float], ...]  # (truth idx, pred idx, capped distance)
    regularized: bool


def _centers(marks) -> np.ndarray:
    if hasattr(marks, "centers"):
        return marks.centers()
    return np.asarray(marks, dtype=float).reshape(-1, 2)


def capped_distance(p, g, inv_cov: np.ndarray, lam: float) -> float:
    """min(1, mahalanobis(p, g) / lambda)."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    diff = np.asarray(p, dtype=float) - np.asarray(g, dtype=float)
    if not np.all(np.isfinite(diff)) or not np.all(np.isfinite(inv_cov)):
        raise ValueError("non-finite input to capped_distance")
    d2 = float(diff @ inv_cov @ diff)
    return min(1.0, np.sqrt(max(d2, 0.0)) / lam)


def assignment_cost(matrix: np.ndarray) -> tuple[float, list[tuple[int, int]]]:
    """Exact minimum-cost assignment on a square cost matrix."""
    matrix = np.asarray(matrix, dtype=float)
    rows, cols = linear_sum_assignment(matrix)
    order = np.argsort(rows)
    pairs = [(int(rows[i]), int(cols[i])) for i in order]
    cost = float(sum(matrix[i, j] for i, j in pairs))
    return cost, pairs


def truth_inverse_covariance(truth_xy: np.ndarray) -> tuple[np.ndarray, bool]:
    """Inverse of the population covariance of the truth centers; a singular
    covariance is ridge-regularized (eps = 1e-6 * trace / 2) and flagged."""
    cov = np.cov(truth_xy.T, bias=True).reshape(2, 2)
    regularized = False
    eigvals = np.linalg.eigvalsh(cov)
    if eigvals[0] <= 1e-12 * max(eigvals[1], 1.0):
        trace = float(np.trace(cov))
        eps = 1e-6 * trace / 2.0 if trace > 0 else 1.0
        cov = cov + eps * np.eye(2)
        regularized = True
    return np.linalg.inv(cov), regularized


def acb_score(truth, predicted, lam: float = 1.0) -> AcbReport:
    """Score predicted mark centers against ground-truth centers."""
    truth_xy = _centers(truth)
    pred_xy = _centers(predicted)
    if len(truth_xy) == 0:
        raise ValueError("ground truth must be nonempty")

    inv_cov, regularized = truth_inverse_covariance(truth_xy)
    n_truth, n_pred = len(truth_xy), len(pred_xy)
    side = max(n_truth, n_pred)
    matrix = np.ones((side, side), dtype=float)
    for i in range(n_truth):
        diffs = pred_xy - truth_xy[i]
        d2 = np.einsum("nj,jk,nk->n", diffs, inv_cov, diffs) if n_pred else np.empty(0)
        matrix[i, :n_pred] = np.minimum(1.0, np.sqrt(np.maximum(d2, 0.0)) / lam)

    cost, raw_pairs = assignment_cost(matrix)
    pairs = tuple((i, j, float(matrix[i, j])) for i, j in raw_pairs
                  if i < n_truth and j < n_pred)
    return AcbReport(score=1.0 - cost / side, lam=lam, pair_count=len(pairs),
                     cost=cost, pairs=pairs, regularized=regularized)
