"""Adaptive simulated annealing over (cluster count, marker type).

The chain starts from the best single-cluster solution over all markers,
at temperature T0 = n_max.  Proposals perturb the current state with
independent Gaussians whose spreads adapt to the search space,
sigma_n = n_max / c_sigma and sigma_m = |markers| / c_sigma, wrapped back
into range by modulo.  Worse solutions are accepted with the Metropolis
probability exp(-delta / T).  Chain length per temperature and the stop
patience both scale with log(n_max * |markers|), so the same coefficients
work across region sizes.  Cooling follows T = T0 / (1 + log(1 + t)).

The global best is tracked independently of the accepted walker, and the
run stops when the temperature floor is reached or the best has not
improved for the patience number of consecutive temperatures.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .markers import MarkerType
from .objective import LossBreakdown, LossEvaluator, LossParams


@dataclass(frozen=True)
class AnnealParams:
    """Knobs of the annealing run; gamma_s is the stop patience coefficient,
    gamma_m the Markov chain length coefficient."""

    gamma_s: float = 1.5
    gamma_m: float = 1.5
    c_sigma: float = 6.0
    t_min: float = 0.1
    seed: int = 0
    t0: float | None = None  # override the n_max default (testing/debug)

    def __post_init__(self):
        if min(self.gamma_s, self.gamma_m, self.c_sigma, self.t_min) <= 0:
            raise ValueError("gamma_s, gamma_m, c_sigma and t_min must be positive")


@dataclass
class AnnealResult:
    best_n: int
    best_marker: MarkerType
    best_loss: float
    best_breakdown: LossBreakdown
    evaluations: int          # loss queries, including memoized repeats
    unique_evaluations: int   # distinct (n, marker) pairs actually computed
    temperature_steps: int
    markov_steps: int         # chain length per temperature
    trace: list[tuple[int, float, float, float]] = field(default_factory=list)
    # trace rows: (temperature index, T, current loss, best loss)
    steps: list[tuple[float, bool]] | None = None
    # with record_steps: (proposal loss, accepted) per Markov step


def propose(n: int, m_idx: int, n_max: int, marker_count: int,
            rng: np.random.Generator, c_sigma: float = 6.0) -> tuple[int, int]:
    """One Gaussian neighbor of (n, m_idx), wrapped into [1, n_max] x [0, marker_count)."""
    dn = rng.normal(0.0, n_max / c_sigma)
    dm = rng.normal(0.0, marker_count / c_sigma)
    new_n = (int(n + dn) - 1) % n_max + 1
    new_m = int(m_idx + dm) % marker_count
    return new_n, new_m


# A proposal identical to the current state is re-drawn this many times
# before being kept as a self-loop, so tiny spaces do not stall.
_REDRAWS = 5


def anneal(region, markers, loss_params: LossParams, params: AnnealParams,
           stroke_width: float | None = None, evaluator: LossEvaluator | None = None,
           record_steps: bool = False) -> AnnealResult:
    """Approximate argmin of the loss over n in [1, n_max] and marker in ``markers``."""
    markers = tuple(markers)
    if not markers:
        raise ValueError("marker set must be nonempty")
    if evaluator is None:
        evaluator = LossEvaluator(region, loss_params, params.seed, stroke_width)
    n_max = evaluator.n_max
    n_markers = len(markers)

    rng = np.random.default_rng([int(params.seed) & 0xFFFFFFFF, 0x5A])
    memo: dict[tuple[int, int], LossBreakdown] = {}
    queries = 0

    def evaluate(n: int, m_idx: int) -> float:
        nonlocal queries
        queries += 1
        key = (n, m_idx)
        got = memo.get(key)
        if got is None:
            got = evaluator.loss(n, markers[m_idx])
            memo[key] = got
        return got.total

    # Initial state: best marker at n = 1.
    init = [evaluate(1, j) for j in range(n_markers)]
    m_idx = int(np.argmin(init))
    n = 1
    current = init[m_idx]
    best_n, best_m, best = n, m_idx, current
    prev_best = best

    log_space = math.log(n_max * n_markers)
    s_m = max(1, math.ceil(params.gamma_m * log_space))
    s_s = max(1, math.ceil(params.gamma_s * log_space))

    t0 = float(n_max) if params.t0 is None else params.t0
    temperature = t0
    stale = 0   # consecutive temperatures without a new global best
    t_count = 0
    trace: list[tuple[int, float, float, float]] = []
    steps: list[tuple[float, bool]] | None = [] if record_steps else None

    while temperature > params.t_min and stale < s_s:
        for _ in range(s_m):
            cand_n, cand_m = propose(n, m_idx, n_max, n_markers, rng, params.c_sigma)
            for _ in range(_REDRAWS):
                if (cand_n, cand_m) != (n, m_idx):
                    break
                cand_n, cand_m = propose(n, m_idx, n_max, n_markers, rng, params.c_sigma)
            cand = evaluate(cand_n, cand_m)
            p = min(1.0, math.exp(min(0.0, -(cand - current) / temperature)))
            r = rng.uniform()
            if cand < best:
                best_n, best_m, best = cand_n, cand_m, cand
            accepted = cand < current or p > r
            if accepted:
                n, m_idx, current = cand_n, cand_m, cand
            if steps is not None:
                steps.append((cand, accepted))
        if best < prev_best:
            stale = 0
        else:
            stale += 1
        trace.append((t_count, temperature, current, best))
        temperature = t0 / (1.0 + math.log(1.0 + t_count))
        t_count += 1
        prev_best = best

    breakdown = memo[(best_n, best_m)]
    return AnnealResult(
        best_n=best_n, best_marker=markers[best_m], best_loss=best,
        best_breakdown=breakdown, evaluations=queries,
        unique_evaluations=len(memo), temperature_steps=t_count,
        markov_steps=s_m, trace=trace, steps=steps,
    )


def exhaustive_search(region, markers, loss_params: LossParams, seed: int,
                      stroke_width: float | None = None,
                      evaluator: LossEvaluator | None = None):
    """Enumerate the loss over the whole (n, marker) grid.

    The greedy comparator for the annealer: returns (best_n, best_marker,
    best_loss, evaluations, elapsed_seconds).
    """
    markers = tuple(markers)
    if not markers:
        raise ValueError("marker set must be nonempty")
    if evaluator is None:
        evaluator = LossEvaluator(region, loss_params, seed, stroke_width)
    start = time.perf_counter()
    best = None
    count = 0
    for n in range(1, evaluator.n_max + 1):
        for marker in markers:
            value = evaluator.loss(n, marker).total
            count += 1
            if best is None or value < best[2]:
                best = (n, marker, value)
    elapsed = time.perf_counter() - start
    return best[0], best[1], best[2], count, elapsed
