"""Episode records, run summaries, smoothing, and rank statistics.

All means and standard deviations use the population convention (divide by
n), matching the variance notation used throughout the benchmark.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

LAST_WINDOW = 100
SG_WINDOW = 1001
SG_ORDER = 2


@dataclass(frozen=True)
class EpisodeRecord:
    episode: int
    total_reward: float
    steps: int
    success: bool


@dataclass(frozen=True)
class RunSummary:
    total_episodes: int
    goals_reached: int
    mean_reward_all: float
    std_reward_all: float
    mean_reward_last100: float
    std_reward_last100: float
    mean_steps_all: float
    std_steps_all: float
    mean_steps_last100_successful: float | None
    std_steps_last100_successful: float | None
    reward_variance_all: float
    wall_clock_seconds: float | None = None

    @property
    def success_rate(self) -> float:
        return self.goals_reached / self.total_episodes

    def to_dict(self) -> dict:
        return {
            "total_episodes": self.total_episodes,
            "goals_reached": self.goals_reached,
            "success_rate": self.success_rate,
            "mean_reward_all": self.mean_reward_all,
            "std_reward_all": self.std_reward_all,
            "mean_reward_last100": self.mean_reward_last100,
            "std_reward_last100": self.std_reward_last100,
            "mean_steps_all": self.mean_steps_all,
            "std_steps_all": self.std_steps_all,
            "mean_steps_last100_successful": self.mean_steps_last100_successful,
            "std_steps_last100_successful": self.std_steps_last100_successful,
            "reward_variance_all": self.reward_variance_all,
            "wall_clock_seconds": self.wall_clock_seconds,
        }


def success_rate(records: Sequence[EpisodeRecord]) -> float:
    if not records:
        raise ValueError("no episode records")
    return sum(r.success for r in records) / len(records)


def summarize(
    records: Sequence[EpisodeRecord], wall_clock_seconds: float | None = None
) -> RunSummary:
    """Aggregate per-episode rows into the benchmark's summary metrics.

    Steps averages over all episodes include failed episodes (recorded at the
    step cap); the last-100 steps metric averages successful episodes only
    and is None when the last 100 episodes contain no success.
    """
    if not records:
        raise ValueError("no episode records")
    rewards = np.array([r.total_reward for r in records], dtype=float)
    steps = np.array([r.steps for r in records], dtype=float)
    succ = np.array([r.success for r in records], dtype=bool)

    last_rewards = rewards[-LAST_WINDOW:]
    last_steps = steps[-LAST_WINDOW:]
    last_succ = succ[-LAST_WINDOW:]
    win_steps = last_steps[last_succ]

    return RunSummary(
        total_episodes=len(records),
        goals_reached=int(succ.sum()),
        mean_reward_all=float(rewards.mean()),
        std_reward_all=float(rewards.std()),
        mean_reward_last100=float(last_rewards.mean()),
        std_reward_last100=float(last_rewards.std()),
        mean_steps_all=float(steps.mean()),
        std_steps_all=float(steps.std()),
        mean_steps_last100_successful=float(win_steps.mean()) if win_steps.size else None,
        std_steps_last100_successful=float(win_steps.std()) if win_steps.size else None,
        reward_variance_all=float(rewards.var()),
        wall_clock_seconds=wall_clock_seconds,
    )


def _center_coefficients(window: int, degree: int) -> np.ndarray:
    """Weights whose dot with a window reproduce the LS polynomial fit at its center."""
    half = window // 2
    x = (np.arange(window, dtype=float) - half) / max(half, 1)
    design = np.vander(x, degree + 1, increasing=True)
    coef = np.linalg.solve(design.T @ design, design.T)[0]
    # Force the weights to sum to exactly 1 so constant inputs pass through
    # unchanged and the centered evaluation below stays bias-free.
    coef[half] += 1.0 - coef.sum()
    return coef


def _edge_fit(y: np.ndarray, i: int, lo: int, hi: int, degree: int) -> float:
    """LS polynomial fit over y[lo:hi], evaluated at position i."""
    span = hi - lo
    deg = min(degree, span - 1)
    x = (np.arange(lo, hi, dtype=float) - i) / max(span - 1, 1)
    design = np.vander(x, deg + 1, increasing=True)
    beta, *_ = np.linalg.lstsq(design, y[lo:hi] - y[i], rcond=None)
    return float(y[i] + beta[0])


def savitzky_golay(series: Sequence[float], window: int = SG_WINDOW, order: int = SG_ORDER) -> np.ndarray:
    """Smooth a series by local least-squares polynomial fits.

    Each point is replaced by the value at that point of a degree-`order`
    polynomial fit over a window centered there. Near the ends the window is
    truncated to the available samples and refit (no padding, no fabricated
    data). If the series is shorter than `window`, the largest odd window
    that fits is used, and the degree shrinks with it when necessary.

    Output length equals input length; polynomials of degree <= order are
    reproduced. Raises ValueError for an even window or order >= window.
    """
    if window < 1 or window % 2 == 0:
        raise ValueError(f"window must be odd and positive, got {window}")
    if order < 0 or order >= window:
        raise ValueError(f"order must satisfy 0 <= order < window, got {order}")
    y = np.asarray(series, dtype=float)
    if y.ndim != 1:
        raise ValueError("series must be one-dimensional")
    n = y.size
    if n == 0:
        return y.copy()

    w = min(window, n - (n + 1) % 2)  # largest odd window <= n
    degree = min(order, w - 1)
    half = w // 2
    out = np.empty(n)

    # Interior: one shared coefficient vector. Evaluating on deltas from the
    # window's center sample keeps the dot product small, which preserves
    # polynomial reproduction to near machine precision on large-valued input.
    coef = _center_coefficients(w, degree)
    windows = sliding_window_view(y, w)
    chunk = max(1, 4_000_000 // w)
    for s0 in range(0, n - w + 1, chunk):
        s1 = min(n - w + 1, s0 + chunk)
        centers = y[s0 + half : s1 + half]
        out[s0 + half : s1 + half] = centers + (windows[s0:s1] - centers[:, None]) @ coef

    for i in range(half):
        out[i] = _edge_fit(y, i, 0, min(n, i + half + 1), degree)
    for i in range(n - half, n):
        out[i] = _edge_fit(y, i, max(0, i - half), n, degree)
    return out


class MannWhitneyResult(NamedTuple):
    u: float
    p_two_sided: float
    effect_r: float
    z: float


def _midranks(values: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Ranks with ties assigned the mean of their rank range, plus tie-group sizes."""
    order = np.argsort(values, kind="stable")
    sorted_vals = values[order]
    ranks = np.empty(values.size)
    tie_sizes = []
    i = 0
    n = values.size
    while i < n:
        j = i
        while j + 1 < n and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        if j > i:
            tie_sizes.append(j - i + 1)
        i = j + 1
    return ranks, tie_sizes


def _normal_sf(x: float) -> float:
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def mann_whitney_u(sample_a: Sequence[float], sample_b: Sequence[float]) -> MannWhitneyResult:
    """Rank-sum U statistic for sample_a with a tie-corrected normal p-value.

    U counts pairs where a beats b, ties counted half. The two-sided p uses
    the normal approximation with tie-corrected variance and a 0.5 continuity
    correction. The effect size is r = Z / sqrt(n_a + n_b), signed so that
    positive favors sample_a. Degenerate pooled samples (all values tied)
    yield Z = 0 and p = 1.
    """
    a = np.asarray(sample_a, dtype=float)
    b = np.asarray(sample_b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be non-empty")
    n_a, n_b = a.size, b.size
    n = n_a + n_b
    ranks, tie_sizes = _midranks(np.concatenate([a, b]))
    u = float(ranks[:n_a].sum() - n_a * (n_a + 1) / 2.0)

    mean_u = n_a * n_b / 2.0
    tie_term = sum(t**3 - t for t in tie_sizes)
    var_u = n_a * n_b / 12.0 * ((n + 1) - tie_term / (n * (n - 1))) if n > 1 else 0.0
    if var_u <= 0.0:
        z = 0.0
    else:
        diff = u - mean_u
        adjusted = max(abs(diff) - 0.5, 0.0)  # continuity correction toward the mean
        z = math.copysign(adjusted, diff) / math.sqrt(var_u)
    p = min(1.0, 2.0 * _normal_sf(abs(z)))
    return MannWhitneyResult(u=u, p_two_sided=p, effect_r=z / math.sqrt(n), z=z)
