"""Summary statistics and the two-sample Wilcoxon rank-sum test."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

ALPHA = 0.05
EXACT_MAX_TOTAL = 16


@dataclass
class SampleSet:
    values: list
    variant: Optional[str] = None
    mode: Optional[str] = None

    def __post_init__(self):
        if len(self.values) == 0:
            raise ValueError("sample must be non-empty")
        if any(v < 0 for v in self.values):
            raise ValueError("energies must be non-negative")


@dataclass(frozen=True)
class SummaryStats:
    n: int
    mean: float
    sd: float
    min: float
    q1: float
    median: float
    q3: float
    max: float


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float
    p_value: float
    significant: bool
    method: str


@dataclass(frozen=True)
class BoxplotStats:
    min: float
    q1: float
    median: float
    q3: float
    max: float
    lower_whisker: float
    upper_whisker: float
    outliers: tuple = field(default=())


def _values(sample) -> np.ndarray:
    values = sample.values if isinstance(sample, SampleSet) else sample
    arr = np.asarray(values)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("sample must be a non-empty 1-D sequence")
    return arr


def _mean(arr: np.ndarray) -> float:
    # Integer samples are summed exactly so every emitter agrees bit-for-bit.
    if np.issubdtype(arr.dtype, np.integer):
        return int(arr.sum(dtype=np.int64)) / arr.size
    return math.fsum(arr.tolist()) / arr.size


def summarize(sample) -> SummaryStats:
    """Mean, sample sd (n - 1), extremes and linearly interpolated quartiles."""
    # Sorting first makes every field independent of input order, bit for bit.
    arr = np.sort(_values(sample))
    sd = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    q1, median, q3 = np.percentile(arr, [25, 50, 75])
    return SummaryStats(
        n=int(arr.size),
        mean=_mean(arr),
        sd=sd,
        min=float(arr.min()),
        q1=float(q1),
        median=float(median),
        q3=float(q3),
        max=float(arr.max()),
    )


def boxplot_stats(sample, whis: float = 1.5) -> BoxplotStats:
    """Five-number summary with Tukey whiskers and the points beyond them."""
    arr = np.sort(_values(sample))
    q1, median, q3 = (float(q) for q in np.percentile(arr, [25, 50, 75]))
    iqr = q3 - q1
    lo_fence, hi_fence = q1 - whis * iqr, q3 + whis * iqr
    inside = arr[(arr >= lo_fence) & (arr <= hi_fence)]
    outliers = tuple(float(v) for v in arr[(arr < lo_fence) | (arr > hi_fence)])
    return BoxplotStats(
        min=float(arr[0]),
        q1=q1,
        median=median,
        q3=q3,
        max=float(arr[-1]),
        lower_whisker=float(inside.min()),
        upper_whisker=float(inside.max()),
        outliers=outliers,
    )


def midranks(values) -> np.ndarray:
    """1-based ranks with tied values sharing the average of their ranks."""
    values = np.asarray(values)
    order = np.argsort(values, kind="stable")
    sorted_vals = values[order]
    ranks = np.empty(values.size, dtype=np.float64)
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


@lru_cache(maxsize=None)
def _subsets(n: int, k: int) -> np.ndarray:
    return np.array(list(combinations(range(n), k)), dtype=np.intp).reshape(-1, k)


def _u_statistic(a: np.ndarray, b: np.ndarray) -> tuple[float, np.ndarray]:
    ranks = midranks(np.concatenate([a, b]))
    rank_sum = ranks[: a.size].sum()
    return rank_sum - a.size * (a.size + 1) / 2.0, ranks


def rank_sum_exact_p(a, b) -> float:
    """Two-sided p-value from the full permutation distribution of the rank sum."""
    a, b = _values(a), _values(b)
    u, ranks = _u_statistic(a, b)
    n_a, n = a.size, a.size + b.size
    centre = n_a * b.size / 2.0
    u_all = ranks[_subsets(n, n_a)].sum(axis=1) - n_a * (n_a + 1) / 2.0
    observed = abs(u - centre)
    return float(np.mean(np.abs(u_all - centre) >= observed - 1e-9))


def rank_sum_normal_p(a, b) -> float:
    """Two-sided p-value from the normal approximation.

    Uses the tie-corrected variance and a 0.5 continuity correction.
    """
    a, b = _values(a), _values(b)
    u, ranks = _u_statistic(a, b)
    n_a, n_b = a.size, b.size
    n = n_a + n_b
    _, counts = np.unique(ranks, return_counts=True)
    ties = float(((counts ** 3) - counts).sum())
    var = n_a * n_b / 12.0 * ((n + 1) - ties / (n * (n - 1))) if n > 1 else 0.0
    if var <= 0.0:
        return 1.0
    z = max(abs(u - n_a * n_b / 2.0) - 0.5, 0.0) / math.sqrt(var)
    return min(1.0, math.erfc(z / math.sqrt(2.0)))


def wilcoxon_rank_sum(a, b, alpha: float = ALPHA) -> WilcoxonResult:
    """Two-sided Wilcoxon rank-sum (Mann-Whitney) test of independent samples.

    The statistic is U for ``a``. The p-value is exact when the pooled size is
    at most 16 and normal-approximated otherwise.
    """
    a_vals, b_vals = _values(a), _values(b)
    u, _ = _u_statistic(a_vals, b_vals)
    if a_vals.size + b_vals.size <= EXACT_MAX_TOTAL:
        p, method = rank_sum_exact_p(a_vals, b_vals), "exact"
    else:
        p, method = rank_sum_normal_p(a_vals, b_vals), "normal"
    return WilcoxonResult(statistic=float(u), p_value=p, significant=p < alpha, method=method)
