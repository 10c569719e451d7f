"""Percentile bootstrap confidence intervals.

Resamples (score, label) pairs with replacement; single-class resamples are
skipped and counted instead of erroring the run. Each resample draws from
its own generator spawned off the seed, so a parallel execution would match
the serial one exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import DataError

MetricFn = Callable[[np.ndarray, np.ndarray], float]


class AllResamplesDegenerate(DataError):
    pass


@dataclass(frozen=True)
class MetricReport:
    """Point estimate with a percentile bootstrap interval.

    The interval endpoints are the 2.5/97.5 percentiles (at level 0.95) of
    the valid resample metrics. The raw point estimate can in principle fall
    outside them; point_clamped reports it clamped into the interval, and
    resample_std is the sample standard deviation of the resample metrics
    (so both "±" conventions can be read off the report).
    """

    metric: str
    point: float
    ci_low: float
    ci_high: float
    n_resamples: int
    n_skipped: int
    level: float
    resample_std: float

    @property
    def half_width(self) -> float:
        return (self.ci_high - self.ci_low) / 2.0

    @property
    def point_clamped(self) -> float:
        return min(max(self.point, self.ci_low), self.ci_high)

    @property
    def point_within_ci(self) -> bool:
        return self.ci_low <= self.point <= self.ci_high


def bootstrap_ci(
    metric_fn: MetricFn,
    scores,
    labels,
    n: int = 1000,
    level: float = 0.95,
    seed: int = 0,
    metric_name: str | None = None,
) -> MetricReport:
    if n < 2:
        raise DataError(f"bootstrap needs n >= 2 resamples, got {n}")
    if not 0.0 < level < 1.0:
        raise DataError(f"level must be in (0, 1), got {level}")
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels)
    point = float(metric_fn(s, y))

    values = []
    skipped = 0
    size = len(y)
    for child in np.random.SeedSequence(seed).spawn(n):
        rng = np.random.default_rng(child)
        idx = rng.integers(0, size, size=size)
        y_res = y[idx]
        if (y_res == y_res[0]).all():
            skipped += 1
            continue
        values.append(float(metric_fn(s[idx], y_res)))
    if not values:
        raise AllResamplesDegenerate(
            f"all {n} resamples were single-class; cannot form an interval"
        )

    arr = np.asarray(values)
    alpha = 100.0 * (1.0 - level) / 2.0
    ci_low, ci_high = np.percentile(arr, [alpha, 100.0 - alpha])
    std = float(arr.std(ddof=1)) if len(arr) > 1 else 0.0
    return MetricReport(
        metric=metric_name or getattr(metric_fn, "__name__", "metric"),
        point=point,
        ci_low=float(ci_low),
        ci_high=float(ci_high),
        n_resamples=n,
        n_skipped=skipped,
        level=level,
        resample_std=std,
    )
