"""Correlation statistics over paired cohort samples.

pearson implements the usual product-moment coefficient,

    r = sum((x - mean_x)(y - mean_y))
        / sqrt(sum((x - mean_x)^2) * sum((y - mean_y)^2)),

as a two-pass computation.  combined_predictor grid-searches the convex
mix of two z-scored predictors that correlates best with the outcome; an
exhaustive scan is exact enough at cohort scale and trivially
reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence


class DegenerateSample(ValueError):
    """Too few pairs, or zero variance in a coordinate."""


@dataclass(frozen=True)
class PairedSample:
    xs: tuple[float, ...]
    ys: tuple[float, ...]
    x_label: str = "X"
    y_label: str = "Y"

    def __post_init__(self) -> None:
        object.__setattr__(self, "xs", tuple(float(x) for x in self.xs))
        object.__setattr__(self, "ys", tuple(float(y) for y in self.ys))
        if len(self.xs) != len(self.ys):
            raise ValueError("xs and ys must pair up")
        for v in (*self.xs, *self.ys):
            if not math.isfinite(v):
                raise ValueError("samples must be finite")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, float]], x_label: str = "X",
                   y_label: str = "Y") -> "PairedSample":
        xs, ys = [], []
        for x, y in pairs:
            xs.append(x)
            ys.append(y)
        return cls(tuple(xs), tuple(ys), x_label, y_label)

    def __len__(self) -> int:
        return len(self.xs)


def pearson(sample: PairedSample) -> float:
    """Product-moment correlation in [-1, 1].

    Raises DegenerateSample for fewer than 3 pairs or zero variance in
    either coordinate.
    """
    n = len(sample)
    if n < 3:
        raise DegenerateSample(f"need at least 3 pairs, got {n}")
    mean_x = sum(sample.xs) / n
    mean_y = sum(sample.ys) / n
    sxx = sum((x - mean_x) ** 2 for x in sample.xs)
    syy = sum((y - mean_y) ** 2 for y in sample.ys)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateSample("zero variance in a coordinate")
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in zip(sample.xs, sample.ys))
    r = sxy / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def z_scores(values: Sequence[float]) -> list[float]:
    n = len(values)
    mean = sum(values) / n
    variance = sum((v - mean) ** 2 for v in values) / n
    if variance == 0.0:
        raise DegenerateSample("zero variance: cannot z-score")
    sd = math.sqrt(variance)
    return [(v - mean) / sd for v in values]


def default_lambda_grid(step: float = 0.01) -> tuple[float, ...]:
    count = round(1.0 / step)
    return tuple(i / count for i in range(count + 1))


def combined_predictor(
    ept: Sequence[float],
    tariff: Sequence[float],
    outcome: Sequence[float],
    grid: Sequence[float] | None = None,
) -> tuple[float, float]:
    """Best convex combination lambda*ept + (1-lambda)*tariff of the
    z-scored predictors against the outcome.

    Returns (lambda*, r*); ties resolve to the smallest lambda.  The grid
    always contains its own endpoints, so the combined predictor can never
    do worse than the better single predictor on the grid.
    """
    if not (len(ept) == len(tariff) == len(outcome)):
        raise ValueError("predictor and outcome vectors must align")
    if len(ept) < 3:
        raise DegenerateSample("need at least 3 students")
    grid = tuple(grid) if grid is not None else default_lambda_grid()
    if any(not 0.0 <= g <= 1.0 for g in grid):
        raise ValueError("grid values must lie in [0, 1]")
    e = z_scores(ept)
    t = z_scores(tariff)
    best_lambda = None
    best_r = -math.inf
    for lam in sorted(grid):
        mixed = [lam * ev + (1.0 - lam) * tv for ev, tv in zip(e, t)]
        try:
            r = pearson(PairedSample(tuple(mixed), tuple(outcome)))
        except DegenerateSample:
            continue
        if r > best_r:
            best_lambda, best_r = lam, r
    if best_lambda is None:
        raise DegenerateSample("no grid point produced a usable mix")
    return best_lambda, best_r


def attempt_weighted_score(
    topic_records: Iterable[tuple[float, int]],
    weighting: Callable[[float, int], float] | None = None,
) -> float:
    """Aggregate score where each sub-test's first score is weighted by the
    attempts needed: the default rule is score/attempts, but the weighting
    is pluggable."""
    weighting = weighting or (lambda score, attempts: score / attempts)
    total = 0.0
    count = 0
    for score, attempts in topic_records:
        if attempts < 1:
            raise ValueError("attempts must be at least 1 per topic")
        total += weighting(score, attempts)
        count += 1
    if count == 0:
        raise ValueError("no topic records")
    return total / count
