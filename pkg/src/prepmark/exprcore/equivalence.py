"""Probabilistic equivalence of two expressions by randomized evaluation.

Two expressions are declared equivalent when they agree, within a relative
tolerance, at a configured number of pseudo-random points.  Sampling is
fully deterministic given the config's rng_seed, which is what makes
grading reproducible.  Points that land on (or within the guard radius of)
a pole of either expression are discarded and redrawn; if the domain is so
riddled with poles that not enough points survive, InsufficientSamples is
raised and the caller flags the response for manual review instead of
failing the student.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping

from .ast import Expr, free_variables
from .errors import InsufficientSamples, NonFiniteResult
from .evaluate import evaluate_guarded


@dataclass(frozen=True)
class SamplingConfig:
    point_count: int = 8
    domain: tuple[float, float] = (-5.0, 5.0)
    relative_tolerance: float = 1e-9
    max_resamples: int = 50
    rng_seed: int = 0
    pole_guard: float = 0.05
    var_domains: Mapping[str, tuple[float, float]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.point_count < 4:
            raise ValueError("point_count must be at least 4")
        if self.relative_tolerance <= 0:
            raise ValueError("relative_tolerance must be positive")
        if self.max_resamples < 1:
            raise ValueError("max_resamples must be positive")
        lo, hi = self.domain
        if not lo < hi:
            raise ValueError("domain must be a non-empty interval")

    def interval_for(self, name: str) -> tuple[float, float]:
        return self.var_domains.get(name, self.domain)


def _values_match(a: float, b: float, rel_tol: float) -> bool:
    return abs(a - b) <= rel_tol * max(1.0, abs(a), abs(b))


def equivalent(a: Expr, b: Expr, cfg: SamplingConfig | None = None) -> bool:
    """True iff a and b agree at point_count sampled points.

    Deterministic for a fixed cfg (seeded RNG); symmetric in a and b.
    Raises InsufficientSamples when resampling cannot find enough valid
    points.
    """
    cfg = cfg or SamplingConfig()
    names = sorted(free_variables(a) | free_variables(b))
    rng = random.Random(cfg.rng_seed)
    if not names:
        try:
            va = evaluate_guarded(a, {}, cfg.pole_guard)
            vb = evaluate_guarded(b, {}, cfg.pole_guard)
        except NonFiniteResult as exc:
            raise InsufficientSamples(
                "constant expression has no finite value"
            ) from exc
        return _values_match(va, vb, cfg.relative_tolerance)

    accepted = 0
    failures = 0
    while accepted < cfg.point_count:
        if failures > cfg.max_resamples:
            raise InsufficientSamples(
                f"only {accepted} of {cfg.point_count} sample points were usable"
            )
        point = {}
        for name in names:
            lo, hi = cfg.interval_for(name)
            point[name] = rng.uniform(lo, hi)
        try:
            va = evaluate_guarded(a, point, cfg.pole_guard)
            vb = evaluate_guarded(b, point, cfg.pole_guard)
        except NonFiniteResult:
            failures += 1
            continue
        if not _values_match(va, vb, cfg.relative_tolerance):
            return False
        accepted += 1
    return True
