"""Entropy upper bounds from exact counts of admissible corner-anchored blocks."""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import engine
from .core import SftInputError, SftSpec


@dataclass(frozen=True)
class EntropyEstimate:
    """Count of admissible patterns on [0, n)^d and log2(count) / n^d.

    ``value`` is None when the count is zero (the SFT is empty at side n).
    """
    n: int
    count: int
    value: float | None

    @property
    def empty(self) -> bool:
        return self.count == 0


def count_admissible_blocks_sided(X: SftSpec, n: int, workers: int | None = None) -> int:
    """Exact number of admissible patterns with support [0, n)^d."""
    if n < 1:
        raise SftInputError("side length must be >= 1")
    workers = engine.default_workers() if workers is None else workers
    plan = X.plan(engine.corner_box(n, X.dim))
    return engine.parallel_count(plan, len(X.alphabet), None, workers)


def entropy_upper_bound(X: SftSpec, n: int, workers: int | None = None) -> EntropyEstimate:
    """Upper bound log2(E_n)/n^d on the entropy, with admissible counts standing in for E_n."""
    c = count_admissible_blocks_sided(X, n, workers)
    value = math.log2(c) / n ** X.dim if c > 0 else None
    return EntropyEstimate(n, c, value)
