"""Weighted moments and unweighted quantiles."""
from __future__ import annotations

import math
from collections.abc import Sequence

from ..errors import (
    AnalysisError,
    EmptyInput,
    LengthMismatch,
    NeedTwoPoints,
    ProbOutOfRange,
    ZeroTotalWeight,
)


def _check(values: Sequence[float], weights: Sequence[float]) -> float:
    if len(values) != len(weights):
        raise LengthMismatch(f"{len(values)} values but {len(weights)} weights")
    if not values:
        raise EmptyInput("no values")
    if any(w < 0 for w in weights):
        raise AnalysisError("negative weight")
    total = sum(weights)
    if not total > 0:
        raise ZeroTotalWeight("weights sum to zero")
    return total


def weighted_mean(values: Sequence[float], weights: Sequence[float]) -> float:
    total = _check(values, weights)
    return sum(w * x for x, w in zip(values, weights)) / total


def weighted_sd(values: Sequence[float], weights: Sequence[float]) -> float:
    """Weighted standard deviation with analytic-weight scaling.

    Weights are rescaled to sum to ``n`` and the weighted sum of squared
    deviations is divided by ``n - 1``.
    """
    total = _check(values, weights)
    n = len(values)
    if n < 2:
        raise NeedTwoPoints("weighted SD needs at least two observations")
    mean = sum(w * x for x, w in zip(values, weights)) / total
    scaled = [w * n / total for w in weights]
    ss = sum(s * (x - mean) ** 2 for x, s in zip(values, scaled))
    return math.sqrt(ss / (n - 1))


def quantiles(values: Sequence[float], probs: Sequence[float]) -> list[float]:
    """Linear-interpolation quantiles at ``h = (n - 1) p``."""
    if not values:
        raise EmptyInput("quantiles of an empty sample")
    ordered = sorted(values)
    n = len(ordered)
    out = []
    for p in probs:
        if not 0.0 <= p <= 1.0:
            raise ProbOutOfRange(f"probability {p} outside [0, 1]")
        h = (n - 1) * p
        lo = math.floor(h)
        hi = min(lo + 1, n - 1)
        frac = h - lo
        out.append(ordered[lo] + frac * (ordered[hi] - ordered[lo]) if frac else ordered[lo])
    return out
