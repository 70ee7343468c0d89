"""Range normalisation, geometric mean, upper winsorisation and top-k means."""
from __future__ import annotations

import math
from collections.abc import Sequence

from ..errors import (
    EmptyInput,
    NeedThreePoints,
    NegativeComponent,
    TooFewPoints,
    ZeroRange,
)


def min_max_normalize(values: Sequence[float], center: float) -> list[float]:
    """``(v - center) / (max - min)`` for every value."""
    if not values:
        raise EmptyInput("nothing to normalise")
    span = max(values) - min(values)
    if not span > 0:
        raise ZeroRange("all values are equal")
    return [(v - center) / span for v in values]


def geometric_mean(components: Sequence[float]) -> float:
    if not components:
        raise EmptyInput("geometric mean of nothing")
    if any(c < 0 for c in components):
        raise NegativeComponent("geometric mean needs nonnegative components")
    if any(c == 0 for c in components):
        return 0.0
    return math.exp(math.fsum(math.log(c) for c in components) / len(components))


def winsorize_upper_third(values: Sequence[float]) -> list[float]:
    """Cap every value above the third-highest value at that value."""
    if len(values) < 3:
        raise NeedThreePoints("need at least three values")
    cap = sorted(values, reverse=True)[2]
    return [min(v, cap) for v in values]


def top_k_mean(values: Sequence[float], k: int = 3) -> float:
    if k < 1 or len(values) < k:
        raise TooFewPoints(f"need at least {k} values, got {len(values)}")
    return sum(sorted(values, reverse=True)[:k]) / k
