"""Upper-tail probabilities of the Student t and F distributions.

Both reduce to the regularized incomplete beta function ``I_x(a, b)``:

* two-sided t with ``v`` dof: ``P(|T| >= |t|) = I_{v/(v+t^2)}(v/2, 1/2)``
* F with ``(d1, d2)`` dof: ``P(F >= f) = I_{d2/(d2+d1 f)}(d2/2, d1/2)``
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import betainc

from ..errors import AnalysisError, InvalidDof


@dataclass(frozen=True)
class StudentT:
    df: float


@dataclass(frozen=True)
class FDist:
    df1: float
    df2: float


def _clip(p: float) -> float:
    return min(1.0, max(0.0, float(p)))


def tail_probability(kind: StudentT | FDist, statistic: float) -> float:
    if isinstance(kind, StudentT):
        if not kind.df > 0:
            raise InvalidDof(f"t dof must be positive, got {kind.df}")
        if math.isnan(statistic):
            raise AnalysisError("t statistic is NaN")
        if math.isinf(statistic):
            return 0.0
        t2 = statistic * statistic
        return _clip(betainc(kind.df / 2.0, 0.5, kind.df / (kind.df + t2)))
    if isinstance(kind, FDist):
        if not (kind.df1 > 0 and kind.df2 > 0):
            raise InvalidDof(f"F dof must be positive, got ({kind.df1}, {kind.df2})")
        if math.isnan(statistic) or statistic < 0:
            raise AnalysisError(f"F statistic must be >= 0, got {statistic}")
        if math.isinf(statistic):
            return 0.0
        x = kind.df2 / (kind.df2 + kind.df1 * statistic)
        return _clip(betainc(kind.df2 / 2.0, kind.df1 / 2.0, x))
    raise TypeError(f"unsupported distribution {kind!r}")


def stars(p: float | None) -> str:
    """Significance marker with strict thresholds 0.001, 0.01, 0.05."""
    if p is None or math.isnan(p):
        return ""
    if p < 0.001:
        return "***"
    if p < 0.01:
        return "**"
    if p < 0.05:
        return "*"
    return ""
