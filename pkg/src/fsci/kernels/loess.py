"""Local polynomial regression with nearest-neighbour tricube windows."""
from __future__ import annotations

import math
import warnings

import numpy as np

from ..errors import AnalysisError, LengthMismatch, TooFewPoints


class DegenerateNeighborhood(UserWarning):
    """All x in a local window coincide; the fit fell back to a weighted mean."""


def _tricube(u: np.ndarray) -> np.ndarray:
    out = np.zeros_like(u)
    inside = u < 1.0
    out[inside] = (1.0 - u[inside] ** 3) ** 3
    return out


def loess_fit(x, y, span: float = 0.75, degree: int = 2) -> tuple[np.ndarray, int]:
    """Fitted values at the sample points plus the count of degenerate windows.

    Each target uses its ``ceil(span * n)`` nearest neighbours in x, tricube
    weights on distance scaled by the farthest neighbour, and a weighted
    polynomial of ``degree`` centred on the target. No robustness passes.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(x)
    if len(y) != n:
        raise LengthMismatch("x and y differ in length")
    if n < 3:
        raise TooFewPoints(f"loess needs at least 3 points, got {n}")
    if not 0 < span <= 1:
        raise AnalysisError(f"span must be in (0, 1], got {span}")
    if degree not in (1, 2):
        raise AnalysisError(f"degree must be 1 or 2, got {degree}")

    order = np.argsort(x, kind="stable")
    xs, ys = x[order], y[order]
    # round away float noise such as 0.3 * 100 = 30.000000000000004
    q = min(n, max(1, math.ceil(round(span * n, 9))))
    fitted = np.empty(n)
    degenerate = 0
    for i in range(n):
        dist = np.abs(xs - xs[i])
        nbr = np.argsort(dist, kind="stable")[:q]
        h = dist[nbr].max()
        if h == 0:
            if degree >= 1 and q > 1:
                degenerate += 1
            fitted[i] = ys[nbr].mean()
            continue
        w = _tricube(dist[nbr] / h)
        u = (xs[nbr] - xs[i]) / h
        basis = np.vander(u, degree + 1, increasing=True)
        sw = np.sqrt(w)
        coef, *_ = np.linalg.lstsq(basis * sw[:, None], ys[nbr] * sw, rcond=None)
        fitted[i] = coef[0]
    out = np.empty(n)
    out[order] = fitted
    return out, degenerate


def loess(x, y, span: float = 0.75, degree: int = 2) -> np.ndarray:
    fitted, degenerate = loess_fit(x, y, span, degree)
    if degenerate:
        warnings.warn(
            f"{degenerate} loess window(s) had a single distinct x; used the window mean",
            DegenerateNeighborhood,
            stacklevel=2,
        )
    return fitted
