"""Weighted least squares on a full set of group dummies (no intercept).

For this design ``X'WX`` is diagonal with the group weight totals, so the
coefficients are the group weighted means of the response and both robust
sandwiches reduce to sums of weighted residual scores. The dense-matrix
forms are kept in the test suite as oracles.
"""
from __future__ import annotations

import math
from collections.abc import Hashable, Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..errors import DegenerateDof, EmptyGroup, LengthMismatch, ZeroGroupWeight
from .distributions import FDist, StudentT, stars, tail_probability
from .moments import weighted_mean


@dataclass(frozen=True)
class GroupEstimate:
    label: Hashable
    coefficient: float
    se: float
    t: float
    p_value: float
    star: str
    n: int


@dataclass(frozen=True)
class GroupFit:
    groups: tuple[GroupEstimate, ...]
    covariance: np.ndarray
    dof: int

    def __getitem__(self, label) -> GroupEstimate:
        for g in self.groups:
            if g.label == label:
                return g
        raise KeyError(label)

    @property
    def labels(self) -> tuple:
        return tuple(g.label for g in self.groups)

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([g.coefficient for g in self.groups])


class FStatus(Enum):
    COMPUTED = "computed"
    INSUFFICIENT = "insufficient"


@dataclass(frozen=True)
class FTestResult:
    statistic: float | None
    df_num: int | None
    df_den: int | None
    p_value: float | None
    status: FStatus

    @property
    def star(self) -> str:
        return stars(self.p_value) if self.status is FStatus.COMPUTED else ""


@dataclass(frozen=True)
class _Design:
    y: np.ndarray
    w: np.ndarray
    index: np.ndarray  # group position per observation
    levels: tuple
    coef: np.ndarray
    resid: np.ndarray
    totals: np.ndarray
    counts: np.ndarray


def _design(y, group, weights, levels=None) -> _Design:
    if not (len(y) == len(group) == len(weights)):
        raise LengthMismatch("y, group and weights must have equal length")
    if levels is None:
        levels = tuple(dict.fromkeys(group))
    else:
        levels = tuple(levels)
    pos = {lab: j for j, lab in enumerate(levels)}
    try:
        index = np.array([pos[g] for g in group], dtype=int)
    except KeyError as exc:
        raise EmptyGroup(f"label {exc.args[0]!r} is not among the levels") from None
    y = np.asarray(y, dtype=float)
    w = np.asarray(weights, dtype=float)
    coef = np.empty(len(levels))
    totals = np.empty(len(levels))
    counts = np.bincount(index, minlength=len(levels)) if len(index) else np.zeros(len(levels), int)
    for j, lab in enumerate(levels):
        members = [i for i in range(len(y)) if index[i] == j]
        if not members:
            raise EmptyGroup(f"group {lab!r} has no observations")
        gw = [float(w[i]) for i in members]
        totals[j] = sum(gw)
        if not totals[j] > 0:
            raise ZeroGroupWeight(f"group {lab!r} has zero total weight")
        coef[j] = weighted_mean([float(y[i]) for i in members], gw)
    resid = y - coef[index]
    return _Design(y, w, index, levels, coef, resid, totals, counts)


def _scores(d: _Design, clusters: Sequence | None) -> tuple[np.ndarray, int]:
    """Per-cluster score vectors ``X_c' W_c e_c`` stacked as rows."""
    k = len(d.levels)
    contrib = d.w * d.resid
    if clusters is None:
        cid = np.arange(len(d.y))
    else:
        if len(clusters) != len(d.y):
            raise LengthMismatch("clusters must align with y")
        lookup = {c: j for j, c in enumerate(dict.fromkeys(clusters))}
        cid = np.array([lookup[c] for c in clusters], dtype=int)
    n_clusters = int(cid.max()) + 1 if len(cid) else 0
    scores = np.zeros((n_clusters, k))
    np.add.at(scores, (cid, d.index), contrib)
    return scores, n_clusters


def _sandwich(d: _Design, scores: np.ndarray, factor: float) -> np.ndarray:
    meat = scores.T @ scores
    bread = 1.0 / d.totals
    cov = bread[:, None] * meat * bread[None, :] * factor
    return (cov + cov.T) / 2.0


def hc1_covariance(y, group, weights, levels=None) -> np.ndarray:
    """HC1 covariance of the group coefficients, scaled by ``n / (n - k)``."""
    d = _design(y, group, weights, levels)
    n, k = len(d.y), len(d.levels)
    if n <= k:
        raise DegenerateDof(f"n={n} observations for k={k} groups")
    scores, _ = _scores(d, None)
    return _sandwich(d, scores, n / (n - k))


def cr1_covariance(y, group, weights, clusters=None, levels=None) -> np.ndarray:
    """CR1 cluster-robust covariance, scaled by ``G/(G-1) * (n-1)/(n-k)``.

    ``clusters=None`` puts every observation in its own cluster.
    """
    d = _design(y, group, weights, levels)
    n, k = len(d.y), len(d.levels)
    if n <= k:
        raise DegenerateDof(f"n={n} observations for k={k} groups")
    scores, g = _scores(d, clusters)
    if g < 2:
        raise DegenerateDof("cluster-robust covariance needs at least two clusters")
    return _sandwich(d, scores, g / (g - 1) * (n - 1) / (n - k))


def wls_group_fit(y, group, weights, levels=None) -> GroupFit:
    """Group-dummy WLS with HC1 standard errors and two-sided t p-values.

    ``y`` is expected to be demeaned and sign-aligned already. A zero standard
    error gives ``p = 0`` for a nonzero coefficient and ``p = 1`` for a zero
    coefficient.
    """
    d = _design(y, group, weights, levels)
    n, k = len(d.y), len(d.levels)
    if n <= k:
        raise DegenerateDof(f"n={n} observations for k={k} groups")
    scores, _ = _scores(d, None)
    cov = _sandwich(d, scores, n / (n - k))
    dof = n - k
    out = []
    for j, lab in enumerate(d.levels):
        beta = float(d.coef[j])
        se = math.sqrt(max(cov[j, j], 0.0))
        if se > 0:
            t = beta / se
            p = tail_probability(StudentT(dof), t)
        elif beta != 0:
            t = math.copysign(math.inf, beta)
            p = 0.0
        else:
            t, p = 0.0, 1.0
        out.append(GroupEstimate(lab, beta, se, t, p, stars(p), int(d.counts[j])))
    return GroupFit(tuple(out), cov, dof)


def cluster_robust_f(y, group, weights, clusters=None, levels=None) -> FTestResult:
    """Joint Wald test that every group coefficient is zero.

    ``W = b' V^-1 b`` with the CR1 covariance ``V``; reported as ``F = W / k``
    on ``(k, G - 1)`` degrees of freedom. Any group with fewer than two
    observations makes the test ``INSUFFICIENT``. An all-zero response gives
    statistic 0 and p 1; a singular ``V`` otherwise gives an infinite
    statistic and p 0.
    """
    d = _design(y, group, weights, levels)
    if (d.counts < 2).any():
        return FTestResult(None, None, None, None, FStatus.INSUFFICIENT)
    n, k = len(d.y), len(d.levels)
    if n <= k:
        raise DegenerateDof(f"n={n} observations for k={k} groups")
    scores, g = _scores(d, clusters)
    if g < 2:
        return FTestResult(None, None, None, None, FStatus.INSUFFICIENT)
    df_den = g - 1
    if not d.y.any():
        return FTestResult(0.0, k, df_den, 1.0, FStatus.COMPUTED)
    cov = _sandwich(d, scores, g / (g - 1) * (n - 1) / (n - k))
    eig = np.linalg.eigvalsh(cov)
    if eig[-1] <= 0 or eig[0] <= eig[-1] * 1e-13:
        return FTestResult(math.inf, k, df_den, 0.0, FStatus.COMPUTED)
    wald = float(d.coef @ np.linalg.solve(cov, d.coef))
    stat = wald / k
    return FTestResult(stat, k, df_den, tail_probability(FDist(k, df_den), stat), FStatus.COMPUTED)
