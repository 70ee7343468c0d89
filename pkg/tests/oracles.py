"""Independent reference implementations used only by the tests."""
import math

import numpy as np
from scipy.integrate import quad


def dense_design(group, levels):
    X = np.zeros((len(group), len(levels)))
    for i, g in enumerate(group):
        X[i, levels.index(g)] = 1.0
    return X


def dense_wls(y, group, weights, levels):
    X = dense_design(group, levels)
    W = np.diag(weights)
    XtWX = X.T @ W @ X
    beta = np.linalg.solve(XtWX, X.T @ W @ np.asarray(y, float))
    return X, W, XtWX, beta


def dense_hc1(y, group, weights, levels):
    X, W, XtWX, beta = dense_wls(y, group, weights, levels)
    e = np.asarray(y, float) - X @ beta
    n, k = X.shape
    bread = np.linalg.inv(XtWX)
    meat = X.T @ W @ np.diag(e**2) @ W @ X
    return bread @ meat @ bread * n / (n - k)


def dense_cr1(y, group, weights, clusters, levels):
    X, W, XtWX, beta = dense_wls(y, group, weights, levels)
    e = np.asarray(y, float) - X @ beta
    n, k = X.shape
    bread = np.linalg.inv(XtWX)
    ids = list(dict.fromkeys(clusters))
    meat = np.zeros((k, k))
    for c in ids:
        rows = [i for i in range(n) if clusters[i] == c]
        s = X[rows].T @ W[np.ix_(rows, rows)] @ e[rows]
        meat += np.outer(s, s)
    G = len(ids)
    return bread @ meat @ bread * G / (G - 1) * (n - 1) / (n - k)


def t_density(x, v):
    c = math.lgamma((v + 1) / 2) - math.lgamma(v / 2) - 0.5 * math.log(v * math.pi)
    return math.exp(c - (v + 1) / 2 * math.log1p(x * x / v))


def f_density(x, d1, d2):
    if x <= 0:
        return 0.0
    lb = math.lgamma(d1 / 2) + math.lgamma(d2 / 2) - math.lgamma((d1 + d2) / 2)
    lg = 0.5 * (d1 * math.log(d1 * x) + d2 * math.log(d2) - (d1 + d2) * math.log(d1 * x + d2))
    return math.exp(lg - lb - math.log(x))


def t_two_sided_quad(t, v):
    val, _ = quad(t_density, abs(t), math.inf, args=(v,), epsabs=1e-13, epsrel=1e-12)
    return 2 * val


def f_upper_quad(f, d1, d2):
    val, _ = quad(f_density, f, math.inf, args=(d1, d2), epsabs=1e-13, epsrel=1e-12)
    return val


def loess_normal_equations(x, y, span, degree):
    """Plain per-point weighted normal equations, one target at a time."""
    n = len(x)
    q = min(n, math.ceil(round(span * n, 9)))
    out = []
    for x0 in x:
        dist = sorted((abs(xi - x0), xi, yi) for xi, yi in zip(x, y))[:q]
        h = dist[-1][0]
        pts = [(xi, yi, (1 - (d / h) ** 3) ** 3 if d < h else 0.0) for d, xi, yi in dist]
        scale = float(np.std([p[0] for p in pts])) or 1.0
        A = np.zeros((degree + 1, degree + 1))
        b = np.zeros(degree + 1)
        for xi, yi, w in pts:
            row = np.array([((xi - x0) / scale) ** j for j in range(degree + 1)])
            A += w * np.outer(row, row)
            b += w * yi * row
        out.append(np.linalg.solve(A, b)[0])
    return np.array(out)


def resilience_brute(exposure_series, window, min_years):
    """Subset, top-3 means and third-highest cap by exhaustive recomputation."""
    lo, hi = window
    subset = {}
    for c, pts in exposure_series.items():
        vals = [v for y, v in pts if lo <= y <= hi]
        if len(vals) >= min_years:
            best = sorted(vals)[-3:]
            subset[c] = sum(best) / 3
    ranked = sorted(subset.values())
    cap = ranked[-3] if len(ranked) >= 3 else math.inf
    capped = {c: min(v, cap) for c, v in subset.items()}
    return subset, capped
