"""Headline computations over a baseline: grouped weighted means, percent
deviations with robust inference, normalised distances, GDP-relationship
curves and the resilience snapshot."""
from __future__ import annotations

from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .baseline import Baseline, build_baseline
from .errors import (
    AnalysisError,
    DegenerateDof,
    EmptySubset,
    NeedThreePoints,
    ZeroGlobalMean,
    ZeroRange,
)
from .kernels import (
    FStatus,
    FTestResult,
    cluster_robust_f,
    loess_fit,
    quantiles,
    top_k_mean,
    weighted_mean,
    weighted_sd,
    winsorize_upper_third,
    wls_group_fit,
)
from .model import (
    GDP_PER_CAPITA,
    REGION_SCHEME,
    Direction,
    GroupingScheme,
    IndicatorMeta,
    IndicatorRegistry,
    Panel,
    resolve_weight,
)

QUANTILE_PROBS = (0.0, 0.25, 0.5, 0.75, 1.0)
GDP_DISPLAY_CAP = 100_000.0
SMALL_DENOMINATOR = 1.0
INSUFFICIENT = FTestResult(None, None, None, None, FStatus.INSUFFICIENT)


def _fan_out(fn: Callable, items: Sequence, threads: int) -> list:
    """Apply ``fn`` to ``items``; results always come back in input order."""
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class Point:
    country: str
    year: int
    value: float
    weight: float | None
    cell: str


def indicator_points(baseline: Baseline, meta: IndicatorMeta, panel: Panel,
                     scheme: GroupingScheme) -> list[Point]:
    """Baseline values of one indicator paired with weights and group cells.

    Weights are resolved at each country's baseline year. Zero weights are
    treated as missing.
    """
    out = []
    for country, year, value in baseline.indicator_cells(meta.id):
        w = resolve_weight(meta, panel, country, year)
        if w is not None and not w > 0:
            w = None
        out.append(Point(country, year, value, w, scheme.cell_of(panel.countries[country])))
    return out


def _weighted(points: Iterable[Point]) -> list[Point]:
    return [p for p in points if p.weight is not None]


# -- group means --------------------------------------------------------------

@dataclass(frozen=True)
class CellMean:
    cell: str
    n: int
    mean: float | None


@dataclass(frozen=True)
class IndicatorMeans:
    indicator: str
    n: int
    n_weighted: int
    global_mean: float | None
    global_sd: float | None
    quantiles: tuple[float, ...] | None
    cells: tuple[CellMean, ...]

    def cell(self, label: str) -> CellMean:
        for c in self.cells:
            if c.cell == label:
                return c
        raise KeyError(label)


@dataclass(frozen=True)
class GroupMeansTable:
    scheme: GroupingScheme
    rows: tuple[IndicatorMeans, ...]
    warnings: tuple[str, ...] = ()

    def __getitem__(self, indicator: str) -> IndicatorMeans:
        for r in self.rows:
            if r.indicator == indicator:
                return r
        raise KeyError(indicator)


def _means_row(meta: IndicatorMeta, points: list[Point], scheme: GroupingScheme) -> tuple[IndicatorMeans, list[str]]:
    notes = []
    values = [p.value for p in points]
    qs = tuple(quantiles(values, QUANTILE_PROBS)) if values else None
    wp = _weighted(points)
    if len(wp) < len(points):
        notes.append(f"{meta.id}: {len(points) - len(wp)} country(ies) without a {meta.weight_key} weight left out of weighted statistics")
    gmean = gsd = None
    if wp:
        gmean = weighted_mean([p.value for p in wp], [p.weight for p in wp])
        if len(wp) >= 2:
            gsd = weighted_sd([p.value for p in wp], [p.weight for p in wp])
    cells = []
    for label in scheme.cells:
        members = [p for p in wp if p.cell == label]
        mean = weighted_mean([p.value for p in members], [p.weight for p in members]) if members else None
        cells.append(CellMean(label, len(members), mean))
    return IndicatorMeans(meta.id, len(points), len(wp), gmean, gsd, qs, tuple(cells)), notes


def _indicators_with_data(baseline: Baseline, registry: IndicatorRegistry) -> list[IndicatorMeta]:
    present = {i for (_, i) in baseline.cells}
    return [m for m in registry.values() if m.id in present]


def group_weighted_means(baseline: Baseline, grouping: GroupingScheme, registry: IndicatorRegistry,
                         panel: Panel, threads: int = 1) -> GroupMeansTable:
    """Global and per-cell weighted means plus global SD and unweighted quantiles.

    Countries without a weight are dropped from the weighted statistics of
    that indicator but still count toward the quantiles.
    """
    metas = _indicators_with_data(baseline, registry)

    def one(meta):
        return _means_row(meta, indicator_points(baseline, meta, panel, grouping), grouping)

    results = _fan_out(one, metas, threads)
    return GroupMeansTable(grouping, tuple(r for r, _ in results), tuple(n for _, ns in results for n in ns))


# -- percent deviations -------------------------------------------------------

def percent_deviation(cell_mean: float, global_mean: float, direction: Direction) -> float:
    """Sign-aligned deviation of a group mean from the global mean, in percent."""
    if global_mean == 0:
        raise ZeroGlobalMean("global mean is zero; percent deviation undefined")
    return direction.sign * (cell_mean - global_mean) / global_mean * 100.0


def is_small_denominator(global_mean: float) -> bool:
    return abs(global_mean) < SMALL_DENOMINATOR


@dataclass(frozen=True)
class CellDeviation:
    cell: str
    n: int
    coefficient: float | None = None
    percent: float | None = None
    se: float | None = None
    p_value: float | None = None
    star: str = ""


@dataclass(frozen=True)
class IndicatorDeviation:
    indicator: str
    direction: Direction
    global_mean: float
    small_denominator: bool
    cells: tuple[CellDeviation, ...]
    ftest: FTestResult

    def cell(self, label: str) -> CellDeviation:
        for c in self.cells:
            if c.cell == label:
                return c
        raise KeyError(label)


@dataclass(frozen=True)
class DeviationTable:
    scheme: GroupingScheme
    rows: tuple[IndicatorDeviation, ...]
    warnings: tuple[str, ...] = ()

    def __getitem__(self, indicator: str) -> IndicatorDeviation:
        for r in self.rows:
            if r.indicator == indicator:
                return r
        raise KeyError(indicator)


def deviation_row(meta: IndicatorMeta, points: Sequence[Point], scheme: GroupingScheme
                  ) -> tuple[IndicatorDeviation | None, list[str]]:
    """Regress the demeaned, sign-aligned values on group dummies."""
    wp = _weighted(points)
    if not wp:
        return None, [f"{meta.id}: no weighted observations; deviations skipped"]
    notes = []
    values = [p.value for p in wp]
    weights = [p.weight for p in wp]
    gmean = weighted_mean(values, weights)
    s = meta.direction.sign
    y = [s * (v - gmean) for v in values]
    groups = [p.cell for p in wp]
    levels = [c for c in scheme.cells if c in set(groups)]
    counts = {c: groups.count(c) for c in scheme.cells}

    zero_mean = gmean == 0
    if zero_mean:
        notes.append(f"{meta.id}: global weighted mean is zero; percent deviations left blank")
    small = is_small_denominator(gmean)
    if small and not zero_mean:
        notes.append(f"{meta.id}: |global mean| {abs(gmean):.4g} below one unit; percent deviations are unstable")

    try:
        fit = wls_group_fit(y, groups, weights, levels=levels)
        est = {g.label: g for g in fit.groups}
        ftest = cluster_robust_f(y, groups, weights, levels=levels)
    except DegenerateDof:
        notes.append(f"{meta.id}: no residual degrees of freedom; standard errors left blank")
        est = {}
        ftest = INSUFFICIENT

    cells = []
    for label in scheme.cells:
        if label not in levels:
            cells.append(CellDeviation(label, 0))
            continue
        if label in est:
            g = est[label]
            coef, se, p, star = g.coefficient, g.se, g.p_value, g.star
        else:
            members = [i for i, c in enumerate(groups) if c == label]
            coef = weighted_mean([y[i] for i in members], [weights[i] for i in members])
            se = p = None
            star = ""
        pct = None if zero_mean else coef / gmean * 100.0
        cells.append(CellDeviation(label, counts[label], coef, pct, se, p, star))
    return IndicatorDeviation(meta.id, meta.direction, gmean, small, tuple(cells), ftest), notes


def deviation_table(baseline: Baseline, grouping: GroupingScheme, registry: IndicatorRegistry,
                    panel: Panel, threads: int = 1) -> DeviationTable:
    """Percent deviations of group weighted means with HC1 inference and a
    cluster-robust joint F test per indicator."""
    metas = _indicators_with_data(baseline, registry)

    def one(meta):
        return deviation_row(meta, indicator_points(baseline, meta, panel, grouping), grouping)

    results = _fan_out(one, metas, threads)
    rows = tuple(r for r, _ in results if r is not None)
    return DeviationTable(grouping, rows, tuple(n for _, ns in results for n in ns))


# -- normalised distances -----------------------------------------------------

@dataclass(frozen=True)
class DistanceRow:
    indicator: str
    direction: Direction
    cells: tuple[tuple[str, float | None], ...]


@dataclass(frozen=True)
class DistanceTable:
    scheme: GroupingScheme
    rows: tuple[DistanceRow, ...]
    warnings: tuple[str, ...] = ()


def normalized_distances(cell_means: Sequence[float | None], global_mean: float,
                         direction: Direction) -> list[float | None]:
    """Sign-aligned ``(cell - global) / (max cell - min cell)``; ``None`` stays ``None``.

    Raises :class:`ZeroRange` when fewer than two distinct cell means exist.
    """
    present = [m for m in cell_means if m is not None]
    if len(set(present)) < 2:
        raise ZeroRange("need at least two distinct cell means")
    span = max(present) - min(present)
    s = direction.sign
    return [None if m is None else s * (m - global_mean) / span for m in cell_means]


def normalized_distance_table(means: GroupMeansTable, registry: IndicatorRegistry) -> DistanceTable:
    rows, notes = [], []
    for r in means.rows:
        meta = registry[r.indicator]
        if r.global_mean is None:
            continue
        labels = [c.cell for c in r.cells]
        try:
            dist = normalized_distances([c.mean for c in r.cells], r.global_mean, meta.direction)
        except ZeroRange:
            notes.append(f"{r.indicator}: fewer than two distinct group means; distances left blank")
            dist = [None] * len(labels)
        rows.append(DistanceRow(r.indicator, meta.direction, tuple(zip(labels, dist))))
    return DistanceTable(means.scheme, tuple(rows), tuple(notes))


# -- GDP relationship ---------------------------------------------------------

@dataclass(frozen=True)
class GdpPoint:
    indicator: str
    country: str
    cell: str
    gdp_per_capita: float
    value: float
    normalized: float
    display: bool


@dataclass(frozen=True)
class CurvePoint:
    indicator: str
    cell: str
    country: str
    gdp_per_capita: float
    fitted: float


@dataclass(frozen=True)
class GdpRelation:
    points: tuple[GdpPoint, ...]
    curves: tuple[CurvePoint, ...]
    warnings: tuple[str, ...] = ()


def _gdp_indicator(meta: IndicatorMeta, points: list[Point], gdp: dict[str, float], span: float,
                   degree: int) -> tuple[list[GdpPoint], list[CurvePoint], list[str]]:
    wp = _weighted(points)
    if not wp:
        return [], [], [f"{meta.id}: no weighted observations; GDP relation skipped"]
    center = weighted_mean([p.value for p in wp], [p.weight for p in wp])
    values = [p.value for p in points]
    span_v = max(values) - min(values)
    if not span_v > 0:
        return [], [], [f"{meta.id}: constant across countries; GDP relation skipped"]
    pts = [
        GdpPoint(meta.id, p.country, p.cell, gdp[p.country], p.value, (p.value - center) / span_v,
                 gdp[p.country] <= GDP_DISPLAY_CAP)
        for p in points if p.country in gdp
    ]
    curves, notes = [], []
    cells = list(dict.fromkeys(p.cell for p in pts))
    for cell in cells:
        members = sorted((p for p in pts if p.cell == cell), key=lambda p: (p.gdp_per_capita, p.country))
        if len(members) < 3:
            continue
        fitted, degenerate = loess_fit([m.gdp_per_capita for m in members], [m.normalized for m in members],
                                       span, degree)
        if degenerate:
            notes.append(f"{meta.id}/{cell}: {degenerate} loess window(s) with a single GDP value")
        curves.extend(CurvePoint(meta.id, cell, m.country, m.gdp_per_capita, float(f))
                      for m, f in zip(members, fitted))
    return pts, curves, notes


def gdp_relation_dataset(baseline: Baseline, registry: IndicatorRegistry, panel: Panel,
                         grouping: GroupingScheme = REGION_SCHEME, span: float = 0.75, degree: int = 2,
                         threads: int = 1) -> GdpRelation:
    """Range-normalised country points against GDP per capita with per-group Loess curves.

    Points with GDP per capita above 100,000 enter the fits but are flagged
    ``display=False``. Groups with fewer than three points get no curve.
    """
    gdp = {c: v for (c, i), (_, v) in baseline.cells.items() if i == GDP_PER_CAPITA}
    metas = _indicators_with_data(baseline, registry)

    def one(meta):
        pts = indicator_points(baseline, meta, panel, grouping)
        pts.sort(key=lambda p: (grouping.cells.index(p.cell), p.country))
        return _gdp_indicator(meta, pts, gdp, span, degree)

    results = _fan_out(one, metas, threads)
    return GdpRelation(
        tuple(p for r in results for p in r[0]),
        tuple(c for r in results for c in r[1]),
        tuple(n for r in results for n in r[2]),
    )


# -- resilience snapshot --------------------------------------------------------

@dataclass(frozen=True)
class ResilienceFields:
    exposure: str = "disaster_damage_ratio"
    social_capital: str = "social_capital_index"
    sourcing_flexibility: str = "dietary_sourcing_flexibility"
    price_volatility: str = "food_price_volatility"
    supply_variability: str = "food_supply_variability"

    def baseline_fields(self) -> tuple[str, ...]:
        return (self.social_capital, self.sourcing_flexibility, self.price_volatility, self.supply_variability)

    def all(self) -> tuple[str, ...]:
        return (self.exposure, *self.baseline_fields())


@dataclass(frozen=True)
class ResilienceRow:
    country: str
    exposure_years: int
    exposure_top3: float
    values: tuple[float, ...]  # winsorised exposure then the four baseline fields
    size: tuple[float, ...]
    color: tuple[float, ...]


@dataclass(frozen=True)
class ResilienceSnapshot:
    fields: tuple[str, ...]
    rows: tuple[ResilienceRow, ...]
    subset_mean: tuple[float, ...]
    warnings: tuple[str, ...] = ()


def _size_color(values: list[float], direction: Direction, name: str, notes: list[str]):
    lo, hi = min(values), max(values)
    mean = sum(values) / len(values)
    if not hi > lo:
        notes.append(f"{name}: zero range across the subset; size set to 0.5 and color to 0")
        return [0.5] * len(values), [0.0] * len(values), mean
    span = hi - lo
    size = [(v - lo) / span for v in values]
    color = [direction.sign * (v - mean) / span for v in values]
    return size, color, mean


def resilience_snapshot(panel: Panel, window: tuple[int, int] = (2012, 2021),
                        fields: ResilienceFields | None = None, min_years: int = 7,
                        baseline: Baseline | None = None) -> ResilienceSnapshot:
    """Resilience subset with top-3 exposure means and two normalisations per field.

    Countries qualify with at least ``min_years`` exposure values inside
    ``window`` and baseline values for the other four fields. Exposure is
    the mean of each country's three highest window values, then capped at
    the subset's third-highest exposure. ``size`` is min-max scaled to
    [0, 1]; ``color`` is the direction-aligned distance to the subset mean
    over the subset range.
    """
    fields = fields or ResilienceFields()
    registry = panel.registry
    missing = [f for f in fields.all() if f not in registry]
    if missing:
        raise AnalysisError(f"resilience fields not in the codebook: {', '.join(missing)}")
    if baseline is None:
        baseline, _ = build_baseline(panel)
    start, end = window
    notes: list[str] = []
    subset = []
    for country in panel.countries_with(fields.exposure):
        years = [v for y, v in panel.series(country, fields.exposure) if start <= y <= end]
        if len(years) < min_years:
            continue
        others = [baseline.get(country, f) for f in fields.baseline_fields()]
        if any(o is None for o in others):
            continue
        subset.append((country, len(years), top_k_mean(years, 3), [o[1] for o in others]))
    if not subset:
        raise EmptySubset(f"no country has {min_years}+ exposure years in {start}-{end} and all other fields")

    exposure = [s[2] for s in subset]
    try:
        capped = winsorize_upper_third(exposure)
    except NeedThreePoints:
        notes.append("exposure: fewer than three countries in subset; not winsorised")
        capped = list(exposure)

    columns = [capped] + [[s[3][j] for s in subset] for j in range(4)]
    sizes, colors, means = [], [], []
    for fid, col in zip(fields.all(), columns):
        size, color, mean = _size_color(col, registry[fid].direction, fid, notes)
        sizes.append(size)
        colors.append(color)
        means.append(mean)
    rows = tuple(
        ResilienceRow(
            country=s[0],
            exposure_years=s[1],
            exposure_top3=s[2],
            values=tuple(col[i] for col in columns),
            size=tuple(col[i] for col in sizes),
            color=tuple(col[i] for col in colors),
        )
        for i, s in enumerate(subset)
    )
    return ResilienceSnapshot(fields.all(), rows, tuple(means), tuple(notes))
