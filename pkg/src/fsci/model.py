"""Domain types: observations, the indicator codebook, the country table,
grouping schemes and weight-series resolution."""
from __future__ import annotations

import bisect
import enum
import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from types import MappingProxyType

from .errors import (
    DuplicateCell,
    DuplicateIndicatorId,
    InvalidCountry,
    MissingWeightSeries,
    UnknownCountry,
    UnknownIndicator,
    UnknownWeightKey,
    ValidationError,
)

MIN_PANEL_YEAR = 1960


class Direction(enum.Enum):
    HIGHER_BETTER = "higher"
    LOWER_BETTER = "lower"

    @property
    def sign(self) -> int:
        return 1 if self is Direction.HIGHER_BETTER else -1

    def flipped(self) -> Direction:
        if self is Direction.HIGHER_BETTER:
            return Direction.LOWER_BETTER
        return Direction.HIGHER_BETTER


THEMES = ("diets", "environment", "livelihoods", "governance", "resilience")

# weight_key -> reserved indicator id holding the weight series
WEIGHT_SERIES = {
    "population": "_population",
    "gdp": "_gdp",
    "urban_population": "_urban_population",
    "land_area": "_land_area",
    "cropland": "_cropland",
    "agricultural_land_2015": "_agricultural_land",
    "agricultural_land_2010": "_agricultural_land",
    "area_harvested": "_area_harvested",
    "producing_animals": "_producing_animals",
    "animals_slaughtered": "_animals_slaughtered",
}
FIXED_WEIGHT_YEAR = {"agricultural_land_2015": 2015, "agricultural_land_2010": 2010}
WEIGHT_KEYS = frozenset(WEIGHT_SERIES) | {"none"}

GDP_PER_CAPITA = "_gdp_per_capita"
DISASTER_DAMAGES = "_disaster_damages"
SOCIAL_CAPITAL_COMPONENTS = ("_sc_help", "_sc_trust", "_sc_fin_conf", "_sc_gov_conf")

RESERVED_IDS = frozenset(WEIGHT_SERIES.values()) | {
    GDP_PER_CAPITA,
    DISASTER_DAMAGES,
    *SOCIAL_CAPITAL_COMPONENTS,
}

REGIONS = (
    "Latin America & Caribbean",
    "Northern America & Europe",
    "Oceania",
    "Northern Africa & Western Asia",
    "Central Asia",
    "Eastern Asia",
    "South-eastern Asia",
    "Southern Asia",
    "Sub-Saharan Africa",
)
INCOME_GROUPS = ("Low", "LowerMiddle", "UpperMiddle", "High")
INCOME_LABELS = {
    "Low": "Low income",
    "LowerMiddle": "Lower middle income",
    "UpperMiddle": "Upper middle income",
    "High": "High income",
}


@dataclass(frozen=True)
class Observation:
    country: str
    indicator: str
    year: int
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValidationError(f"non-finite value for {self.country}/{self.indicator}/{self.year}")
        if self.year < MIN_PANEL_YEAR:
            raise ValidationError(f"year {self.year} before {MIN_PANEL_YEAR}")


@dataclass(frozen=True)
class IndicatorMeta:
    id: str
    name: str
    unit: str
    theme: str
    domain: str
    direction: Direction
    weight_key: str
    value_added: bool = False
    decimals: int = 1

    def __post_init__(self):
        if self.weight_key not in WEIGHT_KEYS:
            raise UnknownWeightKey(f"unknown weight key {self.weight_key!r} for {self.id}")

    @property
    def is_binary(self) -> bool:
        return self.unit.strip().lower() == "binary"


class IndicatorRegistry(Mapping):
    """Ordered, immutable codebook keyed by indicator id.

    Iteration follows codebook order, which fixes the row order of every
    report table.
    """

    def __init__(self, metas: Iterable[IndicatorMeta] = ()):
        entries: dict[str, IndicatorMeta] = {}
        for meta in metas:
            if meta.id in entries:
                raise DuplicateIndicatorId(f"duplicate indicator id {meta.id!r}")
            if meta.id in RESERVED_IDS:
                raise DuplicateIndicatorId(f"{meta.id!r} is a reserved series id")
            entries[meta.id] = meta
        self._entries = MappingProxyType(entries)

    def __getitem__(self, key: str) -> IndicatorMeta:
        return self._entries[key]

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other):
        if not isinstance(other, IndicatorRegistry):
            return NotImplemented
        return list(self._entries.items()) == list(other._entries.items())

    def __hash__(self):
        return hash(tuple(self._entries.items()))

    def knows(self, indicator_id: str) -> bool:
        """True for codebook indicators and reserved auxiliary series."""
        return indicator_id in self._entries or indicator_id in RESERVED_IDS

    def with_direction(self, indicator_id: str, direction: Direction) -> IndicatorRegistry:
        from dataclasses import replace

        return IndicatorRegistry(
            replace(m, direction=direction) if m.id == indicator_id else m for m in self.values()
        )


@dataclass(frozen=True)
class CountryMeta:
    country: str
    name: str
    region: str
    income_group: str
    un_member: bool = True

    def __post_init__(self):
        if self.region not in REGIONS:
            raise InvalidCountry(f"{self.country}: unknown region {self.region!r}")
        if self.income_group not in INCOME_GROUPS:
            raise InvalidCountry(f"{self.country}: unknown income group {self.income_group!r}")


class CountryTable(Mapping):
    def __init__(self, countries: Iterable[CountryMeta] = ()):
        entries: dict[str, CountryMeta] = {}
        for c in countries:
            if c.country in entries:
                raise InvalidCountry(f"duplicate country {c.country!r}")
            entries[c.country] = c
        self._entries = MappingProxyType(dict(sorted(entries.items())))

    def __getitem__(self, key: str) -> CountryMeta:
        return self._entries[key]

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other):
        if not isinstance(other, CountryTable):
            return NotImplemented
        return list(self._entries.items()) == list(other._entries.items())

    def __hash__(self):
        return hash(tuple(self._entries.items()))


class Panel:
    """Validated long panel of observations.

    Series are stored per ``(country, indicator)`` sorted by year. The
    instance is treated as immutable once built.
    """

    def __init__(
        self,
        observations: Iterable[Observation],
        registry: IndicatorRegistry,
        countries: CountryTable,
    ):
        self.registry = registry
        self.countries = countries
        series: dict[tuple[str, str], dict[int, float]] = {}
        for obs in observations:
            if not registry.knows(obs.indicator):
                raise UnknownIndicator(f"unknown indicator {obs.indicator!r}")
            if obs.country not in countries:
                raise UnknownCountry(f"unknown country {obs.country!r}")
            cell = series.setdefault((obs.country, obs.indicator), {})
            if obs.year in cell:
                raise DuplicateCell(f"duplicate cell {obs.country},{obs.indicator},{obs.year}")
            cell[obs.year] = obs.value
        self._series = {
            key: tuple(sorted(years.items())) for key, years in sorted(series.items())
        }
        self._by_indicator: dict[str, list[str]] = {}
        for country, indicator in self._series:
            self._by_indicator.setdefault(indicator, []).append(country)

    @property
    def observations(self) -> tuple[Observation, ...]:
        return tuple(
            Observation(c, i, y, v) for (c, i), pts in self._series.items() for y, v in pts
        )

    def __len__(self) -> int:
        return sum(len(pts) for pts in self._series.values())

    def __eq__(self, other):
        if not isinstance(other, Panel):
            return NotImplemented
        return (
            self._series == other._series
            and self.registry == other.registry
            and self.countries == other.countries
        )

    def keys(self) -> Iterator[tuple[str, str]]:
        """``(country, indicator)`` pairs with at least one observation, sorted."""
        return iter(self._series)

    def series(self, country: str, indicator: str) -> tuple[tuple[int, float], ...]:
        return self._series.get((country, indicator), ())

    def has_indicator(self, indicator: str) -> bool:
        return indicator in self._by_indicator

    def countries_with(self, indicator: str) -> list[str]:
        return list(self._by_indicator.get(indicator, ()))

    def value(self, country: str, indicator: str, year: int) -> float | None:
        for y, v in self.series(country, indicator):
            if y == year:
                return v
        return None

    def with_observations(self, extra: Iterable[Observation]) -> Panel:
        return Panel([*self.observations, *extra], self.registry, self.countries)


def merge_panels(a: Panel, b: Panel) -> Panel:
    """Deterministic union of two panels sharing a codebook and country table.

    Uniqueness is re-checked, so overlapping cells raise :class:`DuplicateCell`.
    """
    if a.registry != b.registry or a.countries != b.countries:
        raise ValidationError("cannot merge panels built on different codebooks or country tables")
    return Panel([*a.observations, *b.observations], a.registry, a.countries)


class GroupingKind(enum.Enum):
    REGION = "region"
    INCOME = "income"
    GLOBAL = "global"


@dataclass(frozen=True)
class GroupingScheme:
    kind: GroupingKind
    cells: tuple[str, ...]

    def cell_of(self, country: CountryMeta) -> str:
        if self.kind is GroupingKind.REGION:
            return country.region
        if self.kind is GroupingKind.INCOME:
            return country.income_group
        return "Global"

    def label(self, cell: str) -> str:
        if self.kind is GroupingKind.INCOME:
            return INCOME_LABELS[cell]
        return cell


REGION_SCHEME = GroupingScheme(GroupingKind.REGION, REGIONS)
INCOME_SCHEME = GroupingScheme(GroupingKind.INCOME, INCOME_GROUPS)
GLOBAL_SCHEME = GroupingScheme(GroupingKind.GLOBAL, ("Global",))

SCHEMES = {"region": REGION_SCHEME, "income": INCOME_SCHEME, "global": GLOBAL_SCHEME}


def _pick_weight(points: tuple[tuple[int, float], ...], obs_year: int) -> float:
    years = [y for y, _ in points]
    i = bisect.bisect_right(years, obs_year)
    if i > 0:
        # exact year or latest year <= obs_year
        return points[i - 1][1]
    return points[-1][1]


def resolve_weight(meta: IndicatorMeta, panel: Panel, country: str, obs_year: int) -> float | None:
    """Weight of ``country`` for indicator ``meta`` observed in ``obs_year``.

    Falls back from the same year to the latest weight year not after
    ``obs_year`` and then to the latest available year. The two fixed-year
    agricultural-land keys ignore ``obs_year``. Returns ``None`` if the
    country has no usable weight.
    """
    key = meta.weight_key
    if key == "none":
        return 1.0
    if key not in WEIGHT_SERIES:
        raise UnknownWeightKey(f"unknown weight key {key!r}")
    series_id = WEIGHT_SERIES[key]
    if not panel.has_indicator(series_id):
        raise MissingWeightSeries(f"weight series {series_id!r} for {meta.id!r} is not in the panel")
    points = panel.series(country, series_id)
    if not points:
        return None
    if key in FIXED_WEIGHT_YEAR:
        return panel.value(country, series_id, FIXED_WEIGHT_YEAR[key])
    return _pick_weight(points, obs_year)


def resolve_weight_series(meta: IndicatorMeta, panel: Panel, obs_year: int) -> dict[str, float | None]:
    """Weights for every country in the panel's country table at ``obs_year``."""
    return {c: resolve_weight(meta, panel, c, obs_year) for c in panel.countries}
