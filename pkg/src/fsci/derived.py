"""Indicators computed from component series rather than ingested directly."""
from __future__ import annotations

import csv
import io
import warnings
from collections.abc import Sequence
from dataclasses import dataclass
from itertools import pairwise

from .errors import AnalysisError, EmptySeries, NonpositiveGDP, NonpositiveUrbanPop
from .kernels import geometric_mean
from .model import (
    DISASTER_DAMAGES,
    SOCIAL_CAPITAL_COMPONENTS,
    WEIGHT_SERIES,
    Observation,
    Panel,
)

RCSI_THRESHOLD = 19


def disaster_damage_ratio(total_damages_kusd: float, gdp_kusd: float) -> float:
    """Disaster damages as a percentage of GDP (both in thousand nominal USD)."""
    if not gdp_kusd > 0:
        raise NonpositiveGDP(f"GDP must be positive, got {gdp_kusd}")
    if total_damages_kusd < 0:
        raise AnalysisError("damages cannot be negative")
    return total_damages_kusd / gdp_kusd * 100.0


def social_capital_index(help_: float, trust: float, fin_conf: float, gov_conf: float) -> float:
    """Geometric mean of four 0-100 components, reported on a 0-1 scale."""
    parts = (help_, trust, fin_conf, gov_conf)
    if any(not 0 <= p <= 100 for p in parts):
        raise AnalysisError(f"social capital components must lie in [0, 100], got {parts}")
    return geometric_mean(parts) / 100.0


@dataclass(frozen=True)
class DailySeries:
    entries: tuple[tuple[int, float], ...]  # (date ordinal, percent)

    def __post_init__(self):
        ordinals = [d for d, _ in self.entries]
        if any(b <= a for a, b in pairwise(ordinals)):
            raise AnalysisError("daily ordinals must be strictly increasing")
        if any(not 0 <= v <= 100 for _, v in self.entries):
            raise AnalysisError("daily prevalence must lie in [0, 100]")


def rcsi_annual_prevalence(days: DailySeries | Sequence[float], threshold: int = RCSI_THRESHOLD) -> float:
    """Highest daily share of the population at or above the rCSI threshold.

    ``threshold`` documents the upstream cut-off; the daily shares passed in
    are already thresholded.
    """
    values = [v for _, v in days.entries] if isinstance(days, DailySeries) else list(days)
    if not values:
        raise EmptySeries("no daily observations")
    return max(values)


def mufpp_urban_share(signatory_city_pops: Sequence[float], national_urban_pop: float) -> float:
    """Percent of the urban population living in signatory cities, clamped to 100."""
    if not national_urban_pop > 0:
        raise NonpositiveUrbanPop(f"urban population must be positive, got {national_urban_pop}")
    if any(p < 0 for p in signatory_city_pops):
        raise AnalysisError("city populations cannot be negative")
    share = sum(signatory_city_pops) / national_urban_pop * 100.0
    if share > 100.0:
        warnings.warn(f"signatory city population exceeds urban population ({share:.1f}%); clamped to 100")
        return 100.0
    return share


# -- panel helpers ------------------------------------------------------------

def derive_damage_ratio(panel: Panel, indicator_id: str) -> list[Observation]:
    """Damage-to-GDP ratios for every country-year with both reserved series."""
    gdp_id = WEIGHT_SERIES["gdp"]
    out = []
    for country in panel.countries_with(DISASTER_DAMAGES):
        gdp = dict(panel.series(country, gdp_id))
        for year, damages in panel.series(country, DISASTER_DAMAGES):
            if gdp.get(year, 0) > 0:
                out.append(Observation(country, indicator_id, year, disaster_damage_ratio(damages, gdp[year])))
    return out


def derive_social_capital(panel: Panel, indicator_id: str) -> list[Observation]:
    """Social capital index for country-years where all four components exist."""
    out = []
    for country in panel.countries_with(SOCIAL_CAPITAL_COMPONENTS[0]):
        comps = [dict(panel.series(country, cid)) for cid in SOCIAL_CAPITAL_COMPONENTS]
        for year in sorted(comps[0]):
            if all(year in c for c in comps):
                out.append(Observation(country, indicator_id, year, social_capital_index(*(c[year] for c in comps))))
    return out


def read_city_populations(source: bytes | str) -> dict[str, list[float]]:
    """Parse an ``iso3,city,population`` side file into per-country lists."""
    text = source.decode("utf-8") if isinstance(source, bytes) else source
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != ["iso3", "city", "population"]:
        raise AnalysisError(f"expected header iso3,city,population, got {reader.fieldnames}")
    out: dict[str, list[float]] = {}
    for rec in reader:
        out.setdefault(rec["iso3"].strip(), []).append(float(rec["population"]))
    return out
