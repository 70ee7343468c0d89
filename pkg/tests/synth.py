"""Random synthetic panels for property and acceptance tests."""
import numpy as np

from fsci.model import (
    REGIONS,
    CountryMeta,
    CountryTable,
    Direction,
    IndicatorMeta,
    IndicatorRegistry,
    Observation,
    Panel,
)


def random_panel(rng, n_countries, n_groups, direction="lower", scale=1.0):
    """One population-weighted indicator ``x`` over ``n_groups`` regions.

    Every region gets at least one country; values and weights are random.
    """
    regions = list(REGIONS[:n_groups])
    assign = regions + [regions[int(i)] for i in rng.integers(0, n_groups, n_countries - n_groups)]
    rng.shuffle(assign)
    countries = [CountryMeta(f"C{i:03d}", f"C{i:03d}", r, "High") for i, r in enumerate(assign)]
    years = rng.integers(2000, 2023, n_countries)
    rows = []
    for c, y in zip(countries, years):
        rows.append(Observation(c.country, "x", int(y), float(rng.uniform(0.5, 50.0)) * scale))
        rows.append(Observation(c.country, "_population", int(y), float(rng.uniform(0.1, 100.0))))
    reg = IndicatorRegistry([IndicatorMeta("x", "x", "u", "diets", "d", Direction(direction), "population")])
    return Panel(rows, reg, CountryTable(countries))


def fixed_panel(values, weights, regions, direction="higher", unit="u"):
    countries = [CountryMeta(f"C{i:03d}", f"C{i:03d}", r, "High") for i, r in enumerate(regions)]
    rows = []
    for c, v, w in zip(countries, values, weights):
        rows.append(Observation(c.country, "x", 2020, float(v)))
        if w is not None:
            rows.append(Observation(c.country, "_population", 2020, float(w)))
    reg = IndicatorRegistry([IndicatorMeta("x", "x", unit, "diets", "d", Direction(direction), "population")])
    return Panel(rows, reg, CountryTable(countries))


__all__ = ["fixed_panel", "np", "random_panel"]
