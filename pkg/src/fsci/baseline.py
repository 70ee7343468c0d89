"""Latest-value baseline and the country-indicator coverage matrix."""
from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
from types import MappingProxyType

from .errors import InvalidWindow
from .model import Panel

DEFAULT_MIN_YEAR = 2000
# vintage bands; the top band is open above and the bottom band open below
VINTAGE_BANDS = (("2017-2022", 2017, None), ("2010-2016", 2010, 2016), ("2000-2009", None, 2009))


@dataclass(frozen=True)
class Baseline:
    cells: MappingProxyType  # (country, indicator) -> (year, value)
    vintage_summary: tuple[tuple[str, float], ...]
    min_year: int = DEFAULT_MIN_YEAR

    def __len__(self) -> int:
        return len(self.cells)

    def get(self, country: str, indicator: str) -> tuple[int, float] | None:
        return self.cells.get((country, indicator))

    def indicator_cells(self, indicator: str) -> list[tuple[str, int, float]]:
        """``(country, year, value)`` for one indicator, sorted by country."""
        return [(c, y, v) for (c, i), (y, v) in self.cells.items() if i == indicator]

    def rows(self) -> Iterator[tuple[str, str, int, float]]:
        for (c, i), (y, v) in self.cells.items():
            yield c, i, y, v


@dataclass(frozen=True)
class CoverageMatrix:
    counts: MappingProxyType  # (country, indicator) -> int
    start: int = 2000
    end: int = 2021

    def get(self, country: str, indicator: str) -> int:
        return self.counts.get((country, indicator), 0)


def vintage_summary(years: list[int]) -> tuple[tuple[str, float], ...]:
    if not years:
        return tuple((label, 0.0) for label, _, _ in VINTAGE_BANDS)
    out = []
    for label, lo, hi in VINTAGE_BANDS:
        n = sum(1 for y in years if (lo is None or y >= lo) and (hi is None or y <= hi))
        out.append((label, n / len(years)))
    return tuple(out)


def build_baseline(panel: Panel, min_year: int = DEFAULT_MIN_YEAR) -> tuple[Baseline, list[tuple[str, str, int]]]:
    """Latest observation per (country, indicator).

    A pair whose latest year is before ``min_year`` is dropped and listed;
    older points are never promoted in its place.
    """
    cells = {}
    dropped = []
    for key in panel.keys():
        year, value = panel.series(*key)[-1]
        if year < min_year:
            dropped.append((key[0], key[1], year))
        else:
            cells[key] = (year, value)
    summary = vintage_summary([y for y, _ in cells.values()])
    return Baseline(MappingProxyType(cells), summary, min_year), dropped


def coverage_matrix(panel: Panel, start: int = 2000, end: int = 2021) -> CoverageMatrix:
    """Number of distinct years with data in ``[start, end]`` per pair."""
    if start > end:
        raise InvalidWindow(f"coverage window start {start} is after end {end}")
    counts = {}
    for key in panel.keys():
        n = sum(1 for y, _ in panel.series(*key) if start <= y <= end)
        if n:
            counts[key] = n
    return CoverageMatrix(MappingProxyType(counts), start, end)
