import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fsci.model import (
    CountryMeta,
    CountryTable,
    Direction,
    IndicatorMeta,
    IndicatorRegistry,
    Observation,
    Panel,
)

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "fsci" / "fixtures"


def meta(id_, direction="higher", weight_key="none", unit="%", theme="diets", decimals=1):
    return IndicatorMeta(id_, id_, unit, theme, "d", Direction(direction), weight_key, False, decimals)


def country(iso, region="Oceania", income="High", member=True):
    return CountryMeta(iso, iso, region, income, member)


def panel_of(rows, metas, countries):
    """Panel from ``(iso, indicator, year, value)`` tuples."""
    return Panel([Observation(*r) for r in rows], IndicatorRegistry(metas), CountryTable(countries))


@pytest.fixture
def fixture_dir():
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)
