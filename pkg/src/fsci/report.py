"""Report tables and their byte-stable CSV / JSON emission.

All values stay at full precision until :func:`emit_table` formats them.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

from .analysis import (
    DeviationTable,
    DistanceTable,
    GdpRelation,
    GroupMeansTable,
    ResilienceSnapshot,
)
from .baseline import Baseline, CoverageMatrix
from .kernels import FStatus
from .model import IndicatorRegistry

FORMATS = ("csv", "json")


@dataclass(frozen=True)
class Column:
    name: str
    kind: str = "str"  # str | int | bool | pct | pvalue | measure | float


@dataclass(frozen=True)
class Table:
    name: str
    columns: tuple[Column, ...]
    rows: tuple[tuple, ...]
    decimals: tuple[int, ...] | None = None  # per-row precision for "measure" columns

    @property
    def header(self) -> list[str]:
        return [c.name for c in self.columns]


def _fixed(x: float, places: int) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    text = f"{x:.{places}f}"
    if text.startswith("-") and not text.strip("-0."):
        text = text[1:]
    return text


def format_value(value, kind: str, decimals: int = 1) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    if kind == "str":
        return str(value)
    if kind == "int":
        return str(int(value))
    if kind == "bool":
        return "true" if value else "false"
    if kind == "pct":
        return _fixed(value, 1)
    if kind == "pvalue":
        return _fixed(value, 4)
    if kind == "measure":
        return _fixed(value, decimals)
    if kind == "float":
        return _fixed(value, 4)
    raise ValueError(f"unknown column kind {kind!r}")


def display_rows(table: Table) -> list[list[str]]:
    out = []
    for i, row in enumerate(table.rows):
        d = table.decimals[i] if table.decimals else 1
        out.append([format_value(v, c.kind, d) for v, c in zip(row, table.columns)])
    return out


def _json_raw(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None if math.isnan(value) else ("inf" if value > 0 else "-inf")
    return value


def table_document(table: Table) -> dict:
    return {
        "table": table.name,
        "columns": table.header,
        "rows": [[_json_raw(v) for v in row] for row in table.rows],
        "display": display_rows(table),
    }


def dumps_json(document: dict) -> str:
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def render(table: Table, fmt: str) -> bytes:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(table.header)
        writer.writerows(display_rows(table))
        return buf.getvalue().encode("utf-8")
    if fmt == "json":
        return dumps_json(table_document(table)).encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")


def emit_table(table: Table, fmt: str, destination: str | os.PathLike) -> bytes:
    """Write ``table`` to ``destination`` (a directory) and return the bytes."""
    data = render(table, fmt)
    path = Path(destination) / f"{table.name}.{fmt}"
    path.write_bytes(data)
    return data


# -- table builders ---------------------------------------------------------------

def _dec(registry: IndicatorRegistry, indicator: str) -> int:
    meta = registry.get(indicator)
    return meta.decimals if meta is not None else 1


def baseline_table(baseline: Baseline, registry: IndicatorRegistry) -> Table:
    rows = tuple(baseline.rows())
    return Table(
        "baseline",
        (Column("iso3"), Column("indicator_id"), Column("year", "int"), Column("value", "measure")),
        rows,
        tuple(_dec(registry, r[1]) + 2 for r in rows),
    )


def dropped_table(dropped: Sequence[tuple[str, str, int]]) -> Table:
    return Table("baseline_dropped", (Column("iso3"), Column("indicator_id"), Column("year", "int")),
                 tuple(dropped))


def vintage_table(baseline: Baseline) -> Table:
    return Table("vintage_summary", (Column("band"), Column("fraction", "float")),
                 tuple(baseline.vintage_summary))


def coverage_table(matrix: CoverageMatrix) -> Table:
    return Table("coverage", (Column("iso3"), Column("indicator_id"), Column("count", "int")),
                 tuple((c, i, n) for (c, i), n in matrix.counts.items()))


def means_table(means: GroupMeansTable, registry: IndicatorRegistry, name: str) -> Table:
    cols = (Column("indicator_id"), Column("cell"), Column("n", "int"), Column("weighted_mean", "measure"),
            Column("weighted_sd", "measure"), Column("min", "measure"), Column("p25", "measure"),
            Column("median", "measure"), Column("p75", "measure"), Column("max", "measure"))
    rows, decs = [], []
    for r in means.rows:
        q = r.quantiles or (None,) * 5
        rows.append((r.indicator, "Global", r.n_weighted, r.global_mean, r.global_sd, *q))
        for c in r.cells:
            rows.append((r.indicator, means.scheme.label(c.cell), c.n, c.mean, None, None, None, None, None, None))
        decs.extend([_dec(registry, r.indicator)] * (1 + len(r.cells)))
    return Table(name, cols, tuple(rows), tuple(decs))


def deviations_table(dev: DeviationTable, registry: IndicatorRegistry, name: str) -> Table:
    cols = (Column("indicator_id"), Column("direction"), Column("global_mean", "measure"),
            Column("small_denominator", "bool"), Column("cell"), Column("n", "int"),
            Column("coefficient", "measure"), Column("percent", "pct"), Column("se", "float"),
            Column("p_value", "pvalue"), Column("star"))
    rows, decs = [], []
    for r in dev.rows:
        for c in r.cells:
            rows.append((r.indicator, r.direction.value, r.global_mean, r.small_denominator,
                         dev.scheme.label(c.cell), c.n, c.coefficient, c.percent, c.se, c.p_value, c.star))
            decs.append(_dec(registry, r.indicator))
    return Table(name, cols, tuple(rows), tuple(decs))


def ftest_table(dev: DeviationTable, name: str) -> Table:
    cols = (Column("indicator_id"), Column("status"), Column("statistic", "float"), Column("df_num", "int"),
            Column("df_den", "int"), Column("p_value", "pvalue"), Column("joint"))
    rows = []
    for r in dev.rows:
        f = r.ftest
        joint = "--" if f.status is FStatus.INSUFFICIENT else f.star
        rows.append((r.indicator, f.status.value, f.statistic, f.df_num, f.df_den, f.p_value, joint))
    return Table(name, cols, tuple(rows))


def distances_table(dist: DistanceTable, name: str) -> Table:
    cols = (Column("indicator_id"), Column("direction"), Column("cell"), Column("distance", "float"))
    rows = tuple(
        (r.indicator, r.direction.value, dist.scheme.label(cell), d) for r in dist.rows for cell, d in r.cells
    )
    return Table(name, cols, rows)


def gdp_points_table(rel: GdpRelation, registry: IndicatorRegistry) -> Table:
    cols = (Column("indicator_id"), Column("iso3"), Column("cell"), Column("gdp_per_capita", "measure"),
            Column("value", "measure"), Column("normalized", "float"), Column("display", "bool"))
    rows = tuple((p.indicator, p.country, p.cell, p.gdp_per_capita, p.value, p.normalized, p.display)
                 for p in rel.points)
    return Table("gdp_points", cols, rows, tuple(_dec(registry, r[0]) + 2 for r in rows))


def gdp_curves_table(rel: GdpRelation) -> Table:
    cols = (Column("indicator_id"), Column("cell"), Column("iso3"), Column("gdp_per_capita", "float"),
            Column("fitted", "float"))
    rows = tuple((c.indicator, c.cell, c.country, c.gdp_per_capita, c.fitted) for c in rel.curves)
    return Table("gdp_curves", cols, rows)


def resilience_table(snap: ResilienceSnapshot | None, fields: Sequence[str]) -> Table:
    cols = [Column("iso3"), Column("exposure_years", "int"), Column("exposure_top3", "float")]
    for f in fields:
        cols += [Column(f, "float"), Column(f"{f}_size", "float"), Column(f"{f}_color", "float")]
    rows = []
    if snap is not None:
        for r in snap.rows:
            row = [r.country, r.exposure_years, r.exposure_top3]
            for v, s, c in zip(r.values, r.size, r.color):
                row += [v, s, c]
            rows.append(tuple(row))
    return Table("resilience", tuple(cols), tuple(rows))
