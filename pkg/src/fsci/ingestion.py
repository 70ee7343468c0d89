"""Codebook, country-table and long-panel loaders plus a cached HTTP fetcher."""
from __future__ import annotations

import csv
import datetime as dt
import hashlib
import io
import logging
import math
import os
import tempfile
import urllib.error
import urllib.request
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import BinaryIO

from . import errors
from .model import (
    MIN_PANEL_YEAR,
    THEMES,
    WEIGHT_KEYS,
    CountryMeta,
    CountryTable,
    Direction,
    IndicatorMeta,
    IndicatorRegistry,
    Observation,
    Panel,
)

log = logging.getLogger(__name__)

CODEBOOK_HEADER = ("indicator_id", "name", "unit", "theme", "domain", "direction", "weight_key", "value_added")
COUNTRY_HEADER = ("iso3", "name", "region", "income_group", "un_member")
PANEL_HEADER = ("iso3", "indicator_id", "year", "value")
TERRITORY_THRESHOLD = 0.8

_TRUE = {"true", "1", "yes", "y"}
_FALSE = {"false", "0", "no", "n", ""}


@dataclass(frozen=True)
class Issue:
    row: int
    rule: str
    message: str

    def __str__(self):
        where = f"row {self.row}: " if self.row else ""
        return f"{where}[{self.rule}] {self.message}"


@dataclass
class ValidationReport:
    errors: list[Issue] = field(default_factory=list)
    warnings: list[Issue] = field(default_factory=list)
    rows_accepted: int = 0
    rows_rejected: int = 0

    @property
    def ok(self) -> bool:
        return not self.errors

    def raise_for_errors(self) -> None:
        """Raise the first error as its named exception class."""
        if self.errors:
            first = self.errors[0]
            exc_type = getattr(errors, first.rule, errors.ValidationError)
            raise exc_type(first.message, row=first.row)


def _text(source: BinaryIO | bytes | str | os.PathLike) -> str:
    if isinstance(source, bytes):
        data = source
    elif isinstance(source, (str, os.PathLike)):
        data = Path(source).read_bytes()
    else:
        data = source.read()
    if data.startswith(b"\xef\xbb\xbf"):
        data = data[3:]
    return data.decode("utf-8")


def _rows(text: str, expected: tuple[str, ...], rename: Mapping[str, str] | None = None,
          optional: tuple[str, ...] = ()):
    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        header = next(reader)
    except StopIteration:
        raise errors.BadHeader("file is empty; header row required", row=1) from None
    header = [h.strip() for h in header]
    if rename:
        header = [rename.get(h, h) for h in header]
    required = [h for h in header if h not in optional]
    if tuple(required) != expected:
        raise errors.BadHeader(f"expected header {','.join(expected)}, got {','.join(header)}", row=1)
    for lineno, raw in enumerate(reader, start=2):
        if not raw or all(not c.strip() for c in raw):
            continue
        yield lineno, raw, header


def _parse_bool(text: str, row: int) -> bool:
    t = text.strip().lower()
    if t in _TRUE:
        return True
    if t in _FALSE:
        return False
    raise errors.ValidationError(f"not a boolean: {text!r}", row=row)


def load_codebook(source) -> IndicatorRegistry:
    """Parse the indicator codebook CSV.

    An optional trailing ``decimals`` column sets the display precision of
    group means (default 1).
    """
    metas: list[IndicatorMeta] = []
    seen: set[str] = set()
    for row, raw, header in _rows(_text(source), CODEBOOK_HEADER, optional=("decimals",)):
        if len(raw) != len(header):
            raise errors.ValidationError(f"expected {len(header)} fields, got {len(raw)}", row=row)
        rec = dict(zip(header, (c.strip() for c in raw)))
        ind = rec["indicator_id"]
        if not ind:
            raise errors.ValidationError("empty indicator_id", row=row)
        if ind in seen:
            raise errors.DuplicateIndicatorId(f"duplicate indicator id {ind!r}", row=row)
        seen.add(ind)
        try:
            direction = Direction(rec["direction"].lower())
        except ValueError:
            raise errors.UnknownDirection(f"unknown direction {rec['direction']!r}", row=row) from None
        if rec["weight_key"] not in WEIGHT_KEYS:
            raise errors.UnknownWeightKey(f"unknown weight key {rec['weight_key']!r}", row=row)
        if rec["theme"] not in THEMES:
            raise errors.UnknownTheme(f"unknown theme {rec['theme']!r}", row=row)
        decimals = 1
        if rec.get("decimals"):
            try:
                decimals = int(rec["decimals"])
            except ValueError:
                raise errors.ValidationError(f"bad decimals {rec['decimals']!r}", row=row) from None
        metas.append(IndicatorMeta(
            id=ind,
            name=rec["name"],
            unit=rec["unit"],
            theme=rec["theme"],
            domain=rec["domain"],
            direction=direction,
            weight_key=rec["weight_key"],
            value_added=_parse_bool(rec["value_added"], row),
            decimals=decimals,
        ))
    try:
        return IndicatorRegistry(metas)
    except errors.DuplicateIndicatorId as exc:
        raise errors.DuplicateIndicatorId(str(exc)) from None


def load_countries(source) -> CountryTable:
    """Parse the country table CSV ``iso3,name,region,income_group,un_member``."""
    out = []
    for row, raw, header in _rows(_text(source), COUNTRY_HEADER):
        if len(raw) != len(header):
            raise errors.ValidationError(f"expected {len(header)} fields, got {len(raw)}", row=row)
        rec = dict(zip(header, (c.strip() for c in raw)))
        try:
            out.append(CountryMeta(
                country=rec["iso3"],
                name=rec["name"],
                region=rec["region"],
                income_group=rec["income_group"],
                un_member=_parse_bool(rec["un_member"], row),
            ))
        except errors.InvalidCountry as exc:
            raise errors.InvalidCountry(str(exc), row=row) from None
    try:
        return CountryTable(out)
    except errors.InvalidCountry as exc:
        raise errors.InvalidCountry(str(exc)) from None


def load_column_map(source) -> dict[str, str]:
    """Read a ``from,to`` header-renaming file."""
    mapping = {}
    for row, raw, _ in _rows(_text(source), ("from", "to")):
        if len(raw) != 2:
            raise errors.ValidationError("column map rows need exactly two fields", row=row)
        mapping[raw[0].strip()] = raw[1].strip()
    return mapping


def territory_filter(
    draft: Iterable[Observation],
    registry: IndicatorRegistry,
    countries: CountryTable,
    threshold: float = TERRITORY_THRESHOLD,
) -> set[str]:
    """Non-member territories covering at least ``threshold`` of the codebook.

    Coverage counts distinct codebook indicator ids with any observation;
    reserved auxiliary series do not count. An empty codebook retains nothing.
    """
    total = len(registry)
    if total == 0:
        return set()
    covered: dict[str, set[str]] = {}
    for obs in draft:
        meta = countries.get(obs.country)
        if meta is None or meta.un_member or obs.indicator not in registry:
            continue
        covered.setdefault(obs.country, set()).add(obs.indicator)
    # exact rational comparison keeps the boundary inclusive (40 of 50 passes)
    cutoff = Fraction(str(threshold)) * total
    return {c for c, ids in covered.items() if len(ids) >= cutoff}


def load_panel(
    source,
    registry: IndicatorRegistry,
    countries: CountryTable,
    column_map: Mapping[str, str] | None = None,
) -> tuple[Panel, ValidationReport]:
    """Parse and validate a long-format observation file.

    Rows before 1960 are rejected with a warning; rows for non-member
    territories are kept only if the territory passes :func:`territory_filter`.
    Unparseable values, unknown ids and duplicate cells are errors. The
    returned panel holds the accepted rows.
    """
    report = ValidationReport()
    text = _text(source)
    candidates: list[tuple[int, Observation]] = []
    seen: dict[tuple[str, str, int], int] = {}
    total_rows = 0
    for row, raw, header in _rows(text, PANEL_HEADER, rename=column_map):
        total_rows += 1
        if len(raw) != len(header):
            report.errors.append(Issue(row, "UnparseableValue", f"expected {len(header)} fields, got {len(raw)}"))
            continue
        rec = dict(zip(header, (c.strip() for c in raw)))
        iso, ind = rec["iso3"], rec["indicator_id"]
        try:
            year = int(rec["year"])
        except ValueError:
            report.errors.append(Issue(row, "UnparseableValue", f"bad year {rec['year']!r}"))
            continue
        try:
            value = float(rec["value"])
        except ValueError:
            value = math.nan
        if not math.isfinite(value) or not rec["value"]:
            report.errors.append(Issue(row, "UnparseableValue", f"bad value {rec['value']!r}"))
            continue
        if not registry.knows(ind):
            report.errors.append(Issue(row, "UnknownIndicator", f"unknown indicator {ind!r}"))
            continue
        if iso not in countries:
            report.errors.append(Issue(row, "UnknownCountry", f"unknown country {iso!r}"))
            continue
        if year < MIN_PANEL_YEAR:
            report.warnings.append(Issue(row, "pre-1960", f"{iso},{ind},{year} predates {MIN_PANEL_YEAR}"))
            continue
        key = (iso, ind, year)
        if key in seen:
            report.errors.append(Issue(row, "DuplicateCell", f"{iso},{ind},{year} already on row {seen[key]}"))
            continue
        seen[key] = row
        meta = registry.get(ind)
        if meta is not None and meta.is_binary and value not in (0.0, 1.0):
            report.warnings.append(Issue(row, "binary-range", f"{ind} is declared binary but has value {value!r}"))
        candidates.append((row, Observation(iso, ind, year, value)))

    retained = territory_filter((o for _, o in candidates), registry, countries)
    accepted = []
    dropped_territories: set[str] = set()
    for row, obs in candidates:
        if not countries[obs.country].un_member and obs.country not in retained:
            dropped_territories.add(obs.country)
            continue
        accepted.append(obs)
    for terr in sorted(dropped_territories):
        report.warnings.append(Issue(0, "territory", f"{terr} dropped: below {TERRITORY_THRESHOLD:.0%} indicator coverage"))

    report.rows_accepted = len(accepted)
    report.rows_rejected = total_rows - len(accepted)
    return Panel(accepted, registry, countries), report


# -- remote sources ---------------------------------------------------------

def _cache_paths(url: str, cache_dir: Path) -> tuple[Path, Path]:
    digest = hashlib.sha256(url.encode("utf-8")).hexdigest()
    return cache_dir / f"{digest}.csv", cache_dir / f"{digest}.meta"


def _read_meta(path: Path) -> dict[str, str]:
    meta = {}
    for line in path.read_text(encoding="utf-8").splitlines():
        key, _, val = line.partition("=")
        meta[key] = val
    return meta


def default_cache_dir() -> Path:
    return Path(os.environ.get("FSCI_CACHE_DIR") or Path.home() / ".cache" / "fsci")


def fetch_source(
    url: str,
    cache_dir: str | os.PathLike | None = None,
    max_age: dt.timedelta = dt.timedelta(hours=24),
    *,
    now: dt.datetime | None = None,
    timeout: float = 60.0,
) -> Path:
    """Return a local copy of ``url``, downloading it if the cache is stale.

    The body lands in ``<cache_dir>/<sha256(url)>.csv`` via a temp file and
    rename; a sidecar ``.meta`` holds ``url``, ``fetched_at`` and ``sha256``
    as three ``key=value`` lines.
    """
    if not url.startswith(("http://", "https://")):
        raise errors.NetworkError(f"only http(s) URLs are supported: {url}")
    cache = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    now = now or dt.datetime.now(dt.timezone.utc)
    body_path, meta_path = _cache_paths(url, cache)
    if body_path.exists() and meta_path.exists():
        try:
            fetched = dt.datetime.strptime(_read_meta(meta_path)["fetched_at"], "%Y-%m-%dT%H:%M:%SZ")
            fetched = fetched.replace(tzinfo=dt.timezone.utc)
        except (KeyError, ValueError):
            fetched = None
        if fetched is not None and now - fetched < max_age:
            log.debug("cache hit for %s", url)
            return body_path

    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            body = resp.read()
    except urllib.error.HTTPError as exc:
        raise errors.HttpStatusError(exc.code, url) from None
    except (urllib.error.URLError, OSError) as exc:
        raise errors.NetworkError(f"{url}: {exc}") from exc

    digest = hashlib.sha256(body).hexdigest()
    meta = f"url={url}\nfetched_at={now.strftime('%Y-%m-%dT%H:%M:%SZ')}\nsha256={digest}\n"
    try:
        cache.mkdir(parents=True, exist_ok=True)
        for target, payload in ((body_path, body), (meta_path, meta.encode("utf-8"))):
            fd, tmp = tempfile.mkstemp(dir=cache, prefix=".fetch-")
            with os.fdopen(fd, "wb") as fh:
                fh.write(payload)
            os.replace(tmp, target)
    except OSError as exc:
        raise errors.CacheWriteError(f"cannot write cache in {cache}: {exc}") from exc
    log.info("fetched %s (%d bytes)", url, len(body))
    return body_path
