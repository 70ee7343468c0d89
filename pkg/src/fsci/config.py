"""Run configuration: a flat ``key = value`` file overridden by CLI flags."""
from __future__ import annotations

import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .errors import ConfigError
from .report import FORMATS

GROUPINGS = ("region", "income")

_INT_KEYS = {"min_year", "coverage_start", "coverage_end", "loess_degree", "threads",
             "resilience_start", "resilience_end", "resilience_min_years"}
_FLOAT_KEYS = {"loess_span"}
_PATH_KEYS = ("codebook", "countries", "observations", "output")
_LIST_KEYS = {"groupings", "formats"}


@dataclass(frozen=True)
class RunConfig:
    codebook: Path | None = None
    countries: Path | None = None
    observations: Path | None = None
    output: Path | None = None
    min_year: int = 2000
    coverage_start: int = 2000
    coverage_end: int = 2021
    groupings: tuple[str, ...] = GROUPINGS
    loess_span: float = 0.75
    loess_degree: int = 2
    formats: tuple[str, ...] = ("csv",)
    threads: int = 1
    resilience_start: int = 2012
    resilience_end: int = 2021
    resilience_min_years: int = 7

    def settings(self) -> dict:
        """Analysis settings recorded in the manifest (no paths, no thread count)."""
        d = asdict(self)
        for key in (*_PATH_KEYS, "threads"):
            d.pop(key)
        d["groupings"] = list(self.groupings)
        d["formats"] = list(self.formats)
        return d

    def validate(self) -> RunConfig:
        for key in ("codebook", "countries", "observations"):
            path = getattr(self, key)
            if path is None:
                raise ConfigError(f"missing required setting {key!r}")
            if not Path(path).is_file():
                raise ConfigError(f"{key} file not found: {path}")
        if self.output is None:
            raise ConfigError("missing required setting 'output'")
        if self.coverage_start > self.coverage_end:
            raise ConfigError("coverage_start is after coverage_end")
        if self.resilience_start > self.resilience_end:
            raise ConfigError("resilience_start is after resilience_end")
        if not 0 < self.loess_span <= 1:
            raise ConfigError("loess_span must lie in (0, 1]")
        if self.loess_degree not in (1, 2):
            raise ConfigError("loess_degree must be 1 or 2")
        if self.threads < 1:
            raise ConfigError("threads must be at least 1")
        if not 1960 <= self.min_year <= 2100:
            raise ConfigError("min_year out of range")
        bad = [g for g in self.groupings if g not in GROUPINGS]
        if bad or not self.groupings:
            raise ConfigError(f"groupings must be drawn from {GROUPINGS}")
        bad = [f for f in self.formats if f not in FORMATS]
        if bad or not self.formats:
            raise ConfigError(f"formats must be drawn from {FORMATS}")
        return self

    def merged(self, **overrides) -> RunConfig:
        """Copy with every non-``None`` override applied."""
        return replace(self, **{k: _coerce(k, v) for k, v in overrides.items() if v is not None})


def _coerce(key: str, value):
    if key in _PATH_KEYS:
        return Path(value)
    if key in _LIST_KEYS:
        if isinstance(value, str):
            value = [v.strip() for v in value.split(",") if v.strip()]
        return tuple(value)
    try:
        if key in _INT_KEYS:
            return int(value)
        if key in _FLOAT_KEYS:
            return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"bad value for {key}: {value!r}") from None
    return value


def parse_config(text: str, base_dir: str | os.PathLike = ".") -> RunConfig:
    """Parse ``key = value`` lines; ``#`` starts a comment line.

    Relative paths resolve against ``base_dir`` (the config file's folder).
    """
    known = {f.name for f in fields(RunConfig)}
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep:
            raise ConfigError(f"line {lineno}: expected key = value")
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in _PATH_KEYS:
            p = Path(value)
            value = p if p.is_absolute() else Path(base_dir) / p
        values[key] = _coerce(key, value)
    return RunConfig(**values)


def load_config(path: str | os.PathLike) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    return parse_config(path.read_text(encoding="utf-8"), path.parent)
