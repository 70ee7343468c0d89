"""End-to-end run: load, validate, analyse, and swap a finished bundle into place."""
from __future__ import annotations

import hashlib
import json
import logging
import os
import shutil
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__, report
from .analysis import (
    ResilienceFields,
    deviation_table,
    gdp_relation_dataset,
    group_weighted_means,
    normalized_distance_table,
    resilience_snapshot,
)
from .baseline import build_baseline, coverage_matrix
from .config import RunConfig
from .errors import AnalysisError, EmptySubset, ValidationError
from .ingestion import load_codebook, load_countries, load_panel
from .model import SCHEMES

log = logging.getLogger(__name__)

ANALYSES = ("baseline", "coverage", "means", "deviations", "gdp-relation", "resilience")
EXIT_OK, EXIT_VALIDATION, EXIT_ANALYSIS = 0, 2, 3


@dataclass
class Bundle:
    tables: list[report.Table] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)


def sha256_file(path: str | os.PathLike) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _swap_into_place(staging: Path, output: Path) -> None:
    """Replace ``output`` with ``staging`` using renames only."""
    if output.exists():
        trash = Path(tempfile.mkdtemp(prefix=f".{output.name}.old-", dir=output.parent))
        os.rename(output, trash / "bundle")
        os.rename(staging, output)
        shutil.rmtree(trash)
    else:
        os.rename(staging, output)


def _staging_dir(output: Path) -> Path:
    output.parent.mkdir(parents=True, exist_ok=True)
    return Path(tempfile.mkdtemp(prefix=f".{output.name}.tmp-", dir=output.parent))


def _write_error_log(output: Path, lines: list[str]) -> None:
    staging = _staging_dir(output)
    (staging / "errors.log").write_text("".join(f"{line}\n" for line in lines), encoding="utf-8")
    _swap_into_place(staging, output)


def build_bundle(config: RunConfig, analyses: tuple[str, ...] = ANALYSES) -> Bundle:
    """Compute every requested table. Raises on validation or analysis errors."""
    registry = load_codebook(config.codebook)
    countries = load_countries(config.countries)
    panel, vreport = load_panel(config.observations, registry, countries)
    if not vreport.ok:
        raise PanelErrors(vreport)
    bundle = Bundle()
    bundle.notes.extend(f"validation: {w}" for w in vreport.warnings)
    bundle.notes.append(f"validation: {vreport.rows_accepted} rows accepted, {vreport.rows_rejected} rejected")

    baseline, dropped = build_baseline(panel, config.min_year)
    if "baseline" in analyses:
        bundle.tables += [report.baseline_table(baseline, registry), report.dropped_table(dropped),
                          report.vintage_table(baseline)]
    if "coverage" in analyses:
        bundle.tables.append(report.coverage_table(
            coverage_matrix(panel, config.coverage_start, config.coverage_end)))

    for gname in config.groupings:
        scheme = SCHEMES[gname]
        if "means" in analyses:
            means = group_weighted_means(baseline, scheme, registry, panel, config.threads)
            dist = normalized_distance_table(means, registry)
            bundle.tables += [report.means_table(means, registry, f"means_{gname}"),
                              report.distances_table(dist, f"distances_{gname}")]
            bundle.notes.extend(f"means_{gname}: {n}" for n in (*means.warnings, *dist.warnings))
        if "deviations" in analyses:
            dev = deviation_table(baseline, scheme, registry, panel, config.threads)
            bundle.tables += [report.deviations_table(dev, registry, f"deviations_{gname}"),
                              report.ftest_table(dev, f"ftest_{gname}")]
            bundle.notes.extend(f"deviations_{gname}: {n}" for n in dev.warnings)

    if "gdp-relation" in analyses:
        rel = gdp_relation_dataset(baseline, registry, panel, span=config.loess_span,
                                   degree=config.loess_degree, threads=config.threads)
        bundle.tables += [report.gdp_points_table(rel, registry), report.gdp_curves_table(rel)]
        bundle.notes.extend(f"gdp-relation: {n}" for n in rel.warnings)

    if "resilience" in analyses:
        fields_ = ResilienceFields()
        snap = None
        if all(f in registry for f in fields_.all()):
            try:
                snap = resilience_snapshot(
                    panel, (config.resilience_start, config.resilience_end), fields_,
                    config.resilience_min_years, baseline,
                )
                bundle.notes.extend(f"resilience: {n}" for n in snap.warnings)
            except EmptySubset as exc:
                bundle.notes.append(f"resilience: {exc}")
        else:
            bundle.notes.append("resilience: codebook lacks one or more resilience fields; table left empty")
        bundle.tables.append(report.resilience_table(snap, fields_.all()))
    return bundle


class PanelErrors(ValidationError):
    def __init__(self, vreport):
        self.report = vreport
        super().__init__(f"{len(vreport.errors)} validation error(s) in observations")


def write_bundle(bundle: Bundle, config: RunConfig) -> Path:
    output = Path(config.output)
    staging = _staging_dir(output)
    try:
        files = {}
        for table in bundle.tables:
            for fmt in config.formats:
                data = report.emit_table(table, fmt, staging)
                files[f"{table.name}.{fmt}"] = hashlib.sha256(data).hexdigest()
        notes = "".join(f"{n}\n" for n in bundle.notes).encode("utf-8")
        (staging / "warnings.log").write_bytes(notes)
        files["warnings.log"] = hashlib.sha256(notes).hexdigest()
        manifest = {
            "version": __version__,
            "settings": config.settings(),
            "inputs": {
                Path(p).name: sha256_file(p) for p in (config.codebook, config.countries, config.observations)
            },
            "files": dict(sorted(files.items())),
        }
        (staging / "manifest.json").write_text(report.dumps_json(manifest), encoding="utf-8")
        _swap_into_place(staging, output)
    except BaseException:
        shutil.rmtree(staging, ignore_errors=True)
        raise
    return output


def run_pipeline(config: RunConfig, analyses: tuple[str, ...] = ANALYSES) -> int:
    """Run the requested analyses and write the bundle; returns the exit code.

    0 on success, 2 on configuration or input validation errors, 3 on
    analysis errors. Failures leave only ``errors.log`` in the output folder.
    """
    try:
        config = config.validate()
        bundle = build_bundle(config, analyses)
    except PanelErrors as exc:
        log.error("%s", exc)
        _write_error_log(Path(config.output), [str(e) for e in exc.report.errors])
        return EXIT_VALIDATION
    except ValidationError as exc:
        log.error("%s", exc)
        if config.output is not None:
            _write_error_log(Path(config.output), [f"{type(exc).__name__}: {exc}"])
        return EXIT_VALIDATION
    except AnalysisError as exc:
        log.error("%s", exc)
        _write_error_log(Path(config.output), [f"{type(exc).__name__}: {exc}"])
        return EXIT_ANALYSIS
    out = write_bundle(bundle, config)
    log.info("wrote %d tables to %s", len(bundle.tables), out)
    return EXIT_OK


def manifest_of(path: str | os.PathLike) -> dict:
    return json.loads((Path(path) / "manifest.json").read_text(encoding="utf-8"))
