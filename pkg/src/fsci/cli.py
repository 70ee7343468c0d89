"""Command-line front end.

    fsci all --config run.cfg --out bundle/
    fsci deviations --fixture --group income --format json --out dev/
    fsci fetch https://example.org/data.csv
"""
from __future__ import annotations

import argparse
import datetime as dt
import logging
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .config import GROUPINGS, RunConfig, load_config
from .errors import FetchError, ValidationError
from .ingestion import fetch_source
from .pipeline import ANALYSES, EXIT_VALIDATION, run_pipeline
from .report import FORMATS

SUBCOMMANDS = (*ANALYSES, "all")


def fixture_dir() -> Path:
    return Path(str(resources.files("fsci") / "fixtures"))


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value settings file")
    p.add_argument("--fixture", action="store_true", help="run on the bundled synthetic fixture")
    p.add_argument("--codebook")
    p.add_argument("--countries")
    p.add_argument("--observations")
    p.add_argument("--out", dest="output", help="output bundle directory")
    p.add_argument("--group", choices=GROUPINGS, action="append", dest="groupings",
                   help="grouping scheme (repeatable; default both)")
    p.add_argument("--format", choices=FORMATS, action="append", dest="formats",
                   help="output format (repeatable; default csv)")
    p.add_argument("--min-year", type=int, dest="min_year")
    p.add_argument("--coverage-start", type=int, dest="coverage_start")
    p.add_argument("--coverage-end", type=int, dest="coverage_end")
    p.add_argument("--loess-span", type=float, dest="loess_span")
    p.add_argument("--loess-degree", type=int, choices=(1, 2), dest="loess_degree")
    p.add_argument("--threads", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fsci", description="Food-systems indicator baseline engine")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        _add_run_options(sub.add_parser(name, help=f"run the {name} analysis" if name != "all" else "run everything"))
    fetch = sub.add_parser("fetch", help="download a source file into the local cache")
    fetch.add_argument("url")
    fetch.add_argument("--cache-dir", help="defaults to $FSCI_CACHE_DIR")
    fetch.add_argument("--max-age-hours", type=float, default=24.0)
    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    if args.fixture:
        config = load_config(fixture_dir() / "fixture.cfg")
    elif args.config:
        config = load_config(args.config)
    else:
        config = RunConfig()
    return config.merged(
        codebook=args.codebook,
        countries=args.countries,
        observations=args.observations,
        output=args.output,
        groupings=args.groupings,
        formats=args.formats,
        min_year=args.min_year,
        coverage_start=args.coverage_start,
        coverage_end=args.coverage_end,
        loess_span=args.loess_span,
        loess_degree=args.loess_degree,
        threads=args.threads,
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "fetch":
        try:
            path = fetch_source(args.url, args.cache_dir, dt.timedelta(hours=args.max_age_hours))
        except FetchError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        print(path)
        return 0
    try:
        config = _run_config(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    analyses = ANALYSES if args.command == "all" else (args.command,)
    return run_pipeline(config, analyses)


if __name__ == "__main__":
    sys.exit(main())
