"""Command-line entry point.

    fundbench <command> --competitors c.csv --benchmarks b.csv --universe u.csv [options]

Settings come from built-in defaults, then an optional ``--config`` key=value file,
then command-line flags.
"""
from __future__ import annotations

import argparse
import dataclasses
import datetime as dt
import logging
import sys
from pathlib import Path

from .errors import FundbenchError, InputError
from .ingest import Dataset
from .report import COMMANDS, RunConfig, run_report

log = logging.getLogger("fundbench")

_LIST_FIELDS = {"factors": str, "rebalance_dates": dt.date.fromisoformat, "quantiles": float}


def _coerce(key: str, raw: str):
    fields = {f.name: f for f in dataclasses.fields(RunConfig)}
    if key not in fields:
        raise InputError(f"unknown config key {key!r}")
    raw = raw.strip()
    try:
        if key in _LIST_FIELDS:
            return tuple(_LIST_FIELDS[key](x.strip()) for x in raw.split(",") if x.strip())
        default = fields[key].default
        if isinstance(default, bool):
            return raw.lower() in ("1", "true", "yes", "on")
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
        return raw
    except ValueError:
        raise InputError(f"bad value for {key}: {raw!r}") from None


def read_config(path) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment, dashes in keys read as underscores."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else ":" if ":" in line else None
        if sep is None:
            raise InputError(f"{path}:{lineno}: expected key = value")
        key, value = line.split(sep, 1)
        key = key.strip().replace("-", "_")
        out[key] = _coerce(key, value)
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fundbench", description="Portfolio benchmarking reports over daily returns.")
    p.add_argument("command", choices=(*COMMANDS, "all"))
    data = p.add_argument_group("inputs")
    data.add_argument("--competitors", help="CSV of competitor series")
    data.add_argument("--benchmarks", help="CSV of benchmark series (used as factors by `alpha`)")
    data.add_argument("--universe", help="CSV of investable assets (used by `simulate`)")
    data.add_argument("--risk-free", help="CSV holding one daily risk-free return series")
    data.add_argument("--kind", choices=("returns", "prices"), default="returns", help="content of the input CSVs")
    data.add_argument("--universe-kind", choices=("returns", "prices"), help="override --kind for the universe file")
    p.add_argument("--config", help="key = value settings file")

    o = p.add_argument_group("settings (override the config file)")
    o.add_argument("--n-star", type=int, help="periods per year for annualization (252)")
    o.add_argument("--sd-mode", choices=("sample", "population"))
    o.add_argument("--alpha-days", type=int, help="days used to annualize alphas (238 or 252)")
    o.add_argument("--mgmt", type=float, help="annual management fee rate")
    o.add_argument("--perf", type=float, help="performance fee rate on new high-water marks")
    o.add_argument("--hwm-mode", choices=("pre_perf", "net"))
    o.add_argument("--sims", type=int, help="number of random portfolios")
    o.add_argument("--seed", type=int, help="master seed of the simulation")
    o.add_argument("--k", type=int, help="assets per random portfolio and competitors per FoF team")
    o.add_argument("--mc-mode", choices=("buy_and_hold", "daily"))
    o.add_argument("--bh-level", type=float, help="false discovery level")
    o.add_argument("--bh-mode", choices=("stepup", "literal"))
    o.add_argument("--factors", help="comma-separated benchmark names to use as factors")
    o.add_argument("--rebalance-dates", help="comma-separated ISO dates")
    o.add_argument("--hist-width", type=float)
    o.add_argument("--workers", type=int)
    o.add_argument("--format", choices=("csv", "json"))
    o.add_argument("--out-dir")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = read_config(args.config) if args.config else {}
    for f in dataclasses.fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is None:
            continue
        values[f.name] = _coerce(f.name, v) if isinstance(v, str) and f.name in _LIST_FIELDS else v
    return RunConfig(**values)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = config_from_args(args)
        data = Dataset.load(args.competitors, args.benchmarks, args.universe, args.risk_free,
                            args.kind, args.universe_kind)
        log.info("calendar: %d days, %s .. %s", len(data.calendar), data.calendar[0], data.calendar[-1])
        paths = run_report(data, cfg, args.command)
    except FundbenchError as exc:
        print(f"fundbench: error: {exc}", file=sys.stderr)
        return exc.exit_code
    for path in paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
