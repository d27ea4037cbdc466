"""CSV ingestion and the dataset carrier used by the report commands."""
from __future__ import annotations

import csv
import datetime as dt
import hashlib
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np

from .errors import InputError, InsufficientDataError
from .series import ReturnSeries, TradingCalendar, align_series, returns_from_prices


def ingest_csv(path, kind: Literal["returns", "prices"] = "returns") -> list[ReturnSeries]:
    """Read a wide CSV: a ``date`` column of ISO dates, then one numeric column per series.

    Return files hold decimal fractions (0.01 == 1%); price files hold positive prices
    and yield one fewer observation per series.
    """
    if kind not in ("returns", "prices"):
        raise InputError(f"unknown file kind {kind!r} (expected 'returns' or 'prices')")
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    if not rows:
        raise InputError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if header[0].lower() != "date":
        raise InputError(f"{path}: first header cell must be 'date', got {header[0]!r}")
    names = header[1:]
    if not names:
        raise InputError(f"{path}: no data columns")
    if len(set(names)) != len(names) or any(not n for n in names):
        raise InputError(f"{path}: column names must be unique and non-empty")

    dates: list[dt.date] = []
    values = np.empty((len(rows) - 1, len(names)))
    seen: set[dt.date] = set()
    for i, row in enumerate(rows[1:]):
        lineno = i + 2
        if len(row) != len(header):
            raise InputError(f"{path}: row {lineno} has {len(row)} cells, expected {len(header)}")
        try:
            d = dt.date.fromisoformat(row[0].strip())
        except ValueError:
            raise InputError(f"{path}: row {lineno}, column 'date': bad ISO date {row[0]!r}") from None
        if d in seen:
            raise InputError(f"{path}: duplicate date {d.isoformat()} (row {lineno})")
        seen.add(d)
        dates.append(d)
        for j, cell in enumerate(row[1:]):
            try:
                v = float(cell)
            except ValueError:
                v = math.nan
            if not math.isfinite(v):
                raise InputError(f"{path}: row {lineno}, column {names[j]!r}: non-numeric cell {cell!r}")
            values[i, j] = v

    order = np.argsort(np.array([d.toordinal() for d in dates], dtype=np.int64), kind="stable")
    dates = [dates[i] for i in order]
    values = values[order]
    out = []
    for j, name in enumerate(names):
        try:
            if kind == "prices":
                out.append(returns_from_prices(values[:, j], dates, name))
            else:
                out.append(ReturnSeries(name, TradingCalendar(dates), values[:, j]))
        except InputError as exc:
            raise InputError(f"{path}: column {name!r}: {exc}") from None
    return out


def _series_bytes(s: ReturnSeries) -> bytes:
    return (s.name + "|" + ",".join(d.isoformat() for d in s.calendar) + "|").encode() + \
        np.ascontiguousarray(s.returns, dtype="<f8").tobytes()


@dataclass(frozen=True, eq=False)
class Dataset:
    """All inputs of a run, restricted to one common calendar."""

    competitors: tuple[ReturnSeries, ...] = ()
    benchmarks: tuple[ReturnSeries, ...] = ()
    universe: tuple[ReturnSeries, ...] = ()
    risk_free: ReturnSeries | None = None
    calendar: TradingCalendar = field(default_factory=TradingCalendar)

    @classmethod
    def build(cls, competitors=(), benchmarks=(), universe=(), risk_free=None) -> "Dataset":
        groups = [list(competitors), list(benchmarks), list(universe)]
        everything = [s for g in groups for s in g] + ([risk_free] if risk_free is not None else [])
        if not everything:
            raise InsufficientDataError("dataset is empty: supply at least one input file")
        aligned = align_series(everything)
        cuts = np.cumsum([len(g) for g in groups])
        comp, bench, univ = aligned[:cuts[0]], aligned[cuts[0]:cuts[1]], aligned[cuts[1]:cuts[2]]
        rf = aligned[cuts[2]] if risk_free is not None else None
        return cls(tuple(comp), tuple(bench), tuple(univ), rf, aligned[0].calendar)

    @classmethod
    def load(cls, competitors=None, benchmarks=None, universe=None, risk_free=None,
             kind: str = "returns", universe_kind: str | None = None) -> "Dataset":
        def read(p, k):
            return ingest_csv(p, k) if p else []

        rf = read(risk_free, "returns")
        if len(rf) > 1:
            raise InputError(f"{risk_free}: risk-free file must hold exactly one series")
        return cls.build(read(competitors, kind), read(benchmarks, kind),
                         read(universe, universe_kind or kind), rf[0] if rf else None)

    def digest(self) -> str:
        h = hashlib.sha256()
        for label, group in (("competitors", self.competitors), ("benchmarks", self.benchmarks),
                             ("universe", self.universe)):
            h.update(label.encode())
            for s in group:
                h.update(_series_bytes(s))
        if self.risk_free is not None:
            h.update(b"risk_free" + _series_bytes(self.risk_free))
        return h.hexdigest()
