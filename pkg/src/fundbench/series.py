"""Dated return and NAV series, calendar alignment and cross-sectional bands."""
from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InputError

DEFAULT_CAPITAL = 100.0

# Submission dates of the competition; portfolios are re-drawn / teams re-selected on these.
COMPETITION_REBALANCE_DATES = tuple(
    dt.date.fromisoformat(d)
    for d in (
        "2022-03-06", "2022-04-03", "2022-05-01", "2022-05-29",
        "2022-06-26", "2022-07-24", "2022-08-21", "2022-09-18",
        "2022-10-16", "2022-11-13", "2022-12-11", "2023-01-08",
    )
)


def _as_date(d) -> dt.date:
    if isinstance(d, dt.datetime):
        return d.date()
    if isinstance(d, dt.date):
        return d
    if isinstance(d, np.datetime64):
        return dt.date.fromisoformat(str(d.astype("datetime64[D]")))
    return dt.date.fromisoformat(str(d))


def _frozen(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TradingCalendar:
    dates: tuple[dt.date, ...]

    def __init__(self, dates: Iterable = ()):
        ds = tuple(_as_date(d) for d in dates)
        for a, b in zip(ds, ds[1:]):
            if b <= a:
                kind = "duplicate" if a == b else "out-of-order"
                raise InputError(f"{kind} date in calendar: {b.isoformat()}")
        object.__setattr__(self, "dates", ds)

    def __len__(self) -> int:
        return len(self.dates)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return TradingCalendar(self.dates[i])
        return self.dates[i]

    def __iter__(self):
        return iter(self.dates)

    def index_of(self, d) -> int:
        d = _as_date(d)
        i = int(np.searchsorted(self._ordinals(), d.toordinal()))
        if i >= len(self) or self.dates[i] != d:
            raise KeyError(d)
        return i

    def first_after(self, d) -> int:
        """Index of the first trading day strictly after calendar date ``d``."""
        return int(np.searchsorted(self._ordinals(), _as_date(d).toordinal(), side="right"))

    def _ordinals(self) -> np.ndarray:
        return np.fromiter((d.toordinal() for d in self.dates), dtype=np.int64, count=len(self.dates))

    def intersect(self, other: "TradingCalendar") -> "TradingCalendar":
        keep = set(other.dates)
        return TradingCalendar(d for d in self.dates if d in keep)


@dataclass(frozen=True, eq=False)
class ReturnSeries:
    """Daily simple returns (0.01 == 1%) of one named entity."""

    name: str
    calendar: TradingCalendar
    returns: np.ndarray

    def __post_init__(self):
        r = _frozen(self.returns)
        if r.ndim != 1 or len(r) != len(self.calendar):
            raise InputError(
                f"{self.name}: {r.size} returns for a calendar of {len(self.calendar)} dates"
            )
        if not np.all(np.isfinite(r)):
            raise InputError(f"{self.name}: non-finite return")
        bad = np.flatnonzero(r <= -1.0)
        if bad.size:
            raise InputError(
                f"{self.name}: return <= -100% on {self.calendar[int(bad[0])].isoformat()}"
            )
        object.__setattr__(self, "returns", r)

    def __len__(self) -> int:
        return len(self.returns)

    def restrict(self, calendar: TradingCalendar) -> "ReturnSeries":
        """Keep only the dates in ``calendar``; dropped returns are discarded, never compounded."""
        idx = [self.calendar.index_of(d) for d in calendar]
        return ReturnSeries(self.name, calendar, self.returns[idx])


@dataclass(frozen=True, eq=False)
class NavSeries:
    name: str
    calendar: TradingCalendar
    navs: np.ndarray
    initial_capital: float = DEFAULT_CAPITAL

    def __post_init__(self):
        v = _frozen(self.navs)
        if v.ndim != 1 or len(v) != len(self.calendar):
            raise InputError(f"{self.name}: {v.size} NAVs for a calendar of {len(self.calendar)} dates")
        if not self.initial_capital > 0:
            raise InputError("initial capital must be positive")
        if v.size and not np.all(v > 0):
            raise InputError(f"{self.name}: non-positive NAV")
        object.__setattr__(self, "navs", v)

    def __len__(self) -> int:
        return len(self.navs)

    @property
    def ending_nav(self) -> float:
        return float(self.navs[-1]) if len(self.navs) else float(self.initial_capital)

    def with_start(self) -> np.ndarray:
        """NAVs prefixed with the initial capital (the day-0 value)."""
        return np.concatenate(([self.initial_capital], self.navs))

    def to_returns(self) -> ReturnSeries:
        return ReturnSeries(self.name, self.calendar, np.diff(self.with_start()) / self.with_start()[:-1])


@dataclass(frozen=True, eq=False)
class QuantileBand:
    q: float
    calendar: TradingCalendar
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))


def returns_from_prices(prices: Sequence[float], dates: Iterable, name: str = "series") -> ReturnSeries:
    """Simple returns ``p[t] / p[t-1] - 1``; the first date is consumed by the first price."""
    cal = TradingCalendar(dates)
    p = np.asarray(prices, dtype=float)
    if p.size != len(cal):
        raise InputError(f"{name}: {p.size} prices for {len(cal)} dates")
    if p.size == 0:
        raise InputError(f"{name}: at least one price is required")
    bad = np.flatnonzero(~(p > 0))
    if bad.size:
        raise InputError(f"{name}: non-positive price on {cal[int(bad[0])].isoformat()}")
    return ReturnSeries(name, cal[1:], p[1:] / p[:-1] - 1.0)


def nav_from_returns(r: ReturnSeries, initial_capital: float = DEFAULT_CAPITAL) -> NavSeries:
    if not initial_capital > 0:
        raise InputError("initial capital must be positive")
    return NavSeries(r.name, r.calendar, initial_capital * np.cumprod(1.0 + r.returns), float(initial_capital))


def align_series(series: Iterable[ReturnSeries]) -> list[ReturnSeries]:
    """Restrict every series to the intersection of their calendars."""
    series = list(series)
    if not series:
        raise InputError("align_series needs at least one series")
    common = series[0].calendar
    for s in series[1:]:
        if s.calendar != common:
            common = common.intersect(s.calendar)
    if len(common) == 0:
        raise InputError("empty intersection of calendars")
    return [s if s.calendar == common else s.restrict(common) for s in series]


def quantile_band(series: Sequence[NavSeries], q: float) -> QuantileBand:
    """Per-date empirical quantile of the cross-section (linear interpolation between order stats)."""
    if not 0.0 <= q <= 1.0:
        raise InputError(f"quantile level {q} outside [0, 1]")
    series = list(series)
    if not series:
        raise InputError("quantile_band needs at least one series")
    cal = series[0].calendar
    for s in series[1:]:
        if s.calendar != cal:
            raise InputError(f"mismatched calendars: {s.name} vs {series[0].name}")
    stack = np.vstack([s.navs for s in series])
    return QuantileBand(q, cal, np.quantile(stack, q, axis=0))


@dataclass(frozen=True)
class PeriodGrid:
    """Boundary dates splitting a calendar into holding periods.

    Period ``p`` holds the trading days strictly after ``boundaries[p]`` up to and
    including ``boundaries[p + 1]``; the last period runs to the end of the calendar.
    A boundary on a non-trading day therefore takes effect from the next trading day.
    """

    boundaries: tuple[dt.date, ...] = COMPETITION_REBALANCE_DATES

    def __post_init__(self):
        b = tuple(_as_date(d) for d in self.boundaries)
        if not b:
            raise InputError("period grid needs at least one boundary")
        if any(y <= x for x, y in zip(b, b[1:])):
            raise InputError("period boundaries must be strictly increasing")
        object.__setattr__(self, "boundaries", b)

    def __len__(self) -> int:
        return len(self.boundaries)

    def slices(self, calendar: TradingCalendar) -> list[slice]:
        """Index ranges of each period within ``calendar``; every period must hold a trading day."""
        starts = [calendar.first_after(b) for b in self.boundaries]
        ends = starts[1:] + [len(calendar)]
        out = []
        for p, (a, e) in enumerate(zip(starts, ends)):
            if e <= a:
                raise InputError(
                    f"period {p + 1} starting after {self.boundaries[p].isoformat()} has no trading days"
                )
            out.append(slice(a, e))
        return out

    def span(self, calendar: TradingCalendar) -> TradingCalendar:
        sl = self.slices(calendar)
        return calendar[sl[0].start:sl[-1].stop]

    def period_end_dates(self, calendar: TradingCalendar) -> list[dt.date]:
        return [calendar[s.stop - 1] for s in self.slices(calendar)]


def stack_returns(series: Sequence[ReturnSeries]) -> tuple[TradingCalendar, np.ndarray]:
    """(calendar, dates x series matrix); all series must already share one calendar."""
    series = list(series)
    cal = series[0].calendar
    for s in series[1:]:
        if s.calendar != cal:
            raise InputError(f"mismatched calendars: {s.name} vs {series[0].name}")
    return cal, np.column_stack([s.returns for s in series])


def by_name(series: Iterable[ReturnSeries]) -> Mapping[str, ReturnSeries]:
    out: dict[str, ReturnSeries] = {}
    for s in series:
        if s.name in out:
            raise InputError(f"duplicate series name {s.name!r}")
        out[s.name] = s
    return out
