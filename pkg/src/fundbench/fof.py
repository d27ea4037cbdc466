"""Monthly fund-of-funds selection: back last period's best (or worst) competitors."""
from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from typing import Literal, Mapping, Sequence

import numpy as np

from .errors import InputError
from .series import DEFAULT_CAPITAL, NavSeries, PeriodGrid, ReturnSeries, TradingCalendar, by_name

Selector = Literal["top", "bottom"]


def period_returns(r: ReturnSeries, grid: PeriodGrid) -> np.ndarray:
    """Compounded return of each holding period of ``grid``."""
    return np.array([np.prod(1.0 + r.returns[sl]) - 1.0 for sl in grid.slices(r.calendar)])


def select_team(period_rets: Mapping[str, Sequence[float]], p: int, selector: Selector, k: int) -> tuple[str, ...]:
    """The k ids ranked best (``top``) or worst (``bottom``) on period ``p - 1`` (1-based ``p``).

    Ties go to the smaller id.
    """
    if p < 2:
        raise InputError("no prior period to select on")
    if len(period_rets) < k or k < 1:
        raise InputError(f"cannot select {k} of {len(period_rets)} competitors")
    if selector not in ("top", "bottom"):
        raise InputError(f"unknown selector {selector!r}")
    sign = -1.0 if selector == "top" else 1.0
    ranked = sorted(period_rets, key=lambda name: (sign * float(period_rets[name][p - 2]), name))
    return tuple(ranked[:k])


@dataclass(frozen=True, eq=False)
class FofBacktest:
    selector: str
    k: int
    teams: tuple[tuple[str, ...], ...]  # team held in periods 2..P
    period_rets: np.ndarray  # strategy return in periods 2..P
    nav: NavSeries  # one value per period end, starting from periods 2
    period_start_dates: tuple[dt.date, ...]

    @property
    def total_return(self) -> float:
        return self.nav.ending_nav / self.nav.initial_capital - 1.0


def _cohort_period_returns(cohort: Sequence[ReturnSeries], grid: PeriodGrid) -> tuple[TradingCalendar, dict[str, np.ndarray]]:
    cohort = list(cohort)
    if not cohort:
        raise InputError("empty cohort")
    by_name(cohort)
    cal = cohort[0].calendar
    for s in cohort[1:]:
        if s.calendar != cal:
            raise InputError(f"{s.name} is not on the cohort calendar")
    return cal, {s.name: period_returns(s, grid) for s in cohort}


def fof_backtest(cohort: Sequence[ReturnSeries], grid: PeriodGrid = PeriodGrid(), selector: Selector = "top",
                 k: int = 10, initial_capital: float = DEFAULT_CAPITAL) -> FofBacktest:
    cal, prets = _cohort_period_returns(cohort, grid)
    P = len(grid)
    if P < 2:
        raise InputError("need at least two periods")
    teams, rets = [], []
    for p in range(2, P + 1):
        team = select_team(prets, p, selector, k)
        teams.append(team)
        rets.append(float(np.mean([prets[name][p - 1] for name in team])))
    rets = np.array(rets)
    ends = grid.period_end_dates(cal)[1:]
    nav = NavSeries(f"fof_{selector}{k}", TradingCalendar(ends), initial_capital * np.cumprod(1.0 + rets),
                    initial_capital)
    starts = tuple(cal[sl.start] for sl in grid.slices(cal)[1:])
    return FofBacktest(selector, k, tuple(teams), rets, nav, starts)


@dataclass(frozen=True, eq=False)
class MemberCurves:
    """Display series: every selected member restarts at the initial capital each period."""

    calendar: TradingCalendar
    curves: dict[str, np.ndarray]  # label -> daily values (NaN outside the member's period)
    team_average: np.ndarray  # equal-weight average of the restarted member curves
    strategy: np.ndarray  # strategy NAV, compounding continuously across periods


def member_curves(cohort: Sequence[ReturnSeries], grid: PeriodGrid, backtest: FofBacktest,
                  initial_capital: float = DEFAULT_CAPITAL) -> MemberCurves:
    cohort = by_name(cohort)
    cal = next(iter(cohort.values())).calendar
    slices = grid.slices(cal)[1:]
    span = cal[slices[0].start:slices[-1].stop]
    off = slices[0].start
    n = len(span)
    curves: dict[str, np.ndarray] = {}
    average = np.full(n, np.nan)
    strategy = np.full(n, np.nan)
    value = initial_capital
    for p, (sl, team) in enumerate(zip(slices, backtest.teams), start=2):
        window = slice(sl.start - off, sl.stop - off)
        members = []
        for name in team:
            c = np.full(n, np.nan)
            c[window] = initial_capital * np.cumprod(1.0 + cohort[name].returns[sl])
            curves[f"p{p:02d}:{name}"] = c
            members.append(c[window])
        avg = np.mean(members, axis=0)
        average[window] = avg
        strategy[window] = value * avg / initial_capital
        value = strategy[window][-1]
    return MemberCurves(span, curves, average, strategy)
