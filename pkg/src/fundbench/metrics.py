"""Performance metrics of a daily return stream and cohort summaries of them.

All ratios share one numerator, the geometrically annualized return
``prod(1 + r) ** (n_star / n) - 1``, so SR, CR and UPI always agree in sign.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Mapping, Sequence

import numpy as np

from .errors import DegenerateError, InputError
from .series import DEFAULT_CAPITAL, NavSeries, ReturnSeries, TradingCalendar, nav_from_returns


@dataclass(frozen=True)
class AnnualizationConfig:
    periods_per_year: int = 252
    sd_mode: Literal["sample", "population"] = "sample"

    def __post_init__(self):
        if not self.periods_per_year > 0:
            raise InputError("periods_per_year must be positive")
        if self.sd_mode not in ("sample", "population"):
            raise InputError(f"unknown sd_mode {self.sd_mode!r}")

    @property
    def ddof(self) -> int:
        return 1 if self.sd_mode == "sample" else 0


@dataclass(frozen=True, eq=False)
class DrawdownSeries:
    calendar: TradingCalendar
    dd: np.ndarray


METRIC_NAMES = (
    "sr", "mdd", "cr", "ui", "upi", "vol_up", "vol_down",
    "autocorr", "ann_return", "ann_sd", "ending_nav",
)


@dataclass(frozen=True)
class MetricsReport:
    """One table row. Undefined metrics are ``None`` with the reason in ``absent``."""

    name: str
    sr: float | None
    mdd: float | None
    cr: float | None
    ui: float | None
    upi: float | None
    vol_up: float | None
    vol_down: float | None
    autocorr: float | None
    ann_return: float | None
    ann_sd: float | None
    ending_nav: float
    autocorr_lag: int = 1
    absent: Mapping[str, str] = field(default_factory=dict)

    def as_dict(self) -> dict[str, float | None]:
        return {k: getattr(self, k) for k in METRIC_NAMES}


def _nav(r: ReturnSeries, nav: NavSeries | None, capital: float) -> NavSeries:
    return nav if nav is not None else nav_from_returns(r, capital)


def drawdown_series(nav: NavSeries) -> DrawdownSeries:
    """Fractional distance below the running peak; the initial capital is the day-0 peak."""
    if len(nav) == 0:
        raise InputError("drawdown of an empty NAV series")
    peaks = np.maximum.accumulate(nav.with_start())[1:]
    dd = 1.0 - nav.navs / peaks
    # a new running maximum (or a tie with it) is exactly zero drawdown
    dd[nav.navs >= peaks] = 0.0
    return DrawdownSeries(nav.calendar, dd)


def max_drawdown(nav: NavSeries) -> float:
    return float(drawdown_series(nav).dd.max())


def max_drawdown_pairwise(navs: Sequence[float]) -> float:
    """O(n^2) literal definition: max over t1 < t2 of the loss from t1 to t2, floored at 0."""
    v = np.asarray(navs, dtype=float)
    best = 0.0
    for i in range(len(v) - 1):
        best = max(best, float(np.max((v[i] - v[i + 1:]) / v[i])))
    return best


def annualized_return(r: ReturnSeries, cfg: AnnualizationConfig = AnnualizationConfig()) -> float:
    n = len(r)
    if n == 0:
        raise InputError("annualized return of an empty series")
    growth = float(np.prod(1.0 + r.returns))
    return growth ** (cfg.periods_per_year / n) - 1.0


def annualized_sd(r: ReturnSeries, cfg: AnnualizationConfig = AnnualizationConfig()) -> float:
    if len(r) < 2:
        raise InputError("at least two returns are needed for a standard deviation")
    return math.sqrt(cfg.periods_per_year) * float(np.std(r.returns, ddof=cfg.ddof))


def sharpe_ratio(r: ReturnSeries, cfg: AnnualizationConfig = AnnualizationConfig()) -> float:
    if len(r) < 2:
        raise InputError("at least two returns are needed for SR")
    denom = annualized_sd(r, cfg)
    if denom == 0.0:
        raise DegenerateError("undefined SR: zero volatility")
    return annualized_return(r, cfg) / denom


def calmar_ratio(r: ReturnSeries, nav: NavSeries | None = None,
                 cfg: AnnualizationConfig = AnnualizationConfig()) -> float:
    mdd = max_drawdown(_nav(r, nav, DEFAULT_CAPITAL))
    if mdd == 0.0:
        raise DegenerateError("undefined CR: zero maximum drawdown")
    return annualized_return(r, cfg) / mdd


def ulcer_index(nav: NavSeries) -> float:
    dd = drawdown_series(nav).dd
    return math.sqrt(float(np.mean(dd * dd)))


def upi(r: ReturnSeries, nav: NavSeries | None = None,
        cfg: AnnualizationConfig = AnnualizationConfig()) -> float:
    ui = ulcer_index(_nav(r, nav, DEFAULT_CAPITAL))
    if ui == 0.0:
        raise DegenerateError("undefined UPI: zero ulcer index")
    return annualized_return(r, cfg) / ui


def side_volatility(r: ReturnSeries, side: Literal["positive", "negative"]) -> float:
    """Population sd of one side's returns about that side's own mean. Zeros are on neither side."""
    x = r.returns
    if side == "positive":
        x = x[x > 0]
    elif side == "negative":
        x = x[x < 0]
    else:
        raise InputError(f"unknown side {side!r}")
    if x.size == 0:
        raise DegenerateError(f"no returns on {side} side")
    return float(np.sqrt(np.mean((x - x.mean()) ** 2)))


def autocorrelation(r: ReturnSeries, lag: int = 1) -> float:
    x = r.returns
    if lag < 1 or len(x) <= lag + 1:
        raise InputError(f"need more than {lag + 1} returns for lag-{lag} autocorrelation")
    d = x - x.mean()
    denom = float(d @ d)
    if denom == 0.0:
        raise DegenerateError("autocorrelation of a constant series")
    return float(d[:-lag] @ d[lag:]) / denom


def metrics_report(r: ReturnSeries, initial_capital: float = DEFAULT_CAPITAL,
                   cfg: AnnualizationConfig = AnnualizationConfig(), lag: int = 1) -> MetricsReport:
    if len(r) == 0:
        raise InputError(f"{r.name}: empty series")
    nav = nav_from_returns(r, initial_capital)
    absent: dict[str, str] = {}

    def attempt(key, fn):
        try:
            return fn()
        except (DegenerateError, InputError) as exc:
            absent[key] = str(exc)
            return None

    ann = annualized_return(r, cfg)
    mdd = max_drawdown(nav)
    ui = ulcer_index(nav)
    sd = attempt("ann_sd", lambda: annualized_sd(r, cfg))

    def ratio(denom, what):
        if denom is None:
            raise DegenerateError(f"undefined {what}: " + absent.get("ann_sd", "no denominator"))
        if denom == 0.0:
            raise DegenerateError(f"undefined {what}: zero denominator")
        return ann / denom

    return MetricsReport(
        name=r.name,
        sr=attempt("sr", lambda: ratio(sd, "SR")),
        mdd=mdd,
        cr=attempt("cr", lambda: ratio(mdd, "CR")),
        ui=ui,
        upi=attempt("upi", lambda: ratio(ui, "UPI")),
        vol_up=attempt("vol_up", lambda: side_volatility(r, "positive")),
        vol_down=attempt("vol_down", lambda: side_volatility(r, "negative")),
        autocorr=attempt("autocorr", lambda: autocorrelation(r, lag)),
        ann_return=ann,
        ann_sd=sd,
        ending_nav=nav.ending_nav,
        autocorr_lag=lag,
        absent=absent,
    )


SUMMARY_STATS = ("min", "q25", "median", "mean", "q75", "max")


@dataclass(frozen=True)
class ColumnSummary:
    min: float | None
    q25: float | None
    median: float | None
    mean: float | None
    q75: float | None
    max: float | None
    n: int
    n_ignored: int

    def as_dict(self) -> dict[str, float | None]:
        return {k: getattr(self, k) for k in SUMMARY_STATS}


def summarize(values: Sequence[float | None]) -> ColumnSummary:
    """Six-number summary over the defined values; ``None``/NaN entries are counted and skipped."""
    vals = [float(v) for v in values if v is not None and not math.isnan(v)]
    ignored = len(values) - len(vals)
    if not vals:
        return ColumnSummary(None, None, None, None, None, None, 0, ignored)
    x = np.asarray(vals)
    q25, med, q75 = np.quantile(x, [0.25, 0.5, 0.75])
    return ColumnSummary(float(x.min()), float(q25), float(med), float(x.mean()),
                         float(q75), float(x.max()), len(vals), ignored)


def cohort_summary(reports: Sequence[MetricsReport],
                   columns: Sequence[str] = METRIC_NAMES) -> dict[str, ColumnSummary]:
    reports = list(reports)
    if not reports:
        raise InputError("cohort summary of an empty cohort")
    return {c: summarize([getattr(rep, c) for rep in reports]) for c in columns}

