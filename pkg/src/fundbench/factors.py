"""Excess-return factor regressions, alpha inference and cohort-level significance."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy import linalg

from .errors import DegenerateError, FundbenchError, InputError
from .metrics import ColumnSummary, summarize
from .series import ReturnSeries, TradingCalendar, by_name
from .stats import ADResult, BHResult, anderson_darling, bh_adjust, t_two_sided_p

# Pivoted-QR diagonal ratio below which the design is treated as rank deficient
# (roughly a condition number of 1e10).
RANK_RCOND = 1e-10
# Residual sd below this fraction of the response scale counts as an exact fit.
EXACT_FIT_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class FactorPanel:
    calendar: TradingCalendar
    names: tuple[str, ...]
    factors: np.ndarray  # dates x J
    risk_free: np.ndarray  # daily de-annualized rate per date

    def __post_init__(self):
        f = np.array(self.factors, dtype=float)
        if f.ndim == 1:
            f = f[:, None]
        n, J = f.shape
        if J < 1:
            raise InputError("a factor panel needs at least one factor")
        if n != len(self.calendar) or len(self.names) != J:
            raise InputError("factor panel shape does not match its calendar / names")
        rf = np.zeros(n) if self.risk_free is None else np.array(self.risk_free, dtype=float)
        if rf.shape != (n,):
            raise InputError("risk-free series does not match the panel calendar")
        f.setflags(write=False)
        rf.setflags(write=False)
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "factors", f)
        object.__setattr__(self, "risk_free", rf)

    @classmethod
    def from_series(cls, factors: Sequence[ReturnSeries], risk_free: ReturnSeries | None = None) -> "FactorPanel":
        factors = list(factors)
        if not factors:
            raise InputError("a factor panel needs at least one factor")
        cal = factors[0].calendar
        for s in factors[1:]:
            if s.calendar != cal:
                cal = cal.intersect(s.calendar)
        if risk_free is not None and risk_free.calendar != cal:
            cal = cal.intersect(risk_free.calendar)
        if len(cal) == 0:
            raise InputError("factors share no dates")
        by_name(factors)
        f = np.column_stack([s.restrict(cal).returns for s in factors])
        rf = None if risk_free is None else risk_free.restrict(cal).returns
        return cls(cal, tuple(s.name for s in factors), f, rf)

    @property
    def J(self) -> int:
        return self.factors.shape[1]

    def restrict(self, calendar: TradingCalendar) -> "FactorPanel":
        idx = [self.calendar.index_of(d) for d in calendar]
        return FactorPanel(calendar, self.names, self.factors[idx], self.risk_free[idx])


@dataclass(frozen=True, eq=False)
class FactorModelFit:
    name: str
    alpha: float
    betas: Mapping[str, float]
    resid_sd: float
    alpha_se: float
    t_stat: float | None
    p_value: float | None
    dof: int
    ar_daily: float | None
    alpha_annualized: float
    ar_annualized: float | None
    # alternative: annualized alpha over the annualized sd of the excess returns
    ar_annualized_returns_sd: float | None
    n: int
    trading_days: int
    degenerate: bool
    residuals: np.ndarray = field(repr=False)


class _Design:
    """Pivoted QR of ``[1, F - rf]`` for one panel, reusable across portfolios."""

    def __init__(self, panel: FactorPanel):
        n, J = panel.factors.shape
        if n <= J + 1:
            raise InputError(f"{n} observations cannot identify {J} factors plus an intercept")
        self.panel = panel
        self.X = np.column_stack([np.ones(n), panel.factors - panel.risk_free[:, None]])
        q, r, piv = linalg.qr(self.X, mode="economic", pivoting=True)
        d = np.abs(np.diag(r))
        rank = int(np.sum(d > RANK_RCOND * d[0]))
        if rank < self.X.shape[1]:
            labels = ("intercept",) + panel.names
            bad = ", ".join(labels[j] for j in sorted(piv[rank:]))
            raise DegenerateError(f"rank-deficient factor panel; collinear: {bad}")
        self.q, self.r, self.piv = q, r, piv
        rinv = linalg.solve_triangular(r, np.eye(r.shape[0]))
        cov_piv = rinv @ rinv.T
        k = int(np.flatnonzero(piv == 0)[0])
        self.xtx_inv_alpha = float(cov_piv[k, k])
        self.dof = n - J - 1

    def solve(self, y: np.ndarray) -> np.ndarray:
        coef = np.empty(self.X.shape[1])
        coef[self.piv] = linalg.solve_triangular(self.r, self.q.T @ y)
        return coef


def check_panel(panel: FactorPanel) -> None:
    """Raise unless the panel identifies every factor plus an intercept on its own calendar."""
    _Design(panel)


def alpha_inference(fit: FactorModelFit) -> tuple[float, float]:
    """t statistic of the intercept and its two-sided Student-t p-value."""
    if fit.degenerate or not fit.resid_sd > 0:
        raise DegenerateError(f"{fit.name}: degenerate fit (zero residual variance)")
    t = fit.alpha / fit.alpha_se
    return t, t_two_sided_p(t, fit.dof)


def _annualized(alpha, resid_sd, degenerate, trading_days):
    if not trading_days > 0:
        raise InputError("trading_days must be positive")
    a = alpha * trading_days
    if degenerate or not resid_sd > 0:
        return a, (0.0 if a == 0.0 else None)
    return a, a / (resid_sd * math.sqrt(trading_days))


def annualize(fit: FactorModelFit, trading_days: int = 238) -> tuple[float, float | None]:
    """(alpha * days, annualized alpha / (resid sd * sqrt(days)))."""
    return _annualized(fit.alpha, fit.resid_sd, fit.degenerate, trading_days)


def _fit(design: _Design, portfolio: ReturnSeries, trading_days: int) -> FactorModelFit:
    panel = design.panel
    y = portfolio.returns - panel.risk_free
    coef = design.solve(y)
    resid = y - design.X @ coef
    resid.setflags(write=False)
    resid_sd = math.sqrt(float(resid @ resid) / design.dof)
    scale = float(np.max(np.abs(y)))
    degenerate = resid_sd <= EXACT_FIT_RTOL * max(scale, np.finfo(float).tiny)
    alpha = float(coef[0])
    alpha_se = resid_sd * math.sqrt(design.xtx_inv_alpha)
    t_stat = p_value = None
    if not degenerate:
        t_stat = alpha / alpha_se
        p_value = t_two_sided_p(t_stat, design.dof)
    alpha_ann, ar_ann = _annualized(alpha, resid_sd, degenerate, trading_days)
    y_sd = float(np.std(y, ddof=1))
    return FactorModelFit(
        name=portfolio.name,
        alpha=alpha,
        betas=dict(zip(panel.names, (float(b) for b in coef[1:]))),
        resid_sd=resid_sd,
        alpha_se=alpha_se,
        t_stat=t_stat,
        p_value=p_value,
        dof=design.dof,
        ar_daily=None if degenerate else alpha / resid_sd,
        alpha_annualized=alpha_ann,
        ar_annualized=ar_ann,
        ar_annualized_returns_sd=alpha_ann / (y_sd * math.sqrt(trading_days)) if y_sd > 0 else None,
        n=len(y),
        trading_days=trading_days,
        degenerate=degenerate,
        residuals=resid,
    )


def _on_panel(portfolio: ReturnSeries, panel: FactorPanel) -> tuple[ReturnSeries, FactorPanel]:
    if portfolio.calendar == panel.calendar:
        return portfolio, panel
    cal = portfolio.calendar.intersect(panel.calendar)
    if len(cal) == 0:
        raise InputError(f"{portfolio.name}: no dates in common with the factor panel")
    return portfolio.restrict(cal), panel.restrict(cal)


def ols_fit(portfolio: ReturnSeries, panel: FactorPanel, trading_days: int = 238) -> FactorModelFit:
    """Least-squares fit of ``r - rf = alpha + sum_j beta_j (f_j - rf) + e`` on the common dates."""
    portfolio, panel = _on_panel(portfolio, panel)
    return _fit(_Design(panel), portfolio, trading_days)


@dataclass(frozen=True, eq=False)
class CohortFit:
    fits: Mapping[str, FactorModelFit]
    failures: Mapping[str, str]
    table: Mapping[str, ColumnSummary]
    n_positive: int
    n_negative: int
    n_degenerate: int
    n_sig_raw_positive: int
    n_sig_raw_negative: int
    n_sig_bh_positive: int
    n_sig_bh_negative: int
    bh: BHResult | None
    bh_names: tuple[str, ...]
    ad: ADResult | None
    level: float

    @property
    def cohort_size(self) -> int:
        return len(self.fits) + len(self.failures)


def cohort_fit(portfolios: Sequence[ReturnSeries], panel: FactorPanel, trading_days: int = 238,
               level: float = 0.05, bh_mode: str = "stepup") -> CohortFit:
    """Fit every portfolio on one panel and summarize alphas, ARs and betas.

    Per-portfolio failures are recorded in ``failures`` instead of aborting the cohort.
    """
    portfolios = list(portfolios)
    if not portfolios:
        raise InputError("cohort_fit needs at least one portfolio")
    designs: dict[TradingCalendar, _Design] = {}
    fits: dict[str, FactorModelFit] = {}
    failures: dict[str, str] = {}
    for pf in portfolios:
        try:
            y, pan = _on_panel(pf, panel)
            design = designs.get(pan.calendar)
            if design is None:
                design = designs[pan.calendar] = _Design(pan)
            fits[pf.name] = _fit(design, y, trading_days)
        except FundbenchError as exc:
            failures[pf.name] = str(exc)

    alphas = {k: f.alpha for k, f in fits.items()}
    table = {
        "alpha_annualized": summarize([f.alpha_annualized for f in fits.values()]),
        "ar_annualized": summarize([f.ar_annualized for f in fits.values()]),
    }
    for name in panel.names:
        table[f"beta_{name}"] = summarize([f.betas[name] for f in fits.values()])

    tested = [k for k, f in fits.items() if f.p_value is not None]
    bh = bh_adjust([fits[k].p_value for k in tested], level, bh_mode) if tested else None

    def count(names, pred):
        return sum(1 for k in names if pred(fits[k]))

    raw_sig = [k for k in tested if fits[k].p_value <= level]
    bh_sig = [] if bh is None else [k for k, s in zip(tested, bh.significant) if s]
    try:
        ad = anderson_darling(list(alphas.values())) if len(alphas) >= 8 else None
    except DegenerateError:
        ad = None
    return CohortFit(
        fits=fits,
        failures=failures,
        table=table,
        n_positive=sum(a > 0 for a in alphas.values()),
        n_negative=sum(a < 0 for a in alphas.values()),
        n_degenerate=sum(f.degenerate for f in fits.values()),
        n_sig_raw_positive=count(raw_sig, lambda f: f.alpha > 0),
        n_sig_raw_negative=count(raw_sig, lambda f: f.alpha < 0),
        n_sig_bh_positive=count(bh_sig, lambda f: f.alpha > 0),
        n_sig_bh_negative=count(bh_sig, lambda f: f.alpha < 0),
        bh=bh,
        bh_names=tuple(tested),
        ad=ad,
        level=level,
    )
