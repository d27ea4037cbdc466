"""Performance metrics, fees, factor alphas, random portfolios and FoF backtests over daily returns."""
from .errors import DegenerateError, FundbenchError, InputError, InsufficientDataError
from .factors import (
    CohortFit,
    FactorModelFit,
    FactorPanel,
    alpha_inference,
    annualize,
    check_panel,
    cohort_fit,
    ols_fit,
)
from .fees import FeeLedger, FeeSchedule, apply_fees
from .fof import FofBacktest, fof_backtest, member_curves, period_returns, select_team
from .ingest import Dataset, ingest_csv
from .metrics import (
    AnnualizationConfig,
    DrawdownSeries,
    MetricsReport,
    autocorrelation,
    calmar_ratio,
    cohort_summary,
    drawdown_series,
    max_drawdown,
    metrics_report,
    sharpe_ratio,
    side_volatility,
    ulcer_index,
    upi,
)
from .montecarlo import SimulatedCohort, SimulationConfig, sample_portfolio, simulate_cohort
from .series import (
    COMPETITION_REBALANCE_DATES,
    NavSeries,
    PeriodGrid,
    QuantileBand,
    ReturnSeries,
    TradingCalendar,
    align_series,
    nav_from_returns,
    quantile_band,
    returns_from_prices,
)
from .stats import BHResult, anderson_darling, bh_adjust, student_t_cdf

__version__ = "0.1.0"
