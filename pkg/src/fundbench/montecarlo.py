"""Random equal-weight portfolios re-drawn at each rebalance date.

Simulation ``i`` draws from its own generator seeded by ``(master_seed, i)``, so a
cohort is identical whatever the number of workers or the order of evaluation,
and growing ``num_sims`` never perturbs the earlier simulations.
"""
from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Sequence

import numpy as np

from .errors import InputError
from .metrics import AnnualizationConfig, ColumnSummary, MetricsReport, cohort_summary, metrics_report
from .series import (
    COMPETITION_REBALANCE_DATES,
    DEFAULT_CAPITAL,
    NavSeries,
    PeriodGrid,
    ReturnSeries,
    TradingCalendar,
    by_name,
    stack_returns,
)


@dataclass(frozen=True)
class RandomPortfolio:
    ids: tuple[int, ...]
    weight: Fraction

    def __post_init__(self):
        if self.weight * len(self.ids) != 1:
            raise InputError("portfolio weights must sum to one")

    @property
    def weights(self) -> np.ndarray:
        return np.full(len(self.ids), float(self.weight))


def sample_portfolio(rng: np.random.Generator, universe_size: int, k: int) -> RandomPortfolio:
    """k distinct asset indices drawn uniformly without replacement, each weighted 1/k."""
    if not 1 <= k <= universe_size:
        raise InputError(f"cannot draw {k} distinct assets from a universe of {universe_size}")
    ids = rng.choice(universe_size, size=k, replace=False)
    return RandomPortfolio(tuple(sorted(int(i) for i in ids)), Fraction(1, k))


def simulation_rng(master_seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(index,)))


@dataclass(frozen=True, eq=False)
class SimulationConfig:
    universe: Sequence[ReturnSeries]
    k: int = 10
    rebalance_dates: Sequence = COMPETITION_REBALANCE_DATES
    num_sims: int = 10_000
    master_seed: int = 0
    # "buy_and_hold": weights drift with relative performance between rebalance dates;
    # "daily": weights reset to 1/k every day (sensitivity variant).
    mode: Literal["buy_and_hold", "daily"] = "buy_and_hold"
    initial_capital: float = DEFAULT_CAPITAL
    annualization: AnnualizationConfig = field(default_factory=AnnualizationConfig)

    def __post_init__(self):
        u = list(self.universe)
        if not u:
            raise InputError("empty universe")
        by_name(u)
        if not 1 <= self.k <= len(u):
            raise InputError(f"k={self.k} outside 1..{len(u)}")
        if self.num_sims < 1:
            raise InputError("num_sims must be at least 1")
        if self.mode not in ("buy_and_hold", "daily"):
            raise InputError(f"unknown simulation mode {self.mode!r}")
        if not 0 <= self.master_seed < 2**64:
            raise InputError("master_seed must be a 64-bit unsigned integer")
        object.__setattr__(self, "universe", tuple(u))
        object.__setattr__(self, "rebalance_dates", PeriodGrid(tuple(self.rebalance_dates)).boundaries)

    @property
    def grid(self) -> PeriodGrid:
        return PeriodGrid(self.rebalance_dates)

    def config_hash(self) -> str:
        h = hashlib.sha256()
        meta = {
            "k": self.k,
            "rebalance_dates": [d.isoformat() for d in self.rebalance_dates],
            "num_sims": self.num_sims,
            "master_seed": self.master_seed,
            "mode": self.mode,
            "initial_capital": self.initial_capital,
            "periods_per_year": self.annualization.periods_per_year,
            "sd_mode": self.annualization.sd_mode,
            "universe": [s.name for s in self.universe],
        }
        h.update(json.dumps(meta, sort_keys=True).encode())
        for s in self.universe:
            h.update("|".join(d.isoformat() for d in s.calendar).encode())
            h.update(np.ascontiguousarray(s.returns, dtype="<f8").tobytes())
        return h.hexdigest()


@dataclass(frozen=True, eq=False)
class SimulatedCohort:
    calendar: TradingCalendar
    navs: np.ndarray  # num_sims x days
    selections: np.ndarray  # num_sims x periods x k asset indices
    reports: tuple[MetricsReport, ...]
    summary: dict[str, ColumnSummary]
    asset_names: tuple[str, ...]
    provenance: dict = field(default_factory=dict)

    def nav_series(self, i: int) -> NavSeries:
        return NavSeries(f"sim{i:05d}", self.calendar, self.navs[i], self.provenance["initial_capital"])

    def digest(self) -> str:
        h = hashlib.sha256(np.ascontiguousarray(self.navs, dtype="<f8").tobytes())
        h.update(np.ascontiguousarray(self.selections, dtype="<i8").tobytes())
        return h.hexdigest()


def _simulate_one(index: int, cfg: SimulationConfig, R: np.ndarray, slices: list[slice]):
    rng = simulation_rng(cfg.master_seed, index)
    U = R.shape[1]
    offset = slices[0].start
    navs = np.empty(slices[-1].stop - offset)
    picks = np.empty((len(slices), cfg.k), dtype=np.int64)
    value = cfg.initial_capital
    for p, sl in enumerate(slices):
        pf = sample_portfolio(rng, U, cfg.k)
        picks[p] = pf.ids
        sub = R[sl, list(pf.ids)]
        if cfg.mode == "buy_and_hold":
            growth = np.cumprod(1.0 + sub, axis=0) @ pf.weights
        else:
            growth = np.cumprod(1.0 + sub @ pf.weights)
        navs[sl.start - offset:sl.stop - offset] = value * growth
        value = navs[sl.stop - offset - 1]
    return navs, picks


def simulate_cohort(cfg: SimulationConfig, workers: int | None = None) -> SimulatedCohort:
    cal, R = stack_returns(cfg.universe)
    slices = cfg.grid.slices(cal)
    span = cal[slices[0].start:slices[-1].stop]

    def run(i):
        return _simulate_one(i, cfg, R, slices)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(run, range(cfg.num_sims)))
    else:
        results = [run(i) for i in range(cfg.num_sims)]

    navs = np.vstack([r[0] for r in results])
    picks = np.stack([r[1] for r in results])
    navs.setflags(write=False)
    picks.setflags(write=False)
    reports = tuple(
        metrics_report(NavSeries(f"sim{i:05d}", span, navs[i], cfg.initial_capital).to_returns(),
                       cfg.initial_capital, cfg.annualization)
        for i in range(cfg.num_sims)
    )
    provenance = {
        "master_seed": cfg.master_seed,
        "config_hash": cfg.config_hash(),
        "mode": cfg.mode,
        "initial_capital": cfg.initial_capital,
    }
    return SimulatedCohort(span, navs, picks, reports, cohort_summary(reports),
                           tuple(s.name for s in cfg.universe), provenance)
