"""Compare a run on the real M6 competition data with the published headline numbers.

The dataset is not shipped. Point the script at a directory holding

    competitors.csv   daily returns, one column per team (161 teams)
    benchmarks.csv    daily returns of the benchmark indices (column CTA among them)
    universe.csv      daily returns of the 100 competition assets

all in the ``date,<name>...`` layout read by ``fundbench.ingest_csv``.

    python scripts/replicate_m6.py /path/to/m6 [--sims 10000] [--factors SP500,NASDAQ100,...]
"""
from __future__ import annotations

import argparse
import statistics
from pathlib import Path

from fundbench import (
    Dataset,
    FactorPanel,
    PeriodGrid,
    SimulationConfig,
    cohort_fit,
    fof_backtest,
    metrics_report,
    simulate_cohort,
)

# name, published value, tolerance
TARGETS = (
    ("cta_sr", 0.64, 0.01),
    ("median_competitor_sr", -0.17, 0.01),
    ("median_competitor_mdd", 0.16, 0.005),
    ("positive_alphas", 58, 0),
    ("negative_alphas", 103, 0),
    ("bh_significant_alphas", 0, 0),
    ("ad_p_value", 0.08, 0.01),
    ("superstars_total_return", -0.153, 0.003),
    ("superlosers_total_return", 0.044, 0.003),
    ("random_max_mdd", 0.313, 0.01),
)


def replicate(data_dir, sims: int = 10_000, factors: tuple[str, ...] = (), seed: int = 0) -> dict[str, float]:
    d = Path(data_dir)
    data = Dataset.load(d / "competitors.csv", d / "benchmarks.csv", d / "universe.csv")
    bench = {s.name: s for s in data.benchmarks}
    comp = [metrics_report(s) for s in data.competitors]
    names = factors or tuple(bench)
    cf = cohort_fit(data.competitors, FactorPanel.from_series([bench[n] for n in names]))
    stars = fof_backtest(data.competitors, PeriodGrid(), "top", 10)
    losers = fof_backtest(data.competitors, PeriodGrid(), "bottom", 10)
    sim = simulate_cohort(SimulationConfig(data.universe, num_sims=sims, master_seed=seed))
    return {
        "cta_sr": metrics_report(bench["CTA"]).sr,
        "median_competitor_sr": statistics.median(r.sr for r in comp if r.sr is not None),
        "median_competitor_mdd": statistics.median(r.mdd for r in comp),
        "positive_alphas": cf.n_positive,
        "negative_alphas": cf.n_negative,
        "bh_significant_alphas": cf.n_sig_bh_positive + cf.n_sig_bh_negative,
        "ad_p_value": cf.ad.p_value if cf.ad else float("nan"),
        "superstars_total_return": stars.total_return,
        "superlosers_total_return": losers.total_return,
        "random_max_mdd": max(r.mdd for r in sim.reports),
    }


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("data_dir")
    p.add_argument("--sims", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--factors", default="", help="comma-separated benchmark names (default: all)")
    args = p.parse_args(argv)
    got = replicate(args.data_dir, args.sims, tuple(f for f in args.factors.split(",") if f), args.seed)
    failed = 0
    for name, target, tol in TARGETS:
        ok = abs(got[name] - target) <= tol + 1e-12
        failed += not ok
        print(f"{'ok  ' if ok else 'MISS'} {name:26s} got {got[name]:.4g}  published {target} +/- {tol}")
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
