"""Generate the synthetic golden dataset: 5 competitors, 7 benchmarks, a 20-asset universe, 238 days.

Usage: python scripts/make_golden_fixture.py [out_dir]
"""
import sys
from pathlib import Path

import numpy as np

SEED = 20230203
N_DAYS = 238
BENCHMARKS = ["SP500", "NASDAQ100", "Crypto", "CTA", "EquityLS", "EventDriven", "MarketNeutral"]
BENCH_VOL = [0.015, 0.02, 0.04, 0.006, 0.005, 0.004, 0.003]
BENCH_DRIFT = [-0.0002, -0.0004, -0.0018, 0.0002, 0.0, 0.00006, 0.00008]


def trading_days(n, start="2022-03-07"):
    days = np.arange(np.datetime64(start), np.datetime64(start) + 2 * n)
    days = days[np.is_busday(days)]
    return [str(d) for d in days[:n]]


def write(path, dates, names, cols):
    with open(path, "w") as fh:
        fh.write(",".join(["date", *names]) + "\n")
        for i, d in enumerate(dates):
            fh.write(",".join([d, *(repr(float(round(c[i], 10))) for c in cols)]) + "\n")


def main(out_dir):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(SEED)
    dates = trading_days(N_DAYS)

    bench = np.column_stack([rng.normal(m, s, N_DAYS) for m, s in zip(BENCH_DRIFT, BENCH_VOL)])
    write(out / "benchmarks.csv", dates, BENCHMARKS, bench.T)

    comps = []
    for i in range(5):
        beta = rng.normal(0.0, 0.4, len(BENCHMARKS)) * np.array([1, 1, 0.1, 1, 1, 1, 1])
        alpha = rng.normal(0.0, 0.0004)
        comps.append(alpha + bench @ beta + rng.normal(0.0, 0.006 + 0.002 * i, N_DAYS))
    write(out / "competitors.csv", dates, [f"team{i + 1:02d}" for i in range(5)], comps)

    market = bench[:, 0]
    assets = [rng.uniform(0.5, 1.5) * market + rng.normal(0.0002, 0.012, N_DAYS) for _ in range(20)]
    write(out / "universe.csv", dates, [f"asset{i + 1:02d}" for i in range(20)], assets)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "tests/fixtures/golden")
