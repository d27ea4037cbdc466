"""Report tables and plot-data files for each command.

Numbers are written with 6 significant digits; every file carries the run's
config hash and seed so outputs can be traced back to their inputs.
"""
from __future__ import annotations

import dataclasses
import datetime as dt
import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from .errors import InputError, InsufficientDataError
from .factors import FactorPanel, check_panel, cohort_fit
from .fees import FeeSchedule, apply_fees
from .fof import fof_backtest, member_curves
from .ingest import Dataset
from .metrics import SUMMARY_STATS, AnnualizationConfig, cohort_summary, metrics_report
from .montecarlo import SimulationConfig, simulate_cohort
from .series import COMPETITION_REBALANCE_DATES, PeriodGrid, nav_from_returns, quantile_band

COMMANDS = ("metrics", "navs", "fees", "alpha", "simulate", "fof")


@dataclass(frozen=True)
class RunConfig:
    n_star: int = 252
    sd_mode: str = "sample"
    alpha_days: int = 238
    mgmt: float = 0.01
    perf: float = 0.10
    hwm_mode: str = "pre_perf"
    sims: int = 10_000
    seed: int = 0
    k: int = 10
    mc_mode: str = "buy_and_hold"
    bh_level: float = 0.05
    bh_mode: str = "stepup"
    factors: tuple[str, ...] = ()  # benchmark names used as factors; empty means all
    rebalance_dates: tuple[dt.date, ...] = COMPETITION_REBALANCE_DATES
    quantiles: tuple[float, ...] = (0.05, 0.50, 0.95)
    initial_capital: float = 100.0
    hist_width: float = 5.0
    kde_points: int = 101
    workers: int = 1
    format: str = "csv"
    out_dir: str = "out"

    def __post_init__(self):
        if self.format not in ("csv", "json"):
            raise InputError(f"unknown output format {self.format!r}")
        if self.alpha_days <= 0 or self.n_star <= 0:
            raise InputError("alpha_days and n_star must be positive")
        if not 0 < self.bh_level <= 1:
            raise InputError("bh_level must lie in (0, 1]")
        if self.sims < 1 or self.k < 1:
            raise InputError("sims and k must be at least 1")
        if self.hist_width <= 0 or self.kde_points < 2:
            raise InputError("hist_width must be positive and kde_points at least 2")
        if any(not 0 <= q <= 1 for q in self.quantiles):
            raise InputError("quantiles must lie in [0, 1]")
        AnnualizationConfig(self.n_star, self.sd_mode)
        FeeSchedule(self.mgmt, self.perf, self.n_star, self.hwm_mode)

    @property
    def annualization(self) -> AnnualizationConfig:
        return AnnualizationConfig(self.n_star, self.sd_mode)

    @property
    def fee_schedule(self) -> FeeSchedule:
        return FeeSchedule(self.mgmt, self.perf, self.n_star, self.hwm_mode)

    def canonical(self) -> dict[str, Any]:
        """Parameters that influence results (output location and parallelism excluded)."""
        d = dataclasses.asdict(self)
        for k in ("out_dir", "format", "workers"):
            d.pop(k)
        d["rebalance_dates"] = [x.isoformat() for x in self.rebalance_dates]
        d["factors"] = list(self.factors)
        d["quantiles"] = list(self.quantiles)
        return d


def config_hash(cfg: RunConfig, data: Dataset) -> str:
    h = hashlib.sha256(json.dumps(cfg.canonical(), sort_keys=True).encode())
    h.update(data.digest().encode())
    return h.hexdigest()[:16]


# ---------------------------------------------------------------------------
# formatting and writers


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        s = f"{v:.6g}"
        return "0" if s == "-0" else s
    if isinstance(v, dt.date):
        return v.isoformat()
    return str(v)


def _json_value(v):
    if v is None or isinstance(v, (bool, np.bool_)):
        return None if v is None else bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return None if math.isnan(v) else float(fmt(v))
    return fmt(v)


@dataclass
class Writer:
    out_dir: Path
    format: str
    provenance: dict[str, Any]
    written: list[Path] = field(default_factory=list)

    def _header_line(self) -> str:
        return "# " + " ".join(f"{k}={self.provenance[k]}" for k in sorted(self.provenance))

    def table(self, name: str, columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        if self.format == "json":
            path = self.out_dir / f"{name}.json"
            doc = {
                "provenance": self.provenance,
                "columns": list(columns),
                "rows": [dict(zip(columns, (_json_value(v) for v in row))) for row in rows],
            }
            text = json.dumps(doc, indent=2) + "\n"
        else:
            path = self.out_dir / f"{name}.csv"
            lines = [self._header_line(), ",".join(columns)]
            lines += [",".join(_csv_cell(fmt(v)) for v in row) for row in rows]
            text = "\n".join(lines) + "\n"
        path.write_text(text)
        self.written.append(path)
        return path

    def keyvalue(self, name: str, items: Mapping[str, Any]) -> Path:
        return self.table(name, ["key", "value"], list(items.items()))

    def plot(self, figure_id: str, payload) -> None:
        self.written.extend(emit_plot_data(figure_id, payload, self.out_dir, self.provenance))


def _csv_cell(s: str) -> str:
    return f'"{s}"' if ("," in s or '"' in s) else s


# ---------------------------------------------------------------------------
# plot data


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    counts: np.ndarray
    title: str = ""
    value_label: str = "value"


@dataclass(frozen=True)
class Curves:
    x_name: str
    x: Sequence[Any]
    columns: Mapping[str, Sequence[Any]]
    title: str = ""
    notes: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class Scatter:
    ids: Sequence[str]
    columns: Mapping[str, Sequence[Any]]
    title: str = ""


FIGURE_KINDS = {
    "fig1": Histogram, "fig2": Curves, "fig3": Curves, "fig4": Curves, "fig5": Curves,
    "fig6": Scatter, "fig7": Curves, "fig8": Curves, "fig9": Curves,
}


def emit_plot_data(figure_id: str, payload, out_dir, provenance: Mapping[str, Any] | None = None) -> tuple[Path, Path]:
    """Write ``<figure_id>.dat`` (tab-delimited, header row) and a ``.legend`` sidecar."""
    kind = FIGURE_KINDS.get(figure_id)
    if kind is None:
        raise InputError(f"unknown figure id {figure_id!r}")
    if not isinstance(payload, kind):
        raise InputError(f"{figure_id} expects {kind.__name__} data, got {type(payload).__name__}")
    out_dir = Path(out_dir)
    prov = " ".join(f"{k}={v}" for k, v in sorted((provenance or {}).items()))

    if isinstance(payload, Histogram):
        if len(payload.counts) == 0:
            raise InputError(f"{figure_id}: no data")
        if len(payload.edges) != len(payload.counts) + 1:
            raise InputError(f"{figure_id}: histogram needs one more edge than counts")
        header = ["bin_left", "count"]
        rows = [[payload.edges[i], int(payload.counts[i])] for i in range(len(payload.counts))]
        legend = [payload.title, f"bin_left: left edge of a [left, left + width) bin of {payload.value_label}",
                  f"bin width: {fmt(float(payload.edges[1] - payload.edges[0]))}", "count: observations in the bin"]
    elif isinstance(payload, Curves):
        n = len(payload.x)
        if n == 0 or not payload.columns:
            raise InputError(f"{figure_id}: no data")
        for name, col in payload.columns.items():
            if len(col) != n:
                raise InputError(f"{figure_id}: column {name!r} has {len(col)} values, x has {n}")
        header = [payload.x_name, *payload.columns]
        cols = list(payload.columns.values())
        rows = [[payload.x[i], *(c[i] for c in cols)] for i in range(n)]
        legend = [payload.title, f"{payload.x_name}: x axis"]
        legend += [f"{k}: {payload.notes.get(k, 'curve')}" for k in payload.columns]
    else:
        n = len(payload.ids)
        if n == 0:
            raise InputError(f"{figure_id}: no data")
        for name, col in payload.columns.items():
            if len(col) != n:
                raise InputError(f"{figure_id}: column {name!r} has {len(col)} values for {n} points")
        header = ["id", *payload.columns]
        cols = list(payload.columns.values())
        rows = [[payload.ids[i], *(c[i] for c in cols)] for i in range(n)]
        legend = [payload.title, "id: point label"] + [f"{k}: value per point" for k in payload.columns]

    out_dir.mkdir(parents=True, exist_ok=True)
    dat = out_dir / f"{figure_id}.dat"
    leg = out_dir / f"{figure_id}.legend"
    lines = ([f"# {prov}"] if prov else []) + ["\t".join(header)]
    lines += ["\t".join(fmt(v) for v in row) for row in rows]
    dat.write_text("\n".join(lines) + "\n")
    leg.write_text("\n".join(([f"# {prov}"] if prov else []) + legend) + "\n")
    return dat, leg


def histogram(values: Sequence[float], width: float, title: str = "", label: str = "value") -> Histogram:
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise InputError("histogram of no data")
    lo = math.floor(v.min() / width)
    hi = math.floor(v.max() / width) + 1
    idx = np.floor(v / width).astype(int) - lo
    counts = np.bincount(idx, minlength=hi - lo)
    return Histogram(np.arange(lo, hi + 1) * width, counts, title, label)


def gaussian_kde(values: Sequence[float], grid: np.ndarray) -> np.ndarray:
    """Gaussian kernel density with Silverman's rule-of-thumb bandwidth."""
    v = np.asarray(values, dtype=float)
    v = v[np.isfinite(v)]
    if v.size < 2:
        return np.full(grid.shape, np.nan)
    sd = float(np.std(v, ddof=1))
    iqr = float(np.subtract(*np.quantile(v, [0.75, 0.25])))
    spread = min(sd, iqr / 1.349) if iqr > 0 else sd
    if spread <= 0:
        return np.full(grid.shape, np.nan)
    bw = 0.9 * spread * v.size ** -0.2
    z = (grid[:, None] - v[None, :]) / bw
    return np.exp(-0.5 * z * z).sum(axis=1) / (v.size * bw * math.sqrt(2 * math.pi))


# ---------------------------------------------------------------------------
# commands


def _require(data: Dataset, command: str, *groups: str) -> None:
    missing = [g for g in groups if not getattr(data, g)]
    if missing:
        raise InsufficientDataError(f"`{command}` needs: " + ", ".join(missing))


def _metric_rows(reports):
    cols = ["name", "sr", "mdd", "autocorr_lag1", "vol_up", "vol_down", "cr", "ui", "upi",
            "ann_return", "ann_sd", "ending_nav", "absent"]
    rows = [[r.name, r.sr, r.mdd, r.autocorr, r.vol_up, r.vol_down, r.cr, r.ui, r.upi,
             r.ann_return, r.ann_sd, r.ending_nav, "; ".join(f"{k}: {v}" for k, v in sorted(r.absent.items()))]
            for r in reports]
    return cols, rows


def _summary_rows(summary):
    cols = ["metric", *SUMMARY_STATS, "n", "n_ignored"]
    rows = [[k, *(getattr(s, st) for st in SUMMARY_STATS), s.n, s.n_ignored] for k, s in summary.items()]
    return cols, rows


def _by_sr(report):
    return (report.sr is None, report.sr if report.sr is not None else 0.0, report.name)


def cmd_metrics(data: Dataset, cfg: RunConfig, w: Writer) -> None:
    if not data.competitors and not data.benchmarks:
        raise InsufficientDataError("`metrics` needs: competitors or benchmarks")
    ann = cfg.annualization
    if data.benchmarks:
        reps = sorted((metrics_report(s, cfg.initial_capital, ann) for s in data.benchmarks), key=_by_sr)
        w.table("metrics_benchmarks", *_metric_rows(reps))
    if data.competitors:
        reps = [metrics_report(s, cfg.initial_capital, ann) for s in data.competitors]
        w.table("metrics_competitors", *_metric_rows(reps))
        w.table("metrics_summary", *_summary_rows(cohort_summary(
            reps, ("sr", "mdd", "cr", "vol_up", "vol_down", "upi", "ui", "autocorr", "ending_nav"))))


def cmd_navs(data: Dataset, cfg: RunConfig, w: Writer) -> None:
    _require(data, "navs", "competitors")
    comp = [nav_from_returns(s, cfg.initial_capital) for s in data.competitors]
    bench = [nav_from_returns(s, cfg.initial_capital) for s in data.benchmarks]
    ending = np.array([n.ending_nav for n in comp])
    w.plot("fig1", histogram(ending, cfg.hist_width, "Ending NAV of competitors", "ending NAV"))

    bands = {q: quantile_band(comp, q) for q in cfg.quantiles}
    columns: dict[str, Any] = {n.name: n.navs for n in comp}
    columns.update({f"bench:{n.name}": n.navs for n in bench})
    columns.update({f"q{round(q * 100):02d}": b.values for q, b in bands.items()})
    notes = {k: "competitor NAV" for k in (n.name for n in comp)}
    notes.update({f"bench:{n.name}": "benchmark NAV" for n in bench})
    notes.update({f"q{round(q * 100):02d}": f"cross-sectional {q:g} quantile of competitor NAVs" for q in cfg.quantiles})
    w.plot("fig2", Curves("date", list(data.calendar), columns, "Daily NAVs and competitor quantiles", notes))

    cap = cfg.initial_capital
    items: dict[str, Any] = {
        "competitors": len(comp),
        "ending_below_80pct_capital": int(np.sum(ending < 0.8 * cap)),
        "ending_above_120pct_capital": int(np.sum(ending > 1.2 * cap)),
        "ending_above_capital": int(np.sum(ending > cap)),
    }
    lo, hi = min(cfg.quantiles), max(cfg.quantiles)
    items[f"ending_outside_q{round(lo * 100):02d}_q{round(hi * 100):02d}"] = int(
        np.sum((ending < bands[lo].values[-1]) | (ending > bands[hi].values[-1])))
    for n in bench:
        items[f"ending_below:{n.name}"] = int(np.sum(ending < n.ending_nav))
        items[f"ending_nav:{n.name}"] = n.ending_nav
    w.keyvalue("navs_summary", items)


def cmd_fees(data: Dataset, cfg: RunConfig, w: Writer) -> None:
    _require(data, "fees", "competitors")
    sched, ann = cfg.fee_schedule, cfg.annualization
    rows, gross_navs, net_navs, gross_rep, net_rep = [], [], [], [], []
    for s in data.competitors:
        g = nav_from_returns(s, cfg.initial_capital)
        ledger = apply_fees(g, sched)
        rg = metrics_report(s, cfg.initial_capital, ann)
        rn = metrics_report(ledger.net.to_returns(), cfg.initial_capital, ann)
        gross_navs.append(g)
        net_navs.append(ledger.net)
        gross_rep.append(rg)
        net_rep.append(rn)
        rows.append([s.name, g.ending_nav, ledger.net.ending_nav, ledger.total_mgmt, ledger.total_perf,
                     float(ledger.high_water_mark[-1]), rg.sr, rn.sr, rg.mdd, rn.mdd])
    w.table("fees_competitors", ["name", "ending_gross", "ending_net", "mgmt_fees", "perf_fees", "final_hwm",
                                 "sr_gross", "sr_net", "mdd_gross", "mdd_net"], rows)
    sg = cohort_summary(gross_rep, ("sr", "mdd", "ending_nav"))
    sn = cohort_summary(net_rep, ("sr", "mdd", "ending_nav"))
    w.keyvalue("fees_summary", {
        "mgmt_rate": cfg.mgmt, "perf_rate": cfg.perf, "hwm_mode": cfg.hwm_mode,
        "median_sr_gross": sg["sr"].median, "median_sr_net": sn["sr"].median,
        "median_mdd_gross": sg["mdd"].median, "median_mdd_net": sn["mdd"].median,
        "median_ending_gross": sg["ending_nav"].median, "median_ending_net": sn["ending_nav"].median,
    })
    columns, notes = {}, {}
    for label, navs in (("gross", gross_navs), ("net", net_navs)):
        for q in cfg.quantiles:
            key = f"{label}_q{round(q * 100):02d}"
            columns[key] = quantile_band(navs, q).values
            notes[key] = f"{q:g} quantile of competitor NAVs {'before' if label == 'gross' else 'after'} fees"
    w.plot("fig3", Curves("date", list(data.calendar), columns, "NAV quantiles before and after fees", notes))


def cmd_alpha(data: Dataset, cfg: RunConfig, w: Writer) -> None:
    _require(data, "alpha", "competitors", "benchmarks")
    names = cfg.factors or tuple(s.name for s in data.benchmarks)
    bench = {s.name: s for s in data.benchmarks}
    unknown = [n for n in names if n not in bench]
    if unknown:
        raise InputError("unknown factor name(s): " + ", ".join(unknown))
    panel = FactorPanel.from_series([bench[n] for n in names], data.risk_free)
    check_panel(panel)
    cf = cohort_fit(data.competitors, panel, cfg.alpha_days, cfg.bh_level, cfg.bh_mode)

    adj = {}
    if cf.bh is not None:
        adj = {k: (cf.bh.adjusted_p[i], bool(cf.bh.significant[i])) for i, k in enumerate(cf.bh_names)}
    cols = ["name", "alpha_daily", "alpha_annualized", "ar_annualized", "ar_annualized_returns_sd", "t_stat",
            "p_value", "bh_adjusted_p", "significant_raw", "significant_bh", "resid_sd", "alpha_se", "dof",
            "degenerate", *(f"beta:{n}" for n in panel.names), "failure"]
    rows = []
    for s in data.competitors:
        f = cf.fits.get(s.name)
        if f is None:
            rows.append([s.name] + [None] * (len(cols) - 2) + [cf.failures[s.name]])
            continue
        a, sig = adj.get(s.name, (None, None))
        raw_sig = None if f.p_value is None else f.p_value <= cfg.bh_level
        rows.append([s.name, f.alpha, f.alpha_annualized, f.ar_annualized, f.ar_annualized_returns_sd, f.t_stat,
                     f.p_value, a, raw_sig, sig, f.resid_sd, f.alpha_se, f.dof, f.degenerate,
                     *(f.betas[n] for n in panel.names), ""])
    w.table("alpha_fits", cols, rows)
    w.table("alpha_summary", *_summary_rows(cf.table))

    others = [s for s in data.benchmarks if s.name not in names]
    if others:
        ob = cohort_fit(others, panel, cfg.alpha_days, cfg.bh_level, cfg.bh_mode)
        w.table("alpha_benchmarks", ["name", "alpha_annualized", "ar_annualized", "t_stat", "p_value", "failure"], [
            [s.name, *((ob.fits[s.name].alpha_annualized, ob.fits[s.name].ar_annualized, ob.fits[s.name].t_stat,
                        ob.fits[s.name].p_value, "") if s.name in ob.fits else (None,) * 4 + (ob.failures[s.name],))]
            for s in others])

    w.keyvalue("alpha_counts", {
        "cohort_size": cf.cohort_size, "fitted": len(cf.fits), "failures": len(cf.failures),
        "degenerate": cf.n_degenerate, "positive_alpha": cf.n_positive, "negative_alpha": cf.n_negative,
        "significant_raw_positive": cf.n_sig_raw_positive, "significant_raw_negative": cf.n_sig_raw_negative,
        "significant_bh_positive": cf.n_sig_bh_positive, "significant_bh_negative": cf.n_sig_bh_negative,
        "level": cfg.bh_level, "bonferroni_cutoff": cfg.bh_level / max(len(cf.bh_names), 1),
        "ad_a2": cf.ad.a2 if cf.ad else None, "ad_a2_star": cf.ad.a2_star if cf.ad else None,
        "ad_p_value": cf.ad.p_value if cf.ad else None,
        "factors": ";".join(panel.names), "trading_days": cfg.alpha_days,
    })
    if cf.bh is not None:
        order = np.argsort(cf.bh.rank)
        w.plot("fig4", Curves(
            "rank", list(range(1, cf.bh.m + 1)),
            {"raw_p": cf.bh.raw_p[order], "adjusted_p": cf.bh.adjusted_p[order], "cutoff": cf.bh.cutoff,
             "name": [cf.bh_names[i] for i in order]},
            "Alpha p-values ranked, with BH adjustment",
            {"raw_p": "raw two-sided alpha p-value", "adjusted_p": "BH-adjusted p-value",
             "cutoff": "step-up line rank * level / m", "name": "portfolio at this rank"}))


def cmd_simulate(data: Dataset, cfg: RunConfig, w: Writer) -> None:
    _require(data, "simulate", "universe")
    sim_cfg = SimulationConfig(data.universe, cfg.k, cfg.rebalance_dates, cfg.sims, cfg.seed, cfg.mc_mode,
                               cfg.initial_capital, cfg.annualization)
    cohort = simulate_cohort(sim_cfg, cfg.workers)
    w.table("simulate_summary", *_summary_rows(cohort.summary))
    sr = np.array([np.nan if r.sr is None else r.sr for r in cohort.reports])
    mdd = np.array([r.mdd for r in cohort.reports])
    w.keyvalue("simulate_stats", {
        "num_sims": cfg.sims, "k": cfg.k, "mode": cfg.mc_mode, "master_seed": cfg.seed,
        "simulation_config_hash": cohort.provenance["config_hash"][:16],
        "max_mdd": float(mdd.max()), "median_sr": float(np.nanmedian(sr)),
        "share_positive_sr": float(np.mean(sr > 0)), "mean_ending_nav": float(cohort.navs[:, -1].mean()),
        "first_day": cohort.calendar[0], "last_day": cohort.calendar[-1],
    })

    comp_reps = [metrics_report(s, cfg.initial_capital, cfg.annualization) for s in data.competitors]
    csr = [r.sr for r in comp_reps if r.sr is not None]
    cmdd = [r.mdd for r in comp_reps]
    columns, notes = {}, {}
    for metric, sim_vals, comp_vals in (("sr", sr, csr), ("mdd", mdd, cmdd)):
        pool = np.concatenate([sim_vals[np.isfinite(sim_vals)], np.asarray(comp_vals, dtype=float)])
        lo, hi = float(pool.min()), float(pool.max())
        pad = 0.1 * (hi - lo) if hi > lo else 1.0
        grid = np.linspace(lo - pad, hi + pad, cfg.kde_points)
        columns[f"{metric}_x"] = grid
        columns[f"{metric}_density_random"] = gaussian_kde(sim_vals, grid)
        notes[f"{metric}_x"] = f"{metric.upper()} grid"
        notes[f"{metric}_density_random"] = f"kernel density of random-portfolio {metric.upper()}"
        if comp_vals:
            columns[f"{metric}_density_competitors"] = gaussian_kde(comp_vals, grid)
            notes[f"{metric}_density_competitors"] = f"kernel density of competitor {metric.upper()}"
    w.plot("fig5", Curves("point", list(range(cfg.kde_points)), columns,
                                  "Density of SR and MDD: random portfolios vs competitors", notes))

    ids = [f"sim{i:05d}" for i in range(cfg.sims)] + [f"competitor:{r.name}" for r in comp_reps]
    w.plot("fig6", Scatter(ids, {"sr": list(sr) + [r.sr for r in comp_reps],
                                         "mdd": list(mdd) + cmdd}, "SR vs MDD"))

    columns, notes = {}, {}
    for label, q in (("min", 0.0), *((f"q{round(q * 100):02d}", q) for q in cfg.quantiles), ("max", 1.0)):
        columns[f"random_{label}"] = np.quantile(cohort.navs, q, axis=0)
        notes[f"random_{label}"] = f"{q:g} quantile of random-portfolio NAVs"
    idx = [data.calendar.index_of(d) for d in cohort.calendar]
    if data.competitors:
        comp_navs = np.vstack([nav_from_returns(s, cfg.initial_capital).navs[idx] for s in data.competitors])
        for q in cfg.quantiles:
            key = f"competitors_q{round(q * 100):02d}"
            columns[key] = np.quantile(comp_navs, q, axis=0)
            notes[key] = f"{q:g} quantile of competitor NAVs (from the first competition day)"
    for s in data.benchmarks:
        columns[f"bench:{s.name}"] = nav_from_returns(s, cfg.initial_capital).navs[idx]
        notes[f"bench:{s.name}"] = "benchmark NAV (from the first competition day)"
    w.plot("fig7", Curves("date", list(cohort.calendar), columns,
                                  "Random-portfolio NAV bands, benchmarks and competitor quantiles", notes))


def cmd_fof(data: Dataset, cfg: RunConfig, w: Writer) -> None:
    _require(data, "fof", "competitors")
    grid = PeriodGrid(cfg.rebalance_dates)
    rows, totals = [], []
    for selector, fig in (("top", "fig8"), ("bottom", "fig9")):
        bt = fof_backtest(data.competitors, grid, selector, cfg.k, cfg.initial_capital)
        totals.append([selector, cfg.k, bt.total_return, bt.nav.ending_nav])
        for i, team in enumerate(bt.teams):
            rows.append([selector, i + 2, bt.period_start_dates[i], bt.nav.calendar[i], bt.period_rets[i],
                         bt.nav.navs[i], ";".join(team)])
        mc = member_curves(data.competitors, grid, bt, cfg.initial_capital)
        columns = {"strategy": mc.strategy, "team_average": mc.team_average, **mc.curves}
        notes = {"strategy": "strategy NAV, compounding across periods",
                 "team_average": "average of the member curves (each restarts each period)"}
        notes.update({k: "member NAV restarting at initial capital for its period" for k in mc.curves})
        title = "Superstars (top-k of prior period)" if selector == "top" else "Superlosers (bottom-k of prior period)"
        w.plot(fig, Curves("date", list(mc.calendar), columns, title, notes))
    w.table("fof_periods", ["selector", "period", "start_date", "end_date", "period_return", "nav", "team"], rows)
    w.table("fof_totals", ["selector", "k", "total_return", "ending_nav"], totals)


HANDLERS: dict[str, Callable[[Dataset, RunConfig, Writer], None]] = {
    "metrics": cmd_metrics, "navs": cmd_navs, "fees": cmd_fees,
    "alpha": cmd_alpha, "simulate": cmd_simulate, "fof": cmd_fof,
}


def run_report(data: Dataset, cfg: RunConfig, command: str) -> list[Path]:
    """Run one command (or ``all``) and return the files written."""
    if command == "all":
        commands = [c for c in COMMANDS if _feasible(data, c)]
        if not commands:
            raise InsufficientDataError("dataset supports no command")
    elif command in HANDLERS:
        commands = [command]
    else:
        raise InputError(f"unknown command {command!r}")
    out = Path(cfg.out_dir)
    w = Writer(out, cfg.format, {"config_hash": config_hash(cfg, data), "seed": cfg.seed})
    for c in commands:
        HANDLERS[c](data, cfg, w)
    return list(w.written)


def _feasible(data: Dataset, command: str) -> bool:
    need = {"metrics": data.competitors or data.benchmarks, "navs": data.competitors,
            "fees": data.competitors, "alpha": data.competitors and data.benchmarks,
            "simulate": data.universe, "fof": data.competitors}
    return bool(need[command])
