"""Net-of-fee NAV paths: daily prorated management fee plus high-water-mark performance fee."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DegenerateError, InputError
from .series import NavSeries, TradingCalendar


@dataclass(frozen=True)
class FeeSchedule:
    mgmt_rate: float = 0.01
    perf_rate: float = 0.10
    periods_per_year: int = 252
    # "pre_perf": after a crystallization the HWM is the value before the performance fee
    # (a $100 -> $200 day nets to $190 with the HWM left at $200).
    # "net": the HWM is the post-fee NAV ($190 in that example).
    hwm_mode: Literal["pre_perf", "net"] = "pre_perf"

    def __post_init__(self):
        if not 0.0 <= self.mgmt_rate < 1.0:
            raise InputError(f"management rate {self.mgmt_rate} outside [0, 1)")
        if not 0.0 <= self.perf_rate < 1.0:
            raise InputError(f"performance rate {self.perf_rate} outside [0, 1)")
        if not self.periods_per_year > 0:
            raise InputError("periods_per_year must be positive")
        if self.hwm_mode not in ("pre_perf", "net"):
            raise InputError(f"unknown hwm_mode {self.hwm_mode!r}")


@dataclass(frozen=True, eq=False)
class FeeLedger:
    calendar: TradingCalendar
    mgmt_fee: np.ndarray
    perf_fee: np.ndarray
    high_water_mark: np.ndarray
    net: NavSeries
    gross: NavSeries

    @property
    def total_mgmt(self) -> float:
        return float(self.mgmt_fee.sum())

    @property
    def total_perf(self) -> float:
        return float(self.perf_fee.sum())


def apply_fees(gross: NavSeries, schedule: FeeSchedule = FeeSchedule()) -> FeeLedger:
    """Run the daily fee accrual over a gross NAV path.

    Each day: grow yesterday's net NAV by the gross return, take the management
    fee on the result, then charge the performance fee on any excess over the
    high-water mark. The HWM starts at the initial capital.
    """
    n = len(gross)
    mgmt = np.zeros(n)
    perf = np.zeros(n)
    hwm_path = np.zeros(n)
    net = np.zeros(n)

    daily_mgmt = schedule.mgmt_rate / schedule.periods_per_year
    # carried as net/gross so that zero rates reproduce the gross path bit for bit
    scale = 1.0
    hwm = float(gross.initial_capital)
    for t in range(n):
        g = float(gross.navs[t])
        value = g * scale
        fee = daily_mgmt * value
        value -= fee
        mgmt[t] = fee
        if value > hwm:
            pf = schedule.perf_rate * (value - hwm)
            hwm = value if schedule.hwm_mode == "pre_perf" else value - pf
            value -= pf
            perf[t] = pf
        if not value > 0:
            raise DegenerateError(f"fees exhausted NAV on {gross.calendar[t].isoformat()}")
        net[t] = value
        hwm_path[t] = hwm
        scale = value / g
    net_series = NavSeries(gross.name, gross.calendar, net, gross.initial_capital)
    for a in (mgmt, perf, hwm_path):
        a.setflags(write=False)
    return FeeLedger(gross.calendar, mgmt, perf, hwm_path, net_series, gross)
