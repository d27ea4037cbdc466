import datetime as dt

import numpy as np
import pytest

from fundbench import NavSeries, ReturnSeries, TradingCalendar


def business_days(n, start="2022-03-07"):
    days = np.arange(np.datetime64(start), np.datetime64(start) + 2 * n + 7)
    days = days[np.is_busday(days)][:n]
    return TradingCalendar(str(d) for d in days)


def daily_calendar(n, start=dt.date(2022, 1, 3)):
    return TradingCalendar(start + dt.timedelta(days=i) for i in range(n))


def rs(values, name="x", calendar=None):
    values = list(values)
    cal = calendar if calendar is not None else daily_calendar(len(values))
    return ReturnSeries(name, cal, values)


def navs(values, name="p", capital=100.0):
    values = list(values)
    return NavSeries(name, daily_calendar(len(values)), values, capital)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and (report.when == "call" or report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        if report.skipped:
            _acceptance[name] = "SKIP"
        elif report.failed:
            _acceptance[name] = "FAIL"
        else:
            _acceptance.setdefault(name, "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        terminalreporter.write_line(f"{_acceptance[name]:4s}  {name}")
