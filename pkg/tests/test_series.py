import datetime as dt

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import daily_calendar, rs
from fundbench import (
    InputError,
    NavSeries,
    PeriodGrid,
    ReturnSeries,
    TradingCalendar,
    align_series,
    nav_from_returns,
    quantile_band,
    returns_from_prices,
)

returns_lists = st.lists(st.floats(-0.5, 0.5, allow_nan=False), min_size=1, max_size=60)


def test_calendar_rejects_duplicates_and_disorder():
    with pytest.raises(InputError, match="duplicate"):
        TradingCalendar(["2022-01-03", "2022-01-03"])
    with pytest.raises(InputError, match="out-of-order"):
        TradingCalendar(["2022-01-04", "2022-01-03"])


def test_returns_from_prices():
    r = returns_from_prices([100, 110, 99], ["2022-01-03", "2022-01-04", "2022-01-05"])
    np.testing.assert_allclose(r.returns, [0.10, -0.10], rtol=1e-15)
    assert r.calendar.dates == (dt.date(2022, 1, 4), dt.date(2022, 1, 5))


def test_returns_from_single_price_is_empty():
    assert len(returns_from_prices([50], ["2022-01-03"])) == 0


def test_returns_from_prices_rejects_non_positive():
    with pytest.raises(InputError, match="non-positive price on 2022-01-04"):
        returns_from_prices([100, 0, 10], ["2022-01-03", "2022-01-04", "2022-01-05"])


@pytest.mark.parametrize("returns, expected", [
    ([0.1, -0.1], [110.0, 99.0]),
    ([1.0], [200.0]),
])
def test_nav_from_returns(returns, expected):
    np.testing.assert_allclose(nav_from_returns(rs(returns), 100).navs, expected, rtol=1e-14)


def test_empty_nav_ends_at_capital():
    nav = nav_from_returns(rs([]), 100)
    assert len(nav) == 0 and nav.ending_nav == 100


def test_total_loss_rejected():
    with pytest.raises(InputError):
        rs([0.1, -1.0])
    with pytest.raises(InputError):
        nav_from_returns(rs([0.1]), 0.0)


def test_series_are_immutable():
    r = rs([0.1, 0.2])
    with pytest.raises(ValueError):
        r.returns[0] = 1.0


@given(returns_lists, st.floats(1.0, 1e6))
def test_price_nav_round_trip(values, capital):
    r = rs(values)
    nav = nav_from_returns(r, capital)
    back = returns_from_prices(np.concatenate(([capital], nav.navs)),
                               [r.calendar[0] - dt.timedelta(days=1), *r.calendar])
    np.testing.assert_allclose(back.returns, r.returns, rtol=0, atol=1e-12)


@given(returns_lists, st.randoms(use_true_random=False))
def test_ending_nav_permutation_invariant(values, random):
    shuffled = list(values)
    random.shuffle(shuffled)
    a = nav_from_returns(rs(values)).ending_nav
    b = nav_from_returns(rs(shuffled)).ending_nav
    assert b == pytest.approx(a, rel=1e-12)


def test_align_identical_calendars_unchanged():
    a, b = rs([0.1, 0.2], "a"), rs([0.3, 0.4], "b")
    out = align_series([a, b])
    assert out[0] is a and out[1] is b


def test_align_drops_not_compounds():
    full = ReturnSeries("crypto", daily_calendar(7), [0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07])
    weekdays = TradingCalendar(d for d in daily_calendar(7) if d.weekday() < 5)
    eq = ReturnSeries("eq", weekdays, np.zeros(len(weekdays)))
    crypto, eq2 = align_series([full, eq])
    assert crypto.calendar == eq2.calendar == weekdays
    kept = [r for d, r in zip(full.calendar, full.returns) if d.weekday() < 5]
    np.testing.assert_array_equal(crypto.returns, kept)


def test_align_disjoint_rejected():
    a = ReturnSeries("a", TradingCalendar(["2022-01-03"]), [0.1])
    b = ReturnSeries("b", TradingCalendar(["2022-01-04"]), [0.1])
    with pytest.raises(InputError, match="empty intersection"):
        align_series([a, b])


def _cohort(rows):
    cal = daily_calendar(len(rows[0]))
    return [NavSeries(f"c{i}", cal, r) for i, r in enumerate(rows)]


def test_quantile_band_median_and_extremes():
    cohort = _cohort([[1.0, 5.0], [2.0, 4.0], [3.0, 6.0]])
    np.testing.assert_array_equal(quantile_band(cohort, 0.5).values, [2.0, 5.0])
    np.testing.assert_array_equal(quantile_band(cohort, 0.0).values, [1.0, 4.0])
    np.testing.assert_array_equal(quantile_band(cohort, 1.0).values, [3.0, 6.0])


def test_quantile_band_rejects_mismatched_calendars():
    a = NavSeries("a", daily_calendar(2), [1.0, 2.0])
    b = NavSeries("b", daily_calendar(2, dt.date(2023, 1, 2)), [1.0, 2.0])
    with pytest.raises(InputError, match="mismatched"):
        quantile_band([a, b], 0.5)


nav_matrix = st.integers(1, 9).flatmap(lambda m: st.lists(
    st.lists(st.floats(1.0, 500.0), min_size=4, max_size=4), min_size=m, max_size=m))


@given(nav_matrix, st.floats(0, 1), st.floats(0, 1))
def test_quantile_bands_ordered(rows, q1, q2):
    q1, q2 = sorted((q1, q2))
    cohort = _cohort(rows)
    assert np.all(quantile_band(cohort, q1).values <= quantile_band(cohort, q2).values + 1e-12)


@given(nav_matrix.filter(lambda rows: len(rows) % 2 == 1))
def test_odd_median_is_member(rows):
    med = quantile_band(_cohort(rows), 0.5).values
    cols = np.array(rows).T
    assert all(m in col for m, col in zip(med, cols))


@settings(max_examples=50)
@given(st.lists(st.sets(st.integers(0, 20), min_size=1), min_size=1, max_size=4))
def test_aligned_calendars_identical(day_sets):
    base = dt.date(2022, 1, 1)
    series = [ReturnSeries(f"s{i}", TradingCalendar(base + dt.timedelta(d) for d in sorted(s)), np.zeros(len(s)))
              for i, s in enumerate(day_sets)]
    try:
        out = align_series(series)
    except InputError:
        assert not set.intersection(*day_sets)
        return
    assert len({s.calendar for s in out}) == 1
    assert len(out[0].calendar) == len(set.intersection(*day_sets))


def test_period_grid_slices_start_after_boundary():
    cal = TradingCalendar(["2022-03-04", "2022-03-07", "2022-03-08", "2022-04-04", "2022-04-05"])
    grid = PeriodGrid(("2022-03-06", "2022-04-03"))
    assert grid.slices(cal) == [slice(1, 3), slice(3, 5)]
    assert grid.period_end_dates(cal) == [dt.date(2022, 3, 8), dt.date(2022, 4, 5)]


def test_period_grid_empty_period_rejected():
    cal = TradingCalendar(["2022-03-07", "2022-03-08"])
    with pytest.raises(InputError, match="no trading days"):
        PeriodGrid(("2022-03-06", "2022-03-07", "2022-03-08")).slices(cal)
