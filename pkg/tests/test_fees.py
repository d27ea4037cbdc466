import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import navs, rs
from fundbench import FeeSchedule, InputError, apply_fees, nav_from_returns

return_paths = st.lists(st.floats(-0.2, 0.25, allow_nan=False), min_size=1, max_size=120)
rates = st.one_of(st.just(0.0), st.floats(1e-6, 0.5))


def test_doubling_day_charges_ten_dollars():
    ledger = apply_fees(navs([200.0]), FeeSchedule(mgmt_rate=0.0, perf_rate=0.10))
    assert ledger.net.navs[0] == pytest.approx(190.0, abs=1e-12)
    assert ledger.perf_fee[0] == pytest.approx(10.0, abs=1e-12)
    assert ledger.high_water_mark[0] == 200.0


def test_hwm_mode_net_keeps_post_fee_mark():
    ledger = apply_fees(navs([200.0]), FeeSchedule(0.0, 0.10, hwm_mode="net"))
    assert ledger.high_water_mark[0] == pytest.approx(190.0)


def test_no_perf_fee_until_new_high():
    # 100 -> 200 (fee) -> 150 -> 199 (still under the $200 mark) -> 220 (fee on 20 of gain, net path)
    ledger = apply_fees(navs([200.0, 150.0, 199.0, 220.0]), FeeSchedule(0.0, 0.10))
    assert ledger.perf_fee[1] == 0 and ledger.perf_fee[2] == 0
    net_before = ledger.net.navs[2]
    pre = net_before * 220.0 / 199.0
    assert pre < 220.0
    expected = 0.10 * max(pre - 200.0, 0.0)
    assert ledger.perf_fee[3] == pytest.approx(expected, rel=1e-12)


def test_zero_rates_are_identity():
    gross = nav_from_returns(rs([0.01, -0.03, 0.02, 0.07, -0.01]))
    ledger = apply_fees(gross, FeeSchedule(0.0, 0.0))
    assert np.array_equal(ledger.net.navs, gross.navs)
    assert ledger.total_mgmt == 0 and ledger.total_perf == 0


def test_flat_year_of_management_fees():
    gross = navs([100.0] * 252)
    ledger = apply_fees(gross, FeeSchedule(0.01, 0.0, 252))
    oracle = 100.0
    for _ in range(252):
        oracle -= oracle * 0.01 / 252
    assert ledger.net.ending_nav == pytest.approx(oracle, rel=1e-12)
    assert ledger.net.ending_nav == pytest.approx(99.005, abs=5e-4)


@pytest.mark.parametrize("kw", [dict(mgmt_rate=1.0), dict(perf_rate=-0.1), dict(hwm_mode="other")])
def test_schedule_validation(kw):
    with pytest.raises(InputError):
        FeeSchedule(**kw)


@given(return_paths, rates)
def test_management_only_closed_form(values, m):
    gross = nav_from_returns(rs(values))
    ledger = apply_fees(gross, FeeSchedule(m, 0.0, 252))
    t = np.arange(1, len(values) + 1)
    np.testing.assert_allclose(ledger.net.navs, gross.navs * (1 - m / 252) ** t, rtol=1e-12)


@given(return_paths, rates, rates)
def test_net_below_gross(values, m, p):
    gross = nav_from_returns(rs(values))
    net = apply_fees(gross, FeeSchedule(m, p)).net.navs
    assert np.all(net <= gross.navs * (1 + 1e-15))
    if m > 0:
        assert np.all(net < gross.navs)


@given(return_paths, rates, rates)
def test_ledger_invariants(values, m, p):
    ledger = apply_fees(nav_from_returns(rs(values)), FeeSchedule(m, p))
    assert np.all(ledger.mgmt_fee >= 0) and np.all(ledger.perf_fee >= 0)
    hwm = np.concatenate(([100.0], ledger.high_water_mark))
    assert np.all(np.diff(hwm) >= 0)
    # the fee charged on any stretch is bounded by the rate times the rise of the mark
    cum = np.concatenate(([0.0], np.cumsum(ledger.perf_fee)))
    for a in range(0, len(values), max(1, len(values) // 7)):
        for b in range(a + 1, len(values) + 1, max(1, len(values) // 5)):
            assert cum[b] - cum[a] <= p * (hwm[b] - hwm[a]) * (1 + 1e-9) + 1e-12
    # a fee is only charged on days where the mark moved
    charged = ledger.perf_fee > 0
    assert np.all(np.diff(hwm)[charged] > 0)
