import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import business_days, rs
from fundbench import InputError, PeriodGrid, fof_backtest, member_curves, period_returns, select_team

GRID = PeriodGrid(("2022-03-06", "2022-03-20", "2022-04-10", "2022-05-01", "2022-05-22"))
N = 70


def cohort(matrix, prefix="c"):
    cal = business_days(len(matrix[0]))
    return [rs(row, f"{prefix}{i:02d}", cal) for i, row in enumerate(matrix)]


def random_cohort(m, seed=0, n=N):
    return cohort(np.random.default_rng(seed).normal(0.0002, 0.02, (m, n)))


def test_period_return_compounds():
    grid = PeriodGrid(("2022-03-06",))
    assert period_returns(rs([0.1, 0.1], calendar=business_days(2)), grid)[0] == pytest.approx(0.21, rel=1e-15)
    assert np.all(period_returns(rs([0.0] * N, calendar=business_days(N)), GRID) == 0)


def test_full_grid_compounding_matches_whole_span():
    r = rs(np.random.default_rng(3).normal(0, 0.01, 238), calendar=business_days(238))
    p = period_returns(r, PeriodGrid())
    assert len(p) == 12
    assert np.prod(1 + p) - 1 == pytest.approx(np.prod(1 + r.returns) - 1, rel=1e-12)


def test_select_team_dominance_and_mirror():
    rets = {"a": [0.10, 0], "b": [0.0, 0], "c": [-0.10, 0]}
    assert select_team(rets, 2, "top", 1) == ("a",)
    assert select_team(rets, 2, "bottom", 1) == ("c",)


def test_select_team_ties_by_id():
    rets = {"z": [0.05], "m": [0.05], "a": [0.05]}
    assert select_team(rets, 2, "top", 2) == ("a", "m")
    assert select_team(rets, 2, "bottom", 2) == ("a", "m")


def test_select_team_preconditions():
    rets = {"a": [0.1, 0.2], "b": [0.0, 0.1]}
    with pytest.raises(InputError, match="no prior period"):
        select_team(rets, 1, "top", 1)
    with pytest.raises(InputError):
        select_team(rets, 2, "top", 3)


@given(st.dictionaries(st.text("abcdef", min_size=1, max_size=3),
                       st.floats(-0.5, 0.5, allow_nan=False), min_size=2, max_size=12, ).filter(
    lambda d: len(set(d.values())) == len(d)), st.data())
def test_negation_swaps_top_and_bottom(prior, data):
    k = data.draw(st.integers(1, len(prior)))
    pos = {n: [v] for n, v in prior.items()}
    neg = {n: [-v] for n, v in prior.items()}
    assert set(select_team(pos, 2, "top", k)) == set(select_team(neg, 2, "bottom", k))


def test_dominant_competitor_is_followed():
    rng = np.random.default_rng(1)
    others = rng.normal(0, 0.01, (4, N))
    star = np.abs(others).max(axis=0) + 0.001  # beats everyone every day
    co = cohort(np.vstack([others, star]))
    bt = fof_backtest(co, GRID, "top", 1)
    assert all(team == ("c04",) for team in bt.teams)
    first = GRID.slices(co[0].calendar)[1].start
    oracle = 100 * np.prod(1 + star[first:])
    assert bt.nav.ending_nav == pytest.approx(oracle, rel=1e-12)


def test_k_equals_cohort_size_makes_strategies_equal():
    co = random_cohort(6, seed=2)
    top, bottom = fof_backtest(co, GRID, "top", 6), fof_backtest(co, GRID, "bottom", 6)
    assert np.array_equal(top.nav.navs, bottom.nav.navs)


def test_first_period_not_invested():
    bt = fof_backtest(random_cohort(5), GRID, "top", 2)
    assert len(bt.teams) == len(bt.period_rets) == len(GRID) - 1
    assert len(bt.nav) == len(GRID) - 1
    assert bt.total_return == pytest.approx(np.prod(1 + bt.period_rets) - 1, rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 9), st.sampled_from(["top", "bottom"]))
def test_period_return_is_convex_combination(seed, m, selector):
    co = random_cohort(m, seed)
    k = int(np.random.default_rng(seed).integers(1, m + 1))
    bt = fof_backtest(co, GRID, selector, k)
    P = np.array([period_returns(s, GRID) for s in co])
    for p, ret in enumerate(bt.period_rets, start=1):
        assert P[:, p].min() - 1e-15 <= ret <= P[:, p].max() + 1e-15


def test_relabeling_invariance():
    co = random_cohort(7, seed=4)
    bt = fof_backtest(co, GRID, "top", 3)
    relabeled = [rs(s.returns, f"x{6 - i:02d}", s.calendar) for i, s in enumerate(co)]
    bt2 = fof_backtest(relabeled, GRID, "top", 3)
    mapping = {s.name: f"x{6 - i:02d}" for i, s in enumerate(co)}
    assert [set(mapping[n] for n in t) for t in bt.teams] == [set(t) for t in bt2.teams]
    assert np.array_equal(bt.nav.navs, bt2.nav.navs)


def test_member_curves_restart_while_strategy_compounds():
    co = random_cohort(5, seed=6)
    bt = fof_backtest(co, GRID, "top", 2)
    mc = member_curves(co, GRID, bt)
    slices = GRID.slices(co[0].calendar)[1:]
    off = slices[0].start
    names = {s.name: s for s in co}
    for p, (sl, team) in enumerate(zip(slices, bt.teams), start=2):
        window = slice(sl.start - off, sl.stop - off)
        for name in team:
            expected = 100 * np.cumprod(1 + names[name].returns[sl])
            np.testing.assert_allclose(mc.curves[f"p{p:02d}:{name}"][window], expected, rtol=1e-14)
    period_ends = [mc.strategy[sl.stop - off - 1] for sl in slices]
    np.testing.assert_allclose(period_ends, bt.nav.navs, rtol=1e-12)


def test_mismatched_calendars_rejected():
    a = rs([0.01] * N, "a", business_days(N))
    b = rs([0.01] * N, "b", business_days(N, "2022-03-08"))
    with pytest.raises(InputError):
        fof_backtest([a, b], GRID, "top", 1)
