import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import business_days, rs
from fundbench import DegenerateError, FactorPanel, InputError, cohort_fit, ols_fit
from fundbench.factors import alpha_inference, annualize


def panel(f, names=None, rf=None):
    f = np.asarray(f, dtype=float)
    if f.ndim == 1:
        f = f[:, None]
    names = names or tuple(f"f{j}" for j in range(f.shape[1]))
    return FactorPanel(business_days(len(f)), names, f, rf)


def port(y, name="y"):
    return rs(y, name, business_days(len(y)))


def normal_equations(y, F):
    """Independent oracle: explicitly assembled (X'X)^-1 X'y with its textbook SE."""
    X = np.column_stack([np.ones(len(y)), F])
    xtx_inv = np.linalg.inv(X.T @ X)
    coef = xtx_inv @ X.T @ y
    resid = y - X @ coef
    dof = len(y) - X.shape[1]
    sd = math.sqrt(resid @ resid / dof)
    return coef, sd, sd * math.sqrt(xtx_inv[0, 0])


def test_exact_single_factor_fit_is_degenerate(rng):
    f = rng.normal(0, 0.01, 40)
    fit = ols_fit(port(f), panel(f))
    assert fit.alpha == pytest.approx(0, abs=1e-15)
    assert fit.betas["f0"] == pytest.approx(1, abs=1e-12)
    assert fit.degenerate and fit.t_stat is None and fit.p_value is None
    with pytest.raises(DegenerateError, match="degenerate fit"):
        alpha_inference(fit)


def test_exact_recovery_two_factors(rng):
    F = rng.normal(0, 0.01, (60, 2))
    fit = ols_fit(port(0.0005 + 0.8 * F[:, 0]), panel(F))
    assert fit.alpha == pytest.approx(0.0005, abs=1e-10)
    assert fit.betas["f0"] == pytest.approx(0.8, abs=1e-10)
    assert fit.betas["f1"] == pytest.approx(0.0, abs=1e-10)


@pytest.mark.parametrize("seed", range(10))
def test_matches_normal_equations(seed):
    rng = np.random.default_rng(seed)
    F = rng.normal(0, 0.01, (30, 3))
    y = 0.0003 + F @ rng.normal(0, 1, 3) + rng.normal(0, 0.005, 30)
    fit = ols_fit(port(y), panel(F))
    coef, sd, se = normal_equations(y, F)
    got = np.array([fit.alpha, *fit.betas.values()])
    np.testing.assert_allclose(got, coef, rtol=1e-10)
    assert fit.resid_sd == pytest.approx(sd, rel=1e-10)
    assert fit.alpha_se == pytest.approx(se, rel=1e-10)
    assert fit.dof == 26 and fit.ar_daily == fit.alpha / fit.resid_sd


def test_risk_free_is_subtracted(rng):
    F = rng.normal(0, 0.01, (50, 2))
    rf = np.full(50, 0.0001)
    y = rng.normal(0, 0.01, 50)
    fit = ols_fit(port(y), panel(F, rf=rf))
    coef, _, _ = normal_equations(y - rf, F - rf[:, None])
    assert fit.alpha == pytest.approx(coef[0], rel=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-0.01, 0.01))
def test_residual_orthogonality_and_shift(seed, c):
    rng = np.random.default_rng(seed)
    F = rng.normal(0, 1, (40, 3))
    y = F @ rng.normal(0, 1, 3) + rng.normal(0, 1, 40)
    pan = panel(F * 0.01)
    fit = ols_fit(port(y * 0.01), pan)
    X = np.column_stack([np.ones(40), pan.factors])
    assert np.all(np.abs(X.T @ fit.residuals) < 1e-8)
    shifted = ols_fit(port(y * 0.01 + c), pan)
    assert shifted.alpha - fit.alpha == pytest.approx(c, abs=1e-10)
    for k in fit.betas:
        assert shifted.betas[k] == pytest.approx(fit.betas[k], abs=1e-10)


def test_rank_deficiency_names_factors(rng):
    f = rng.normal(0, 0.01, 30)
    F = np.column_stack([f, rng.normal(0, 0.01, 30), 2 * f])
    with pytest.raises(DegenerateError, match="collinear: .*f"):
        ols_fit(port(rng.normal(0, 0.01, 30)), panel(F))


def test_near_collinear_panel_survives(rng):
    f = rng.normal(0, 0.01, 60)
    F = np.column_stack([f, f + rng.normal(0, 1e-6, 60)])
    y = 0.001 + f + rng.normal(0, 0.002, 60)
    fit = ols_fit(port(y), panel(F))
    coef, sd, se = normal_equations(y, F)
    assert fit.alpha == pytest.approx(coef[0], rel=1e-6)
    assert fit.resid_sd == pytest.approx(sd, rel=1e-8)


def test_too_few_observations():
    with pytest.raises(InputError):
        ols_fit(port([0.01, 0.02, 0.03]), panel(np.ones((3, 2)) * [[0.01, 0.02]]))


def test_annualize_hand_example():
    rng = np.random.default_rng(1)
    fit = ols_fit(port(rng.normal(0, 0.01, 40)), panel(rng.normal(0, 0.01, 40)))
    fake = replace(fit, alpha=0.0001, resid_sd=0.001)
    a, ar = annualize(fake, 238)
    assert a == pytest.approx(0.0238, rel=1e-12)
    assert ar == pytest.approx(0.0238 / (0.001 * math.sqrt(238)), rel=1e-12)
    assert ar == pytest.approx(1.543, abs=5e-4)
    assert annualize(replace(fit, alpha=0.0), 238) == (0.0, 0.0)
    assert alpha_inference(replace(fit, alpha=0.0)) == (0.0, 1.0)


def test_cohort_ar_proportional_to_t(rng):
    F = rng.normal(0, 0.01, (120, 3))
    pfs = [port(0.0002 * i + F @ rng.normal(0, 1, 3) + rng.normal(0, 0.01, 120), f"p{i}") for i in range(20)]
    res = cohort_fit(pfs, panel(F))
    ar = np.array([f.ar_annualized for f in res.fits.values()])
    t = np.array([f.t_stat for f in res.fits.values()])
    assert np.corrcoef(ar, t)[0, 1] == pytest.approx(1.0, abs=1e-12)


def test_cohort_antisymmetry(rng):
    F = rng.normal(0, 0.01, (50, 2))
    y = rng.normal(0.001, 0.01, 50)
    res = cohort_fit([port(y, "up"), port(-y, "down")], panel(F))
    assert res.fits["up"].alpha == pytest.approx(-res.fits["down"].alpha, rel=1e-12)
    assert res.table["alpha_annualized"].median == pytest.approx(0, abs=1e-15)
    assert res.n_positive == res.n_negative == 1


def test_cohort_degenerate_member_counted(rng):
    f = rng.normal(0, 0.01, 30)
    res = cohort_fit([port(f, "clone")], panel(f))
    assert res.n_degenerate == 1 and res.bh is None


def test_cohort_records_failures(rng):
    f = rng.normal(0, 0.01, 30)
    stranger = rs([0.01, 0.02], "stranger")  # dates outside the panel
    res = cohort_fit([port(rng.normal(0, 0.01, 30), "ok"), stranger], panel(f))
    assert "ok" in res.fits and "stranger" in res.failures
    assert res.cohort_size == 2


def test_cohort_counts_consistent(rng):
    F = rng.normal(0, 0.01, (100, 2))
    pfs = [port(rng.normal(0.0005 * (i % 3 - 1), 0.01, 100), f"p{i}") for i in range(30)]
    res = cohort_fit(pfs, panel(F))
    assert res.n_positive + res.n_negative == len(res.fits)
    assert res.n_sig_bh_positive <= res.n_sig_raw_positive
    assert res.n_sig_bh_negative <= res.n_sig_raw_negative
    assert res.ad is not None and 0 <= res.ad.p_value <= 1
