"""Distribution functions and multiple-testing tools used by the factor analysis."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np
from scipy import special

from .errors import DegenerateError, InputError


def student_t_cdf(t, dof):
    """CDF of Student's t with ``dof`` degrees of freedom via the regularized incomplete beta."""
    t = np.asarray(t, dtype=float)
    x = dof / (dof + t * t)
    tail = 0.5 * special.betainc(0.5 * dof, 0.5, x)
    out = np.where(t >= 0, 1.0 - tail, tail)
    return float(out) if out.ndim == 0 else out


def t_two_sided_p(t, dof):
    t = np.asarray(t, dtype=float)
    p = special.betainc(0.5 * dof, 0.5, dof / (dof + t * t))
    p = np.clip(p, 0.0, 1.0)
    return float(p) if p.ndim == 0 else p


@dataclass(frozen=True, eq=False)
class BHResult:
    """Benjamini-Hochberg outcome, arrays aligned with the input order."""

    q: float
    m: int
    raw_p: np.ndarray
    rank: np.ndarray  # 1-based rank of each raw p (ties broken by input order)
    adjusted_p: np.ndarray
    significant: np.ndarray
    cutoff: np.ndarray  # r * q / m for r = 1..m, the step-up threshold line
    mode: str = "stepup"

    @property
    def n_significant(self) -> int:
        return int(self.significant.sum())


def bh_adjust(pvalues: Sequence[float], q: float = 0.05,
              mode: Literal["stepup", "literal"] = "stepup") -> BHResult:
    """Benjamini-Hochberg adjustment.

    ``stepup`` gives the usual adjusted p-values ``min_{r' >= r} p(r') m / r'`` capped at 1.
    ``literal`` reports the bare ``p(r) m / r`` (capped at 1). Significance is always the
    step-up verdict, so both modes flag the same hypotheses.
    """
    p = np.asarray(pvalues, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise InputError("bh_adjust needs a non-empty 1-d list of p-values")
    if np.any(~((p >= 0) & (p <= 1))):
        raise InputError("p-values must lie in [0, 1]")
    if not 0 < q <= 1:
        raise InputError(f"BH level {q} outside (0, 1]")
    if mode not in ("stepup", "literal"):
        raise InputError(f"unknown BH mode {mode!r}")
    m = p.size
    order = np.argsort(p, kind="stable")
    ranks = np.arange(1, m + 1)
    scaled = p[order] * (m / ranks)
    stepped = np.minimum(np.minimum.accumulate(scaled[::-1])[::-1], 1.0)
    shown = stepped if mode == "stepup" else np.minimum(scaled, 1.0)

    adjusted = np.empty(m)
    adjusted[order] = shown
    rank = np.empty(m, dtype=int)
    rank[order] = ranks
    significant = np.zeros(m, dtype=bool)
    significant[order] = stepped <= q
    return BHResult(q, m, p.copy(), rank, adjusted, significant, ranks * q / m, mode)


@dataclass(frozen=True)
class ADResult:
    a2: float
    a2_star: float
    p_value: float
    n: int


def _ad_pvalue(a: float) -> float:
    # estimated mean and variance case, modified statistic
    if a >= 0.6:
        p = math.exp(1.2937 - 5.709 * a + 0.0186 * a * a)
    elif a >= 0.34:
        p = math.exp(0.9177 - 4.279 * a - 1.38 * a * a)
    elif a >= 0.2:
        p = 1.0 - math.exp(-8.318 + 42.796 * a - 59.938 * a * a)
    else:
        p = 1.0 - math.exp(-13.436 + 101.14 * a - 223.73 * a * a)
    return min(max(p, 0.0), 1.0)


def anderson_darling(values: Sequence[float]) -> ADResult:
    """Anderson-Darling test of normality with mean and variance estimated from the sample."""
    x = np.sort(np.asarray(values, dtype=float))
    n = x.size
    if n < 8:
        raise InputError("Anderson-Darling needs at least 8 observations")
    sd = float(np.std(x, ddof=1))
    if sd == 0.0:
        raise DegenerateError("Anderson-Darling of a constant sample")
    w = (x - x.mean()) / sd
    log_cdf = special.log_ndtr(w)
    log_sf = special.log_ndtr(-w[::-1])
    i = np.arange(1, n + 1)
    a2 = -n - float(np.sum((2 * i - 1) * (log_cdf + log_sf))) / n
    a2_star = a2 * (1.0 + 0.75 / n + 2.25 / (n * n))
    return ADResult(a2, a2_star, _ad_pvalue(a2_star), n)
