"""Goodness of fit: K-S statistics, p-values, and Q-Q plot data.

PIT values come from numerically inverting the fitted quantile function
at each observation (clamped at the support with a counted flag).  Two
empirical-CDF conventions are carried side by side:

- ``d_stat``: the standard two-sided statistic
  max_i max(i/n - u_(i), u_(i) - (i-1)/n);
- ``d_point``: the supremum over sample points of |i/n - u_(i)| only
  (no left limits).  Published reference K-S values for the two bundled
  datasets follow this second convention, so reproduction tests pin it.

Conditional tests come in two modes: ``pooled`` transforms each pair by
its own conditioning level and tests the pooled PIT values against
uniformity; ``per-point`` fixes one conditioning level and tests the
whole second sample against the conditional law at that level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import PairedSample
from .errors import DomainError, InsufficientDataError
from .fit import MrqParams, mrq_conditional_cdf, mrq_marginal1_cdf
from .model import (
    BivariateParams,
    DEFAULT_NUMERIC_CONFIG,
    MarginalParams,
    NumericConfig,
    f1_flagged,
)

__all__ = ["GofResult", "QQData", "kolmogorov_pvalue", "ks_marginal",
           "ks_conditional", "mrq_ks_marginal", "mrq_ks_conditional", "qq_data"]


@dataclass(frozen=True)
class GofResult:
    d_stat: float
    p_value: float
    pit_values: tuple[float, ...]
    n: int
    method: str
    d_plus: float
    d_minus: float
    d_point: float
    n_clamped: int = 0
    cond_x1: float | None = None


def kolmogorov_pvalue(d: float, n: int) -> float:
    """Asymptotic two-sided K-S p-value 2 sum (-1)^(k-1) exp(-2 k^2 n d^2).

    Parameters estimated from the same data make this approximate and
    conservative; it is reported as-is.
    """
    if d <= 0.0:
        return 1.0
    s = 0.0
    for k in range(1, 201):
        term = math.exp(-2.0 * k * k * n * d * d)
        s += -term if k % 2 == 0 else term
        if term < 1e-16:
            break
    return min(1.0, max(0.0, 2.0 * s))


def _ks_from_pit(pit: np.ndarray, method: str, n_clamped: int,
                 cond_x1: float | None = None) -> GofResult:
    u = np.sort(pit)
    n = u.size
    i = np.arange(1, n + 1)
    d_plus = float(np.max(i / n - u))
    d_minus = float(np.max(u - (i - 1) / n))
    d_stat = max(d_plus, d_minus)
    d_point = float(np.max(np.abs(i / n - u)))
    return GofResult(
        d_stat=d_stat,
        p_value=kolmogorov_pvalue(d_stat, n),
        pit_values=tuple(float(v) for v in u),
        n=n,
        method=method,
        d_plus=d_plus,
        d_minus=d_minus,
        d_point=d_point,
        n_clamped=n_clamped,
        cond_x1=cond_x1,
    )


def ks_marginal(data, p: MarginalParams,
                cfg: NumericConfig = DEFAULT_NUMERIC_CONFIG) -> GofResult:
    """One-sample K-S of univariate data against a fitted marginal."""
    x = np.asarray(data, dtype=float)
    if x.size < 1:
        raise InsufficientDataError("empty sample")
    pit, clamped = _pit_marginal(x, p, cfg)
    return _ks_from_pit(pit, "marginal", clamped)


def _pit_marginal(x: np.ndarray, p: MarginalParams,
                  cfg: NumericConfig) -> tuple[np.ndarray, int]:
    vals = np.empty(x.size)
    clamped = 0
    for k, xv in enumerate(x):
        u, flag = f1_flagged(p, float(xv), cfg)
        vals[k] = u
        clamped += flag
    return vals, clamped


def ks_conditional(s: PairedSample, bp: BivariateParams,
                   cfg: NumericConfig = DEFAULT_NUMERIC_CONFIG,
                   mode: str = "pooled"):
    """Conditional K-S for the second component given the first.

    mode='pooled' returns one GofResult from the pooled PIT values
    v_i = F2(x2_i / (1 + theta*u1_i)); mode='per-point' returns a list of
    GofResults, one per conditioning pair (ordered by ascending x1), each
    testing the whole x2 sample against the conditional law at that x1.
    """
    u1_vals, _ = _pit_marginal(np.asarray(s.x1, float), bp.m1, cfg)
    x2 = np.asarray(s.x2, dtype=float)
    if mode == "pooled":
        vals = np.empty(s.n)
        clamped = 0
        for k in range(s.n):
            scaled = bp.m2.scaled(1.0 + bp.theta * u1_vals[k])
            u, flag = f1_flagged(scaled, float(x2[k]), cfg)
            vals[k] = u
            clamped += flag
        return _ks_from_pit(vals, "conditional-pooled", clamped)
    if mode == "per-point":
        order = np.argsort(np.asarray(s.x1, float))
        out = []
        for idx in order:
            scaled = bp.m2.scaled(1.0 + bp.theta * u1_vals[idx])
            pit, clamped = _pit_marginal(x2, scaled, cfg)
            out.append(_ks_from_pit(pit, "conditional-per-point", clamped,
                                    cond_x1=float(s.x1[idx])))
        return out
    raise DomainError(f"unknown mode {mode!r}; use 'pooled' or 'per-point'")


def mrq_ks_marginal(data, p: MrqParams,
                    cfg: NumericConfig = DEFAULT_NUMERIC_CONFIG) -> GofResult:
    """K-S of the first margin under the competitor model."""
    x = np.asarray(data, dtype=float)
    pit = np.array([mrq_marginal1_cdf(p, float(v), cfg) for v in x])
    return _ks_from_pit(pit, "marginal", 0)


def mrq_ks_conditional(s: PairedSample, p: MrqParams,
                       cfg: NumericConfig = DEFAULT_NUMERIC_CONFIG,
                       mode: str = "pooled"):
    """Conditional K-S under the competitor model (same modes)."""
    u1_vals = np.array([mrq_marginal1_cdf(p, float(v), cfg) for v in s.x1])
    x2 = np.asarray(s.x2, dtype=float)
    if mode == "pooled":
        pit = np.array([mrq_conditional_cdf(p, float(u1_vals[k]), float(x2[k]), cfg)
                        for k in range(s.n)])
        return _ks_from_pit(pit, "conditional-pooled", 0)
    if mode == "per-point":
        order = np.argsort(np.asarray(s.x1, float))
        out = []
        for idx in order:
            pit = np.array([mrq_conditional_cdf(p, float(u1_vals[idx]), float(v), cfg)
                            for v in x2])
            out.append(_ks_from_pit(pit, "conditional-per-point", 0,
                                    cond_x1=float(s.x1[idx])))
        return out
    raise DomainError(f"unknown mode {mode!r}; use 'pooled' or 'per-point'")


# ---------------------------------------------------------------------------
# Q-Q data


@dataclass(frozen=True)
class QQData:
    """Rows of (plotting position, empirical quantile, model quantile)."""

    rows: tuple[tuple[float, float, float], ...]

    def to_tsv(self) -> str:
        lines = ["position\tempirical\tmodel"]
        for p, e, m in self.rows:
            lines.append(f"{p!r}\t{e!r}\t{m!r}")
        return "\n".join(lines) + "\n"


def qq_data(data, quantile_fn, positions: str = "mean-rank") -> QQData:
    """Q-Q rows: sorted data against model quantiles at i/(n+1)."""
    x = np.sort(np.asarray(data, dtype=float))
    n = x.size
    if n < 2:
        raise InsufficientDataError("Q-Q data needs at least two observations")
    if positions != "mean-rank":
        raise DomainError(f"unknown plotting rule {positions!r}")
    ps = np.arange(1, n + 1) / (n + 1.0)
    rows = tuple((float(p), float(e), float(quantile_fn(float(p))))
                 for p, e in zip(ps, x))
    return QQData(rows)
