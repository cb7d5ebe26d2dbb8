"""Correlation and uncertainty estimates for quality-score analysis.

Provides the three rank/linear correlations used throughout (Spearman,
Pearson, Kendall tau-b), Fisher-transform confidence intervals, percentile
bootstrap intervals for correlations, and bootstrap intervals for true
positive rates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.stats
from scipy.special import ndtri

__all__ = [
    "CorrelationReport",
    "srocc",
    "plcc",
    "krocc",
    "fisher_ci",
    "bootstrap_corr",
    "tpr_with_ci",
]


@dataclass
class CorrelationReport:
    """A correlation estimate with a confidence interval."""

    estimate: float
    ci_low: float
    ci_high: float
    method: str  # "fisher" or "bootstrap-percentile"
    n: int
    B: int = 0  # bootstrap iterations, 0 for fisher

    def to_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "method": self.method,
            "n": self.n,
            "B": self.B,
        }


def _check_pair(x, y, min_len: int = 3) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or y.ndim != 1:
        raise ValueError("correlation inputs must be 1-D vectors")
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < min_len:
        raise ValueError(f"need at least {min_len} samples, got {len(x)}")
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise ValueError("correlation is undefined for a constant vector")
    return x, y


def srocc(x, y) -> float:
    """Spearman rank-order correlation: Pearson on average-ranked data."""
    x, y = _check_pair(x, y)
    rx = scipy.stats.rankdata(x)
    ry = scipy.stats.rankdata(y)
    return float(np.corrcoef(rx, ry)[0, 1])


def plcc(x, y) -> float:
    """Pearson linear correlation on the raw values."""
    x, y = _check_pair(x, y)
    return float(np.corrcoef(x, y)[0, 1])


def krocc(x, y) -> float:
    """Kendall rank correlation, tau-b (tie-corrected)."""
    x, y = _check_pair(x, y)
    res = scipy.stats.kendalltau(x, y, variant="b")
    return float(res.statistic)


def fisher_ci(r: float, n: int, level: float = 0.95) -> tuple[float, float]:
    """Confidence interval for a correlation via the Fisher z-transform.

    z = artanh(r) is approximately normal with standard error 1/sqrt(n-3);
    the interval is tanh(z -/+ q/sqrt(n-3)) with q the two-sided normal
    quantile for `level`.
    """
    if n < 4:
        raise ValueError(f"fisher_ci needs n >= 4, got {n}")
    if not -1.0 < r < 1.0:
        raise ValueError(f"fisher_ci needs |r| < 1, got {r}")
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must be in (0,1), got {level}")
    z = math.atanh(r)
    half = ndtri((1.0 + level) / 2.0) / math.sqrt(n - 3)
    return math.tanh(z - half), math.tanh(z + half)


_CORR_FUNCS = {"srocc": srocc, "plcc": plcc, "krocc": krocc}

# A resample drawn constant in x or y has no defined correlation; it is
# redrawn up to this many times before giving up.
_MAX_REDRAWS = 1000


def bootstrap_corr(x, y, corr_kind: str = "srocc", B: int = 1000,
                   seed: int | None = None, level: float = 0.95) -> CorrelationReport:
    """Percentile bootstrap of a correlation, resampling (x_i, y_i) jointly.

    The reported estimate is the mean of the B resampled correlations and
    the CI the (1-level)/2 and (1+level)/2 percentiles.  Deterministic for
    a given seed.
    """
    if corr_kind not in _CORR_FUNCS:
        raise ValueError(f"unknown corr_kind {corr_kind!r}")
    if B < 1:
        raise ValueError("B must be >= 1")
    x, y = _check_pair(x, y)
    corr = _CORR_FUNCS[corr_kind]
    n = len(x)
    rng = np.random.default_rng(seed)
    values = np.empty(B)
    for b in range(B):
        for _ in range(_MAX_REDRAWS):
            idx = rng.integers(0, n, size=n)
            xs, ys = x[idx], y[idx]
            if np.ptp(xs) > 0 and np.ptp(ys) > 0:
                values[b] = corr(xs, ys)
                break
        else:
            raise ValueError("could not draw a non-constant resample")
    lo, hi = np.percentile(values, [100 * (1 - level) / 2, 100 * (1 + level) / 2])
    return CorrelationReport(
        estimate=float(values.mean()), ci_low=float(lo), ci_high=float(hi),
        method="bootstrap-percentile", n=n, B=B,
    )


def tpr_with_ci(outcomes, B: int = 100, seed: int | None = None,
                level: float = 0.95) -> tuple[float, tuple[float, float]]:
    """True positive rate of binary outcomes with a percentile bootstrap CI."""
    outcomes = np.asarray(outcomes, dtype=float)
    if outcomes.ndim != 1 or len(outcomes) == 0:
        raise ValueError("outcomes must be a nonempty 1-D vector")
    n = len(outcomes)
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, n, size=(B, n))
    means = outcomes[idx].mean(axis=1)
    lo, hi = np.percentile(means, [100 * (1 - level) / 2, 100 * (1 + level) / 2])
    return float(outcomes.mean()), (float(lo), float(hi))
