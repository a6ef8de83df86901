"""Two-sample test kernels: Kolmogorov-Smirnov, Mann-Whitney U, mean with SE.

Both tests use asymptotic p-values only; the cohorts this package compares
number in the thousands, where the approximations are excellent. The KS
p-value comes from the Kolmogorov distribution at effective sample size
n1*n2/(n1+n2); the MWU p-value uses the tie-corrected normal approximation
with continuity correction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = ["TestResult", "ks_two_sample", "mwu", "mean_and_se"]


@dataclass(frozen=True, slots=True)
class TestResult:
    statistic: float
    p_value: float
    n1: int
    n2: int
    sidedness: str
    degenerate: bool = False

    def as_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "p_value": self.p_value,
            "n1": self.n1,
            "n2": self.n2,
            "sidedness": self.sidedness,
            "degenerate": self.degenerate,
        }


def _as_sample(x: Sequence[float], name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=float).ravel()
    if arr.size == 0:
        raise ValueError(f"sample {name} must be non-empty")
    return arr


def _kolmogorov_sf(x: float) -> float:
    """Survival function of the Kolmogorov distribution, 2*sum (-1)^(k-1) exp(-2 k^2 x^2)."""
    if x <= 0:
        return 1.0
    total = 0.0
    sign = 1.0
    for k in range(1, 101):
        term = math.exp(-2.0 * k * k * x * x)
        total += sign * term
        if term < 1e-16:
            break
        sign = -sign
    return min(max(2.0 * total, 0.0), 1.0)


def ks_two_sample(a: Sequence[float], b: Sequence[float]) -> TestResult:
    """Two-sided two-sample KS test: statistic sup |F_a - F_b| over the pooled support."""
    xa = np.sort(_as_sample(a, "a"))
    xb = np.sort(_as_sample(b, "b"))
    n1, n2 = xa.size, xb.size
    pooled = np.concatenate([xa, xb])
    cdf_a = np.searchsorted(xa, pooled, side="right") / n1
    cdf_b = np.searchsorted(xb, pooled, side="right") / n2
    d = float(np.abs(cdf_a - cdf_b).max())
    en = math.sqrt(n1 * n2 / (n1 + n2))
    return TestResult(d, _kolmogorov_sf(en * d), n1, n2, "two-sided")


def _normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def _midranks(pooled: np.ndarray) -> tuple[np.ndarray, float]:
    """Fractional ranks of the pooled sample and the tie-correction factor."""
    n = pooled.size
    _, inverse, counts = np.unique(pooled, return_inverse=True, return_counts=True)
    cum = np.cumsum(counts)
    mid = cum - counts + (counts + 1) / 2.0
    ranks = mid[inverse]
    tie_sum = float((counts.astype(float) ** 3 - counts).sum())
    correction = 1.0 - tie_sum / (n**3 - n) if n > 1 else 1.0
    return ranks, correction


def mwu(
    a: Sequence[float], b: Sequence[float], sidedness: str = "two-sided"
) -> TestResult:
    """Mann-Whitney U for sample ``a`` against ``b``.

    The statistic is U_a, the number of (a, b) pairs with a > b counting
    ties as one half; ``greater`` means a tends to exceed b. When every
    value in both samples is identical the result is flagged degenerate
    with p = 1.
    """
    if sidedness not in ("two-sided", "greater", "less"):
        raise ValueError(f"unknown sidedness: {sidedness!r}")
    xa = _as_sample(a, "a")
    xb = _as_sample(b, "b")
    n1, n2 = xa.size, xb.size
    ranks, correction = _midranks(np.concatenate([xa, xb]))
    r_a = float(ranks[:n1].sum())
    u_a = r_a - n1 * (n1 + 1) / 2.0

    mu = n1 * n2 / 2.0
    var = correction * n1 * n2 * (n1 + n2 + 1) / 12.0
    if var <= 0:
        return TestResult(u_a, 1.0, n1, n2, sidedness, degenerate=True)
    sd = math.sqrt(var)
    if sidedness == "greater":
        p = _normal_sf((u_a - mu - 0.5) / sd)
    elif sidedness == "less":
        p = _normal_sf((mu - u_a - 0.5) / sd)
    else:
        z = (abs(u_a - mu) - 0.5) / sd
        p = min(2.0 * _normal_sf(z), 1.0)
    return TestResult(u_a, min(max(p, 0.0), 1.0), n1, n2, sidedness)


def mean_and_se(a: Sequence[float]) -> tuple[float, float | None]:
    """Arithmetic mean and standard error (None when n < 2)."""
    x = _as_sample(a, "a")
    mean = float(x.mean())
    if x.size < 2:
        return mean, None
    sd = float(x.std(ddof=1))
    return mean, sd / math.sqrt(x.size)
