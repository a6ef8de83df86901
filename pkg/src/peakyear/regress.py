"""Standardized OLS models for peak-year innovation and impact.

Six model families, one per key variable (effort, productivity, time
devoted, and their career-relative versions), are fit separately for two
dependents: peak-year innovation (mean disruption of all peak-year papers,
peak paper included) and peak-year impact (aggregate of log(1 + citations
within five years) over peak-year papers). Controls in every model: average
coauthors of peak-year papers, average disruption over the two pre-peak
years, the peak calendar year, and time to peak. The ``peak-plus-prepeak``
variant adds the key variable and coauthor average computed over the two
years before the peak.

Skewed positive variables are log-transformed, then every column (dependent
included) is z-scored so coefficients are comparable across models. Fits go
through a QR factorization; the normal matrix is never formed or inverted.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
from scipy import linalg as sla
from scipy import stats as sstats

from .careers import Career, find_peak, period_metrics

__all__ = [
    "KEY_VARIABLES",
    "RegressionRow",
    "CoefEstimate",
    "RegressionResult",
    "RankDeficiencyError",
    "build_rows",
    "standardize",
    "fit_ols",
    "fit_all_models",
    "write_table_csv",
    "write_fig_csv",
]

KEY_VARIABLES = (
    "relative_effort",
    "effort",
    "relative_productivity",
    "productivity",
    "relative_time_devoted",
    "time_devoted",
)

VARIANTS = ("peak-only", "peak-plus-prepeak")

# log for strictly positive ratios/durations, log1p for counts
_TRANSFORMS = {
    "effort": "log",
    "relative_effort": "log",
    "relative_productivity": "log",
    "relative_time_devoted": "log",
    "time_devoted": "log",
    "productivity": "log1p",
    "pre_effort": "log",
    "pre_relative_effort": "log",
    "pre_relative_productivity": "log",
    "pre_relative_time_devoted": "log",
    "pre_time_devoted": "log",
    "pre_productivity": "log1p",
}


class RankDeficiencyError(Exception):
    """Raised when the design matrix is rank deficient; names the columns."""


@dataclass(frozen=True, slots=True)
class RegressionRow:
    """One researcher's variables for the peak-year models."""

    author_id: str
    innovation: float
    impact: float
    effort: float
    productivity: float
    time_devoted: float
    relative_effort: float
    relative_productivity: float
    relative_time_devoted: float
    coauthors_peak: float
    prev_innovation: float
    peak_year: float
    time_to_peak: float
    pre_effort: float | None = None
    pre_productivity: float | None = None
    pre_time_devoted: float | None = None
    pre_relative_effort: float | None = None
    pre_relative_productivity: float | None = None
    pre_relative_time_devoted: float | None = None
    coauthors_pre: float | None = None


@dataclass(frozen=True, slots=True)
class CoefEstimate:
    coef: float
    se: float
    t_stat: float
    p_value: float
    stars: str


@dataclass(frozen=True, slots=True)
class RegressionResult:
    dependent: str
    key_variable: str
    variant: str
    variables: tuple[str, ...]
    coefficients: dict[str, CoefEstimate]
    r_squared: float
    n: int

    def as_dict(self) -> dict:
        return {
            "dependent": self.dependent,
            "key_variable": self.key_variable,
            "variant": self.variant,
            "r_squared": self.r_squared,
            "n": self.n,
            "coefficients": {
                name: {
                    "coef": est.coef,
                    "se": est.se,
                    "t": est.t_stat,
                    "p": est.p_value,
                    "stars": est.stars,
                }
                for name, est in self.coefficients.items()
            },
        }


def _stars(p: float) -> str:
    if p < 0.01:
        return "***"
    if p < 0.05:
        return "**"
    if p < 0.1:
        return "*"
    return ""


def build_rows(
    careers: Mapping[str, Career],
    variant: str = "peak-only",
    impact_agg: str = "mean",
) -> tuple[list[RegressionRow], dict[str, int]]:
    """Assemble one row per career with a usable peak.

    Careers are dropped (and counted) when they lack a defined-score peak,
    publications in the two pre-peak years, defined scores among those, or
    (for ``peak-plus-prepeak``) pre-peak period metrics. Impact aggregates
    log(1 + five-year citations) over peak-year papers: their mean, or with
    ``impact_agg="sum"`` the log of 1 plus their summed citations.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant: {variant!r}")
    if impact_agg not in ("mean", "sum"):
        raise ValueError(f"unknown impact_agg: {impact_agg!r}")

    rows: list[RegressionRow] = []
    dropped = {
        "no_peak": 0,
        "no_prepeak_pubs": 0,
        "no_prepeak_scores": 0,
        "no_peak_metrics": 0,
    }
    for aid in sorted(careers):
        c = careers[aid]
        peak = find_peak(c)
        if peak is None:
            dropped["no_peak"] += 1
            continue
        py = peak.peak_year
        peak_pubs = [p for p in c.publications if p.year == py]
        peak_scores = [p.score for p in peak_pubs if p.score is not None]
        pm = period_metrics(c, (py, py))
        if pm is None or not peak_scores:
            dropped["no_peak_metrics"] += 1
            continue

        pre_pubs = [p for p in c.publications if py - 2 <= p.year <= py - 1]
        if not pre_pubs:
            dropped["no_prepeak_pubs"] += 1
            continue
        pre_scores = [p.score for p in pre_pubs if p.score is not None]
        if not pre_scores:
            dropped["no_prepeak_scores"] += 1
            continue

        kwargs: dict = {}
        if variant == "peak-plus-prepeak":
            pre_m = period_metrics(c, (py - 2, py - 1))
            # pre_pubs is non-empty, so metrics exist
            kwargs = {
                "pre_effort": pre_m.effort,
                "pre_productivity": float(pre_m.productivity),
                "pre_time_devoted": float(pre_m.time_devoted),
                "pre_relative_effort": pre_m.relative_effort,
                "pre_relative_productivity": pre_m.relative_productivity,
                "pre_relative_time_devoted": pre_m.relative_time_devoted,
                "coauthors_pre": sum(p.coauthors for p in pre_pubs) / len(pre_pubs),
            }

        log_cites = [math.log1p(p.citations) for p in peak_pubs]
        if impact_agg == "mean":
            impact = sum(log_cites) / len(log_cites)
        else:
            impact = math.log1p(sum(p.citations for p in peak_pubs))

        rows.append(
            RegressionRow(
                author_id=aid,
                innovation=sum(peak_scores) / len(peak_scores),
                impact=impact,
                effort=pm.effort,
                productivity=float(pm.productivity),
                time_devoted=float(pm.time_devoted),
                relative_effort=pm.relative_effort,
                relative_productivity=pm.relative_productivity,
                relative_time_devoted=pm.relative_time_devoted,
                coauthors_peak=sum(p.coauthors for p in peak_pubs) / len(peak_pubs),
                prev_innovation=sum(pre_scores) / len(pre_scores),
                peak_year=float(py),
                time_to_peak=float(peak.time_to_peak),
                **kwargs,
            )
        )
    return rows, dropped


def standardize(
    columns: dict[str, np.ndarray], transforms: Mapping[str, str] | None = None
) -> dict[str, np.ndarray]:
    """Z-score each column (sample variance), optionally log-transforming first.

    ``transforms`` maps column names to "log" or "log1p"; unlisted columns
    are z-scored as-is, which makes plain standardization idempotent.
    Zero-variance columns are fatal and named.
    """
    transforms = transforms or {}
    out: dict[str, np.ndarray] = {}
    for name, col in columns.items():
        x = np.asarray(col, dtype=float)
        t = transforms.get(name)
        if t == "log":
            if np.any(x <= 0):
                raise ValueError(f"column {name!r} must be strictly positive for log")
            x = np.log(x)
        elif t == "log1p":
            if np.any(x < 0):
                raise ValueError(f"column {name!r} must be non-negative for log1p")
            x = np.log1p(x)
        elif t is not None:
            raise ValueError(f"unknown transform {t!r} for column {name!r}")
        sd = x.std(ddof=1) if x.size > 1 else 0.0
        if not np.isfinite(sd) or sd == 0.0:
            raise ValueError(f"zero-variance column: {name!r}")
        out[name] = (x - x.mean()) / sd
    return out


def _ols_qr(X: np.ndarray, y: np.ndarray, names: Sequence[str]):
    """OLS through a thin QR factorization; returns beta, se, r2.

    Standard errors use the diagonal of (X'X)^-1 obtained from R alone;
    the normal matrix itself is never formed.
    """
    n, p = X.shape
    q, r = np.linalg.qr(X)
    diag = np.abs(np.diag(r))
    tol = max(n, p) * np.finfo(float).eps * (diag.max() if diag.size else 0.0)
    bad = [names[j] for j in range(p) if diag[j] <= tol]
    if bad:
        raise RankDeficiencyError(f"rank-deficient design; dependent columns: {bad}")
    beta = sla.solve_triangular(r, q.T @ y)
    resid = y - X @ beta
    ssr = float(resid @ resid)
    dof = n - p
    sigma2 = ssr / dof
    r_inv = sla.solve_triangular(r, np.eye(p))
    xtx_inv_diag = (r_inv * r_inv).sum(axis=1)
    se = np.sqrt(sigma2 * xtx_inv_diag)
    sst = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - ssr / sst if sst > 0 else 0.0
    return beta, se, r2, dof


def _design_columns(variant: str, key_variable: str) -> list[str]:
    if variant == "peak-only":
        return [key_variable, "coauthors_peak", "prev_innovation", "peak_year", "time_to_peak"]
    return [
        key_variable,
        "coauthors_peak",
        f"pre_{key_variable}",
        "coauthors_pre",
        "prev_innovation",
        "peak_year",
        "time_to_peak",
    ]


def fit_ols(
    rows: Sequence[RegressionRow],
    dependent: str,
    key_variable: str,
    variant: str = "peak-only",
) -> RegressionResult:
    """Fit one standardized model; ``dependent`` is "innovation" or "impact"."""
    if dependent not in ("innovation", "impact"):
        raise ValueError(f"unknown dependent: {dependent!r}")
    if key_variable not in KEY_VARIABLES:
        raise ValueError(f"unknown key variable: {key_variable!r}")
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant: {variant!r}")
    col_names = _design_columns(variant, key_variable)
    n = len(rows)
    if n <= len(col_names) + 1:
        raise ValueError(f"need more rows ({n}) than predictors ({len(col_names)})")

    raw = {name: np.array([getattr(r, name) for r in rows], dtype=float) for name in col_names}
    raw[dependent] = np.array([getattr(r, dependent) for r in rows], dtype=float)
    cols = standardize(raw, {k: v for k, v in _TRANSFORMS.items() if k in raw})

    X = np.column_stack([np.ones(n)] + [cols[name] for name in col_names])
    y = cols[dependent]
    names = ["intercept"] + col_names
    beta, se, r2, dof = _ols_qr(X, y, names)

    coefficients = {}
    for j, name in enumerate(names):
        t = beta[j] / se[j] if se[j] > 0 else math.inf
        p = 2.0 * float(sstats.t.sf(abs(t), dof))
        coefficients[name] = CoefEstimate(float(beta[j]), float(se[j]), float(t), p, _stars(p))
    return RegressionResult(
        dependent, key_variable, variant, tuple(names), coefficients, r2, n
    )


def fit_all_models(
    rows: Sequence[RegressionRow], variant: str = "peak-only"
) -> dict[str, dict[str, RegressionResult]]:
    """Fit the six key-variable models for both dependents."""
    return {
        dep: {key: fit_ols(rows, dep, key, variant) for key in KEY_VARIABLES}
        for dep in ("innovation", "impact")
    }


_LABELS = {
    "relative_effort": "Relative effort",
    "effort": "Effort",
    "relative_productivity": "Relative productivity",
    "productivity": "Productivity",
    "relative_time_devoted": "Relative time devoted",
    "time_devoted": "Time devoted",
    "pre_relative_effort": "Relative effort (2y before peak)",
    "pre_effort": "Effort (2y before peak)",
    "pre_relative_productivity": "Relative productivity (2y before peak)",
    "pre_productivity": "Productivity (2y before peak)",
    "pre_relative_time_devoted": "Relative time devoted (2y before peak)",
    "pre_time_devoted": "Time devoted (2y before peak)",
    "coauthors_peak": "Avg. num. of coauthors",
    "coauthors_pre": "Avg. num. of coauthors (2y before peak)",
    "prev_innovation": "Avg. prev. innovation",
    "peak_year": "Peak year",
    "time_to_peak": "Time to peak",
    "intercept": "Intercept",
}


def write_table_csv(
    models: Mapping[str, RegressionResult], dependent: str, path: str | Path
) -> None:
    """Regression table shaped like the appendix tables: one column per model."""
    ordered_keys = [k for k in KEY_VARIABLES if k in models]
    row_names: list[str] = []
    for key in ordered_keys:
        for name in models[key].variables:
            if name != "intercept" and name not in row_names:
                row_names.append(name)

    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(
            [f"{dependent} models"]
            + [f"Model {i + 1}" for i in range(len(ordered_keys))]
        )
        for name in row_names:
            cells = []
            for key in ordered_keys:
                est = models[key].coefficients.get(name)
                if est is None:
                    cells.append("")
                else:
                    cells.append(f"{est.coef:.3f}{est.stars} ({est.se:.3f})")
            w.writerow([_LABELS.get(name, name)] + cells)
        w.writerow(["N"] + [str(models[k].n) for k in ordered_keys])
        w.writerow(["R2"] + [f"{models[k].r_squared:.3f}" for k in ordered_keys])


def write_fig_csv(
    all_models: Mapping[str, Mapping[str, RegressionResult]], path: str | Path
) -> None:
    """Coefficient plot data: one row per (dependent, model, variable), SE x3."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["dependent", "model", "variable", "coefficient", "se_x3"])
        for dep in sorted(all_models):
            models = all_models[dep]
            for key in KEY_VARIABLES:
                if key not in models:
                    continue
                res = models[key]
                for name in res.variables:
                    if name == "intercept":
                        continue
                    est = res.coefficients[name]
                    w.writerow([dep, key, name, repr(est.coef), repr(3.0 * est.se)])
