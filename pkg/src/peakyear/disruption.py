"""Disruption scoring and windowed citation counts.

For a focal paper F with in-corpus reference set R, the subsequent set S
holds every paper published after F (and no later than the horizon year,
excluding F itself and members of R) that cites F or at least one member
of R. With

    n_i = |{p in S : p cites F, no member of R}|
    n_j = |{p in S : p cites F and >= 1 member of R}|
    n_k = |{p in S : p cites no F, >= 1 member of R}|

the score is (n_i - n_j) / (n_i + n_j + n_k), in [-1, 1]. A paper close to
+1 eclipses attention to the work it builds on; close to -1 it funnels
attention toward it. Papers too near the horizon to accumulate citations
for ``min_window_years`` are marked ineligible; papers with empty S are
undefined.

Same-year citers are excluded by default (publication-year resolution
cannot order papers within a year); ``include_same_year=True`` switches the
comparison to >= for sensitivity analysis.
"""

from __future__ import annotations

import csv
import math
import multiprocessing
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .graph import CitationGraph

__all__ = [
    "DisruptionResult",
    "ScoreTable",
    "disruption_score",
    "score_all",
    "citations_within",
    "citations_within_all",
    "write_scores_csv",
]


@dataclass(frozen=True, slots=True)
class DisruptionResult:
    """Classification counts and score for one focal paper."""

    paper: int
    n_i: int
    n_j: int
    n_k: int
    score: float  # NaN when not defined
    defined: bool
    ineligible: bool = False


def _classify(
    g: CitationGraph,
    focal: int,
    min_window_years: int,
    horizon_year: int,
    include_same_year: bool,
) -> tuple[int, int, int, bool]:
    """Return (n_i, n_j, n_k, ineligible) for one focal paper."""
    years = g.years
    yf = int(years[focal])
    if yf > horizon_year - min_window_years:
        return 0, 0, 0, True

    refs = g.refs_of(focal)
    citers = g.citers_of(focal)

    cy = years[citers]
    if include_same_year:
        m1 = (cy >= yf) & (cy <= horizon_year)
    else:
        m1 = (cy > yf) & (cy <= horizon_year)
    c1 = citers[m1]
    if refs.size and c1.size:
        c1 = c1[~np.isin(c1, refs, assume_unique=True)]

    if refs.size:
        parts = [g.citers_of(int(r)) for r in refs]
        rc = parts[0] if len(parts) == 1 else np.concatenate(parts)
        ry = years[rc]
        if include_same_year:
            m2 = (ry >= yf) & (ry <= horizon_year)
        else:
            m2 = (ry > yf) & (ry <= horizon_year)
        c2 = np.unique(rc[m2])
        c2 = c2[c2 != focal]
        if c2.size:
            c2 = c2[~np.isin(c2, refs, assume_unique=True)]
    else:
        c2 = np.empty(0, dtype=np.int32)

    if c2.size and c1.size:
        n_j = int(np.isin(c2, c1, assume_unique=True).sum())
    else:
        n_j = 0
    n_i = int(c1.size) - n_j
    n_k = int(c2.size) - n_j
    return n_i, n_j, n_k, False


def _result(focal: int, n_i: int, n_j: int, n_k: int, ineligible: bool) -> DisruptionResult:
    total = n_i + n_j + n_k
    if ineligible or total == 0:
        return DisruptionResult(focal, n_i, n_j, n_k, math.nan, False, ineligible)
    return DisruptionResult(focal, n_i, n_j, n_k, (n_i - n_j) / total, True, False)


def disruption_score(
    g: CitationGraph,
    focal: int,
    min_window_years: int = 5,
    horizon_year: int | None = None,
    include_same_year: bool = False,
) -> DisruptionResult:
    """Score one focal paper; ``horizon_year`` defaults to the corpus max year."""
    g._check(focal)
    if horizon_year is None:
        horizon_year = g.year_max
    n_i, n_j, n_k, ineligible = _classify(
        g, focal, min_window_years, horizon_year, include_same_year
    )
    return _result(focal, n_i, n_j, n_k, ineligible)


class ScoreTable(Mapping):
    """Mapping from paper index to :class:`DisruptionResult`, array-backed.

    Iteration order is ascending paper index over the computed subset.
    """

    def __init__(
        self,
        n_papers: int,
        papers: np.ndarray,
        n_i: np.ndarray,
        n_j: np.ndarray,
        n_k: np.ndarray,
        score: np.ndarray,
        defined: np.ndarray,
        ineligible: np.ndarray,
    ):
        self.n_papers = n_papers
        self._papers = papers
        self.n_i = n_i
        self.n_j = n_j
        self.n_k = n_k
        self.score = score
        self.defined = defined
        self.ineligible = ineligible
        self._row_of = {int(p): r for r, p in enumerate(papers)}

    def __getitem__(self, p: int) -> DisruptionResult:
        r = self._row_of.get(p)
        if r is None:
            raise KeyError(p)
        return DisruptionResult(
            int(self._papers[r]),
            int(self.n_i[r]),
            int(self.n_j[r]),
            int(self.n_k[r]),
            float(self.score[r]),
            bool(self.defined[r]),
            bool(self.ineligible[r]),
        )

    def __iter__(self) -> Iterator[int]:
        return iter(int(p) for p in self._papers)

    def __len__(self) -> int:
        return int(self._papers.shape[0])

    def score_of(self, p: int) -> float | None:
        """Score as a float, or None when missing or undefined."""
        r = self._row_of.get(p)
        if r is None or not self.defined[r]:
            return None
        return float(self.score[r])


def _gather_rows(
    indptr: np.ndarray, indices: np.ndarray, nodes: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Concatenate CSR rows for ``nodes``; returns (values, owner positions)."""
    starts = indptr[nodes]
    counts = indptr[nodes + 1] - starts
    total = int(counts.sum())
    if total == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    offsets = np.repeat(np.cumsum(counts) - counts, counts)
    pos = np.arange(total, dtype=np.int64) - offsets + np.repeat(starts, counts)
    owner = np.repeat(np.arange(nodes.size, dtype=np.int64), counts)
    return indices[pos].astype(np.int64), owner


def _member_mask(sorted_keys: np.ndarray, queries: np.ndarray) -> np.ndarray:
    """Membership of ``queries`` in ``sorted_keys`` (both int64, keys sorted)."""
    if sorted_keys.size == 0 or queries.size == 0:
        return np.zeros(queries.size, dtype=bool)
    pos = np.minimum(np.searchsorted(sorted_keys, queries), sorted_keys.size - 1)
    return sorted_keys[pos] == queries


def _score_range(
    g: CitationGraph,
    papers: np.ndarray,
    min_window_years: int,
    horizon_year: int,
    include_same_year: bool,
) -> tuple[np.ndarray, ...]:
    """Vectorized equivalent of per-paper :func:`disruption_score` over a block.

    Candidate sets are flattened across the block and classified through
    (owner, paper) composite keys; per-owner counts come from bincount.
    """
    m = papers.shape[0]
    n_i = np.zeros(m, dtype=np.int32)
    n_j = np.zeros(m, dtype=np.int32)
    n_k = np.zeros(m, dtype=np.int32)
    score = np.full(m, np.nan)
    defined = np.zeros(m, dtype=bool)
    ineligible = np.zeros(m, dtype=bool)
    if m == 0:
        return n_i, n_j, n_k, score, defined, ineligible

    years = g.years
    yf_all = years[papers]
    ineligible[:] = yf_all > horizon_year - min_window_years
    act = np.nonzero(~ineligible)[0]
    if act.size == 0:
        return n_i, n_j, n_k, score, defined, ineligible
    focal = papers[act]
    yf = yf_all[act].astype(np.int64)
    n_g = g.n_papers

    refs, ref_owner = _gather_rows(g.bwd_indptr, g.bwd_indices, focal)
    ref_keys = ref_owner * n_g + refs  # sorted: owner-major, rows ascending

    citers, cit_owner = _gather_rows(g.fwd_indptr, g.fwd_indices, focal)
    cy = years[citers]
    if include_same_year:
        keep = (cy >= yf[cit_owner]) & (cy <= horizon_year)
    else:
        keep = (cy > yf[cit_owner]) & (cy <= horizon_year)
    c1_keys = cit_owner[keep] * n_g + citers[keep]
    is_ref = _member_mask(ref_keys, c1_keys)
    c1_keys = c1_keys[~is_ref]
    n_1j = np.bincount(c1_keys // n_g, minlength=act.size)

    rc, rc_sub = _gather_rows(g.fwd_indptr, g.fwd_indices, refs)
    rc_owner = ref_owner[rc_sub] if rc_sub.size else rc_sub
    ry = years[rc] if rc.size else rc
    if rc.size:
        if include_same_year:
            keep2 = (ry >= yf[rc_owner]) & (ry <= horizon_year)
        else:
            keep2 = (ry > yf[rc_owner]) & (ry <= horizon_year)
        keep2 &= rc != focal[rc_owner]
        u_keys = np.unique(rc_owner[keep2] * n_g + rc[keep2])
        u_keys = u_keys[~_member_mask(ref_keys, u_keys)]
    else:
        u_keys = np.zeros(0, dtype=np.int64)

    u_owner = u_keys // n_g
    cites_focal = _member_mask(c1_keys, u_keys)
    nj_act = np.bincount(u_owner[cites_focal], minlength=act.size)
    njk_act = np.bincount(u_owner, minlength=act.size)

    nj = nj_act.astype(np.int64)
    ni = n_1j.astype(np.int64) - nj
    nk = njk_act.astype(np.int64) - nj
    total = ni + nj + nk
    has = total > 0
    n_i[act] = ni
    n_j[act] = nj
    n_k[act] = nk
    defined[act] = has
    rows = act[has]
    score[rows] = (ni[has] - nj[has]) / total[has]
    return n_i, n_j, n_k, score, defined, ineligible


# worker-side state for fork-based parallel scoring
_POOL_STATE: dict = {}


def _pool_chunk(bounds: tuple[int, int]) -> tuple[np.ndarray, ...]:
    s = _POOL_STATE
    lo, hi = bounds
    return _score_range(
        s["graph"], s["papers"][lo:hi], s["minw"], s["horizon"], s["same_year"]
    )


def score_all(
    g: CitationGraph,
    min_window_years: int = 5,
    horizon_year: int | None = None,
    include_same_year: bool = False,
    papers: Sequence[int] | np.ndarray | None = None,
    jobs: int = 1,
) -> ScoreTable:
    """Score every paper (or an explicit subset), optionally in parallel.

    Results are identical to calling :func:`disruption_score` per paper and
    do not depend on ``jobs``: chunks cover disjoint index ranges and are
    merged in order.
    """
    if horizon_year is None:
        horizon_year = g.year_max
    if papers is None:
        paper_arr = np.arange(g.n_papers, dtype=np.int64)
    else:
        paper_arr = np.asarray(sorted(int(p) for p in papers), dtype=np.int64)
        if paper_arr.size and (paper_arr[0] < 0 or paper_arr[-1] >= g.n_papers):
            raise IndexError("paper subset out of range")

    if jobs <= 1 or paper_arr.size < 4096:
        parts = [
            _score_range(g, paper_arr, min_window_years, horizon_year, include_same_year)
        ]
    else:
        global _POOL_STATE
        _POOL_STATE = {
            "graph": g,
            "papers": paper_arr,
            "minw": min_window_years,
            "horizon": horizon_year,
            "same_year": include_same_year,
        }
        chunk = 16384
        bounds = [
            (lo, min(lo + chunk, paper_arr.size))
            for lo in range(0, paper_arr.size, chunk)
        ]
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(processes=jobs) as pool:
            parts = pool.map(_pool_chunk, bounds, chunksize=1)
        _POOL_STATE = {}

    return ScoreTable(
        g.n_papers,
        paper_arr,
        np.concatenate([p[0] for p in parts]) if parts else np.zeros(0, np.int32),
        np.concatenate([p[1] for p in parts]),
        np.concatenate([p[2] for p in parts]),
        np.concatenate([p[3] for p in parts]),
        np.concatenate([p[4] for p in parts]),
        np.concatenate([p[5] for p in parts]),
    )


def citations_within(g: CitationGraph, p: int, window_years: int) -> int:
    """Distinct in-corpus citers of ``p`` within ``window_years`` after it.

    Same-year citers are excluded (strict lower bound), so window 0 is
    always 0.
    """
    g._check(p)
    if window_years < 0:
        raise ValueError("window_years must be >= 0")
    yf = int(g.years[p])
    cy = g.years[g.citers_of(p)]
    return int(((cy > yf) & (cy <= yf + window_years)).sum())


def citations_within_all(g: CitationGraph, window_years: int) -> np.ndarray:
    """Vectorized :func:`citations_within` for every paper at once."""
    if window_years < 0:
        raise ValueError("window_years must be >= 0")
    n = g.n_papers
    counts = np.zeros(n, dtype=np.int32)
    if g.n_edges == 0:
        return counts
    cited = np.repeat(
        np.arange(n, dtype=np.int64), np.diff(g.fwd_indptr).astype(np.int64)
    )
    citer = g.fwd_indices.astype(np.int64)
    dy = g.years[citer].astype(np.int64) - g.years[cited].astype(np.int64)
    mask = (dy > 0) & (dy <= window_years)
    counts += np.bincount(cited[mask], minlength=n).astype(np.int32)
    return counts


def write_scores_csv(g: CitationGraph, table: ScoreTable, path: str | Path) -> None:
    """Per-paper CSV: paper_id, year, n_i, n_j, n_k, score, defined."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["paper_id", "year", "n_i", "n_j", "n_k", "score", "defined"])
        for r, p in enumerate(table._papers):
            p = int(p)
            score = float(table.score[r])
            w.writerow(
                [
                    g.paper_ids[p],
                    int(g.years[p]),
                    int(table.n_i[r]),
                    int(table.n_j[r]),
                    int(table.n_k[r]),
                    repr(score) if table.defined[r] else "",
                    "true" if table.defined[r] else "false",
                ]
            )
