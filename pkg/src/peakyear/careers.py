"""Career assembly, cohort filtering, peak location, phase and period metrics.

A career is one author's chronologically sorted publication sequence. Each
publication carries its disruption score (or None when undefined) and its
early citation count; papers with undefined scores stay in the sequence but
never enter innovation averages.

Period metrics follow the effort definition: ``time_devoted`` is the number
of years between the last publication preceding a period and the period's
final year, and ``effort`` divides that by the number of papers published
in the period. A researcher who published 1 paper in 2005, 3 in 2007 and 5
in 2008 has effort 3/8 over [2007, 2008]. Relative variants divide each
quantity by its whole-career counterpart.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple

from .disruption import ScoreTable, citations_within_all
from .graph import CitationGraph

__all__ = [
    "Publication",
    "Career",
    "CohortFilter",
    "PeakInfo",
    "PhaseAverages",
    "PeriodMetrics",
    "assemble_careers",
    "apply_cohort_filter",
    "find_peak",
    "phase_averages",
    "period_metrics",
    "write_career_summary_csv",
    "write_period_metrics_csv",
]


class Publication(NamedTuple):
    paper: int
    year: int
    coauthors: int
    score: float | None
    citations: int


@dataclass(slots=True)
class Career:
    """One researcher's publications, sorted by (year, dense paper index)."""

    author_id: str
    publications: tuple[Publication, ...]
    first_year: int
    last_year: int

    @classmethod
    def from_publications(cls, author_id: str, pubs: Iterable[Publication]) -> "Career":
        ordered = tuple(sorted(pubs, key=lambda p: (p.year, p.paper)))
        if not ordered:
            raise ValueError("career must have at least one publication")
        return cls(author_id, ordered, ordered[0].year, ordered[-1].year)

    def defined_scores(self) -> list[float]:
        return [p.score for p in self.publications if p.score is not None]


@dataclass(frozen=True, slots=True)
class CohortFilter:
    """Long-career selection: start window, span, volume, and gap rules."""

    start_min: int = 1980
    start_max: int = 2000
    min_span: int = 20
    min_papers: int = 10
    max_gap: int = 5

    def __post_init__(self):
        if self.start_min > self.start_max:
            raise ValueError("start_min must be <= start_max")
        if min(self.min_span, self.min_papers, self.max_gap) <= 0:
            raise ValueError("span, paper and gap thresholds must be positive")

    def accepts(self, c: Career) -> bool:
        if not self.start_min <= c.first_year <= self.start_max:
            return False
        if c.last_year - c.first_year < self.min_span:
            return False
        if len(c.publications) < self.min_papers:
            return False
        years = sorted({p.year for p in c.publications})
        return all(b - a <= self.max_gap for a, b in zip(years, years[1:]))


@dataclass(frozen=True, slots=True)
class PeakInfo:
    """Location of a career's highest-disruption publication."""

    peak_year: int
    peak_paper: int
    peak_score: float
    time_to_peak: int
    papers_before_peak: int
    is_boundary: bool


class PhaseAverages(NamedTuple):
    bpy: float | None
    py_excl: float | None
    apy: float | None


@dataclass(frozen=True, slots=True)
class PeriodMetrics:
    period: tuple[int, int]
    productivity: int
    time_devoted: int
    effort: float
    relative_effort: float
    relative_productivity: float
    relative_time_devoted: float


def assemble_careers(
    g: CitationGraph,
    scores: ScoreTable | Mapping[int, object],
    citation_window: int = 5,
    authors: Iterable[str] | None = None,
) -> dict[str, Career]:
    """Build one career per author in the graph, keyed and ordered by author id.

    Coauthor count per paper is the author-list length minus one, floored at
    zero. Papers missing from ``scores`` (or undefined there) carry
    ``score=None``. ``authors`` restricts assembly to a subset; each subset
    career is identical to the one a full assembly would produce.
    """
    cites = citations_within_all(g, citation_window)
    years = g.years
    n_auth = g.n_authors

    if isinstance(scores, ScoreTable):
        score_of = scores.score_of
    else:

        def score_of(p: int) -> float | None:
            res = scores.get(p)
            if res is None or not res.defined:
                return None
            return res.score

    if authors is None:
        pairs = enumerate(g.author_ids)
    else:
        pairs = sorted((g.author_index_of[aid], aid) for aid in authors)

    careers: dict[str, Career] = {}
    indptr = g.author_indptr
    papers = g.author_papers
    for a, author_id in pairs:
        row = papers[indptr[a] : indptr[a + 1]]
        pubs = tuple(
            Publication(
                int(p),
                int(years[p]),
                max(int(n_auth[p]) - 1, 0),
                score_of(int(p)),
                int(cites[p]),
            )
            for p in row
        )
        careers[author_id] = Career(author_id, pubs, pubs[0].year, pubs[-1].year)
    return careers


def apply_cohort_filter(
    careers: Mapping[str, Career], f: CohortFilter | None = None
) -> dict[str, Career]:
    """Keep only careers passing the long-career criteria (order preserved)."""
    f = f or CohortFilter()
    return {aid: c for aid, c in careers.items() if f.accepts(c)}


def find_peak(c: Career) -> PeakInfo | None:
    """Locate the maximal defined-score publication, or None if none exists.

    Ties go to the earliest year, then the smallest dense index; both fall
    out of the career's sort order.
    """
    best: Publication | None = None
    for p in c.publications:
        if p.score is not None and (best is None or p.score > best.score):
            best = p
    if best is None:
        return None
    before = sum(1 for p in c.publications if p.year < best.year)
    return PeakInfo(
        peak_year=best.year,
        peak_paper=best.paper,
        peak_score=best.score,
        time_to_peak=best.year - c.first_year,
        papers_before_peak=before,
        is_boundary=best.year in (c.first_year, c.last_year),
    )


def _mean(values: list[float]) -> float | None:
    return sum(values) / len(values) if values else None


def phase_averages(c: Career, window: int | None = None) -> PhaseAverages:
    """Mean defined score before, during (peak paper excluded), and after the peak year.

    ``window=None`` uses full phases; ``window=w`` restricts them to
    [peak-w, peak-1] and [peak+1, peak+w]. Missing phases are None.
    """
    peak = find_peak(c)
    if peak is None:
        return PhaseAverages(None, None, None)
    py = peak.peak_year
    if window is None:
        lo, hi = c.first_year, c.last_year
    else:
        lo, hi = py - window, py + window
    bpy = [
        p.score
        for p in c.publications
        if p.score is not None and lo <= p.year < py
    ]
    apy = [
        p.score
        for p in c.publications
        if p.score is not None and py < p.year <= hi
    ]
    py_excl = [
        p.score
        for p in c.publications
        if p.score is not None and p.year == py and p.paper != peak.peak_paper
    ]
    return PhaseAverages(_mean(bpy), _mean(py_excl), _mean(apy))


def period_metrics(c: Career, period: tuple[int, int]) -> PeriodMetrics | None:
    """Effort, productivity and time devoted over an inclusive year interval.

    Returns None when the period holds no publications. ``time_devoted``
    is floored at 1 year so effort stays finite for first-year periods.
    """
    y_start, y_end = period
    if y_start > y_end:
        raise ValueError(f"malformed period: {period}")
    productivity = sum(1 for p in c.publications if y_start <= p.year <= y_end)
    if productivity == 0:
        return None
    prev = [p.year for p in c.publications if p.year < y_start]
    anchor = max(prev) if prev else c.first_year
    time_devoted = max(y_end - anchor, 1)
    effort = time_devoted / productivity

    career_productivity = len(c.publications)
    career_time = max(c.last_year - c.first_year, 1)
    career_effort = career_time / career_productivity
    return PeriodMetrics(
        period=(y_start, y_end),
        productivity=productivity,
        time_devoted=time_devoted,
        effort=effort,
        relative_effort=effort / career_effort,
        relative_productivity=productivity / career_productivity,
        relative_time_devoted=time_devoted / career_time,
    )


def write_career_summary_csv(
    careers: Mapping[str, Career], path: str | Path
) -> None:
    """Per-career CSV with peak location fields (peakless careers skipped)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(
            [
                "author_id",
                "first_year",
                "last_year",
                "n_papers",
                "peak_year",
                "peak_score",
                "time_to_peak",
                "papers_before_peak",
            ]
        )
        for aid in sorted(careers):
            c = careers[aid]
            peak = find_peak(c)
            if peak is None:
                continue
            w.writerow(
                [
                    aid,
                    c.first_year,
                    c.last_year,
                    len(c.publications),
                    peak.peak_year,
                    repr(peak.peak_score),
                    peak.time_to_peak,
                    peak.papers_before_peak,
                ]
            )


def write_period_metrics_csv(
    rows: Iterable[tuple[str, PeriodMetrics]], path: str | Path
) -> None:
    """CSV of per-career period metrics (one row per career/period)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(
            [
                "author_id",
                "y_start",
                "y_end",
                "productivity",
                "time_devoted",
                "effort",
                "relative_effort",
                "relative_productivity",
                "relative_time_devoted",
            ]
        )
        for aid, m in rows:
            w.writerow(
                [
                    aid,
                    m.period[0],
                    m.period[1],
                    m.productivity,
                    m.time_devoted,
                    repr(m.effort),
                    repr(m.relative_effort),
                    repr(m.relative_productivity),
                    repr(m.relative_time_devoted),
                ]
            )
