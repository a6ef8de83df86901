"""Synthetic citation corpora with plantable innovation dynamics.

A generated corpus has four layers:

* career papers: ``n_authors`` researchers, each with a start year, span and
  per-year Poisson paper counts (optionally adjusted to satisfy the long-
  career cohort filter);
* anchor papers: private references created one year before each career
  paper, cited by nothing else;
* follower papers: published 1..``follower_window`` years after their focal
  career paper, always citing it and, with probability driven by the paper's
  planted innovation target, also citing its anchors (which drags the
  disruption score down);
* reference-only citers and background papers providing denominator noise
  and a realistic right-skewed citation layer via preferential attachment
  inside a sliding recency window.

Only followers and reference-only citers ever cite a career paper or its
anchors, and those are generated with position-independent mechanics, so a
career paper's realized disruption score is a controlled, monotone function
of its planted target:

* ``iid``: targets drawn i.i.d. across a career, making the realized score
  sequence exchangeable (the shuffled benchmark cannot distinguish it);
* ``front-loaded``: targets multiplied by a factor decaying with career age
  (``profile_strength`` is the decay rate);
* ``effort-coupled``: targets increase with the publication year's effort
  (time devoted over papers) while follower counts, hence early citations,
  increase with its productivity -- innovation and impact pull in opposite
  directions as ``profile_strength`` grows;
* ``magical-year``: papers in one interior career year get elevated targets.

Edges never point forward in time. Generation is single-threaded and fully
determined by the seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .ingest import PaperRecord

__all__ = ["SynthConfig", "SynthConfigError", "generate", "PROFILES"]

PROFILES = ("iid", "front-loaded", "effort-coupled", "magical-year")

_FOLLOWER_FLOOR = 3


class SynthConfigError(Exception):
    """Raised for invalid or infeasible generator configurations."""


@dataclass(frozen=True, slots=True)
class SynthConfig:
    seed: int = 0
    n_authors: int = 100
    start_year_range: tuple[int, int] = (1980, 2000)
    span_range: tuple[int, int] = (20, 26)
    papers_per_year: float = 0.6
    guarantee_cohort: bool = True
    innovation_profile: str = "iid"
    profile_strength: float = 1.0
    followers_mean: float = 5.0
    follower_window: int = 5
    anchors_per_paper: int = 1
    anchor_citer_mean: float = 0.2  # reference-only citers per follower
    follower_extra_refs: int = 1
    background_per_year: int = 40
    background_refs: int = 6
    attachment_exponent: float = 0.8
    recency_window: int = 3
    coauthors_mean: float = 2.0

    def validate(self) -> None:
        if self.n_authors < 0:
            raise SynthConfigError("n_authors must be >= 0")
        if self.papers_per_year <= 0:
            raise SynthConfigError("papers_per_year must be positive")
        if self.start_year_range[0] > self.start_year_range[1]:
            raise SynthConfigError("start_year_range must be ordered")
        if not 1 <= self.span_range[0] <= self.span_range[1]:
            raise SynthConfigError("span_range must be ordered and positive")
        if self.follower_window < 1 or self.recency_window < 1:
            raise SynthConfigError("follower_window and recency_window must be >= 1")
        if self.innovation_profile not in PROFILES:
            raise SynthConfigError(f"unknown innovation profile: {self.innovation_profile!r}")
        for name in (
            "followers_mean",
            "anchor_citer_mean",
            "coauthors_mean",
        ):
            if getattr(self, name) < 0:
                raise SynthConfigError(f"{name} must be >= 0")
        for name in (
            "anchors_per_paper",
            "follower_extra_refs",
            "background_per_year",
            "background_refs",
        ):
            if getattr(self, name) < 0:
                raise SynthConfigError(f"{name} must be >= 0")
        if self.guarantee_cohort and self.span_range[0] < 20:
            raise SynthConfigError(
                "guarantee_cohort needs span_range >= 20 years; "
                f"got minimum span {self.span_range[0]}"
            )


@dataclass(slots=True)
class _Stubs:
    """Parallel per-paper arrays accumulated during generation."""

    years: list[int] = field(default_factory=list)
    authors: list[list[str]] = field(default_factory=list)
    refs: list[list[int]] = field(default_factory=list)
    pa_refs: list[int] = field(default_factory=list)
    in_pool: list[bool] = field(default_factory=list)

    def add(self, year: int, authors: list[str], refs: list[int], pa: int, pool: bool) -> int:
        serial = len(self.years)
        self.years.append(year)
        self.authors.append(authors)
        self.refs.append(refs)
        self.pa_refs.append(pa)
        self.in_pool.append(pool)
        return serial


def _career_year_counts(
    cfg: SynthConfig, rng: np.random.Generator, rate_scale: float = 1.0
) -> tuple[int, int, dict[int, int]]:
    start = int(rng.integers(cfg.start_year_range[0], cfg.start_year_range[1] + 1))
    span = int(rng.integers(cfg.span_range[0], cfg.span_range[1] + 1))
    end = start + span
    counts: dict[int, int] = {start: 1, end: 1}
    interior = np.arange(start + 1, end)
    if interior.size:
        draws = rng.poisson(cfg.papers_per_year * rate_scale, size=interior.size)
        for y, c in zip(interior, draws):
            if c > 0:
                counts[int(y)] = int(c)
    if cfg.guarantee_cohort:
        # close gaps wider than five years, then top up to ten papers
        years = sorted(counts)
        prev = years[0]
        for y in years[1:]:
            while y - prev > 5:
                prev += 5
                counts[prev] = counts.get(prev, 0) + 1
            prev = y
        while sum(counts.values()) < 10:
            y = int(rng.integers(start, end + 1))
            counts[y] = counts.get(y, 0) + 1
    return start, end, counts


def _year_effort(years: Sequence[int], counts: dict[int, int]) -> dict[int, tuple[int, int]]:
    """Per distinct year: (time devoted, papers), matching the period metric."""
    out: dict[int, tuple[int, int]] = {}
    prev: int | None = None
    for y in years:
        t = 1 if prev is None else max(y - prev, 1)
        out[y] = (t, counts[y])
        prev = y
    return out


def _plant_targets(
    cfg: SynthConfig,
    rng: np.random.Generator,
    start: int,
    end: int,
    counts: dict[int, int],
    paper_years: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-paper planted score targets and follower-rate multipliers.

    ``paper_years`` is the flattened, sorted year of each career paper.
    """
    years = sorted(counts)
    n = paper_years.size
    rate_mult = np.ones(n)
    profile = cfg.innovation_profile
    strength = cfg.profile_strength

    if profile == "iid":
        targets = rng.uniform(-0.6, 0.9, size=n)
    elif profile == "front-loaded":
        span = max(end - start, 1)
        factor = np.exp(-strength * (paper_years - start) / span)
        targets = rng.uniform(0.0, 0.9, size=n) * factor
    elif profile == "effort-coupled":
        # most of the planted signal sits between careers (their typical
        # effort level); pure within-career planting would be washed out by
        # conditioning on the argmax year. Time devoted gets extra weight:
        # regression rows require a pre-peak publication, which caps its
        # observable range at two years.
        eff = _year_effort(years, counts)
        raw = {y: 2.2 * math.log(t) - 0.7 * math.log(k) for y, (t, k) in eff.items()}
        mu = sum(raw.values()) / len(raw)
        args = np.array(
            [strength * ((mu - 0.35) + 0.45 * (raw[int(y)] - mu)) for y in paper_years]
        )
        targets = np.clip(np.tanh(args) + rng.normal(0.0, 0.18, size=n), -0.75, 0.75)
        ratio = np.array([eff[int(y)][1] / eff[int(y)][0] for y in paper_years])
        rate_mult = np.clip(ratio**1.2, 0.05, 20.0)
    else:  # magical-year
        interior = years[1:-1]
        multi = [y for y in interior if counts[y] >= 2]
        magic = None
        if multi:
            magic = int(multi[int(rng.integers(0, len(multi)))])
        elif interior:
            magic = int(interior[int(rng.integers(0, len(interior)))])
        in_magic = paper_years == magic
        targets = np.where(
            in_magic,
            rng.uniform(0.55, 0.9, size=n),
            rng.uniform(-0.4, 0.2, size=n),
        )
    return targets, rate_mult


def _attach_preferential(
    cfg: SynthConfig, rng: np.random.Generator, stubs: _Stubs
) -> None:
    """Draw the deferred preferential-attachment references, year by year."""
    n = len(stubs.years)
    years = np.asarray(stubs.years, dtype=np.int64)
    pa = np.asarray(stubs.pa_refs, dtype=np.int64)
    pool = np.asarray(stubs.in_pool, dtype=bool)
    indeg = np.zeros(n, dtype=np.float64)

    drawer_idx = np.nonzero(pa > 0)[0]
    pool_idx = np.nonzero(pool)[0]
    if drawer_idx.size == 0 or pool_idx.size == 0:
        return
    pool_years = years[pool_idx]
    order = np.argsort(pool_years, kind="stable")
    pool_idx = pool_idx[order]
    pool_years = pool_years[order]

    d_order = np.argsort(years[drawer_idx], kind="stable")
    drawer_idx = drawer_idx[d_order]
    drawer_years = years[drawer_idx]

    alpha = cfg.attachment_exponent
    w_window = cfg.recency_window
    pos = 0
    while pos < drawer_idx.size:
        y = int(drawer_years[pos])
        stop = pos
        while stop < drawer_idx.size and drawer_years[stop] == y:
            stop += 1
        lo = np.searchsorted(pool_years, y - w_window, side="left")
        hi = np.searchsorted(pool_years, y - 1, side="right")
        window = pool_idx[lo:hi]
        if window.size:
            weights = (indeg[window] + 1.0) ** alpha
            prob = weights / weights.sum()
            need = pa[drawer_idx[pos:stop]]
            total = int(need.sum())
            picks = window[rng.choice(window.size, size=total, p=prob)]
            indeg += np.bincount(picks, minlength=n)
            offsets = np.concatenate([[0], np.cumsum(need)]).tolist()
            picks_list = picks.tolist()
            drawers = drawer_idx[pos:stop].tolist()
            refs = stubs.refs
            for i, serial in enumerate(drawers):
                lo_i, hi_i = offsets[i], offsets[i + 1]
                if hi_i - lo_i == 1:
                    refs[serial].append(picks_list[lo_i])
                else:
                    refs[serial].extend(dict.fromkeys(picks_list[lo_i:hi_i]))
        pos = stop


def generate(cfg: SynthConfig) -> list[PaperRecord]:
    """Produce a corpus of records, sorted by (year, id), from the config."""
    cfg.validate()
    if cfg.n_authors == 0:
        return []
    rng = np.random.default_rng(cfg.seed & (2**64 - 1))
    stubs = _Stubs()
    career_year_max = cfg.start_year_range[0]

    coupled = cfg.innovation_profile == "effort-coupled"
    for a in range(cfg.n_authors):
        author = f"a{a:05d}"
        # publishing-pace heterogeneity gives the coupled profile a
        # between-career effort axis
        pace = float(np.exp(rng.uniform(-0.7, 0.5))) if coupled else 1.0
        start, end, counts = _career_year_counts(cfg, rng, rate_scale=pace)
        career_year_max = max(career_year_max, end)

        # flatten to per-paper arrays and draw all career randomness at once
        paper_years = np.array(
            [y for y in sorted(counts) for _ in range(counts[y])], dtype=np.int64
        )
        targets, rate_mult = _plant_targets(cfg, rng, start, end, counts, paper_years)
        n_pap = paper_years.size
        lam = cfg.followers_mean * rate_mult
        co_counts = rng.poisson(cfg.coauthors_mean, size=n_pap)
        # a follower floor keeps scores off the +-1 atoms that a paper with
        # one or two citers would hit, and reference-only citers scale with
        # follower count so the attainable score range is follower-independent
        m_counts = _FOLLOWER_FLOOR + rng.poisson(np.maximum(lam - _FOLLOWER_FLOOR, 0.2))
        k_counts = rng.poisson(cfg.anchor_citer_mean * m_counts)
        total_m = int(m_counts.sum())
        f_offsets = rng.integers(1, cfg.follower_window + 1, size=total_m)
        copy_prob = 1.0 - (targets + 1.0) / 2.0
        f_copies = rng.random(size=total_m) < np.repeat(copy_prob, m_counts)
        k_offsets = rng.integers(1, cfg.follower_window + 1, size=int(k_counts.sum()))

        paper_years_list = paper_years.tolist()
        f_pos = 0
        k_pos = 0
        for idx in range(n_pap):
            y = paper_years_list[idx]
            serial_hint = len(stubs.years)
            coauthors = [f"w{serial_hint}n{i}" for i in range(int(co_counts[idx]))]
            anchors = [
                stubs.add(y - 1, [f"v{len(stubs.years)}"], [], 0, False)
                for _ in range(cfg.anchors_per_paper)
            ]
            focal = stubs.add(y, [author] + coauthors, list(anchors), 0, False)

            m = int(m_counts[idx])
            for i in range(m):
                refs = [focal] + (list(anchors) if f_copies[f_pos + i] else [])
                stubs.add(
                    y + int(f_offsets[f_pos + i]),
                    [f"f{len(stubs.years)}"],
                    refs,
                    cfg.follower_extra_refs,
                    True,
                )
            f_pos += m
            k = int(k_counts[idx])
            if anchors:
                for i in range(k):
                    stubs.add(
                        y + int(k_offsets[k_pos + i]),
                        [f"k{len(stubs.years)}"],
                        list(anchors),
                        cfg.follower_extra_refs,
                        True,
                    )
            k_pos += k

    # background layer spans the whole timeline and pins the horizon year
    bg_lo = cfg.start_year_range[0] - 2
    bg_hi = career_year_max + cfg.follower_window
    for y in range(bg_lo, bg_hi + 1):
        n_bg = cfg.background_per_year if y > bg_lo else max(cfg.background_per_year, 1)
        n_bg = n_bg if y < bg_hi else max(n_bg, 1)
        for _ in range(n_bg):
            stubs.add(y, [f"b{len(stubs.years)}"], [], cfg.background_refs, True)

    _attach_preferential(cfg, rng, stubs)

    n = len(stubs.years)
    ids = [f"p{s:08d}" for s in range(n)]
    order = np.lexsort((np.arange(n), np.asarray(stubs.years, dtype=np.int64))).tolist()
    years_l, authors_l, refs_l = stubs.years, stubs.authors, stubs.refs
    return [
        PaperRecord(ids[s], years_l[s], authors_l[s], [ids[r] for r in refs_l[s]])
        for s in order
    ]
