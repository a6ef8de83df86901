"""Corpus ingestion: line-delimited publication records and citation edges.

Two on-disk formats are supported:

* ``json-lines``: one UTF-8 JSON object per line with keys ``id`` (string),
  ``year`` (integer), ``authors`` (array of strings), ``references``
  (array of strings).
* ``csv-pair``: a directory holding ``papers.csv`` with header
  ``paper_id,year,author_ids`` (author ids joined by ``;``) and ``edges.csv``
  with header ``citing_id,cited_id``.

Parsing is streaming and forgiving: structurally invalid lines are counted
and skipped, never fatal. Duplicate paper ids are fatal (they would corrupt
every downstream index).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

__all__ = [
    "PaperRecord",
    "CorpusStats",
    "CorpusFormatError",
    "DuplicateIdError",
    "parse_corpus",
    "validate_corpus",
    "write_corpus",
]

YEAR_RANGE = (1900, 2100)


class CorpusFormatError(Exception):
    """Raised for structurally unusable inputs (bad header, unknown format)."""


class DuplicateIdError(Exception):
    """Raised when two records share a paper id."""


class PaperRecord(NamedTuple):
    """One publication: opaque id, calendar year, authors, reference ids.

    ``reference_ids`` may point at papers absent from the corpus; such
    dangling references are kept (and counted) because downstream scoring
    only ever classifies in-corpus citers. The list fields are cleaned in
    place by validation.
    """

    paper_id: str
    year: int
    author_ids: list[str]
    reference_ids: list[str]


@dataclass(slots=True)
class CorpusStats:
    """Counting diagnostics accumulated while reading or validating a corpus."""

    papers_read: int = 0
    papers_rejected: int = 0
    edges_read: int = 0
    edges_dropped: int = 0
    dangling_references: int = 0
    self_references_removed: int = 0
    duplicate_authors_removed: int = 0
    year_min: int = 0
    year_max: int = 0

    def as_dict(self) -> dict:
        return {
            "papers_read": self.papers_read,
            "papers_rejected": self.papers_rejected,
            "edges_read": self.edges_read,
            "edges_dropped": self.edges_dropped,
            "dangling_references": self.dangling_references,
            "self_references_removed": self.self_references_removed,
            "duplicate_authors_removed": self.duplicate_authors_removed,
            "year_min": self.year_min,
            "year_max": self.year_max,
        }


def _clean_record(rec: PaperRecord, stats: CorpusStats) -> None:
    """Dedup authors and drop self-references in place, counting removals."""
    if len(set(rec.author_ids)) != len(rec.author_ids):
        seen: set[str] = set()
        deduped = []
        for a in rec.author_ids:
            if a not in seen:
                seen.add(a)
                deduped.append(a)
        stats.duplicate_authors_removed += len(rec.author_ids) - len(deduped)
        rec.author_ids[:] = deduped
    if rec.paper_id in rec.reference_ids:
        n = len(rec.reference_ids)
        kept = [r for r in rec.reference_ids if r != rec.paper_id]
        stats.self_references_removed += n - len(kept)
        rec.reference_ids[:] = kept


def _finish_stats(records: Sequence[PaperRecord], stats: CorpusStats) -> None:
    stats.papers_read = len(records)
    if records:
        stats.year_min = min(r.year for r in records)
        stats.year_max = max(r.year for r in records)
    known = {r.paper_id for r in records}
    stats.dangling_references = sum(
        1 for r in records for ref in r.reference_ids if ref not in known
    )


def _coerce_json_record(obj: object, year_range: tuple[int, int]) -> PaperRecord | None:
    if not isinstance(obj, dict):
        return None
    pid = obj.get("id")
    year = obj.get("year")
    authors = obj.get("authors", [])
    refs = obj.get("references", [])
    if not isinstance(pid, str) or not pid:
        return None
    if isinstance(year, bool) or not isinstance(year, int):
        return None
    if not year_range[0] <= year <= year_range[1]:
        return None
    if not isinstance(authors, list) or not all(isinstance(a, str) for a in authors):
        return None
    if not isinstance(refs, list) or not all(isinstance(r, str) for r in refs):
        return None
    return PaperRecord(pid, year, list(authors), list(refs))


def _parse_json_lines(
    path: Path, stats: CorpusStats, year_range: tuple[int, int]
) -> list[PaperRecord]:
    records: list[PaperRecord] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError:
                stats.papers_rejected += 1
                continue
            rec = _coerce_json_record(obj, year_range)
            if rec is None:
                stats.papers_rejected += 1
                continue
            stats.edges_read += len(rec.reference_ids)
            _clean_record(rec, stats)
            records.append(rec)
    return records


def _parse_csv_pair(
    path: Path, stats: CorpusStats, year_range: tuple[int, int]
) -> list[PaperRecord]:
    papers_path = path / "papers.csv"
    edges_path = path / "edges.csv"
    for p in (papers_path, edges_path):
        if not p.is_file():
            raise FileNotFoundError(f"csv-pair corpus requires {p.name} in {path}")

    records: list[PaperRecord] = []
    by_id: dict[str, PaperRecord] = {}
    with open(papers_path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["paper_id", "year", "author_ids"]:
            raise CorpusFormatError(
                f"{papers_path.name}: expected header paper_id,year,author_ids, got {header}"
            )
        for row in reader:
            if len(row) != 3:
                stats.papers_rejected += 1
                continue
            pid, year_s, authors_s = row
            try:
                year = int(year_s)
            except ValueError:
                stats.papers_rejected += 1
                continue
            if not pid or not year_range[0] <= year <= year_range[1]:
                stats.papers_rejected += 1
                continue
            authors = [a for a in authors_s.split(";") if a]
            rec = PaperRecord(pid, year, authors, [])
            records.append(rec)
            # last one wins here; duplicate ids are reported by validate_corpus
            by_id[pid] = rec

    with open(edges_path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["citing_id", "cited_id"]:
            raise CorpusFormatError(
                f"{edges_path.name}: expected header citing_id,cited_id, got {header}"
            )
        for row in reader:
            if len(row) != 2 or not row[0] or not row[1]:
                stats.edges_dropped += 1
                continue
            citing, cited = row
            stats.edges_read += 1
            rec = by_id.get(citing)
            if rec is None:
                # edge whose citing side is not a known paper cannot be attached
                stats.edges_dropped += 1
                continue
            rec.reference_ids.append(cited)

    for rec in records:
        _clean_record(rec, stats)
    return records


def parse_corpus(
    path: str | Path,
    format: str,
    year_range: tuple[int, int] = YEAR_RANGE,
) -> tuple[list[PaperRecord], CorpusStats]:
    """Read a corpus from ``path`` in the declared ``format``.

    Returns the accepted records in input order plus counting diagnostics.
    Per-line problems (bad JSON, missing fields, out-of-range years) are
    counted in ``papers_rejected`` and skipped; unreadable files and
    malformed CSV headers raise.
    """
    path = Path(path)
    stats = CorpusStats()
    if format == "json-lines":
        records = _parse_json_lines(path, stats, year_range)
    elif format == "csv-pair":
        records = _parse_csv_pair(path, stats, year_range)
    else:
        raise CorpusFormatError(f"unknown corpus format: {format!r}")
    _finish_stats(records, stats)
    return records, stats


def validate_corpus(records: Sequence[PaperRecord]) -> CorpusStats:
    """Check id uniqueness and clean records in place.

    Self-citations are removed and author lists deduplicated (idempotent on
    corpora coming from :func:`parse_corpus`, which already cleans them).
    Raises :class:`DuplicateIdError` naming the first duplicate id.
    """
    stats = CorpusStats()
    seen: set[str] = set()
    for rec in records:
        if rec.paper_id in seen:
            raise DuplicateIdError(f"duplicate paper_id: {rec.paper_id!r}")
        seen.add(rec.paper_id)
        stats.edges_read += len(rec.reference_ids)
        _clean_record(rec, stats)
    _finish_stats(records, stats)
    return stats


def write_corpus(records: Iterable[PaperRecord], path: str | Path) -> None:
    """Serialize records to the json-lines schema (round-trips with parse)."""
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(
                json.dumps(
                    {
                        "id": rec.paper_id,
                        "year": rec.year,
                        "authors": rec.author_ids,
                        "references": rec.reference_ids,
                    },
                    ensure_ascii=False,
                    separators=(",", ":"),
                )
            )
            fh.write("\n")
