"""Immutable citation graph in compressed sparse form.

Both directions are materialized: ``forward`` maps a paper to the papers
citing it, ``backward`` maps a paper to its in-corpus references. Parallel
edges are collapsed at build time and dangling references dropped, so
adjacency rows are sorted, duplicate-free index arrays. A per-author index
(papers sorted by year, then dense index) serves career assembly.

Snapshot layout (``save`` / ``CitationGraph.load``), all little-endian:

    bytes 0..7   magic ``b"PKYGRPH1"``
    bytes 8..11  uint32 header length H
    bytes 12..   H bytes of UTF-8 JSON: array names, dtypes, lengths, and
                 byte lengths of the two id blobs
    then, in header order: raw array bytes (years <i4, n_authors <i4,
    fwd_indptr <i8, fwd_indices <i4, bwd_indptr <i8, bwd_indices <i4,
    author_indptr <i8, author_papers <i4), then a JSON array of paper ids,
    then a JSON array of author ids.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path
from typing import Sequence

import numpy as np

from .ingest import PaperRecord

__all__ = ["CitationGraph", "build_graph"]

_MAGIC = b"PKYGRPH1"

_ARRAY_SPEC = (
    ("years", "<i4"),
    ("n_authors", "<i4"),
    ("fwd_indptr", "<i8"),
    ("fwd_indices", "<i4"),
    ("bwd_indptr", "<i8"),
    ("bwd_indices", "<i4"),
    ("author_indptr", "<i8"),
    ("author_papers", "<i4"),
)


class CitationGraph:
    """Read-only citation graph over densely indexed papers.

    Construction goes through :func:`build_graph`; afterwards the arrays are
    never mutated, so instances are safe for concurrent readers and for
    copy-on-write sharing across worker processes.
    """

    def __init__(
        self,
        paper_ids: list[str],
        years: np.ndarray,
        n_authors: np.ndarray,
        fwd_indptr: np.ndarray,
        fwd_indices: np.ndarray,
        bwd_indptr: np.ndarray,
        bwd_indices: np.ndarray,
        author_ids: list[str],
        author_indptr: np.ndarray,
        author_papers: np.ndarray,
    ):
        self.paper_ids = paper_ids
        self.years = years
        self.n_authors = n_authors
        self.fwd_indptr = fwd_indptr
        self.fwd_indices = fwd_indices
        self.bwd_indptr = bwd_indptr
        self.bwd_indices = bwd_indices
        self.author_ids = author_ids
        self.author_indptr = author_indptr
        self.author_papers = author_papers
        self.index_of = {pid: i for i, pid in enumerate(paper_ids)}
        self.author_index_of = {aid: i for i, aid in enumerate(author_ids)}

    # -- basic shape -------------------------------------------------------

    @property
    def n_papers(self) -> int:
        return len(self.paper_ids)

    @property
    def n_edges(self) -> int:
        return int(self.fwd_indices.shape[0])

    @property
    def year_min(self) -> int:
        return int(self.years.min()) if self.n_papers else 0

    @property
    def year_max(self) -> int:
        return int(self.years.max()) if self.n_papers else 0

    def _check(self, p: int) -> None:
        if not 0 <= p < self.n_papers:
            raise IndexError(f"paper index {p} out of range [0, {self.n_papers})")

    # -- adjacency ---------------------------------------------------------

    def citers_of(self, p: int) -> np.ndarray:
        """Distinct in-corpus papers citing ``p``, sorted by dense index."""
        self._check(p)
        return self.fwd_indices[self.fwd_indptr[p] : self.fwd_indptr[p + 1]]

    def refs_of(self, p: int) -> np.ndarray:
        """Distinct in-corpus references of ``p``, sorted by dense index."""
        self._check(p)
        return self.bwd_indices[self.bwd_indptr[p] : self.bwd_indptr[p + 1]]

    def papers_of_author(self, author_id: str) -> np.ndarray:
        """Dense paper indices of one author, sorted by (year, index)."""
        a = self.author_index_of[author_id]
        return self.author_papers[self.author_indptr[a] : self.author_indptr[a + 1]]

    # -- snapshot ----------------------------------------------------------

    def save(self, path: str | Path) -> None:
        arrays = {
            "years": self.years,
            "n_authors": self.n_authors,
            "fwd_indptr": self.fwd_indptr,
            "fwd_indices": self.fwd_indices,
            "bwd_indptr": self.bwd_indptr,
            "bwd_indices": self.bwd_indices,
            "author_indptr": self.author_indptr,
            "author_papers": self.author_papers,
        }
        pid_blob = json.dumps(self.paper_ids, ensure_ascii=False).encode("utf-8")
        aid_blob = json.dumps(self.author_ids, ensure_ascii=False).encode("utf-8")
        header = {
            "arrays": [
                {"name": name, "dtype": dtype, "len": int(arrays[name].shape[0])}
                for name, dtype in _ARRAY_SPEC
            ],
            "paper_ids_bytes": len(pid_blob),
            "author_ids_bytes": len(aid_blob),
        }
        hdr = json.dumps(header, sort_keys=True).encode("utf-8")
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<I", len(hdr)))
            fh.write(hdr)
            for name, dtype in _ARRAY_SPEC:
                fh.write(np.ascontiguousarray(arrays[name], dtype=dtype).tobytes())
            fh.write(pid_blob)
            fh.write(aid_blob)

    @classmethod
    def load(cls, path: str | Path) -> "CitationGraph":
        with open(path, "rb") as fh:
            magic = fh.read(8)
            if magic != _MAGIC:
                raise ValueError(f"not a citation graph snapshot: {path}")
            (hdr_len,) = struct.unpack("<I", fh.read(4))
            header = json.loads(fh.read(hdr_len).decode("utf-8"))
            arrays = {}
            for spec in header["arrays"]:
                n = spec["len"]
                dtype = np.dtype(spec["dtype"])
                arrays[spec["name"]] = np.frombuffer(
                    fh.read(n * dtype.itemsize), dtype=dtype
                )
            paper_ids = json.loads(fh.read(header["paper_ids_bytes"]).decode("utf-8"))
            author_ids = json.loads(fh.read(header["author_ids_bytes"]).decode("utf-8"))
        return cls(
            paper_ids,
            arrays["years"],
            arrays["n_authors"],
            arrays["fwd_indptr"],
            arrays["fwd_indices"],
            arrays["bwd_indptr"],
            arrays["bwd_indices"],
            author_ids,
            arrays["author_indptr"],
            arrays["author_papers"],
        )


def _csr_from_pairs(
    rows: np.ndarray, cols: np.ndarray, n: int
) -> tuple[np.ndarray, np.ndarray]:
    """Sorted, deduplicated CSR (indptr, indices) from COO pairs."""
    if rows.size:
        key = rows.astype(np.int64) * n + cols.astype(np.int64)
        key = np.unique(key)
        rows = (key // n).astype(np.int64)
        cols = (key % n).astype(np.int32)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
    return indptr, cols.astype(np.int32)


def build_graph(records: Sequence[PaperRecord]) -> CitationGraph:
    """Assemble the dense graph from validated records (unique paper ids).

    Dense indices follow input order. Dangling references and duplicate
    parallel edges are dropped; self-loops are assumed already removed by
    validation. Deterministic: identical records produce identical layout.
    """
    n = len(records)
    paper_ids = [r.paper_id for r in records]
    index_of = {pid: i for i, pid in enumerate(paper_ids)}
    years = np.fromiter((r.year for r in records), dtype=np.int32, count=n)
    n_authors = np.fromiter((len(r.author_ids) for r in records), dtype=np.int32, count=n)

    citer_list: list[int] = []
    cited_list: list[int] = []
    for i, rec in enumerate(records):
        for ref in rec.reference_ids:
            j = index_of.get(ref)
            if j is not None and j != i:
                citer_list.append(i)
                cited_list.append(j)
    citers = np.asarray(citer_list, dtype=np.int64)
    citeds = np.asarray(cited_list, dtype=np.int64)
    del citer_list, cited_list

    if n == 0:
        bwd_indptr = np.zeros(1, dtype=np.int64)
        fwd_indptr = np.zeros(1, dtype=np.int64)
        bwd_indices = np.zeros(0, dtype=np.int32)
        fwd_indices = np.zeros(0, dtype=np.int32)
    else:
        bwd_indptr, bwd_indices = _csr_from_pairs(citers, citeds, n)
        fwd_indptr, fwd_indices = _csr_from_pairs(citeds, citers, n)

    # author -> papers, sorted by (author, year, dense index)
    author_ids_sorted = sorted({a for r in records for a in r.author_ids})
    author_index_of = {aid: i for i, aid in enumerate(author_ids_sorted)}
    pair_authors: list[int] = []
    pair_papers: list[int] = []
    for i, rec in enumerate(records):
        for a in rec.author_ids:
            pair_authors.append(author_index_of[a])
            pair_papers.append(i)
    a_arr = np.asarray(pair_authors, dtype=np.int64)
    p_arr = np.asarray(pair_papers, dtype=np.int32)
    order = np.lexsort((p_arr, years[p_arr], a_arr))
    a_arr = a_arr[order]
    p_arr = p_arr[order]
    author_indptr = np.zeros(len(author_ids_sorted) + 1, dtype=np.int64)
    np.cumsum(np.bincount(a_arr, minlength=len(author_ids_sorted)), out=author_indptr[1:])

    return CitationGraph(
        paper_ids,
        years,
        n_authors,
        fwd_indptr,
        fwd_indices,
        bwd_indptr,
        bwd_indices,
        author_ids_sorted,
        author_indptr,
        p_arr,
    )
