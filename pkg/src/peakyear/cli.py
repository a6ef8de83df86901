"""Command-line pipeline: synth -> ingest -> score -> careers -> null/phases/regress -> report.

Each stage reads its predecessor's files from the shared output directory
and writes its own, plus a manifest recording tool version, parameters, and
SHA-256 hashes of inputs and outputs. Manifests never contain timestamps,
absolute paths, or execution-only knobs (``--jobs``), so a rerun with the
same seed produces byte-identical artifacts, manifests included.

Exit codes: 0 success, 1 unusable input data (duplicate ids, malformed
files, degenerate designs), 2 missing upstream artifact, 3 parameter
validation failure, 4 internal invariant breach.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .careers import (
    Career,
    CohortFilter,
    Publication,
    apply_cohort_filter,
    assemble_careers,
    find_peak,
    period_metrics,
    phase_averages,
    write_career_summary_csv,
    write_period_metrics_csv,
)
from .disruption import ScoreTable, score_all, write_scores_csv
from .graph import CitationGraph, build_graph
from .ingest import (
    CorpusFormatError,
    DuplicateIdError,
    parse_corpus,
    validate_corpus,
    write_corpus,
)
from .nullmodel import (
    ShuffleConfig,
    null_distributions,
    observed_distributions,
    write_histograms_csv,
    write_samples_csv,
)
from .regress import (
    RankDeficiencyError,
    build_rows,
    fit_all_models,
    write_fig_csv,
    write_table_csv,
)
from .stats import ks_two_sample, mean_and_se, mwu
from .synth import SynthConfig, SynthConfigError, generate

__all__ = ["main", "RunConfig", "MissingArtifactError", "ParameterError"]

EXIT_DATA = 1
EXIT_MISSING = 2
EXIT_PARAMS = 3
EXIT_INTERNAL = 4


class MissingArtifactError(Exception):
    pass


class ParameterError(Exception):
    pass


@dataclass(slots=True)
class RunConfig:
    """Validated knobs for one pipeline invocation."""

    command: str
    out_dir: Path
    input_path: Path | None = None
    input_format: str = "json-lines"
    min_window: int = 5
    horizon: int | None = None
    include_same_year: bool = False
    cohort: CohortFilter = field(default_factory=CohortFilter)
    citation_window: int = 5
    seed: int = 0
    replicates: int = 1
    phase_window: int | None = None
    variant: str = "peak-only"
    impact_agg: str = "mean"
    bin_width: float = 1.0
    jobs: int = 1

    def validate(self) -> None:
        if self.min_window < 0:
            raise ParameterError("--min-window must be >= 0")
        if self.horizon is not None and not 1000 <= self.horizon <= 3000:
            raise ParameterError("--horizon must be a plausible calendar year")
        if self.citation_window < 0:
            raise ParameterError("--citation-window must be >= 0")
        if self.replicates < 1:
            raise ParameterError("--replicates must be >= 1")
        if self.phase_window is not None and self.phase_window < 1:
            raise ParameterError("--phase-window must be 'full' or a positive integer")
        if self.bin_width <= 0:
            raise ParameterError("--bin-width must be positive")
        if self.jobs < 1:
            raise ParameterError("--jobs must be >= 1")
        if self.input_path is not None and not self.input_path.exists():
            raise ParameterError(f"input path does not exist: {self.input_path}")


# -- artifact plumbing -------------------------------------------------------


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _write_json(path: Path, obj: object) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_manifest(
    out_dir: Path,
    stage: str,
    parameters: dict,
    inputs: list[Path],
    outputs: list[Path],
) -> Path:
    manifest = {
        "stage": stage,
        "tool_version": __version__,
        "parameters": parameters,
        "inputs": {p.name: _sha256(p) for p in inputs},
        "outputs": {p.name: _sha256(p) for p in outputs},
    }
    path = out_dir / f"manifest_{stage}.json"
    _write_json(path, manifest)
    return path


def _require(out_dir: Path, names: list[str], producer: str) -> list[Path]:
    paths = [out_dir / n for n in names]
    missing = [p.name for p in paths if not p.exists()]
    if missing:
        raise MissingArtifactError(
            f"missing upstream artifacts in {out_dir}: {', '.join(missing)}; "
            f"run `peakyear {producer}` first"
        )
    return paths


def _fmt(x: float) -> str:
    return repr(float(x))


# -- careers artifact round-trip ---------------------------------------------


def _write_careers_jsonl(careers: dict[str, Career], g: CitationGraph, path: Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for aid in sorted(careers):
            c = careers[aid]
            pubs = [
                [p.paper, g.paper_ids[p.paper], p.year, p.coauthors, p.score, p.citations]
                for p in c.publications
            ]
            fh.write(json.dumps({"author_id": aid, "publications": pubs}))
            fh.write("\n")


def _load_careers_jsonl(path: Path) -> dict[str, Career]:
    careers: dict[str, Career] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            obj = json.loads(line)
            pubs = tuple(
                Publication(int(p[0]), int(p[2]), int(p[3]), p[4], int(p[5]))
                for p in obj["publications"]
            )
            careers[obj["author_id"]] = Career(
                obj["author_id"], pubs, pubs[0].year, pubs[-1].year
            )
    return careers


def _read_scores_csv(g: CitationGraph, path: Path) -> ScoreTable:
    papers, n_i, n_j, n_k, score, defined = [], [], [], [], [], []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for row in reader:
            papers.append(g.index_of[row[0]])
            n_i.append(int(row[2]))
            n_j.append(int(row[3]))
            n_k.append(int(row[4]))
            is_def = row[6] == "true"
            defined.append(is_def)
            score.append(float(row[5]) if is_def else math.nan)
    order = np.argsort(np.asarray(papers, dtype=np.int64), kind="stable")
    return ScoreTable(
        g.n_papers,
        np.asarray(papers, dtype=np.int64)[order],
        np.asarray(n_i, dtype=np.int32)[order],
        np.asarray(n_j, dtype=np.int32)[order],
        np.asarray(n_k, dtype=np.int32)[order],
        np.asarray(score, dtype=float)[order],
        np.asarray(defined, dtype=bool)[order],
        np.zeros(len(papers), dtype=bool),
    )


# -- commands ----------------------------------------------------------------


def cmd_synth(cfg: RunConfig, syn: SynthConfig) -> int:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    records = generate(syn)
    corpus = cfg.out_dir / "corpus.jsonl"
    write_corpus(records, corpus)
    params = {
        "seed": syn.seed,
        "n_authors": syn.n_authors,
        "profile": syn.innovation_profile,
        "profile_strength": syn.profile_strength,
        "papers_per_year": syn.papers_per_year,
        "followers_mean": syn.followers_mean,
        "follower_window": syn.follower_window,
        "anchors_per_paper": syn.anchors_per_paper,
        "anchor_citer_mean": syn.anchor_citer_mean,
        "follower_extra_refs": syn.follower_extra_refs,
        "background_per_year": syn.background_per_year,
        "background_refs": syn.background_refs,
        "attachment_exponent": syn.attachment_exponent,
        "recency_window": syn.recency_window,
        "coauthors_mean": syn.coauthors_mean,
        "start_year_range": list(syn.start_year_range),
        "span_range": list(syn.span_range),
        "guarantee_cohort": syn.guarantee_cohort,
    }
    _write_manifest(cfg.out_dir, "synth", params, [], [corpus])
    print(f"synth: wrote {len(records)} records to {corpus}")
    return 0


def cmd_ingest(cfg: RunConfig) -> int:
    if cfg.input_path is None:
        raise ParameterError("--input is required for ingest")
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    records, stats = parse_corpus(cfg.input_path, cfg.input_format)
    validate_corpus(records)
    g = build_graph(records)
    graph_path = cfg.out_dir / "graph.bin"
    g.save(graph_path)
    stats_path = cfg.out_dir / "ingest_stats.json"
    _write_json(
        stats_path,
        {"corpus": stats.as_dict(), "n_papers": g.n_papers, "n_edges": g.n_edges},
    )
    _write_manifest(
        cfg.out_dir,
        "ingest",
        {"format": cfg.input_format},
        [cfg.input_path],
        [graph_path, stats_path],
    )
    print(
        f"ingest: {g.n_papers} papers, {g.n_edges} edges "
        f"({stats.papers_rejected} records rejected)"
    )
    return 0


def cmd_score(cfg: RunConfig) -> int:
    (graph_path,) = _require(cfg.out_dir, ["graph.bin"], "ingest")
    g = CitationGraph.load(graph_path)
    horizon = cfg.horizon if cfg.horizon is not None else g.year_max
    table = score_all(
        g,
        min_window_years=cfg.min_window,
        horizon_year=horizon,
        include_same_year=cfg.include_same_year,
        jobs=cfg.jobs,
    )
    scores_path = cfg.out_dir / "scores.csv"
    write_scores_csv(g, table, scores_path)
    _write_manifest(
        cfg.out_dir,
        "score",
        {
            "min_window": cfg.min_window,
            "horizon": horizon,
            "include_same_year": cfg.include_same_year,
        },
        [graph_path],
        [scores_path],
    )
    n_def = int(table.defined.sum())
    print(f"score: {len(table)} papers scored, {n_def} defined")
    return 0


def cmd_careers(cfg: RunConfig) -> int:
    graph_path, scores_path = _require(cfg.out_dir, ["graph.bin", "scores.csv"], "score")
    g = CitationGraph.load(graph_path)
    table = _read_scores_csv(g, scores_path)

    # authors below the paper-count floor can never pass the filter
    counts = np.diff(g.author_indptr)
    eligible = [
        g.author_ids[a] for a in np.nonzero(counts >= cfg.cohort.min_papers)[0]
    ]
    careers = assemble_careers(
        g, table, citation_window=cfg.citation_window, authors=eligible
    )
    retained = apply_cohort_filter(careers, cfg.cohort)
    with_peak = {aid: c for aid, c in retained.items() if find_peak(c) is not None}

    careers_path = cfg.out_dir / "careers.jsonl"
    _write_careers_jsonl(with_peak, g, careers_path)
    summary_path = cfg.out_dir / "careers_summary.csv"
    write_career_summary_csv(with_peak, summary_path)
    period_path = cfg.out_dir / "period_metrics_peak.csv"
    period_rows = []
    for aid in sorted(with_peak):
        c = with_peak[aid]
        peak = find_peak(c)
        m = period_metrics(c, (peak.peak_year, peak.peak_year))
        if m is not None:
            period_rows.append((aid, m))
    write_period_metrics_csv(period_rows, period_path)

    stats_path = cfg.out_dir / "careers_stats.json"
    _write_json(
        stats_path,
        {
            "authors_total": len(g.author_ids),
            "authors_at_paper_floor": len(eligible),
            "cohort_retained": len(retained),
            "no_defined_scores": len(retained) - len(with_peak),
            "careers_written": len(with_peak),
        },
    )
    _write_manifest(
        cfg.out_dir,
        "careers",
        {
            "start_min": cfg.cohort.start_min,
            "start_max": cfg.cohort.start_max,
            "min_span": cfg.cohort.min_span,
            "min_papers": cfg.cohort.min_papers,
            "max_gap": cfg.cohort.max_gap,
            "citation_window": cfg.citation_window,
        },
        [graph_path, scores_path],
        [careers_path, summary_path, period_path, stats_path],
    )
    print(f"careers: {len(with_peak)} cohort careers written")
    return 0


def _test_block(observed: np.ndarray, null: np.ndarray) -> dict:
    obs_mean, obs_se = mean_and_se(observed)
    null_mean, null_se = mean_and_se(null)
    return {
        "observed_mean": obs_mean,
        "observed_se": obs_se,
        "null_mean": null_mean,
        "null_se": null_se,
        "ks": ks_two_sample(observed, null).as_dict(),
        "mwu_two_sided": mwu(observed, null, "two-sided").as_dict(),
        "mwu_observed_less": mwu(observed, null, "less").as_dict(),
        "mwu_observed_greater": mwu(observed, null, "greater").as_dict(),
    }


def cmd_null(cfg: RunConfig) -> int:
    (careers_path,) = _require(cfg.out_dir, ["careers.jsonl"], "careers")
    careers = _load_careers_jsonl(careers_path)
    observed = observed_distributions(careers)
    null = null_distributions(careers, ShuffleConfig(cfg.seed, cfg.replicates))

    samples_path = cfg.out_dir / "null_samples.csv"
    write_samples_csv(observed, null, samples_path)
    hist_path = cfg.out_dir / "null_histograms.csv"
    write_histograms_csv(observed, null, hist_path, bin_width=cfg.bin_width)
    tests_path = cfg.out_dir / "null_tests.json"
    _write_json(
        tests_path,
        {
            "seed": cfg.seed,
            "replicates": cfg.replicates,
            "time_to_peak": _test_block(observed.time_to_peak, null.time_to_peak),
            "papers_to_peak": _test_block(observed.papers_to_peak, null.papers_to_peak),
        },
    )
    _write_manifest(
        cfg.out_dir,
        "null",
        {"seed": cfg.seed, "replicates": cfg.replicates, "bin_width": cfg.bin_width},
        [careers_path],
        [samples_path, hist_path, tests_path],
    )
    print(f"null: {len(observed.rows)} observed, {len(null.rows)} null peak samples")
    return 0


def cmd_phases(cfg: RunConfig) -> int:
    (careers_path,) = _require(cfg.out_dir, ["careers.jsonl"], "careers")
    careers = _load_careers_jsonl(careers_path)
    mode = "full" if cfg.phase_window is None else f"w{cfg.phase_window}"

    rows = []
    skipped_boundary = 0
    for aid in sorted(careers):
        c = careers[aid]
        peak = find_peak(c)
        if peak is None:
            continue
        if peak.is_boundary:
            skipped_boundary += 1
            continue
        ph = phase_averages(c, window=cfg.phase_window)
        rows.append((aid, ph))

    avg_path = cfg.out_dir / f"phase_averages_{mode}.csv"
    with open(avg_path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["author_id", "bpy", "py_excl", "apy"])
        for aid, ph in rows:
            w.writerow(
                [
                    aid,
                    _fmt(ph.bpy) if ph.bpy is not None else "",
                    _fmt(ph.py_excl) if ph.py_excl is not None else "",
                    _fmt(ph.apy) if ph.apy is not None else "",
                ]
            )

    bpy = np.array([ph.bpy for _, ph in rows if ph.bpy is not None])
    py = np.array([ph.py_excl for _, ph in rows if ph.py_excl is not None])
    apy = np.array([ph.apy for _, ph in rows if ph.apy is not None])

    def group(sample: np.ndarray) -> dict:
        if sample.size == 0:
            return {"n": 0, "mean": None, "se": None}
        m, se = mean_and_se(sample)
        return {"n": int(sample.size), "mean": m, "se": se}

    def pair(a: np.ndarray, b: np.ndarray) -> dict:
        if a.size == 0 or b.size == 0:
            return {}
        return {
            "ks": ks_two_sample(a, b).as_dict(),
            "mwu_two_sided": mwu(a, b, "two-sided").as_dict(),
            "mwu_py_greater": mwu(a, b, "greater").as_dict(),
        }

    summary_path = cfg.out_dir / f"phase_summary_{mode}.json"
    _write_json(
        summary_path,
        {
            "mode": mode,
            "groups": {"bpy": group(bpy), "py": group(py), "apy": group(apy)},
            "tests": {"py_vs_bpy": pair(py, bpy), "py_vs_apy": pair(py, apy)},
            "careers_used": len(rows),
            "skipped_boundary": skipped_boundary,
        },
    )
    _write_manifest(
        cfg.out_dir,
        f"phases_{mode}",
        {"phase_window": cfg.phase_window},
        [careers_path],
        [avg_path, summary_path],
    )
    print(f"phases[{mode}]: {len(rows)} careers, {skipped_boundary} boundary skipped")
    return 0


_ROW_FIELDS = [
    "innovation",
    "impact",
    "effort",
    "productivity",
    "time_devoted",
    "relative_effort",
    "relative_productivity",
    "relative_time_devoted",
    "coauthors_peak",
    "prev_innovation",
    "peak_year",
    "time_to_peak",
    "pre_effort",
    "pre_productivity",
    "pre_time_devoted",
    "pre_relative_effort",
    "pre_relative_productivity",
    "pre_relative_time_devoted",
    "coauthors_pre",
]


def cmd_regress(cfg: RunConfig) -> int:
    (careers_path,) = _require(cfg.out_dir, ["careers.jsonl"], "careers")
    careers = _load_careers_jsonl(careers_path)
    rows, dropped = build_rows(careers, cfg.variant, cfg.impact_agg)
    if not rows:
        raise ValueError("no usable regression rows after drops")
    models = fit_all_models(rows, cfg.variant)

    rows_path = cfg.out_dir / f"regress_rows_{cfg.variant}.csv"
    with open(rows_path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["author_id"] + _ROW_FIELDS)
        for r in rows:
            w.writerow(
                [r.author_id]
                + [
                    "" if getattr(r, f) is None else _fmt(getattr(r, f))
                    for f in _ROW_FIELDS
                ]
            )

    table_paths = []
    for dep in ("innovation", "impact"):
        p = cfg.out_dir / f"regress_table_{dep}_{cfg.variant}.csv"
        write_table_csv(models[dep], dep, p)
        table_paths.append(p)
    fig_path = cfg.out_dir / f"regress_fig_{cfg.variant}.csv"
    write_fig_csv(models, fig_path)
    json_path = cfg.out_dir / f"regress_{cfg.variant}.json"
    _write_json(
        json_path,
        {
            "variant": cfg.variant,
            "impact_agg": cfg.impact_agg,
            "n_rows": len(rows),
            "dropped": dropped,
            "models": {
                dep: {key: res.as_dict() for key, res in models[dep].items()}
                for dep in models
            },
        },
    )
    _write_manifest(
        cfg.out_dir,
        f"regress_{cfg.variant}",
        {"variant": cfg.variant, "impact_agg": cfg.impact_agg},
        [careers_path],
        [rows_path, *table_paths, fig_path, json_path],
    )
    print(f"regress[{cfg.variant}]: {len(rows)} rows, 12 models fit")
    return 0


def cmd_report(cfg: RunConfig) -> int:
    (tests_path,) = _require(cfg.out_dir, ["null_tests.json"], "null")
    hist_path = cfg.out_dir / "null_histograms.csv"
    phase_paths = sorted(cfg.out_dir.glob("phase_summary_*.json"))
    regress_paths = sorted(cfg.out_dir.glob("regress_peak-*.json"))
    if not phase_paths:
        raise MissingArtifactError(
            f"missing upstream artifacts in {cfg.out_dir}: phase_summary_*.json; "
            "run `peakyear phases` first"
        )
    if not regress_paths:
        raise MissingArtifactError(
            f"missing upstream artifacts in {cfg.out_dir}: regress_*.json; "
            "run `peakyear regress` first"
        )

    def read_json(p: Path) -> dict:
        with open(p, "r", encoding="utf-8") as fh:
            return json.load(fh)

    histograms = []
    if hist_path.exists():
        with open(hist_path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            histograms = list(reader)

    corpus_stats = {}
    stats_path = cfg.out_dir / "ingest_stats.json"
    if stats_path.exists():
        corpus_stats = read_json(stats_path)
    careers_stats = {}
    cstats_path = cfg.out_dir / "careers_stats.json"
    if cstats_path.exists():
        careers_stats = read_json(cstats_path)

    inputs = [tests_path, *phase_paths, *regress_paths]
    if hist_path.exists():
        inputs.append(hist_path)
    report = {
        "tool_version": __version__,
        "corpus": corpus_stats,
        "cohort": careers_stats,
        "peak_timing": read_json(tests_path),
        "peak_timing_histograms": histograms,
        "phases": [read_json(p) for p in phase_paths],
        "regressions": [read_json(p) for p in regress_paths],
    }
    report_path = cfg.out_dir / "report.json"
    _write_json(report_path, report)
    _write_manifest(cfg.out_dir, "report", {}, inputs, [report_path])
    print(f"report: bundled {len(phase_paths)} phase and {len(regress_paths)} regression sets")
    return 0


# -- argument parsing --------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="peakyear",
        description="Disruption scoring and peak-year innovation analysis pipeline.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_out(p):
        p.add_argument("--out", required=True, help="artifact directory")

    p = sub.add_parser("synth", help="generate a synthetic corpus")
    add_out(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--authors", type=int, default=100)
    p.add_argument("--profile", choices=["iid", "front-loaded", "effort-coupled", "magical-year"], default="iid")
    p.add_argument("--strength", type=float, default=1.0)
    p.add_argument("--papers-per-year", type=float, default=0.6)
    p.add_argument("--followers", type=float, default=5.0)
    p.add_argument("--follower-window", type=int, default=5)
    p.add_argument("--anchors", type=int, default=1)
    p.add_argument("--noise-citers", type=float, default=0.6)
    p.add_argument("--extra-refs", type=int, default=1)
    p.add_argument("--background-per-year", type=int, default=40)
    p.add_argument("--background-refs", type=int, default=6)
    p.add_argument("--alpha", type=float, default=0.8)
    p.add_argument("--recency-window", type=int, default=3)
    p.add_argument("--coauthors", type=float, default=2.0)
    p.add_argument("--start-range", type=int, nargs=2, default=[1980, 2000])
    p.add_argument("--span-range", type=int, nargs=2, default=[20, 26])
    p.add_argument("--no-cohort-guarantee", action="store_true")

    p = sub.add_parser("ingest", help="parse a corpus and build the graph snapshot")
    add_out(p)
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=["json-lines", "csv-pair"], default="json-lines")

    p = sub.add_parser("score", help="compute disruption scores")
    add_out(p)
    p.add_argument("--min-window", type=int, default=5)
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--include-same-year", action="store_true")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("careers", help="assemble and filter careers")
    add_out(p)
    p.add_argument("--start-min", type=int, default=1980)
    p.add_argument("--start-max", type=int, default=2000)
    p.add_argument("--min-span", type=int, default=20)
    p.add_argument("--min-papers", type=int, default=10)
    p.add_argument("--max-gap", type=int, default=5)
    p.add_argument("--citation-window", type=int, default=5)

    p = sub.add_parser("null", help="randomized benchmark of peak timing")
    add_out(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--replicates", type=int, default=1)
    p.add_argument("--bin-width", type=float, default=1.0)

    p = sub.add_parser("phases", help="before/during/after peak-year comparison")
    add_out(p)
    p.add_argument("--phase-window", default="full", help="'full' or a positive integer")

    p = sub.add_parser("regress", help="standardized OLS models")
    add_out(p)
    p.add_argument("--variant", choices=["peak-only", "peak-plus-prepeak"], default="peak-only")
    p.add_argument("--impact-agg", choices=["mean", "sum"], default="mean")

    p = sub.add_parser("report", help="bundle all result tables")
    add_out(p)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command, out_dir=Path(args.out))
    if args.command == "ingest":
        cfg.input_path = Path(args.input)
        cfg.input_format = args.format
    elif args.command == "score":
        cfg.min_window = args.min_window
        cfg.horizon = args.horizon
        cfg.include_same_year = args.include_same_year
        cfg.jobs = args.jobs
    elif args.command == "careers":
        try:
            cfg.cohort = CohortFilter(
                args.start_min, args.start_max, args.min_span, args.min_papers, args.max_gap
            )
        except ValueError as exc:
            raise ParameterError(str(exc)) from exc
        cfg.citation_window = args.citation_window
    elif args.command == "null":
        cfg.seed = args.seed
        cfg.replicates = args.replicates
        cfg.bin_width = args.bin_width
    elif args.command == "phases":
        if args.phase_window == "full":
            cfg.phase_window = None
        else:
            try:
                cfg.phase_window = int(args.phase_window)
            except ValueError as exc:
                raise ParameterError(
                    f"--phase-window must be 'full' or an integer, got {args.phase_window!r}"
                ) from exc
    elif args.command == "regress":
        cfg.variant = args.variant
        cfg.impact_agg = args.impact_agg
    cfg.validate()
    return cfg


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        if args.command == "synth":
            try:
                syn = SynthConfig(
                    seed=args.seed,
                    n_authors=args.authors,
                    start_year_range=tuple(args.start_range),
                    span_range=tuple(args.span_range),
                    papers_per_year=args.papers_per_year,
                    guarantee_cohort=not args.no_cohort_guarantee,
                    innovation_profile=args.profile,
                    profile_strength=args.strength,
                    followers_mean=args.followers,
                    follower_window=args.follower_window,
                    anchors_per_paper=args.anchors,
                    anchor_citer_mean=args.noise_citers,
                    follower_extra_refs=args.extra_refs,
                    background_per_year=args.background_per_year,
                    background_refs=args.background_refs,
                    attachment_exponent=args.alpha,
                    recency_window=args.recency_window,
                    coauthors_mean=args.coauthors,
                )
                syn.validate()
            except SynthConfigError as exc:
                raise ParameterError(str(exc)) from exc
            return cmd_synth(cfg, syn)
        handler = {
            "ingest": cmd_ingest,
            "score": cmd_score,
            "careers": cmd_careers,
            "null": cmd_null,
            "phases": cmd_phases,
            "regress": cmd_regress,
            "report": cmd_report,
        }[args.command]
        return handler(cfg)
    except MissingArtifactError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except (
        CorpusFormatError,
        DuplicateIdError,
        RankDeficiencyError,
        FileNotFoundError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # invariant breach: anything unexpected
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
