"""Command line interface.

Stages mirror the pipeline: synth writes a corpus, detect-topics
exports per-scientist topic assignments, decompose and shuffle export
audit tables, stats builds the figure tables from the topic exports,
and run does everything in one process. Chaining synth, detect-topics
and stats produces the same bundle as run, byte for byte.

Exit codes: 0 success, 2 validation failure, 3 missing stage
dependency.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import fields
from pathlib import Path

from . import __version__
from .pipeline import (
    DependencyError,
    PipelineError,
    RunConfig,
    decompose_stage,
    detect_topics_stage,
    run_pipeline,
    shuffle_stage,
    stats_stage,
)
from .records import CorpusError, ValidationConfig, load_corpus, save_corpus
from .synth import SYNTH_PRESETS, SynthSpec, generate, preset, save_ground_truth

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_DEPENDENCY = 3


def _default_out() -> str:
    return os.environ.get("COLLABTOPICS_OUT", "out")


def _parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split(",") if part)


def _parse_input(spec: str) -> tuple[str, str]:
    if "=" in spec:
        label, path = spec.split("=", 1)
        if label and "/" not in label and "\\" not in label:
            return label, path
    return Path(spec).stem, spec


def _add_analysis_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", action="append", default=[], metavar="[LABEL=]PATH",
                   help="corpus file (JSONL or CSV); repeatable for multi-corpus comparison")
    p.add_argument("--synth-preset", choices=sorted(SYNTH_PRESETS),
                   help="analyze a built-in synthetic corpus instead of a file")
    p.add_argument("--out", default=_default_out(), help="output directory")
    p.add_argument("--seed", type=int, required=True, help="global seed for all randomized steps")
    p.add_argument("--min-papers", type=int, default=50)
    p.add_argument("--threshold", type=float, default=0.05, help="major-topic size fraction")
    p.add_argument("--weighted", action="store_true",
                   help="use shared-reference counts as edge weights in community detection")
    p.add_argument("--copub-filters", type=_parse_int_list, default=(2, 10), metavar="LOW,HIGH")
    p.add_argument("--rounds-factor", type=int, default=4, help="reshuffle attempts per link")
    p.add_argument("--rewire-rounds", type=int, default=4, help="rewiring attempts per edge")
    p.add_argument("--n-rewires", type=int, default=10)
    p.add_argument("--recent-window", type=int, default=2, help="calendar years defining recency")
    p.add_argument("--join-min-copub", type=int, default=1)
    p.add_argument("--top-k", type=_parse_int_list, default=(1, 10), metavar="K[,K...]")
    p.add_argument("--cohort-window", type=int, default=30, help="first career years for cohorts")
    p.add_argument("--surrogate", action="store_true",
                   help="emit every topic-count table twice: real and time-shuffled")
    p.add_argument("--exclude-none-copub", action="store_true",
                   help="do not count minor-community papers toward co-publication filters")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--export-intermediates", action="store_true",
                   help="also write per-scientist co-citing edge lists")


def _config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        seed=args.seed,
        out_dir=args.out,
        inputs=tuple(_parse_input(spec) for spec in args.input),
        synth_preset=args.synth_preset,
        min_papers=args.min_papers,
        topic_threshold=args.threshold,
        copub_filters=tuple(args.copub_filters),
        shuffle_rounds_factor=args.rounds_factor,
        rewire_rounds_factor=args.rewire_rounds,
        n_rewires=args.n_rewires,
        recent_window=args.recent_window,
        join_min_copub=args.join_min_copub,
        top_k_percents=tuple(args.top_k),
        cohort_window=args.cohort_window,
        weighted=args.weighted,
        surrogate=args.surrogate,
        count_none_toward_copub=not args.exclude_none_copub,
        workers=args.workers,
        export_intermediates=args.export_intermediates,
    )


def _cmd_synth(args: argparse.Namespace) -> int:
    if args.preset:
        spec = preset(args.preset, args.seed)
    else:
        spec = SynthSpec(
            n_focal=args.n_focal,
            topics_per_focal=args.topics,
            pool_size=args.pool_size,
            papers_per_topic=args.papers_per_topic,
            refs_per_paper=args.refs_per_paper,
            collaborators_per_topic=args.collaborators_per_topic,
            multi_topic_fraction=args.multi_topic_fraction,
            year_start=args.year_start,
            year_end=args.year_end,
            topic_stagger=args.stagger,
            collaborator_prior_papers=args.prior_papers,
            c10_mu=args.c10_mu,
            c10_sigma=args.c10_sigma,
            seed=args.seed,
        )
    corpus, truth = generate(spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_corpus(corpus, out / "corpus.jsonl")
    save_ground_truth(truth, out / "ground_truth.json")
    print(f"wrote {corpus.n_papers} papers, {corpus.n_authors} authors to {out / 'corpus.jsonl'}")
    return EXIT_OK


def _cmd_ingest_validate(args: argparse.Namespace) -> int:
    config = ValidationConfig(year_min=args.year_min, year_max=args.year_max)
    try:
        corpus = load_corpus(args.input, config)
    except CorpusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    for diag in corpus.diagnostics:
        print(f"rejected: {diag}", file=sys.stderr)
    print(
        f"loaded {corpus.n_papers} papers, {corpus.n_authors} authors, "
        f"{len(corpus.diagnostics)} rejected"
    )
    return EXIT_VALIDATION if corpus.diagnostics else EXIT_OK


def _cmd_report(args: argparse.Namespace) -> int:
    out = Path(args.out)
    tables_dir = out / "tables"
    if not tables_dir.is_dir():
        raise DependencyError(f"no tables under {out}; run the stats stage first")
    index_rows = []
    for path in sorted(tables_dir.glob("*.csv")):
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            n_rows = sum(1 for _ in reader)
        index_rows.append((path.stem, path.name, n_rows, len(header)))
    with open(out / "index.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("table,file,n_rows,n_columns\n")
        for row in index_rows:
            fh.write(",".join(str(v) for v in row) + "\n")

    lines = ["# Run report", ""]
    manifest = out / "manifest.json"
    if manifest.exists():
        meta = json.loads(manifest.read_text(encoding="utf-8"))
        lines.append(f"Package: {meta['package']}, seed {meta['seed']}.")
        for item in meta["inputs"]:
            lines.append(
                f"- corpus `{item['label']}`: {item['n_papers']} papers, "
                f"{item['n_authors']} authors, {item['n_focal']} focal scientists"
            )
        lines.append("")
    summary = tables_dir / "summary.csv"
    if summary.exists():
        lines.append("## Headline statistics")
        lines.append("")
        with open(summary, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            next(reader)
            for key, value in reader:
                lines.append(f"- {key}: {value if value else 'n/a'}")
        lines.append("")
    lines.append("## Tables")
    lines.append("")
    for name, fname, n_rows, n_cols in index_rows:
        lines.append(f"- `{name}` ({n_rows} rows, {n_cols} columns): tables/{fname}")
    (out / "report.md").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {out / 'index.csv'} and {out / 'report.md'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="collabtopics",
        description="collaboration-topic analysis of publication careers",
    )
    parser.add_argument("--version", action="version", version=f"collabtopics {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic corpus with planted topics")
    p.add_argument("--preset", choices=sorted(SYNTH_PRESETS))
    defaults = {f.name: f.default for f in fields(SynthSpec)}
    p.add_argument("--n-focal", type=int, default=defaults["n_focal"])
    p.add_argument("--topics", type=int, default=defaults["topics_per_focal"])
    p.add_argument("--pool-size", type=int, default=defaults["pool_size"])
    p.add_argument("--papers-per-topic", type=int, default=defaults["papers_per_topic"])
    p.add_argument("--refs-per-paper", type=int, default=defaults["refs_per_paper"])
    p.add_argument("--collaborators-per-topic", type=int, default=defaults["collaborators_per_topic"])
    p.add_argument("--multi-topic-fraction", type=float, default=defaults["multi_topic_fraction"])
    p.add_argument("--year-start", type=int, default=defaults["year_start"])
    p.add_argument("--year-end", type=int, default=defaults["year_end"])
    p.add_argument("--stagger", type=int, default=defaults["topic_stagger"])
    p.add_argument("--prior-papers", type=int, default=defaults["collaborator_prior_papers"])
    p.add_argument("--c10-mu", type=float, default=defaults["c10_mu"])
    p.add_argument("--c10-sigma", type=float, default=defaults["c10_sigma"])
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default=_default_out())
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("ingest-validate", help="validate a corpus file and report rejects")
    p.add_argument("--input", required=True)
    p.add_argument("--year-min", type=int, default=1850)
    p.add_argument("--year-max", type=int, default=2035)
    p.set_defaults(func=_cmd_ingest_validate)

    for name, handler, help_text in (
        ("detect-topics", lambda a: (detect_topics_stage(_config(a)), EXIT_OK)[1],
         "detect topics and export per-scientist assignments"),
        ("decompose", lambda a: (decompose_stage(_config(a), a.min_copub), EXIT_OK)[1],
         "export per-focal collaborator tables (needs detect-topics)"),
        ("shuffle", lambda a: (shuffle_stage(_config(a)), EXIT_OK)[1],
         "export time-controlled reshuffled authorship links"),
        ("stats", lambda a: (stats_stage(_config(a)), EXIT_OK)[1],
         "build all figure tables from topic exports (needs detect-topics)"),
        ("run", lambda a: (run_pipeline(_config(a)), EXIT_OK)[1],
         "end-to-end pipeline in one process"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_analysis_args(p)
        if name == "decompose":
            p.add_argument("--min-copub", type=int, default=None)
        p.set_defaults(func=handler)

    p = sub.add_parser("report", help="render the table bundle into index.csv and report.md")
    p.add_argument("--out", default=_default_out())
    p.set_defaults(func=_cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (PipelineError, CorpusError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except DependencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEPENDENCY


if __name__ == "__main__":
    sys.exit(main())
