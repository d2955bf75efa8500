"""End-to-end orchestration: per-scientist analysis and stage exports.

The unit of work is one focal scientist; everything a scientist
contributes to the statistics suite is computed in one pass and
returned as a compact FocalResult. Workers are pure functions of
(corpus, config, author_id): every random step draws its seed from the
global seed plus the author id and a step tag, so results do not
depend on worker count or scheduling. Aggregation happens in the main
process over results sorted by author id, which makes output bundles
byte-identical across reruns and parallelism degrees.
"""

from __future__ import annotations

import csv
import hashlib
import json
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence

from . import __version__
from .cociting import build_cociting, write_edge_list
from .collaborators import (
    CollaboratorSeries,
    decompose_bipartite,
    topic_span_pairs,
    write_collaborator_csv,
)
from .community import (
    EdgelessNetworkError,
    TopicAssignment,
    assign_topics,
    colored_series,
    detect_communities,
    empty_assignment,
    read_topic_csv,
    write_topic_csv,
)
from .randomization import (
    build_authorship_bipartite,
    build_collab_network,
    q_significance,
    reshuffle_time_controlled,
)
from .records import Corpus, load_corpus, profile, select_focal
from .seeds import derive_seed
from .stats import (
    JoinEvent,
    SimilarityProfile,
    initial_collaborator_features,
    join_events,
    similarity_profile,
    truncate_career,
)

__all__ = [
    "RunConfig",
    "FocalResult",
    "CollabSummary",
    "PipelineError",
    "DependencyError",
    "compute_focal_result",
    "analyze_corpus",
    "run_pipeline",
    "detect_topics_stage",
    "decompose_stage",
    "shuffle_stage",
    "stats_stage",
]


class PipelineError(RuntimeError):
    """Invalid run setup (e.g. zero focal scientists). CLI exit code 2."""


class DependencyError(RuntimeError):
    """A stage's upstream artifact is missing. CLI exit code 3."""


@dataclass(frozen=True)
class RunConfig:
    """All knobs of one pipeline run. The seed is mandatory."""

    seed: int
    out_dir: str = "out"
    inputs: tuple[tuple[str, str], ...] = ()  # (label, path)
    synth_preset: str | None = None
    min_papers: int = 50
    topic_threshold: float = 0.05
    copub_filters: tuple[int, int] = (2, 10)
    shuffle_rounds_factor: int = 4
    rewire_rounds_factor: int = 4
    n_rewires: int = 10
    recent_window: int = 2
    join_min_copub: int = 1
    top_k_percents: tuple[int, ...] = (1, 10)
    cohort_window: int = 30
    weighted: bool = False
    surrogate: bool = False
    count_none_toward_copub: bool = True
    workers: int = 1
    export_intermediates: bool = False

    def validate(self) -> None:
        if not 0.0 < self.topic_threshold < 1.0:
            raise PipelineError("topic threshold must lie in (0, 1)")
        if self.min_papers < 1:
            raise PipelineError("min_papers must be >= 1")
        if self.shuffle_rounds_factor < 1 or self.rewire_rounds_factor < 1:
            raise PipelineError("rounds factors must be >= 1")
        if self.recent_window < 1:
            raise PipelineError("recent window must be >= 1")
        if self.workers < 1:
            raise PipelineError("workers must be >= 1")
        if len(self.copub_filters) != 2 or self.copub_filters[0] > self.copub_filters[1]:
            raise PipelineError("copub_filters must be (low, high)")
        for k in self.top_k_percents:
            if k not in (1, 5, 10, 20):
                raise PipelineError("top-k percents must be among 1, 5, 10, 20")


@dataclass(frozen=True)
class CollabSummary:
    """What aggregation needs to know about one collaborator."""

    collaborator: str
    n_copub: int
    first_year: int
    last_year: int
    n_topics_involved: int


def _summarize(series_list: Sequence[CollaboratorSeries]) -> tuple[CollabSummary, ...]:
    return tuple(
        CollabSummary(s.collaborator, s.n_copub, s.first_year, s.last_year, s.n_topics_involved)
        for s in series_list
    )


@dataclass(frozen=True)
class FocalResult:
    """Everything one focal scientist contributes to the statistics."""

    author_id: str
    paper_count: int
    mean_c10: float
    career_start_year: int
    career_years: int
    n_topics: int
    collabs_real: tuple[CollabSummary, ...]
    collabs_surr: tuple[CollabSummary, ...] | None
    q_real: float | None
    q_rand_mean: float | None
    q_ratio: float | None
    similarities: SimilarityProfile
    init_features: tuple[tuple[str, int, int, float | None], ...]
    events: tuple[JoinEvent, ...]
    spans: tuple[tuple[int, int], ...]
    trunc_real: tuple[CollabSummary, ...]
    trunc_surr: tuple[CollabSummary, ...] | None


def _topics_for(
    corpus: Corpus,
    cfg: RunConfig,
    author_id: str,
    paper_ids: list[str] | None,
    seed_tag: str,
) -> TopicAssignment:
    net = build_cociting(corpus, author_id, paper_ids)
    try:
        ctx = detect_communities(net, derive_seed(cfg.seed, author_id, seed_tag), cfg.weighted)
    except EdgelessNetworkError:
        return empty_assignment(author_id, net.nodes)
    return assign_topics(net, ctx, cfg.topic_threshold)


def _decomposed(
    corpus: Corpus,
    cfg: RunConfig,
    author_id: str,
    ta: TopicAssignment,
    shuffle_tag: str,
) -> tuple[list[CollaboratorSeries], list[CollaboratorSeries] | None]:
    series = colored_series(corpus, ta)
    series_map = {pid: (year, topic) for pid, year, topic, _ in series}
    bip = build_authorship_bipartite(corpus, author_id, list(ta.papers))
    real = decompose_bipartite(bip, series_map, 1, cfg.count_none_toward_copub)
    surr = None
    if cfg.surrogate:
        sbip = reshuffle_time_controlled(
            bip, cfg.shuffle_rounds_factor, derive_seed(cfg.seed, author_id, shuffle_tag)
        )
        surr = decompose_bipartite(sbip, series_map, 1, cfg.count_none_toward_copub)
    return real, surr


def compute_focal_result(
    corpus: Corpus, cfg: RunConfig, author_id: str, ta: TopicAssignment | None = None
) -> FocalResult:
    """Full per-scientist analysis; ``ta`` may come from a stage export."""
    prof = profile(corpus, author_id)
    if ta is None:
        ta = _topics_for(corpus, cfg, author_id, None, "louvain")
    series = colored_series(corpus, ta)
    real, surr = _decomposed(corpus, cfg, author_id, ta, "shuffle")

    collab_net = build_collab_network(corpus, author_id)
    q_real = q_rand = q_ratio = None
    if collab_net.n_edges > 0:
        qs = q_significance(
            collab_net, cfg.n_rewires, derive_seed(cfg.seed, author_id, "qsig"),
            cfg.rewire_rounds_factor,
        )
        q_real, q_rand, q_ratio = qs.q_real, qs.q_rand_mean, qs.ratio

    qualifying = [s.collaborator for s in real if s.n_copub >= cfg.copub_filters[0]]
    sims = similarity_profile(corpus, author_id, qualifying)
    feats = tuple(initial_collaborator_features(corpus, author_id, real))
    events = tuple(join_events(series, ta, real, cfg.join_min_copub, cfg.recent_window))
    spans = tuple(topic_span_pairs(real))

    # first-N-career-years view; identical to the full career when it fits
    trunc_pids = truncate_career(corpus, author_id, cfg.cohort_window)
    if len(trunc_pids) == len(ta.papers):
        trunc_real, trunc_surr = _summarize(real), (None if surr is None else _summarize(surr))
    else:
        trunc_ta = _topics_for(corpus, cfg, author_id, trunc_pids, "louvain_trunc")
        t_real, t_surr = _decomposed(corpus, cfg, author_id, trunc_ta, "shuffle_trunc")
        trunc_real = _summarize(t_real)
        trunc_surr = None if t_surr is None else _summarize(t_surr)

    return FocalResult(
        author_id=author_id,
        paper_count=prof.paper_count,
        mean_c10=prof.mean_c10,
        career_start_year=prof.career_start_year,
        career_years=prof.career_years,
        n_topics=ta.n_topics,
        collabs_real=_summarize(real),
        collabs_surr=None if surr is None else _summarize(surr),
        q_real=q_real,
        q_rand_mean=q_rand,
        q_ratio=q_ratio,
        similarities=sims,
        init_features=feats,
        events=events,
        spans=spans,
        trunc_real=trunc_real,
        trunc_surr=trunc_surr,
    )


# -- worker-process plumbing -------------------------------------------------

_WORKER_STATE: dict = {}


def _init_worker(corpus: Corpus, cfg: RunConfig, tas: dict[str, TopicAssignment] | None) -> None:
    _WORKER_STATE["corpus"] = corpus
    _WORKER_STATE["cfg"] = cfg
    _WORKER_STATE["tas"] = tas


def _worker_compute(author_id: str) -> FocalResult:
    tas = _WORKER_STATE["tas"]
    return compute_focal_result(
        _WORKER_STATE["corpus"], _WORKER_STATE["cfg"], author_id,
        None if tas is None else tas[author_id],
    )


def analyze_corpus(
    corpus: Corpus,
    cfg: RunConfig,
    tas: dict[str, TopicAssignment] | None = None,
) -> list[FocalResult]:
    """FocalResults for every focal scientist, sorted by author id."""
    focal = select_focal(corpus, cfg.min_papers)
    if not focal:
        raise PipelineError(
            f"zero focal scientists: no author has >= {cfg.min_papers} papers"
        )
    if cfg.workers <= 1:
        return [compute_focal_result(corpus, cfg, a, None if tas is None else tas[a]) for a in focal]
    chunk = max(1, len(focal) // (cfg.workers * 4))
    with ProcessPoolExecutor(
        max_workers=cfg.workers, initializer=_init_worker, initargs=(corpus, cfg, tas)
    ) as pool:
        return list(pool.map(_worker_compute, focal, chunksize=chunk))


# -- corpus inputs and manifests ----------------------------------------------

def load_inputs(cfg: RunConfig) -> dict[str, tuple[Corpus, str]]:
    """label -> (corpus, sha256 of its serialized bytes)."""
    from .records import corpus_to_jsonl  # local to avoid import noise at top
    from .synth import generate, preset

    out: dict[str, tuple[Corpus, str]] = {}
    if cfg.synth_preset:
        corpus, _ = generate(preset(cfg.synth_preset, cfg.seed))
        digest = hashlib.sha256(corpus_to_jsonl(corpus).encode("utf-8")).hexdigest()
        out[cfg.synth_preset] = (corpus, digest)
    for label, path in cfg.inputs:
        p = Path(path)
        if not p.exists():
            raise DependencyError(f"input corpus not found: {path}")
        corpus = load_corpus(p)
        digest = hashlib.sha256(p.read_bytes()).hexdigest()
        out[label] = (corpus, digest)
    if not out:
        raise PipelineError("no input corpus: pass --input or --synth-preset")
    return out


def write_manifest(
    cfg: RunConfig, inputs: dict[str, tuple[Corpus, str]], out_dir: Path,
    n_focal: dict[str, int],
) -> None:
    config = asdict(cfg)
    # execution details that cannot change any result byte
    config.pop("out_dir")
    config.pop("workers")
    payload = {
        "package": f"collabtopics {__version__}",
        "format_version": 1,
        "seed": cfg.seed,
        "config": config,
        "inputs": [
            {
                "label": label,
                "sha256": digest,
                "n_papers": corpus.n_papers,
                "n_authors": corpus.n_authors,
                "n_focal": n_focal[label],
            }
            for label, (corpus, digest) in inputs.items()
        ],
    }
    with open(out_dir / "manifest.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


_SAFE = re.compile(r"[^A-Za-z0-9._-]")


def _safe_names(author_ids: Sequence[str]) -> dict[str, str]:
    """Deterministic collision-free file names for author exports."""
    names: dict[str, str] = {}
    used: set[str] = set()
    for author in sorted(author_ids):
        base = _SAFE.sub("_", author) or "author"
        name = base
        k = 1
        while name in used:
            name = f"{base}.{k}"
            k += 1
        used.add(name)
        names[author] = name
    return names


# -- stages -------------------------------------------------------------------

def _topics_dir(out_dir: Path, label: str) -> Path:
    return out_dir / "topics" / label


def detect_topics_stage(cfg: RunConfig) -> None:
    """Detect topics for every focal scientist and export per-scientist CSVs."""
    cfg.validate()
    out_dir = Path(cfg.out_dir)
    inputs = load_inputs(cfg)
    for label, (corpus, _) in inputs.items():
        focal = select_focal(corpus, cfg.min_papers)
        if not focal:
            raise PipelineError(
                f"zero focal scientists in {label!r}: no author has >= {cfg.min_papers} papers"
            )
        tdir = _topics_dir(out_dir, label)
        tdir.mkdir(parents=True, exist_ok=True)
        names = _safe_names(focal)
        index_rows = []
        for author in focal:
            ta = _topics_for(corpus, cfg, author, None, "louvain")
            fname = f"{names[author]}.csv"
            write_topic_csv(ta, corpus, tdir / fname)
            index_rows.append((author, fname, ta.n_topics))
        with open(tdir / "index.csv", "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["author_id", "file", "n_topics"])
            writer.writerows(index_rows)


def load_topics_stage(cfg: RunConfig, label: str) -> dict[str, TopicAssignment]:
    """Read a detect-topics export back; DependencyError when missing."""
    tdir = _topics_dir(Path(cfg.out_dir), label)
    index = tdir / "index.csv"
    if not index.exists():
        raise DependencyError(
            f"missing topics export {index}; run the detect-topics stage first"
        )
    tas: dict[str, TopicAssignment] = {}
    with open(index, "r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            tas[row["author_id"]] = read_topic_csv(tdir / row["file"], row["author_id"])
    return tas


def decompose_stage(cfg: RunConfig, min_copub: int | None = None) -> None:
    """Export per-focal collaborator tables from the topics stage."""
    cfg.validate()
    out_dir = Path(cfg.out_dir)
    inputs = load_inputs(cfg)
    threshold = 1 if min_copub is None else min_copub
    for label, (corpus, _) in inputs.items():
        tas = load_topics_stage(cfg, label)
        cdir = out_dir / "collaborators" / label
        cdir.mkdir(parents=True, exist_ok=True)
        names = _safe_names(sorted(tas))
        for author in sorted(tas):
            ta = tas[author]
            series = colored_series(corpus, ta)
            series_map = {pid: (year, topic) for pid, year, topic, _ in series}
            bip = build_authorship_bipartite(corpus, author, list(ta.papers))
            collabs = decompose_bipartite(bip, series_map, threshold, cfg.count_none_toward_copub)
            write_collaborator_csv(collabs, cdir / f"{names[author]}.csv")


def shuffle_stage(cfg: RunConfig) -> None:
    """Audit export of the reshuffled authorship links per focal scientist."""
    cfg.validate()
    out_dir = Path(cfg.out_dir)
    inputs = load_inputs(cfg)
    for label, (corpus, _) in inputs.items():
        focal = select_focal(corpus, cfg.min_papers)
        if not focal:
            raise PipelineError(f"zero focal scientists in {label!r}")
        sdir = out_dir / "shuffle" / label
        sdir.mkdir(parents=True, exist_ok=True)
        names = _safe_names(focal)
        for author in focal:
            bip = build_authorship_bipartite(corpus, author)
            shuffled = reshuffle_time_controlled(
                bip, cfg.shuffle_rounds_factor, derive_seed(cfg.seed, author, "shuffle")
            )
            with open(sdir / f"{names[author]}.csv", "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(["collaborator_id", "paper_id", "year"])
                for collab, pid in sorted(shuffled.links):
                    writer.writerow([collab, pid, shuffled.paper_year[pid]])


def _export_intermediates(
    cfg: RunConfig, label: str, corpus: Corpus, out_dir: Path
) -> None:
    focal = select_focal(corpus, cfg.min_papers)
    names = _safe_names(focal)
    gdir = out_dir / "cociting" / label
    gdir.mkdir(parents=True, exist_ok=True)
    for author in focal:
        write_edge_list(build_cociting(corpus, author), gdir / f"{names[author]}.csv")


def stats_stage(cfg: RunConfig, from_exports: bool = True) -> dict[str, list[FocalResult]]:
    """Compute every statistic table.

    With ``from_exports`` the topic assignments are read from the
    detect-topics stage (DependencyError when absent); otherwise they
    are recomputed in-process, which is what ``run`` does. Both paths
    produce byte-identical bundles because the export round-trips
    exactly and all derived randomness is reseeded per author.
    """
    from .figures import build_all_tables
    from .tables import write_tables

    cfg.validate()
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    inputs = load_inputs(cfg)

    all_results: dict[str, list[FocalResult]] = {}
    n_focal: dict[str, int] = {}
    for label, (corpus, _) in inputs.items():
        tas = load_topics_stage(cfg, label) if from_exports else None
        results = analyze_corpus(corpus, cfg, tas)
        results.sort(key=lambda r: r.author_id)
        all_results[label] = results
        n_focal[label] = len(results)
        if cfg.export_intermediates:
            _export_intermediates(cfg, label, corpus, out_dir)

    tables = build_all_tables(all_results, cfg)
    write_tables(tables, out_dir / "tables")
    write_manifest(cfg, inputs, out_dir, n_focal)
    return all_results


def run_pipeline(cfg: RunConfig) -> dict[str, list[FocalResult]]:
    """Monolithic end-to-end run (equals synth/detect-topics/stats staging)."""
    return stats_stage(cfg, from_exports=False)
