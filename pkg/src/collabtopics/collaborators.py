"""Per-collaborator decomposition of a scientist's publication series.

A focal scientist's colored series is split into partial series, one
per coauthor, recording the jointly written papers and the major
topics they touch. Papers in minor communities (topic NONE) count
toward co-publication totals but never toward involved topics;
collaborators whose joint papers are all NONE are excluded from
topic-count statistics and reported separately.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .randomization import AuthorshipBipartite, build_authorship_bipartite
from .records import Corpus
from .tables import mean_se

__all__ = [
    "CollaboratorSeries",
    "CollaboratorStats",
    "decompose",
    "decompose_bipartite",
    "filter_copub",
    "collaborator_stats",
    "pooled_topic_distribution",
    "topics_vs_copub",
    "topic_span_pairs",
    "topic_span_stats",
    "copub_bin_edges",
    "write_collaborator_csv",
]


@dataclass(frozen=True)
class CollaboratorSeries:
    """Chronological coauthored papers of one (focal, collaborator) pair."""

    focal: str
    collaborator: str
    papers: tuple[tuple[str, int, int | None], ...]  # (paper_id, year, topic)
    n_copub: int
    first_year: int
    last_year: int
    involved_topics: tuple[int, ...]
    n_topics_involved: int


@dataclass(frozen=True)
class CollaboratorStats:
    """Topic-count distribution over one scientist's qualifying collaborators."""

    distribution: dict[int, float]
    fraction_single_topic: float | None
    n_qualifying: int
    n_all_none: int
    min_copub: int


def decompose_bipartite(
    bip: AuthorshipBipartite,
    series_map: dict[str, tuple[int, int | None]],
    min_copub: int = 1,
    count_none_toward_copub: bool = True,
) -> list[CollaboratorSeries]:
    """Partial series for every collaborator with enough joint papers.

    ``series_map`` carries (year, topic) per paper of the focal series.
    The bipartite may be the real authorship or a reshuffled surrogate;
    both decompose identically. With ``count_none_toward_copub`` off,
    NONE-topic papers are ignored by the min_copub filter as well.
    """
    if min_copub < 1:
        raise ValueError("min_copub must be >= 1")
    per_collab: dict[str, list[tuple[str, int, int | None]]] = {}
    for collaborator, pid in bip.links:
        year, topic = series_map[pid]
        per_collab.setdefault(collaborator, []).append((pid, year, topic))
    out: list[CollaboratorSeries] = []
    for collaborator in sorted(per_collab):
        papers = sorted(per_collab[collaborator], key=lambda t: (t[1], t[0]))
        if count_none_toward_copub:
            n_copub = len(papers)
        else:
            n_copub = sum(1 for _, _, topic in papers if topic is not None)
        if n_copub < min_copub:
            continue
        topics = tuple(sorted({t for _, _, t in papers if t is not None}))
        out.append(
            CollaboratorSeries(
                focal=bip.focal,
                collaborator=collaborator,
                papers=tuple(papers),
                n_copub=n_copub,
                first_year=papers[0][1],
                last_year=papers[-1][1],
                involved_topics=topics,
                n_topics_involved=len(topics),
            )
        )
    return out


def decompose(
    corpus: Corpus,
    series: Sequence[tuple[str, int, int | None, int]],
    focal: str,
    min_copub: int = 1,
    count_none_toward_copub: bool = True,
) -> list[CollaboratorSeries]:
    """Decompose a focal scientist's colored series by collaborator."""
    corpus.papers_of(focal)  # unknown focal raises here
    paper_ids = [pid for pid, _, _, _ in series]
    bip = build_authorship_bipartite(corpus, focal, paper_ids)
    series_map = {pid: (year, topic) for pid, year, topic, _ in series}
    return decompose_bipartite(bip, series_map, min_copub, count_none_toward_copub)


def filter_copub(series_list: Iterable[CollaboratorSeries], min_copub: int) -> list[CollaboratorSeries]:
    return [s for s in series_list if s.n_copub >= min_copub]


def collaborator_stats(series_list: Sequence[CollaboratorSeries], min_copub: int = 1) -> CollaboratorStats:
    """Topic-count distribution and single-topic fraction for one scientist."""
    qualifying = [s for s in series_list if s.n_topics_involved >= 1]
    n_all_none = len(series_list) - len(qualifying)
    if not qualifying:
        return CollaboratorStats({}, None, 0, n_all_none, min_copub)
    counts: dict[int, int] = {}
    for s in qualifying:
        counts[s.n_topics_involved] = counts.get(s.n_topics_involved, 0) + 1
    n = len(qualifying)
    distribution = {k: counts[k] / n for k in sorted(counts)}
    return CollaboratorStats(
        distribution=distribution,
        fraction_single_topic=counts.get(1, 0) / n,
        n_qualifying=n,
        n_all_none=n_all_none,
        min_copub=min_copub,
    )


def pooled_topic_distribution(stats_list: Sequence[CollaboratorStats]) -> dict[int, float]:
    """Unweighted mean over scientists of their own topic-count distributions."""
    contributing = [s for s in stats_list if s.n_qualifying > 0]
    if not contributing:
        raise ValueError("no scientist with qualifying collaborators")
    keys = sorted({k for s in contributing for k in s.distribution})
    n = len(contributing)
    return {k: sum(s.distribution.get(k, 0.0) for s in contributing) / n for k in keys}


def copub_bin_edges(max_value: int, exact_max: int = 5, start: int = 1) -> list[tuple[int, int]]:
    """[low, high) bins: unit bins up to exact_max, then doubling widths.

    With the defaults the edges run 1,2,3,4,5,6,10,18,34,... following
    the convention that counts up to 5 are exact and later bins double.
    """
    edges: list[tuple[int, int]] = []
    for k in range(start, exact_max + 1):
        edges.append((k, k + 1))
    low, width = exact_max + 1, exact_max - 1
    while low <= max_value:
        edges.append((low, low + width))
        low += width
        width *= 2
    return [e for e in edges if e[0] <= max_value]


def topics_vs_copub(
    all_series: Iterable[CollaboratorSeries], exact_max: int = 5
) -> list[tuple[int, int, int, float | None, float | None, float | None, float | None]]:
    """Involved-topic statistics binned by co-publication count.

    Rows are (bin_low, bin_high, n, mean_topics, se_topics,
    fraction_single, se_single), pooled over collaborators of all
    scientists. All-NONE collaborators are excluded.
    """
    qualifying = [s for s in all_series if s.n_topics_involved >= 1]
    if not qualifying:
        return []
    max_copub = max(s.n_copub for s in qualifying)
    min_copub = min(s.n_copub for s in qualifying)
    rows = []
    for low, high in copub_bin_edges(max_copub, exact_max, start=min_copub):
        members = [s for s in qualifying if low <= s.n_copub < high]
        if not members:
            rows.append((low, high, 0, None, None, None, None))
            continue
        topics = [float(s.n_topics_involved) for s in members]
        single = [1.0 if s.n_topics_involved == 1 else 0.0 for s in members]
        mt, st = mean_se(topics)
        fs, ss = mean_se(single)
        rows.append((low, high, len(members), mt, st, fs, ss))
    return rows


def topic_span_pairs(series_list: Iterable[CollaboratorSeries]) -> list[tuple[int, int]]:
    """(year_span, paper_count) per (collaborator, topic) pair.

    The span is inclusive: papers in 1990 and 1993 on one topic span 4
    years; a lone paper spans 1.
    """
    pairs: list[tuple[int, int]] = []
    for s in series_list:
        per_topic: dict[int, list[int]] = {}
        for _, year, topic in s.papers:
            if topic is not None:
                per_topic.setdefault(topic, []).append(year)
        for topic in sorted(per_topic):
            years = per_topic[topic]
            pairs.append((max(years) - min(years) + 1, len(years)))
    return pairs


def topic_span_stats(
    all_series: Iterable[CollaboratorSeries],
) -> tuple[dict[int, int], dict[int, int]]:
    """Histograms of per-(collaborator, topic) year spans and paper counts."""
    span_hist: dict[int, int] = {}
    count_hist: dict[int, int] = {}
    for span, count in topic_span_pairs(all_series):
        span_hist[span] = span_hist.get(span, 0) + 1
        count_hist[count] = count_hist.get(count, 0) + 1
    return dict(sorted(span_hist.items())), dict(sorted(count_hist.items()))


def write_collaborator_csv(series_list: Sequence[CollaboratorSeries], path: str | Path) -> None:
    """Per-focal export, one row per collaborator."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["collaborator_id", "n_copub", "first_year", "last_year", "n_topics_involved", "topics"]
        )
        for s in series_list:
            writer.writerow(
                [
                    s.collaborator,
                    s.n_copub,
                    s.first_year,
                    s.last_year,
                    s.n_topics_involved,
                    ";".join(str(t) for t in s.involved_topics),
                ]
            )
