"""Higher-order statistics over decomposed careers.

Includes the probability of existing collaborators to join a newly
started topic (overall and restricted to recently active
collaborators), reference-set similarity between a scientist and each
collaborator, features of collaborators at first contact, rank
correlations, two-sample Kolmogorov-Smirnov tests, and the
stratification helpers used to compare productive vs impactful
scientists and career cohorts.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from scipy.special import kolmogorov

from .collaborators import CollaboratorSeries, copub_bin_edges
from .community import TopicAssignment
from .records import Corpus, ScientistProfile

__all__ = [
    "CorrelationResult",
    "JoinEvent",
    "JoinCandidate",
    "SimilarityProfile",
    "join_events",
    "join_probability",
    "join_probability_overall",
    "kendall_tau",
    "pearson_r",
    "ks_test",
    "p_stars",
    "wilson_interval",
    "reference_similarity",
    "reference_similarity_all",
    "similarity_profile",
    "initial_collaborator_features",
    "stratify",
    "quantile_groups",
    "truncate_career",
]

_Z95 = 1.959963984540054

SIMILARITY_METRICS = ("jaccard", "cosine", "lhn")
SIMILARITY_VARIANTS = ("overall", "before")


# ---------------------------------------------------------------------------
# correlation and test statistics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CorrelationResult:
    """A named correlation with its sample size and stratification keys."""

    statistic: str
    value: float
    n: int
    keys: dict[str, str] = field(default_factory=dict)


def _count_inversions(seq: list) -> int:
    """Number of inversions, by merge sort."""
    if len(seq) < 2:
        return 0
    mid = len(seq) // 2
    left = seq[:mid]
    right = seq[mid:]
    inv = _count_inversions(left) + _count_inversions(right)
    merged = []
    i = j = 0
    while i < len(left) and j < len(right):
        if right[j] < left[i]:
            inv += len(left) - i
            merged.append(right[j])
            j += 1
        else:
            merged.append(left[i])
            i += 1
    merged.extend(left[i:])
    merged.extend(right[j:])
    seq[:] = merged
    return inv


def _tie_term(values: Sequence) -> int:
    groups: dict = {}
    for v in values:
        groups[v] = groups.get(v, 0) + 1
    return sum(t * (t - 1) // 2 for t in groups.values())


def kendall_tau(x: Sequence, y: Sequence, keys: dict[str, str] | None = None) -> CorrelationResult:
    """Tie-corrected Kendall tau-b, exact integer pair counting.

    Concordant minus discordant pairs are obtained from the inversion
    count of y after sorting by (x, y) (Knight's method), so the result
    matches literal O(n^2) counting exactly. Raises when all x or all y
    are tied, where tau is undefined.
    """
    n = len(x)
    if n != len(y):
        raise ValueError("x and y must have equal length")
    if n < 2:
        raise ValueError("need at least 2 pairs")
    if len(set(x)) < 2 or len(set(y)) < 2:
        raise ValueError("kendall tau undefined: one variable is constant")
    order = sorted(range(n), key=lambda i: (x[i], y[i]))
    ys = [y[i] for i in order]
    n0 = n * (n - 1) // 2
    n1 = _tie_term(x)
    n2 = _tie_term(y)
    n3 = _tie_term([(x[i], y[i]) for i in range(n)])
    swaps = _count_inversions(list(ys))
    s = n0 - n1 - n2 + n3 - 2 * swaps
    tau = s / math.sqrt(float(n0 - n1) * float(n0 - n2))
    return CorrelationResult("kendall_tau", tau, n, keys or {})


def pearson_r(x: Sequence[float], y: Sequence[float], keys: dict[str, str] | None = None) -> CorrelationResult:
    """Product-moment correlation; raises on zero variance."""
    n = len(x)
    if n != len(y):
        raise ValueError("x and y must have equal length")
    if n < 2:
        raise ValueError("need at least 2 pairs")
    mx = sum(x) / n
    my = sum(y) / n
    sxx = sum((v - mx) ** 2 for v in x)
    syy = sum((v - my) ** 2 for v in y)
    if sxx == 0.0 or syy == 0.0:
        raise ValueError("pearson r undefined: zero variance")
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    return CorrelationResult("pearson_r", sxy / math.sqrt(sxx * syy), n, keys or {})


def ks_test(sample_a: Sequence[float], sample_b: Sequence[float]) -> tuple[float, float]:
    """Two-sample Kolmogorov-Smirnov test.

    D is the exact supremum of |F_a - F_b| over the pooled sample
    points; the p value uses the asymptotic Kolmogorov distribution
    with effective size n_a n_b / (n_a + n_b).
    """
    if not sample_a or not sample_b:
        raise ValueError("both samples must be non-empty")
    a = sorted(sample_a)
    b = sorted(sample_b)
    na, nb = len(a), len(b)
    d = 0.0
    for v in sorted(set(a) | set(b)):
        fa = bisect_right(a, v) / na
        fb = bisect_right(b, v) / nb
        d = max(d, abs(fa - fb))
    en = na * nb / (na + nb)
    p = float(kolmogorov(math.sqrt(en) * d))
    return d, min(1.0, max(0.0, p))


def p_stars(p: float) -> str:
    """Significance marks: *** p<=0.001, ** p<=0.01, * p<=0.1."""
    if p <= 0.001:
        return "***"
    if p <= 0.01:
        return "**"
    if p <= 0.1:
        return "*"
    return ""


def wilson_interval(successes: int, trials: int, z: float = _Z95) -> tuple[float | None, float | None]:
    """Wilson score interval for a binomial proportion (95% by default)."""
    if trials == 0:
        return None, None
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)) / denom
    # rounding can push a boundary past the point estimate by one ulp
    return max(0.0, min(center - half, p)), min(1.0, max(center + half, p))


# ---------------------------------------------------------------------------
# joining a newly started topic
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JoinCandidate:
    """One existing collaborator observed at a topic start."""

    collaborator: str
    past_copub: int
    past_mean_c10: float
    recent: bool
    joined: bool


@dataclass(frozen=True)
class JoinEvent:
    """The start of one topic (the first topic is never an event)."""

    focal: str
    topic_id: int
    topic_start_year: int
    career_stage: int  # years since the focal scientist's first paper
    candidates: tuple[JoinCandidate, ...]

    @property
    def existing_collaborators(self) -> tuple[str, ...]:
        return tuple(c.collaborator for c in self.candidates)

    @property
    def recent_collaborators(self) -> tuple[str, ...]:
        return tuple(c.collaborator for c in self.candidates if c.recent)

    @property
    def joiners(self) -> tuple[str, ...]:
        return tuple(c.collaborator for c in self.candidates if c.joined)


def join_events(
    series: Sequence[tuple[str, int, int | None, int]],
    ta: TopicAssignment,
    collab_series: Sequence[CollaboratorSeries],
    join_min_copub: int = 1,
    recent_window: int = 2,
) -> list[JoinEvent]:
    """One event per topic after the first.

    Existing collaborators are those with at least ``join_min_copub``
    coauthored papers strictly before the topic's start year; papers in
    the start year itself do not establish existing status. A candidate
    is recent when some coauthored paper falls within the
    ``recent_window`` calendar years ending at the start year, and a
    joiner when some coauthored paper carries the new topic's label.
    """
    if ta.n_topics < 2:
        return []
    if recent_window < 1:
        raise ValueError("recent_window must be >= 1")
    c10_of = {pid: c10 for pid, _, _, c10 in series}
    career_start = min(year for _, year, _, _ in series)
    events = []
    for topic_id in range(1, ta.n_topics):
        start = ta.topic_first_year[topic_id]
        candidates = []
        for cs in collab_series:
            past = [p for p in cs.papers if p[1] < start]
            if len(past) < join_min_copub:
                continue
            recent = any(start - recent_window < y <= start for _, y, _ in cs.papers)
            joined = any(t == topic_id for _, _, t in cs.papers)
            mean_c10 = sum(c10_of[pid] for pid, _, _ in past) / len(past)
            candidates.append(
                JoinCandidate(
                    collaborator=cs.collaborator,
                    past_copub=len(past),
                    past_mean_c10=mean_c10,
                    recent=recent,
                    joined=joined,
                )
            )
        events.append(
            JoinEvent(
                focal=ta.owner,
                topic_id=topic_id,
                topic_start_year=start,
                career_stage=start - career_start,
                candidates=tuple(candidates),
            )
        )
    return events


def _candidate_pool(events: Iterable[JoinEvent], mode: str) -> list[tuple[JoinCandidate, JoinEvent]]:
    if mode not in ("overall", "recent"):
        raise ValueError(f"unknown mode {mode!r}")
    pool = []
    for ev in events:
        for cand in ev.candidates:
            if mode == "recent" and not cand.recent:
                continue
            pool.append((cand, ev))
    return pool


def join_probability_overall(events: Iterable[JoinEvent], mode: str = "overall") -> tuple[int, int, float | None]:
    """(joiners, candidates, pooled probability) over all events."""
    pool = _candidate_pool(events, mode)
    joiners = sum(1 for cand, _ in pool if cand.joined)
    return joiners, len(pool), (joiners / len(pool) if pool else None)


def float_doubling_bins(max_value: float) -> list[tuple[float, float]]:
    """[0,1), [1,2), [2,4), [4,8), ... covering max_value."""
    edges = [(0.0, 1.0)]
    low, high = 1.0, 2.0
    while low <= max_value:
        edges.append((low, high))
        low, high = high, high * 2.0
    return [e for e in edges if e[0] <= max_value]


def join_probability(
    events: Sequence[JoinEvent],
    mode: str = "overall",
    binning: str = "past_copub",
    scale: str = "log",
    stage_width: int = 5,
) -> list[tuple[float, float, str, float | None, float | None, float | None, int]]:
    """Join probability binned by a collaboration-history covariate.

    Rows are (bin_low, bin_high, mode, probability, ci_low, ci_high, n)
    with Wilson 95% intervals; bins with no candidates carry a null
    probability. The probability is pooled: total joiners over total
    candidates within the bin, so the rows sum back to the overall
    ratio exactly.
    """
    pool = _candidate_pool(events, mode)
    if not pool:
        raise ValueError("no candidates in any event")

    if binning == "past_copub":
        values = [float(c.past_copub) for c, _ in pool]
        if scale == "log":
            edges = [(float(lo), float(hi)) for lo, hi in
                     copub_bin_edges(int(max(values)), start=int(min(values)))]
        elif scale == "linear":
            edges = [(float(k), float(k + 1)) for k in range(int(min(values)), int(max(values)) + 1)]
        else:
            raise ValueError(f"unknown scale {scale!r}")
    elif binning == "past_mean_c10":
        values = [c.past_mean_c10 for c, _ in pool]
        edges = float_doubling_bins(max(values))
    elif binning == "career_stage":
        values = [float(ev.career_stage) for _, ev in pool]
        top = int(max(values)) // stage_width * stage_width
        edges = [(float(k), float(k + stage_width)) for k in range(0, top + stage_width, stage_width)]
    else:
        raise ValueError(f"unknown binning {binning!r}")

    rows = []
    for low, high in edges:
        joiners = trials = 0
        for value, (cand, _) in zip(values, pool):
            if low <= value < high:
                trials += 1
                joiners += 1 if cand.joined else 0
        if trials == 0:
            rows.append((low, high, mode, None, None, None, 0))
            continue
        ci_low, ci_high = wilson_interval(joiners, trials)
        rows.append((low, high, mode, joiners / trials, ci_low, ci_high, trials))
    return rows


# ---------------------------------------------------------------------------
# reference similarity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SimilarityProfile:
    """Reference similarities between a focal scientist and collaborators."""

    focal: str
    per_collaborator: dict[str, dict[tuple[str, str], float | None]]
    means: dict[tuple[str, str], float | None]


def _similarity(gamma_i: set[str], gamma_j: set[str], metric: str) -> float | None:
    if not gamma_i or not gamma_j:
        return None
    inter = len(gamma_i & gamma_j)
    if metric == "jaccard":
        return inter / len(gamma_i | gamma_j)
    if metric == "cosine":
        return inter / math.sqrt(len(gamma_i) * len(gamma_j))
    if metric == "lhn":
        return inter / (len(gamma_i) * len(gamma_j))
    raise ValueError(f"unknown metric {metric!r}")


def _reference_sets(
    corpus: Corpus, focal: str, collaborator: str
) -> dict[str, tuple[set[str], set[str]]]:
    """Gamma sets per variant for one (focal, collaborator) pair."""
    focal_papers = corpus.papers_of(focal)
    coll_papers = corpus.papers_of(collaborator)
    shared = set(focal_papers) & set(coll_papers)
    first_year = min(corpus.papers[p].year for p in shared) if shared else None

    def union(papers: list[str], before: int | None) -> set[str]:
        refs: set[str] = set()
        for pid in papers:
            if pid in shared:
                continue
            rec = corpus.papers[pid]
            if before is not None and rec.year >= before:
                continue
            refs.update(rec.reference_ids)
        return refs

    out = {"overall": (union(focal_papers, None), union(coll_papers, None))}
    if first_year is not None:
        out["before"] = (union(focal_papers, first_year), union(coll_papers, first_year))
    return out


def reference_similarity(
    corpus: Corpus, focal: str, collaborator: str, metric: str = "jaccard", variant: str = "overall"
) -> float | None:
    """Similarity of the two scientists' reference sets.

    The ``overall`` variant pools references from all papers of each
    scientist except their joint ones; ``before`` keeps only papers
    from years strictly before their first joint paper. Returns None
    when either reference set is empty.
    """
    if variant not in SIMILARITY_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    sets = _reference_sets(corpus, focal, collaborator)
    if variant == "before" and "before" not in sets:
        raise ValueError(f"{focal} and {collaborator} never collaborated")
    gamma_i, gamma_j = sets[variant]
    return _similarity(gamma_i, gamma_j, metric)


def reference_similarity_all(
    corpus: Corpus, focal: str, collaborator: str
) -> dict[tuple[str, str], float | None]:
    """All (metric, variant) similarities for one pair, sharing the set work."""
    sets = _reference_sets(corpus, focal, collaborator)
    out: dict[tuple[str, str], float | None] = {}
    for variant in SIMILARITY_VARIANTS:
        pair = sets.get(variant)
        for metric in SIMILARITY_METRICS:
            out[(metric, variant)] = _similarity(pair[0], pair[1], metric) if pair else None
    return out


def similarity_profile(corpus: Corpus, focal: str, collaborators: Iterable[str]) -> SimilarityProfile:
    """Per-collaborator similarities and their per-focal means (nulls excluded)."""
    per_collab = {c: reference_similarity_all(corpus, focal, c) for c in sorted(collaborators)}
    means: dict[tuple[str, str], float | None] = {}
    for metric in SIMILARITY_METRICS:
        for variant in SIMILARITY_VARIANTS:
            vals = [
                v[(metric, variant)] for v in per_collab.values() if v[(metric, variant)] is not None
            ]
            means[(metric, variant)] = sum(vals) / len(vals) if vals else None
    return SimilarityProfile(focal=focal, per_collaborator=per_collab, means=means)


# ---------------------------------------------------------------------------
# collaborator features at first contact
# ---------------------------------------------------------------------------

def initial_collaborator_features(
    corpus: Corpus, focal: str, collab_series: Sequence[CollaboratorSeries]
) -> list[tuple[str, int, int, float | None]]:
    """(collaborator, past_career_years, past_publications, citations_per_past_paper).

    Features are taken at the year of the first coauthored paper with
    the focal scientist, counting only the collaborator's papers from
    strictly earlier years. Newcomers score 0 career years, 0 papers
    and a null citation rate.
    """
    out = []
    for cs in collab_series:
        first = cs.first_year
        past = [
            corpus.papers[p]
            for p in corpus.papers_of(cs.collaborator)
            if corpus.papers[p].year < first
        ]
        if past:
            career = first - min(rec.year for rec in past)
            cites = sum(rec.c10 for rec in past) / len(past)
        else:
            career = 0
            cites = None
        out.append((cs.collaborator, career, len(past), cites))
    return out


# ---------------------------------------------------------------------------
# stratification
# ---------------------------------------------------------------------------

_PROFILE_KEYS = {
    "productivity": lambda p: p.paper_count,
    "impact": lambda p: p.mean_c10,
    "career_start": lambda p: p.career_start_year,
    "career_stage": lambda p: p.career_years,
}


def _key_values(
    profiles: Sequence[ScientistProfile], key: str, values: dict[str, float] | None
) -> list[tuple[str, float]]:
    if key == "n_topics":
        if values is None:
            raise ValueError("key 'n_topics' needs an explicit values mapping")
        return [(p.author_id, values[p.author_id]) for p in profiles]
    try:
        getter = _PROFILE_KEYS[key]
    except KeyError:
        raise ValueError(f"unknown stratification key {key!r}") from None
    return [(p.author_id, getter(p)) for p in profiles]


def quantile_groups(pairs: Sequence[tuple[str, float]], n_groups: int) -> dict[str, list[str]]:
    """Equal-count groups q0 (lowest) .. q{n-1}, ties broken by id."""
    ranked = sorted(pairs, key=lambda t: (t[1], t[0]))
    n = len(ranked)
    groups: dict[str, list[str]] = {f"q{i}": [] for i in range(n_groups)}
    for rank, (author, _) in enumerate(ranked):
        groups[f"q{min(n_groups - 1, rank * n_groups // n)}"].append(author)
    return {g: sorted(ids) for g, ids in groups.items()}


def stratify(
    profiles: Sequence[ScientistProfile],
    key: str,
    scheme: str,
    k: int = 1,
    bin_width: int = 10,
    values: dict[str, float] | None = None,
) -> dict[str, list[str]]:
    """Deterministic group assignment of scientists.

    Schemes: ``top`` keeps the top k percent by the key (boundary ties
    broken by author id), ``deciles`` builds ten equal-count groups,
    ``year_bins`` groups the key value into bins of ``bin_width``
    years. The ``n_topics`` key requires a ``values`` mapping since
    topic counts live outside the profile.
    """
    pairs = _key_values(profiles, key, values)
    if not pairs:
        return {}
    if scheme == "top":
        if k not in (1, 5, 10, 20):
            raise ValueError("k percent must be one of 1, 5, 10, 20")
        n_top = max(1, math.ceil(len(pairs) * k / 100))
        ranked = sorted(pairs, key=lambda t: (-t[1], t[0]))
        top = sorted(a for a, _ in ranked[:n_top])
        rest = sorted(a for a, _ in ranked[n_top:])
        return {"top": top, "rest": rest}
    if scheme == "deciles":
        return quantile_groups(pairs, 10)
    if scheme == "year_bins":
        groups: dict[str, list[str]] = {}
        for author, value in pairs:
            low = int(value) // bin_width * bin_width
            groups.setdefault(f"{low}-{low + bin_width - 1}", []).append(author)
        return {g: sorted(ids) for g, ids in sorted(groups.items())}
    raise ValueError(f"unknown scheme {scheme!r}")


def truncate_career(corpus: Corpus, author_id: str, window: int = 30) -> list[str]:
    """The author's papers within their first ``window`` career years."""
    pids = corpus.papers_of(author_id)
    start = corpus.papers[pids[0]].year
    return [p for p in pids if corpus.papers[p].year < start + window]
