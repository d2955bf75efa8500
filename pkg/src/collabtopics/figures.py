"""Aggregation of per-scientist results into figure-keyed tables.

Conventions: distribution panels average each scientist's own
topic-count distribution (every scientist weighs equally); the
vs-copublication curves pool collaborators across scientists within
each bin. Tables for the surrogate null carry a ``variant`` column
with real and shuffled rows side by side. Multi-corpus comparisons
(fig6b, fig6d) run over every labeled input; everything else uses the
first one.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .collaborators import (
    collaborator_stats,
    copub_bin_edges,
    filter_copub,
    pooled_topic_distribution,
    topics_vs_copub,
)
from .pipeline import CollabSummary, FocalResult, RunConfig
from .records import ScientistProfile
from .stats import (
    SIMILARITY_METRICS,
    SIMILARITY_VARIANTS,
    JoinEvent,
    float_doubling_bins,
    join_probability,
    join_probability_overall,
    kendall_tau,
    ks_test,
    p_stars,
    pearson_r,
    quantile_groups,
    stratify,
)
from .tables import StatTable, mean_se

__all__ = ["build_all_tables"]

_FRACTION_EDGES = [round(i * 0.05, 2) for i in range(21)]  # 0.00 .. 1.00


# ---------------------------------------------------------------------------
# small helpers
# ---------------------------------------------------------------------------

def _profiles(results: Sequence[FocalResult]) -> list[ScientistProfile]:
    return [
        ScientistProfile(r.author_id, r.paper_count, r.mean_c10, r.career_start_year, r.career_years)
        for r in results
    ]


def _summaries(r: FocalResult, surrogate: bool, trunc: bool) -> tuple[CollabSummary, ...] | None:
    if trunc:
        return r.trunc_surr if surrogate else r.trunc_real
    return r.collabs_surr if surrogate else r.collabs_real


def _fraction_single_map(
    results: Sequence[FocalResult], min_copub: int, surrogate: bool = False, trunc: bool = False
) -> dict[str, float | None]:
    out: dict[str, float | None] = {}
    for r in results:
        summaries = _summaries(r, surrogate, trunc)
        if summaries is None:
            out[r.author_id] = None
            continue
        st = collaborator_stats(filter_copub(summaries, min_copub), min_copub)
        out[r.author_id] = st.fraction_single_topic
    return out


def _pooled_distribution(
    results: Sequence[FocalResult], min_copub: int, surrogate: bool = False
) -> dict[int, float]:
    stats_list = []
    for r in results:
        summaries = _summaries(r, surrogate, trunc=False)
        if summaries is not None:
            stats_list.append(collaborator_stats(filter_copub(summaries, min_copub), min_copub))
    if not any(s.n_qualifying > 0 for s in stats_list):
        return {}
    return pooled_topic_distribution(stats_list)


def _flat_summaries(
    results: Sequence[FocalResult], min_copub: int, surrogate: bool = False, trunc: bool = False
) -> list[CollabSummary]:
    flat: list[CollabSummary] = []
    for r in results:
        summaries = _summaries(r, surrogate, trunc)
        if summaries is not None:
            flat.extend(filter_copub(summaries, min_copub))
    return flat


def _hist_rows(values: Sequence[float], edges: Sequence[float]) -> list[tuple[float, float, int, float]]:
    """(low, high, count, density) rows; the last bin is right-closed."""
    counts = [0] * (len(edges) - 1)
    for v in values:
        for i in range(len(edges) - 1):
            last = i == len(edges) - 2
            if edges[i] <= v < edges[i + 1] or (last and v == edges[i + 1]):
                counts[i] += 1
                break
    total = len(values)
    rows = []
    for i, c in enumerate(counts):
        width = edges[i + 1] - edges[i]
        rows.append((edges[i], edges[i + 1], c, c / (total * width) if total else 0.0))
    return rows


def _tau_or_none(x: Sequence, y: Sequence) -> float | None:
    try:
        return kendall_tau(x, y).value
    except ValueError:
        return None


def _ks_or_none(a: Sequence[float], b: Sequence[float]) -> tuple[float | None, float | None, str]:
    if not a or not b:
        return None, None, ""
    d, p = ks_test(a, b)
    return d, p, p_stars(p)


def _group_map(
    results: Sequence[FocalResult], cfg: RunConfig, ks: Iterable[int]
) -> dict[str, set[str]]:
    """overall plus top-k productivity/impact groups."""
    profiles = _profiles(results)
    groups: dict[str, set[str]] = {"overall": {r.author_id for r in results}}
    for k in ks:
        groups[f"top{k}_productive"] = set(stratify(profiles, "productivity", "top", k=k)["top"])
        groups[f"top{k}_impactful"] = set(stratify(profiles, "impact", "top", k=k)["top"])
    return groups


def _all_events(results: Sequence[FocalResult]) -> list[JoinEvent]:
    events: list[JoinEvent] = []
    for r in results:
        events.extend(r.events)
    return events


def _variants(results: Sequence[FocalResult], cfg: RunConfig) -> list[tuple[str, bool]]:
    variants = [("real", False)]
    if cfg.surrogate:
        variants.append(("surrogate", True))
    return variants


# ---------------------------------------------------------------------------
# figure 2: topic counts of collaborators
# ---------------------------------------------------------------------------

def _fig2_distribution(name, results, cfg, min_copub, desc) -> StatTable:
    t = StatTable(name, ("variant", "n_topics", "fraction"), description=desc)
    for variant, surr in _variants(results, cfg):
        for k, frac in _pooled_distribution(results, min_copub, surr).items():
            t.add(variant, k, frac)
    return t


def _fig2_fraction_hist(name, results, cfg, min_copub, desc) -> StatTable:
    t = StatTable(name, ("variant", "bin_low", "bin_high", "count", "density"), description=desc)
    for variant, surr in _variants(results, cfg):
        values = [v for v in _fraction_single_map(results, min_copub, surr).values() if v is not None]
        for low, high, count, density in _hist_rows(values, _FRACTION_EDGES):
            t.add(variant, low, high, count, density)
    return t


def _fig2e(results, cfg) -> StatTable:
    t = StatTable(
        "fig2e",
        ("variant", "bin_low", "bin_high", "n", "mean_topics", "se"),
        description="mean involved topics vs number of coauthored papers",
    )
    for variant, surr in _variants(results, cfg):
        flat = _flat_summaries(results, cfg.copub_filters[0], surr)
        for low, high, n, mean_topics, se, _, _ in topics_vs_copub(flat):
            t.add(variant, low, high, n, mean_topics, se)
    return t


def _fig2f(results, cfg) -> StatTable:
    t = StatTable(
        "fig2f",
        ("variant", "bin_low", "bin_high", "n", "fraction_single", "se"),
        description="single-topic fraction vs number of coauthored papers",
    )
    for variant, surr in _variants(results, cfg):
        flat = _flat_summaries(results, cfg.copub_filters[0], surr)
        for low, high, n, _, _, frac, se in topics_vs_copub(flat):
            t.add(variant, low, high, n, frac, se)
    return t


# ---------------------------------------------------------------------------
# figure 3: productive vs impactful scientists
# ---------------------------------------------------------------------------

def _fig3a(results) -> StatTable:
    t = StatTable(
        "fig3a",
        ("author_id", "paper_count", "mean_c10"),
        description="productivity vs mean impact per scientist",
    )
    for r in results:
        t.add(r.author_id, r.paper_count, r.mean_c10)
    return t


def _fig3b(results, cfg) -> StatTable:
    t = StatTable(
        "fig3b",
        ("group", "bin_low", "bin_high", "n", "fraction_single", "se"),
        description="single-topic fraction vs copublications, by success group",
    )
    groups = _group_map(results, cfg, cfg.top_k_percents)
    for group in sorted(groups):
        members = [r for r in results if r.author_id in groups[group]]
        flat = _flat_summaries(members, cfg.copub_filters[0])
        for low, high, n, _, _, frac, se in topics_vs_copub(flat):
            t.add(group, low, high, n, frac, se)
    return t


def _fig3c(results, cfg) -> StatTable:
    high = cfg.copub_filters[1]
    t = StatTable(
        "fig3c",
        ("group", "n_topics", "fraction"),
        description=f"topic-count distribution of frequent collaborators (copub >= {high})",
    )
    groups = _group_map(results, cfg, cfg.top_k_percents)
    for group in sorted(groups):
        members = [r for r in results if r.author_id in groups[group]]
        for k, frac in _pooled_distribution(members, high).items():
            t.add(group, k, frac)
    return t


def _decile_fraction(name, results, cfg, key, desc) -> StatTable:
    t = StatTable(name, ("decile", "n", "fraction_single", "se"), description=desc)
    fractions = _fraction_single_map(results, cfg.copub_filters[1])
    deciles = stratify(_profiles(results), key, "deciles")
    for decile in sorted(deciles):
        values = [fractions[a] for a in deciles[decile] if fractions[a] is not None]
        mean, se = mean_se(values)
        t.add(decile, len(values), mean, se)
    return t


def _inset_tau(name, results, cfg, x_key, fix_key, desc) -> StatTable:
    """Kendall tau of per-focal single-topic fraction vs x_key, fixing fix_key quartiles."""
    t = StatTable(name, ("fixed_group", "tau", "n"), description=desc)
    fractions = _fraction_single_map(results, cfg.copub_filters[1])
    profiles = {p.author_id: p for p in _profiles(results)}
    getter = {"productivity": lambda p: p.paper_count, "impact": lambda p: p.mean_c10}[x_key]
    fixer = {"productivity": lambda p: p.paper_count, "impact": lambda p: p.mean_c10}[fix_key]

    def tau_rows(label: str, authors: Iterable[str]) -> None:
        pts = [
            (getter(profiles[a]), fractions[a]) for a in authors if fractions[a] is not None
        ]
        if len(pts) >= 2:
            t.add(label, _tau_or_none([x for x, _ in pts], [y for _, y in pts]), len(pts))
        else:
            t.add(label, None, len(pts))

    tau_rows("overall", [r.author_id for r in results])
    quartiles = quantile_groups([(p.author_id, fixer(p)) for p in profiles.values()], 4)
    for q in sorted(quartiles):
        tau_rows(q, quartiles[q])
    return t


def _fig3f(results, cfg) -> StatTable:
    t = StatTable(
        "fig3f",
        ("group", "n_topics_focal", "n", "fraction_single", "se"),
        description="single-topic fraction vs the focal scientist's topic count",
    )
    fractions = _fraction_single_map(results, cfg.copub_filters[1])
    groups = _group_map(results, cfg, cfg.top_k_percents[:1])
    for group in sorted(groups):
        members = [r for r in results if r.author_id in groups[group]]
        by_topics: dict[int, list[float]] = {}
        for r in members:
            f = fractions[r.author_id]
            if f is not None:
                by_topics.setdefault(r.n_topics, []).append(f)
        for k in sorted(by_topics):
            mean, se = mean_se(by_topics[k])
            t.add(group, k, len(by_topics[k]), mean, se)
    return t


# ---------------------------------------------------------------------------
# figure 4: community significance and reference similarity
# ---------------------------------------------------------------------------

def _fig4a(results) -> StatTable:
    t = StatTable(
        "fig4a",
        ("author_id", "q_real", "q_rand_mean", "ratio"),
        description="modularity of the collaborator network vs degree-preserved rewiring",
    )
    for r in results:
        t.add(r.author_id, r.q_real, r.q_rand_mean, r.q_ratio)
    return t


def _fig4b(results) -> StatTable:
    t = StatTable(
        "fig4b",
        ("bin_low", "bin_high", "count", "density"),
        description="distribution of mean pre-collaboration reference similarity (jaccard)",
    )
    values = [
        r.similarities.means[("jaccard", "before")]
        for r in results
        if r.similarities.means[("jaccard", "before")] is not None
    ]
    for row in _hist_rows(values, _FRACTION_EDGES):
        t.add(*row)
    return t


def _decile_means(name, results, value_of, desc) -> StatTable:
    """Mean of a per-focal value across productivity/impact deciles."""
    t = StatTable(name, ("key", "decile", "n", "mean", "se"), description=desc)
    profiles = _profiles(results)
    values = {r.author_id: value_of(r) for r in results}
    for key in ("productivity", "impact"):
        deciles = stratify(profiles, key, "deciles")
        for decile in sorted(deciles):
            vals = [values[a] for a in deciles[decile] if values[a] is not None]
            mean, se = mean_se(vals)
            t.add(key, decile, len(vals), mean, se)
    return t


def _figS7(results) -> StatTable:
    t = StatTable(
        "figS7",
        ("metric", "variant", "key", "decile", "n", "mean_similarity", "se"),
        description="reference similarity by metric and variant across deciles",
    )
    profiles = _profiles(results)
    for metric in SIMILARITY_METRICS:
        for variant in SIMILARITY_VARIANTS:
            values = {r.author_id: r.similarities.means[(metric, variant)] for r in results}
            for key in ("productivity", "impact"):
                deciles = stratify(profiles, key, "deciles")
                for decile in sorted(deciles):
                    vals = [values[a] for a in deciles[decile] if values[a] is not None]
                    mean, se = mean_se(vals)
                    t.add(metric, variant, key, decile, len(vals), mean, se)
    return t


# ---------------------------------------------------------------------------
# figure 5: joining the next topic
# ---------------------------------------------------------------------------

def _join_table(name, events, binning, desc, scale="log") -> StatTable:
    t = StatTable(
        name,
        ("bin_low", "bin_high", "mode", "probability", "ci_low", "ci_high", "n"),
        description=desc,
    )
    for mode in ("overall", "recent"):
        _, candidates, _ = join_probability_overall(events, mode)
        if candidates == 0:
            continue
        for row in join_probability(events, mode, binning, scale=scale):
            t.add(*row)
    return t


def _fig5cd(name, results, cfg, covariate, desc) -> StatTable:
    t = StatTable(name, ("key", "decile", "mode", "tau", "n"), description=desc)
    profiles = _profiles(results)
    by_author = {r.author_id: r.events for r in results}
    for key in ("productivity", "impact"):
        deciles = stratify(profiles, key, "deciles")
        for decile in sorted(deciles):
            events: list[JoinEvent] = []
            for a in deciles[decile]:
                events.extend(by_author[a])
            for mode in ("overall", "recent"):
                xs, ys = [], []
                for ev in events:
                    for cand in ev.candidates:
                        if mode == "recent" and not cand.recent:
                            continue
                        xs.append(cand.past_copub if covariate == "past_copub" else cand.past_mean_c10)
                        ys.append(1 if cand.joined else 0)
                tau = _tau_or_none(xs, ys) if len(xs) >= 2 else None
                t.add(key, decile, mode, tau, len(xs))
    return t


def _fig5f(results, cfg, stage_width: int = 5) -> StatTable:
    t = StatTable(
        "fig5f",
        ("covariate", "stage_low", "stage_high", "tau", "n"),
        description="tau of past performance vs joining, by focal career stage",
    )
    events = _all_events(results)
    if not events:
        return t
    max_stage = max(ev.career_stage for ev in events)
    for covariate in ("past_copub", "past_mean_c10"):
        for low in range(0, max_stage + 1, stage_width):
            high = low + stage_width
            xs, ys = [], []
            for ev in events:
                if not (low <= ev.career_stage < high):
                    continue
                for cand in ev.candidates:
                    xs.append(cand.past_copub if covariate == "past_copub" else cand.past_mean_c10)
                    ys.append(1 if cand.joined else 0)
            tau = _tau_or_none(xs, ys) if len(xs) >= 2 else None
            t.add(covariate, low, high, tau, len(xs))
    return t


# ---------------------------------------------------------------------------
# figure 6: cohorts and corpus comparison
# ---------------------------------------------------------------------------

def _decade(year: int) -> str:
    low = year // 10 * 10
    return f"{low}-{low + 9}"


def _fig6a(results, cfg) -> StatTable:
    t = StatTable(
        "fig6a",
        ("cohort", "variant", "n", "fraction_single", "se"),
        description=f"single-topic fraction by career-start decade, first {cfg.cohort_window} career years",
    )
    for variant, surr in _variants(results, cfg):
        fractions = _fraction_single_map(results, cfg.copub_filters[0], surr, trunc=True)
        by_cohort: dict[str, list[float]] = {}
        for r in results:
            f = fractions[r.author_id]
            if f is not None:
                by_cohort.setdefault(_decade(r.career_start_year), []).append(f)
        for cohort in sorted(by_cohort):
            mean, se = mean_se(by_cohort[cohort])
            t.add(cohort, variant, len(by_cohort[cohort]), mean, se)
    return t


def _fig6a_inset(results, cfg) -> StatTable:
    t = StatTable(
        "fig6a_inset",
        ("cohort_group", "bin_low", "bin_high", "n", "fraction_single", "se"),
        description="single-topic fraction vs copublications, early vs late career starts",
    )
    if not results:
        return t
    starts = sorted((r.career_start_year, r.author_id) for r in results)
    median_start = starts[len(starts) // 2][0]
    early = [r for r in results if r.career_start_year < median_start]
    late = [r for r in results if r.career_start_year >= median_start]
    for label, members in (("early", early), ("late", late)):
        if not members:
            continue
        span = f"{min(r.career_start_year for r in members)}-{max(r.career_start_year for r in members)}"
        flat = _flat_summaries(members, cfg.copub_filters[0], trunc=True)
        for low, high, n, _, _, frac, se in topics_vs_copub(flat):
            t.add(f"{label}:{span}", low, high, n, frac, se)
    return t


def _cohort_k(cfg: RunConfig) -> int:
    return 10 if 10 in cfg.top_k_percents else cfg.top_k_percents[0]


def _fig6c(results, cfg) -> tuple[StatTable, StatTable]:
    k = _cohort_k(cfg)
    t = StatTable(
        "fig6c",
        ("cohort", "group", "n", "fraction_single", "se"),
        description=f"truncated-career single-topic fraction (copub >= {cfg.copub_filters[1]}), top {k}% groups",
    )
    tests = StatTable(
        "fig6c_tests",
        ("cohort", "group_a", "group_b", "D", "p", "stars"),
        description="KS tests between group distributions within each cohort",
    )
    fractions = _fraction_single_map(results, cfg.copub_filters[1], trunc=True)
    groups = _group_map(results, cfg, [k])
    labels = ["overall", f"top{k}_productive", f"top{k}_impactful"]
    cohorts: dict[str, list[FocalResult]] = {}
    for r in results:
        cohorts.setdefault(_decade(r.career_start_year), []).append(r)
    for cohort in sorted(cohorts):
        samples: dict[str, list[float]] = {}
        for label in labels:
            vals = [
                fractions[r.author_id]
                for r in cohorts[cohort]
                if r.author_id in groups[label] and fractions[r.author_id] is not None
            ]
            samples[label] = vals
            mean, se = mean_se(vals)
            t.add(cohort, label, len(vals), mean, se)
        for i in range(len(labels)):
            for j in range(i + 1, len(labels)):
                d, p, stars = _ks_or_none(samples[labels[i]], samples[labels[j]])
                tests.add(cohort, labels[i], labels[j], d, p, stars)
    return t, tests


def _fig6b(all_results, cfg) -> tuple[StatTable, StatTable]:
    t = StatTable(
        "fig6b",
        ("corpus", "n_topics", "fraction"),
        description="collaborator topic-count distribution per corpus",
    )
    inset = StatTable(
        "fig6b_inset",
        ("corpus", "bin_low", "bin_high", "n", "fraction_single", "se"),
        description="single-topic fraction vs copublications per corpus",
    )
    for label, results in all_results.items():
        for k, frac in _pooled_distribution(results, cfg.copub_filters[0]).items():
            t.add(label, k, frac)
        flat = _flat_summaries(results, cfg.copub_filters[0])
        for low, high, n, _, _, frac, se in topics_vs_copub(flat):
            inset.add(label, low, high, n, frac, se)
    return t, inset


def _fig6d(all_results, cfg) -> tuple[StatTable, StatTable]:
    k = _cohort_k(cfg)
    t = StatTable(
        "fig6d",
        ("corpus", "group", "n", "fraction_single", "se"),
        description=f"single-topic fraction (copub >= {cfg.copub_filters[1]}) per corpus and group",
    )
    tests = StatTable(
        "fig6d_tests",
        ("corpus", "group_a", "group_b", "D", "p", "stars"),
        description="KS tests between group distributions within each corpus",
    )
    labels = ["overall", f"top{k}_productive", f"top{k}_impactful"]
    for corpus_label, results in all_results.items():
        fractions = _fraction_single_map(results, cfg.copub_filters[1])
        groups = _group_map(results, cfg, [k])
        samples: dict[str, list[float]] = {}
        for label in labels:
            vals = [
                fractions[r.author_id]
                for r in results
                if r.author_id in groups[label] and fractions[r.author_id] is not None
            ]
            samples[label] = vals
            mean, se = mean_se(vals)
            t.add(corpus_label, label, len(vals), mean, se)
        for i in range(len(labels)):
            for j in range(i + 1, len(labels)):
                d, p, stars = _ks_or_none(samples[labels[i]], samples[labels[j]])
                tests.add(corpus_label, labels[i], labels[j], d, p, stars)
    return t, tests


# ---------------------------------------------------------------------------
# supplementary tables
# ---------------------------------------------------------------------------

def _figS3(results, cfg, max_topics: int = 6) -> StatTable:
    t = StatTable(
        "figS3",
        ("k_topics", "n_real", "n_surrogate", "D", "p", "stars"),
        description="KS test of per-focal k-topic collaborator fractions, real vs shuffled",
    )
    if not cfg.surrogate:
        return t

    def k_fraction_samples(surr: bool, k: int) -> list[float]:
        out = []
        for r in results:
            summaries = _summaries(r, surr, trunc=False)
            st = collaborator_stats(filter_copub(summaries, cfg.copub_filters[0]))
            if st.n_qualifying > 0:
                out.append(st.distribution.get(k, 0.0))
        return out

    for k in range(1, max_topics + 1):
        real = k_fraction_samples(False, k)
        surr = k_fraction_samples(True, k)
        d, p, stars = _ks_or_none(real, surr)
        t.add(k, len(real), len(surr), d, p, stars)
    return t


def _figS4(results, cfg) -> tuple[StatTable, StatTable]:
    a = StatTable(
        "figS4a",
        ("span_years", "count", "probability"),
        description="distribution of collaboration length on a topic (inclusive years)",
    )
    b = StatTable(
        "figS4b",
        ("n_papers", "count", "probability"),
        description="distribution of coauthored papers on a topic",
    )
    spans: dict[int, int] = {}
    counts: dict[int, int] = {}
    for r in results:
        for span, n_papers in r.spans:
            spans[span] = spans.get(span, 0) + 1
            counts[n_papers] = counts.get(n_papers, 0) + 1
    total_s = sum(spans.values())
    total_c = sum(counts.values())
    for span in sorted(spans):
        a.add(span, spans[span], spans[span] / total_s)
    for k in sorted(counts):
        b.add(k, counts[k], counts[k] / total_c)
    return a, b


def _figS8(results, cfg) -> list[StatTable]:
    k = cfg.top_k_percents[0]
    groups = _group_map(results, cfg, [k])
    labels = ["overall", f"top{k}_productive", f"top{k}_impactful"]

    per_author = {r.author_id: r.init_features for r in results}

    def pooled(label: str) -> list[tuple[str, int, int, float | None]]:
        feats: list[tuple[str, int, int, float | None]] = []
        for a in sorted(groups[label]):
            feats.extend(per_author[a])
        return feats

    a = StatTable(
        "figS8a", ("group", "past_career_years", "count", "probability"),
        description="collaborator career years before first joint paper",
    )
    b = StatTable(
        "figS8b", ("group", "bin_low", "bin_high", "count", "probability"),
        description="collaborator publications before first joint paper",
    )
    c = StatTable(
        "figS8c", ("group", "bin_low", "bin_high", "count", "probability"),
        description="collaborator citations per past paper before first joint paper",
    )
    for label in labels:
        feats = pooled(label)
        years = [f[1] for f in feats]
        hist: dict[int, int] = {}
        for y in years:
            hist[y] = hist.get(y, 0) + 1
        for y in sorted(hist):
            a.add(label, y, hist[y], hist[y] / len(years))

        pubs = [f[2] for f in feats]
        if pubs:
            for low, high in copub_bin_edges(max(pubs), start=0):
                n = sum(1 for v in pubs if low <= v < high)
                b.add(label, low, high, n, n / len(pubs))

        cites = [f[3] for f in feats if f[3] is not None]
        if cites:
            for low, high in float_doubling_bins(max(cites)):
                n = sum(1 for v in cites if low <= v < high)
                c.add(label, low, high, n, n / len(cites))

    def focal_mean(r: FocalResult, idx: int) -> float | None:
        vals = [f[idx] for f in r.init_features if f[idx] is not None]
        return sum(vals) / len(vals) if vals else None

    d = _decile_means(
        "figS8d", results, lambda r: focal_mean(r, 1),
        "mean collaborator past career years across deciles",
    )
    e = _decile_means(
        "figS8e", results, lambda r: focal_mean(r, 2),
        "mean collaborator past publications across deciles",
    )
    f = _decile_means(
        "figS8f", results, lambda r: focal_mean(r, 3),
        "mean collaborator citations per past paper across deciles",
    )
    return [a, b, c, d, e, f]


def _tableS1(results, cfg) -> StatTable:
    t = StatTable(
        "tableS1",
        ("feature", "group_a", "group_b", "D", "p", "stars"),
        description="KS tests of per-focal mean collaborator features between groups",
    )
    k = cfg.top_k_percents[0]
    groups = _group_map(results, cfg, [k])
    labels = ["overall", f"top{k}_productive", f"top{k}_impactful"]

    def focal_means(idx: int) -> dict[str, float | None]:
        out = {}
        for r in results:
            vals = [f[idx] for f in r.init_features if f[idx] is not None]
            out[r.author_id] = sum(vals) / len(vals) if vals else None
        return out

    for feature, idx in (("career_years", 1), ("publications", 2), ("citations", 3)):
        means = focal_means(idx)
        samples = {
            label: [means[a] for a in sorted(groups[label]) if means[a] is not None]
            for label in labels
        }
        for i in range(len(labels)):
            for j in range(i + 1, len(labels)):
                d, p, stars = _ks_or_none(samples[labels[i]], samples[labels[j]])
                t.add(feature, labels[i], labels[j], d, p, stars)
    return t


def _summary(results, cfg) -> StatTable:
    t = StatTable("summary", ("key", "value"), description="headline statistics")
    t.add("n_focal", len(results))
    low, high = cfg.copub_filters
    for variant, surr in _variants(results, cfg):
        for min_copub in (low, high):
            vals = [
                v for v in _fraction_single_map(results, min_copub, surr).values() if v is not None
            ]
            mean, _ = mean_se(vals)
            t.add(f"fraction_single_copub{min_copub}_{variant}", mean)
    events = _all_events(results)
    for mode in ("overall", "recent"):
        _, candidates, prob = join_probability_overall(events, mode)
        t.add(f"join_probability_{mode}", prob)
        t.add(f"join_candidates_{mode}", candidates)
    x = [r.paper_count for r in results]
    y = [r.mean_c10 for r in results]
    try:
        t.add("pearson_productivity_impact", pearson_r(x, y).value)
    except ValueError:
        t.add("pearson_productivity_impact", None)
    topics = [r.n_topics for r in results]
    try:
        t.add("pearson_impact_n_topics", pearson_r(y, topics).value)
    except ValueError:
        t.add("pearson_impact_n_topics", None)
    mean_topics, _ = mean_se([float(k) for k in topics])
    t.add("mean_topics_per_focal", mean_topics)
    ratios = [r.q_ratio for r in results if r.q_ratio is not None]
    mean_ratio, _ = mean_se(ratios)
    t.add("mean_q_ratio", mean_ratio)
    jb = [
        r.similarities.means[("jaccard", "before")]
        for r in results
        if r.similarities.means[("jaccard", "before")] is not None
    ]
    mean_jb, _ = mean_se(jb)
    t.add("mean_jaccard_before", mean_jb)
    return t


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_all_tables(
    all_results: dict[str, list[FocalResult]], cfg: RunConfig
) -> list[StatTable]:
    """Every output table for one run. The first corpus drives all
    single-corpus figures; fig6b/fig6d compare across corpora."""
    primary_label = next(iter(all_results))
    results = all_results[primary_label]
    low, high = cfg.copub_filters
    events = _all_events(results)

    tables = [
        _fig2_distribution("fig2a", results, cfg, low,
                           f"collaborator topic-count distribution (copub >= {low})"),
        _fig2_fraction_hist("fig2b", results, cfg, low,
                            f"per-focal single-topic fraction distribution (copub >= {low})"),
        _fig2_distribution("fig2c", results, cfg, high,
                           f"collaborator topic-count distribution (copub >= {high})"),
        _fig2_fraction_hist("fig2d", results, cfg, high,
                            f"per-focal single-topic fraction distribution (copub >= {high})"),
        _fig2e(results, cfg),
        _fig2f(results, cfg),
        _fig3a(results),
        _fig3b(results, cfg),
        _fig3c(results, cfg),
        _decile_fraction("fig3d", results, cfg, "productivity",
                         "single-topic fraction across productivity deciles"),
        _inset_tau("fig3d_inset", results, cfg, "productivity", "impact",
                   "tau of single-topic fraction vs productivity, fixing impact"),
        _decile_fraction("fig3e", results, cfg, "impact",
                         "single-topic fraction across impact deciles"),
        _inset_tau("fig3e_inset", results, cfg, "impact", "productivity",
                   "tau of single-topic fraction vs impact, fixing productivity"),
        _fig3f(results, cfg),
        _fig4a(results),
        _fig4b(results),
        _decile_means("fig4c", results, lambda r: r.q_ratio,
                      "community significance ratio across deciles"),
        _decile_means("fig4d", results,
                      lambda r: r.similarities.means[("jaccard", "before")],
                      "mean pre-collaboration reference similarity across deciles"),
        _join_table("fig5a", events, "past_copub",
                    "join probability vs past coauthored papers (log bins)"),
        _join_table("fig5a_linear", events, "past_copub",
                    "join probability vs past coauthored papers (unit bins)", scale="linear"),
        _join_table("fig5b", events, "past_mean_c10",
                    "join probability vs mean citations of past coauthored papers"),
        _fig5cd("fig5c", results, cfg, "past_copub",
                "tau of past copublications vs joining, across deciles"),
        _fig5cd("fig5d", results, cfg, "past_mean_c10",
                "tau of past citations vs joining, across deciles"),
        _join_table("fig5e", events, "career_stage",
                    "join probability by focal career stage"),
        _fig5f(results, cfg),
        _fig6a(results, cfg),
        _fig6a_inset(results, cfg),
    ]
    fig6c, fig6c_tests = _fig6c(results, cfg)
    fig6b, fig6b_inset = _fig6b(all_results, cfg)
    fig6d, fig6d_tests = _fig6d(all_results, cfg)
    tables.extend([fig6c, fig6c_tests, fig6b, fig6b_inset, fig6d, fig6d_tests])
    tables.append(_figS3(results, cfg))
    s4a, s4b = _figS4(results, cfg)
    tables.extend([s4a, s4b, _figS7(results)])
    tables.extend(_figS8(results, cfg))
    tables.append(_tableS1(results, cfg))
    tables.append(_summary(results, cfg))
    return tables
