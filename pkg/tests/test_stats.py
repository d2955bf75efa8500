import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from collabtopics.collaborators import CollaboratorSeries
from collabtopics.community import TopicAssignment
from collabtopics.records import Corpus, ScientistProfile
from collabtopics.stats import (
    initial_collaborator_features,
    join_events,
    join_probability,
    join_probability_overall,
    kendall_tau,
    ks_test,
    p_stars,
    pearson_r,
    quantile_groups,
    reference_similarity,
    reference_similarity_all,
    stratify,
    truncate_career,
    wilson_interval,
)

from conftest import make_record


# -- kendall tau --------------------------------------------------------------

def brute_tau(x, y):
    """Literal O(n^2) tau-b: concordant/discordant pair counting."""
    n = len(x)
    concordant = discordant = tied_x = tied_y = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = (x[i] > x[j]) - (x[i] < x[j])
            dy = (y[i] > y[j]) - (y[i] < y[j])
            if dx == 0:
                tied_x += 1
            if dy == 0:
                tied_y += 1
            if dx and dy:
                if dx == dy:
                    concordant += 1
                else:
                    discordant += 1
    n0 = n * (n - 1) // 2
    return (concordant - discordant) / math.sqrt(float(n0 - tied_x) * float(n0 - tied_y))


def test_tau_perfect_concordance():
    assert kendall_tau([1, 2, 3], [1, 2, 3]).value == 1.0
    assert kendall_tau([1, 2, 3], [3, 2, 1]).value == -1.0


def test_tau_all_tied_raises():
    with pytest.raises(ValueError):
        kendall_tau([1, 1, 1], [1, 2, 3])
    with pytest.raises(ValueError):
        kendall_tau([1, 2, 3], [5, 5, 5])
    with pytest.raises(ValueError):
        kendall_tau([1], [1])


def test_tau_matches_bruteforce_with_ties():
    rng = random.Random(42)
    for _ in range(40):
        n = rng.randint(2, 80)
        x = [rng.randint(0, 8) for _ in range(n)]
        y = [rng.choice([0.5, 1.5, 2.5, rng.random()]) for _ in range(n)]
        if len(set(x)) < 2 or len(set(y)) < 2:
            continue
        assert kendall_tau(x, y).value == pytest.approx(brute_tau(x, y), abs=1e-12)


@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), min_size=2, max_size=40))
@settings(max_examples=120)
def test_tau_property_vs_bruteforce(pairs):
    x = [a for a, _ in pairs]
    y = [b for _, b in pairs]
    if len(set(x)) < 2 or len(set(y)) < 2:
        return
    assert kendall_tau(x, y).value == pytest.approx(brute_tau(x, y), abs=1e-12)


# -- pearson ------------------------------------------------------------------

def test_pearson_linear():
    x = [0.0, 1.0, 2.0, 3.5]
    y = [2 * v + 1 for v in x]
    assert pearson_r(x, y).value == pytest.approx(1.0, abs=1e-12)
    assert pearson_r([0, 1], [1, 0]).value == pytest.approx(-1.0, abs=1e-12)


def test_pearson_zero_variance_raises():
    with pytest.raises(ValueError):
        pearson_r([1, 1, 1], [1, 2, 3])


def test_pearson_independent_noise_small():
    rng = random.Random(8)
    x = [rng.random() for _ in range(10_000)]
    y = [rng.random() for _ in range(10_000)]
    assert abs(pearson_r(x, y).value) < 0.05


# -- kolmogorov-smirnov -------------------------------------------------------

def brute_ks_d(a, b):
    points = sorted(set(a) | set(b))
    return max(
        abs(sum(v <= t for v in a) / len(a) - sum(v <= t for v in b) / len(b))
        for t in points
    )


def test_ks_identical_samples():
    d, p = ks_test([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
    assert d == 0.0
    assert p == 1.0


def test_ks_disjoint_supports():
    rng = random.Random(1)
    a = [rng.uniform(0, 1) for _ in range(50)]
    b = [rng.uniform(2, 3) for _ in range(50)]
    d, p = ks_test(a, b)
    assert d == 1.0
    assert p < 1e-10


def test_ks_matches_bruteforce():
    rng = random.Random(3)
    for _ in range(40):
        a = [rng.gauss(0, 1) for _ in range(rng.randint(1, 60))]
        b = [rng.gauss(0.3, 1.2) for _ in range(rng.randint(1, 60))]
        d, _ = ks_test(a, b)
        assert d == pytest.approx(brute_ks_d(a, b), abs=1e-12)


def test_ks_empty_raises():
    with pytest.raises(ValueError):
        ks_test([], [1.0])


def test_p_stars_thresholds():
    assert p_stars(0.0005) == "***"
    assert p_stars(0.005) == "**"
    assert p_stars(0.05) == "*"
    assert p_stars(0.1) == "*"
    assert p_stars(0.2) == ""


def test_wilson_interval_brackets_estimate():
    for k, n in ((0, 10), (3, 10), (10, 10), (1, 4)):
        lo, hi = wilson_interval(k, n)
        assert 0.0 <= lo <= k / n <= hi <= 1.0
    assert wilson_interval(0, 0) == (None, None)


# -- reference similarity -----------------------------------------------------

def _pair_corpus():
    return Corpus.from_records(
        [
            make_record("f1", 1990, ["f"], ["r1", "r2", "r3"]),
            make_record("c1", 1991, ["c"], ["r2", "r3", "r4"]),
            make_record("joint", 1995, ["f", "c"], ["r9"]),
        ]
    )


def test_similarity_worked_triple():
    corpus = _pair_corpus()
    assert reference_similarity(corpus, "f", "c", "jaccard", "overall") == pytest.approx(0.5)
    assert reference_similarity(corpus, "f", "c", "cosine", "overall") == pytest.approx(2 / 3)
    assert reference_similarity(corpus, "f", "c", "lhn", "overall") == pytest.approx(2 / 9)


def test_similarity_identical_and_disjoint_sets():
    corpus = Corpus.from_records(
        [
            make_record("f1", 1990, ["f"], ["r1", "r2"]),
            make_record("c1", 1991, ["c"], ["r1", "r2"]),
            make_record("d1", 1991, ["d"], ["x1", "x2"]),
        ]
    )
    assert reference_similarity(corpus, "f", "c", "jaccard") == 1.0
    assert reference_similarity(corpus, "f", "c", "cosine") == 1.0
    assert reference_similarity(corpus, "f", "c", "lhn") == 0.5  # 2 / (2*2)
    for metric in ("jaccard", "cosine", "lhn"):
        assert reference_similarity(corpus, "f", "d", metric) == 0.0


def test_similarity_empty_side_is_null():
    corpus = Corpus.from_records(
        [
            make_record("f1", 1990, ["f"], ["r1"]),
            make_record("c1", 1991, ["c"], []),
        ]
    )
    assert reference_similarity(corpus, "f", "c", "jaccard") is None


def test_similarity_before_variant_uses_precollaboration_papers():
    corpus = Corpus.from_records(
        [
            make_record("f1", 1990, ["f"], ["r1", "r2"]),
            make_record("f2", 1996, ["f"], ["z1"]),  # after the first joint paper
            make_record("c1", 1991, ["c"], ["r2", "r3"]),
            make_record("joint", 1995, ["f", "c"], ["r1", "r2", "r3"]),
        ]
    )
    before = reference_similarity(corpus, "f", "c", "jaccard", "before")
    assert before == pytest.approx(1 / 3)  # {r1,r2} vs {r2,r3}
    overall = reference_similarity(corpus, "f", "c", "jaccard", "overall")
    assert overall == pytest.approx(1 / 4)  # {r1,r2,z1} vs {r2,r3}


def test_similarity_before_requires_collaboration():
    corpus = Corpus.from_records(
        [make_record("f1", 1990, ["f"], ["r"]), make_record("c1", 1991, ["c"], ["r"])]
    )
    with pytest.raises(ValueError):
        reference_similarity(corpus, "f", "c", "jaccard", "before")


@given(
    st.sets(st.integers(0, 30), min_size=1, max_size=15),
    st.sets(st.integers(0, 30), min_size=1, max_size=15),
)
def test_jaccard_never_exceeds_cosine(ga, gb):
    corpus = Corpus.from_records(
        [
            make_record("f1", 1990, ["f"], [f"r{v}" for v in ga]),
            make_record("c1", 1991, ["c"], [f"r{v}" for v in gb]),
        ]
    )
    out = reference_similarity_all(corpus, "f", "c")
    assert out[("jaccard", "overall")] <= out[("cosine", "overall")] + 1e-15


# -- join events --------------------------------------------------------------

def _collab(name, papers):
    topics = tuple(sorted({t for _, _, t in papers if t is not None}))
    return CollaboratorSeries(
        focal="f", collaborator=name, papers=tuple(papers),
        n_copub=len(papers), first_year=papers[0][1], last_year=papers[-1][1],
        involved_topics=topics, n_topics_involved=len(topics),
    )


def _assignment(first_years):
    return TopicAssignment(
        owner="f", papers=(), topic_of={},
        major_topics=tuple(range(len(first_years))),
        topic_first_year=dict(enumerate(first_years)),
        n_topics=len(first_years),
    )


def test_join_event_hand_case():
    ta = _assignment([1990, 1995])
    series = [("x1", 1990, 0, 1), ("x2", 1992, 0, 2), ("x3", 1995, 1, 3), ("x4", 1996, 1, 0)]
    collabs = [
        _collab("a", [("x2", 1992, 0), ("x4", 1996, 1)]),  # existing, joins T1
        _collab("b", [("x3", 1995, 1)]),  # first paper inside T1: not existing
    ]
    events = join_events(series, ta, collabs)
    assert len(events) == 1
    ev = events[0]
    assert ev.topic_id == 1 and ev.topic_start_year == 1995
    assert ev.existing_collaborators == ("a",)
    assert ev.joiners == ("a",)
    assert ev.career_stage == 5


def test_join_event_recent_window():
    ta = _assignment([1990, 2000])
    series = [("x1", 1990, 0, 0), ("x2", 1999, 0, 0), ("x3", 2000, 1, 0)]
    collabs = [
        _collab("recent", [("x2", 1999, 0)]),
        _collab("stale", [("x1", 1990, 0)]),
    ]
    ev = join_events(series, ta, collabs)[0]
    assert ev.recent_collaborators == ("recent",)
    assert set(ev.recent_collaborators) <= set(ev.existing_collaborators)


def test_join_events_need_two_topics():
    ta = _assignment([1990])
    assert join_events([("x", 1990, 0, 0)], ta, []) == []


def test_join_probability_hand_quarter():
    ta = _assignment([1990, 1995])
    series = [("x0", 1990, 0, 0), ("x9", 1995, 1, 0)]
    collabs = [_collab(c, [("x0", 1991, 0)]) for c in "abcd"]
    joiner = _collab("a", [("x0", 1991, 0), ("x9", 1995, 1)])
    events = join_events(series, ta, [joiner] + collabs[1:])
    joiners, candidates, p = join_probability_overall(events)
    assert (joiners, candidates, p) == (1, 4, 0.25)


def test_join_probability_binned_pools_back_exactly(demo_corpus):
    from collabtopics.pipeline import RunConfig, analyze_corpus

    results = analyze_corpus(demo_corpus, RunConfig(seed=7, min_papers=50))
    events = [ev for r in results for ev in r.events]
    assert events
    for mode in ("overall", "recent"):
        joiners, candidates, _ = join_probability_overall(events, mode)
        for binning, scale in (("past_copub", "log"), ("past_copub", "linear"),
                               ("past_mean_c10", "log"), ("career_stage", "log")):
            rows = join_probability(events, mode, binning, scale=scale)
            total_n = sum(n for *_, n in rows)
            total_joiners = sum(round(p * n) for _, _, _, p, _, _, n in rows if p is not None)
            assert total_n == candidates
            assert total_joiners == joiners
        # every candidate's probability row respects Wilson bracketing
        for _, _, _, p, lo, hi, n in join_probability(events, mode):
            if p is not None:
                assert lo <= p <= hi


def test_join_probability_all_join():
    ta = _assignment([1990, 1995])
    series = [("x0", 1990, 0, 0)]
    collabs = [_collab(c, [("x0", 1991, 0), ("x9", 1996, 1)]) for c in "ab"]
    events = join_events(series, ta, collabs)
    rows = join_probability(events, "overall", "past_copub")
    assert all(p == 1.0 for _, _, _, p, _, _, n in rows if n)


# -- initial collaborator features ---------------------------------------------

def test_initial_features_newcomer_and_veteran():
    corpus = Corpus.from_records(
        [
            make_record("q1", 1985, ["v"], [], c10=0),
            make_record("q2", 1987, ["v"], [], c10=5),
            make_record("q3", 1989, ["v"], [], c10=10),
            make_record("j1", 1990, ["f", "v", "n"], [], c10=3),
        ]
    )
    collabs = [
        _collab("n", [("j1", 1990, 0)]),
        _collab("v", [("j1", 1990, 0)]),
    ]
    feats = {c: (yrs, pubs, cites) for c, yrs, pubs, cites in
             initial_collaborator_features(corpus, "f", collabs)}
    assert feats["n"] == (0, 0, None)
    assert feats["v"] == (5, 3, 5.0)


# -- stratification -----------------------------------------------------------

def _profiles(counts):
    return [
        ScientistProfile(f"s{i:03d}", c, float(i % 7), 1950 + i % 40, 10)
        for i, c in enumerate(counts)
    ]


def test_top_one_percent_of_hundred():
    profiles = _profiles(list(range(100)))
    groups = stratify(profiles, "productivity", "top", k=1)
    assert groups["top"] == ["s099"]
    assert len(groups["rest"]) == 99


def test_top_ties_broken_by_author_id():
    profiles = _profiles([5, 5, 5, 1])
    groups = stratify(profiles, "productivity", "top", k=20)
    assert groups["top"] == ["s000"]


def test_deciles_partition():
    profiles = _profiles(list(range(50)))
    groups = stratify(profiles, "productivity", "deciles")
    assert sum(len(v) for v in groups.values()) == 50
    assert all(len(v) == 5 for v in groups.values())
    assert quantile_groups([(p.author_id, p.paper_count) for p in profiles], 4)["q3"] == [
        f"s{i:03d}" for i in range(38, 50)
    ]


def test_year_bins_partition():
    profiles = _profiles(list(range(30)))
    groups = stratify(profiles, "career_start", "year_bins", bin_width=10)
    assert sum(len(v) for v in groups.values()) == 30
    for label, members in groups.items():
        low = int(label.split("-")[0])
        for a in members:
            start = next(p.career_start_year for p in profiles if p.author_id == a)
            assert low <= start < low + 10


def test_invalid_key_and_scheme():
    profiles = _profiles([1, 2])
    with pytest.raises(ValueError):
        stratify(profiles, "fame", "deciles")
    with pytest.raises(ValueError):
        stratify(profiles, "impact", "quintiles")
    with pytest.raises(ValueError):
        stratify(profiles, "n_topics", "deciles")  # needs values mapping


def test_truncate_career_matches_bruteforce():
    rng = random.Random(12)
    records = [
        make_record(f"p{i}", 1960 + rng.randint(0, 50), ["a"]) for i in range(60)
    ]
    corpus = Corpus.from_records(records)
    got = truncate_career(corpus, "a", 30)
    start = min(r.year for r in records)
    expected = sorted(
        (r.paper_id for r in records if r.year - start < 30),
        key=lambda pid: corpus.papers[pid].sort_key(),
    )
    assert got == expected
