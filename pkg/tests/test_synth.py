import pytest

from collabtopics.collaborators import collaborator_stats, filter_copub
from collabtopics.pipeline import RunConfig, analyze_corpus
from collabtopics.records import corpus_to_jsonl
from collabtopics.synth import SynthSpec, generate, preset
from collabtopics.tables import mean_se


def test_same_seed_byte_identical():
    spec = preset("demo", seed=5)
    a, _ = generate(spec)
    b, _ = generate(spec)
    assert corpus_to_jsonl(a) == corpus_to_jsonl(b)


def test_different_seeds_differ():
    a, _ = generate(preset("demo", seed=5))
    b, _ = generate(preset("demo", seed=6))
    assert corpus_to_jsonl(a) != corpus_to_jsonl(b)


def test_invalid_spec_rejected():
    with pytest.raises(ValueError):
        generate(SynthSpec(pool_size=4, refs_per_paper=8))
    with pytest.raises(ValueError):
        generate(SynthSpec(multi_topic_fraction=1.5))
    with pytest.raises(ValueError):
        generate(SynthSpec(year_start=2000, year_end=2001, topics_per_focal=5, topic_stagger=3))


def test_focal_paper_counts_match_spec(demo_corpus_truth):
    corpus, truth = demo_corpus_truth
    spec = truth.spec
    for focal in truth.collaborator_topics:
        topical = [p for p in corpus.papers_of(focal)]
        assert len(topical) == spec.topics_per_focal * spec.papers_per_topic


def test_collaborators_get_two_papers_per_planted_topic(demo_corpus_truth):
    corpus, truth = demo_corpus_truth
    for focal, collabs in truth.collaborator_topics.items():
        for collab, topics in collabs.items():
            per_topic = {k: 0 for k in topics}
            for pid in corpus.papers_of(collab):
                if pid in truth.paper_topic and truth.paper_focal[pid] == focal:
                    per_topic[truth.paper_topic[pid]] += 1
            assert all(v >= 2 for v in per_topic.values())


def _measured_fraction_single(results, min_copub, surrogate=False):
    values = []
    for r in results:
        summaries = r.collabs_surr if surrogate else r.collabs_real
        st = collaborator_stats(filter_copub(summaries, min_copub), min_copub)
        if st.fraction_single_topic is not None:
            values.append(st.fraction_single_topic)
    return mean_se(values)[0]


def test_k1_plants_only_single_topic_collaborators():
    # pool 12 / refs 8 forces every paper pair to share references, so the
    # one planted pool is a complete graph and can never split
    corpus, _ = generate(SynthSpec(n_focal=3, topics_per_focal=1, seed=9,
                                   papers_per_topic=55, pool_size=12,
                                   multi_topic_fraction=0.0))
    results = analyze_corpus(corpus, RunConfig(seed=9, min_papers=50))
    assert all(r.n_topics == 1 for r in results)
    assert _measured_fraction_single(results, 2) == 1.0


def test_zero_multi_fraction_yields_high_single_fraction(clean_corpus_truth):
    corpus, _ = clean_corpus_truth
    results = analyze_corpus(corpus, RunConfig(seed=31, min_papers=50))
    assert _measured_fraction_single(results, 2) >= 0.95


def test_measured_fraction_close_to_planted(demo_corpus_truth):
    corpus, truth = demo_corpus_truth
    results = analyze_corpus(corpus, RunConfig(seed=7, min_papers=50))
    measured = _measured_fraction_single(results, 2)
    planted_single = [
        1.0 if len(topics) == 1 else 0.0
        for collabs in truth.collaborator_topics.values()
        for topics in collabs.values()
    ]
    planted = sum(planted_single) / len(planted_single)
    assert measured == pytest.approx(planted, abs=0.05)


def test_reshuffle_strictly_decreases_single_fraction(clean_corpus_truth):
    corpus, _ = clean_corpus_truth
    results = analyze_corpus(corpus, RunConfig(seed=31, min_papers=50, surrogate=True))
    real = _measured_fraction_single(results, 2)
    shuffled = _measured_fraction_single(results, 2, surrogate=True)
    assert shuffled < real
