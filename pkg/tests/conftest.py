import pytest

from collabtopics.records import Corpus, PaperRecord
from collabtopics.synth import SynthSpec, generate, preset


def make_record(pid, year, authors, refs=(), c10=0):
    return PaperRecord(
        paper_id=pid,
        year=year,
        author_ids=tuple(authors),
        reference_ids=frozenset(refs),
        c10=c10,
    )


@pytest.fixture(scope="session")
def demo_corpus_truth():
    return generate(preset("demo", seed=7))


@pytest.fixture(scope="session")
def demo_corpus(demo_corpus_truth):
    return demo_corpus_truth[0]


@pytest.fixture(scope="session")
def clean_corpus_truth():
    """Planted corpus with no multi-topic collaborators and year overlap."""
    spec = SynthSpec(
        n_focal=4,
        topics_per_focal=3,
        multi_topic_fraction=0.0,
        seed=31,
    )
    return generate(spec)


@pytest.fixture
def tiny_corpus():
    """Three papers, two authors, known structure."""
    return Corpus.from_records(
        [
            make_record("p1", 1990, ["f", "a"], ["r1", "r2"], c10=0),
            make_record("p2", 1991, ["f", "a"], ["r2", "r3"], c10=10),
            make_record("p3", 1992, ["f"], ["r4"], c10=20),
        ]
    )
