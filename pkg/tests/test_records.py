import io
import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from collabtopics.records import (
    Corpus,
    DuplicatePaperError,
    UnknownAuthorError,
    ValidationConfig,
    c10_from_events,
    load_corpus,
    profile,
    save_corpus,
    select_focal,
)
from collabtopics.synth import generate, preset

from conftest import make_record


def _jsonl(records):
    return io.StringIO("\n".join(json.dumps(r) for r in records) + "\n")


def test_load_three_records_two_authors():
    corpus = load_corpus(
        _jsonl(
            [
                {"paper_id": "p1", "year": 1990, "author_ids": ["a"], "reference_ids": [], "c10": 1},
                {"paper_id": "p2", "year": 1991, "author_ids": ["a", "b"], "reference_ids": ["r"], "c10": 0},
                {"paper_id": "p3", "year": 1992, "author_ids": ["b"], "reference_ids": [], "c10": 2},
            ]
        )
    )
    assert corpus.n_papers == 3
    assert sorted(corpus.author_index) == ["a", "b"]
    assert corpus.author_index["a"] == ["p1", "p2"]


def test_rejects_empty_author_list():
    corpus = load_corpus(
        _jsonl(
            [
                {"paper_id": "p1", "year": 1990, "author_ids": [], "reference_ids": [], "c10": 0},
                {"paper_id": "p2", "year": 1990, "author_ids": ["a"], "reference_ids": [], "c10": 0},
            ]
        )
    )
    assert corpus.n_papers == 1
    assert len(corpus.diagnostics) == 1
    assert corpus.diagnostics[0].fld == "author_ids"
    assert corpus.diagnostics[0].line == 1


@pytest.mark.parametrize(
    "record,bad_field",
    [
        ({"paper_id": "p", "year": 1700, "author_ids": ["a"], "c10": 0}, "year"),
        ({"paper_id": "p", "year": 1990, "author_ids": ["a", "a"], "c10": 0}, "author_ids"),
        ({"paper_id": "p", "year": 1990, "author_ids": ["a"], "c10": -1}, "c10"),
        ({"paper_id": "p", "year": 1990, "author_ids": ["a"]}, "c10"),
        ({"year": 1990, "author_ids": ["a"], "c10": 0}, "paper_id"),
    ],
)
def test_rejection_diagnostics(record, bad_field):
    corpus = load_corpus(_jsonl([record]))
    assert corpus.n_papers == 0
    assert corpus.diagnostics[0].fld == bad_field


def test_malformed_json_line_reports_line_number():
    corpus = load_corpus(io.StringIO('{"paper_id": "p1"\nnot json\n'))
    assert {d.line for d in corpus.diagnostics} == {1, 2}


def test_duplicate_paper_id_is_an_error():
    rec = {"paper_id": "p", "year": 1990, "author_ids": ["a"], "c10": 0}
    with pytest.raises(DuplicatePaperError):
        load_corpus(_jsonl([rec, rec]))


def test_strict_mode_raises_on_first_reject():
    with pytest.raises(Exception):
        load_corpus(
            _jsonl([{"paper_id": "p", "year": 1990, "author_ids": [], "c10": 0}]),
            ValidationConfig(strict=True),
        )


def test_c10_from_citation_events():
    # ten calendar labels: pub year through pub year + 9
    events = [("x", 1990), ("y", 1999), ("z", 2000), ("w", 1989)]
    assert c10_from_events(1990, events) == 2
    corpus = load_corpus(
        _jsonl(
            [
                {
                    "paper_id": "p",
                    "year": 1990,
                    "author_ids": ["a"],
                    "reference_ids": [],
                    "citations": [["x", 1991], ["y", 2005]],
                }
            ]
        )
    )
    assert corpus.papers["p"].c10 == 1


def test_csv_adapter():
    text = io.StringIO(
        "paper_id,year,author_ids,reference_ids,c10\n"
        "p1,1990,a;b,r1;r2,3\n"
        "p2,1991,b,,0\n"
    )
    corpus = load_corpus(text, fmt="csv")
    assert corpus.papers["p1"].author_ids == ("a", "b")
    assert corpus.papers["p1"].reference_ids == frozenset({"r1", "r2"})
    assert corpus.author_index["b"] == ["p1", "p2"]


def test_10k_synthetic_roundtrip(tmp_path):
    corpus, _ = generate(preset("bench10k", seed=42))
    path = tmp_path / "corpus.jsonl"
    save_corpus(corpus, path)
    reloaded = load_corpus(path)
    assert not reloaded.diagnostics
    assert reloaded.papers == corpus.papers
    assert reloaded.author_index == corpus.author_index


def test_select_focal_threshold():
    records = []
    for author, count in (("a", 60), ("b", 49), ("c", 50)):
        records.extend(
            make_record(f"{author}{i}", 1990 + i % 5, [author]) for i in range(count)
        )
    corpus = Corpus.from_records(records)
    assert select_focal(corpus, 50) == ["a", "c"]
    assert select_focal(corpus, 1) == ["a", "b", "c"]
    with pytest.raises(ValueError):
        select_focal(corpus, 0)


def test_profile_fields(tiny_corpus):
    prof = profile(tiny_corpus, "f")
    assert prof.paper_count == 3
    assert prof.mean_c10 == 10
    assert prof.career_start_year == 1990
    assert prof.career_years == 2


def test_profile_degenerate_single_paper():
    corpus = Corpus.from_records([make_record("p", 1990, ["a"])])
    prof = profile(corpus, "a")
    assert prof.career_start_year == 1990
    assert prof.career_years == 0


def test_profile_matches_bruteforce_scan():
    rng = random.Random(99)
    records = [
        make_record(f"p{i}", rng.choice(range(1980, 1996)), ["a"], c10=rng.randrange(40))
        for i in range(12)
    ]
    # pin the career endpoints
    records[0] = make_record("p0", 1980, ["a"], c10=records[0].c10)
    records[1] = make_record("p1", 1995, ["a"], c10=records[1].c10)
    corpus = Corpus.from_records(records)
    prof = profile(corpus, "a")
    years = [r.year for r in records]
    assert prof.career_years == max(years) - min(years) == 15
    assert prof.mean_c10 == sum(r.c10 for r in records) / 12


def test_unknown_author_raises(tiny_corpus):
    with pytest.raises(UnknownAuthorError):
        profile(tiny_corpus, "nobody")


def test_profile_mean_matches_naive_for_many_authors():
    rng = random.Random(7)
    records = []
    for i in range(3000):
        authors = sorted({f"a{rng.randrange(1000)}" for _ in range(rng.randint(1, 4))})
        records.append(
            make_record(f"p{i}", rng.randrange(1950, 2010), authors, c10=rng.randrange(100))
        )
    corpus = Corpus.from_records(records)
    assert corpus.n_authors >= 1000
    for author, pids in corpus.author_index.items():
        naive = sum(corpus.papers[p].c10 for p in pids) / len(pids)
        assert profile(corpus, author).mean_c10 == pytest.approx(naive, abs=1e-12)


# -- properties ---------------------------------------------------------------

corpus_strategy = st.lists(
    st.tuples(
        st.integers(min_value=1950, max_value=2020),
        st.lists(st.sampled_from("abcdefgh"), min_size=1, max_size=4, unique=True),
    ),
    min_size=1,
    max_size=25,
).map(
    lambda items: Corpus.from_records(
        [make_record(f"p{i}", year, authors) for i, (year, authors) in enumerate(items)]
    )
)


@given(corpus_strategy)
def test_author_index_is_inverse_of_author_lists(corpus):
    for author, pids in corpus.author_index.items():
        for pid in pids:
            assert author in corpus.papers[pid].author_ids
        assert pids == sorted(pids, key=lambda p: corpus.papers[p].sort_key())
    for pid, rec in corpus.papers.items():
        for author in rec.author_ids:
            assert pid in corpus.author_index[author]


@given(corpus_strategy, st.integers(min_value=1, max_value=10), st.integers(min_value=0, max_value=10))
@settings(max_examples=60)
def test_select_focal_monotone(corpus, low, delta):
    assert set(select_focal(corpus, low + delta)) <= set(select_focal(corpus, low))
