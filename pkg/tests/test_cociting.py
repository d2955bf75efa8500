import itertools
import random

from collabtopics.cociting import build_cociting, write_edge_list
from collabtopics.records import Corpus

from conftest import make_record


def brute_force_edges(corpus, author):
    """Literal pairwise reference-intersection over all paper pairs."""
    pids = corpus.papers_of(author)
    edges = {}
    for i, j in itertools.combinations(range(len(pids)), 2):
        shared = corpus.papers[pids[i]].reference_ids & corpus.papers[pids[j]].reference_ids
        if shared:
            edges[(i, j)] = len(shared)
    return edges


def test_hand_case_shared_reference():
    corpus = Corpus.from_records(
        [
            make_record("A", 1990, ["s"], ["r1", "r2"]),
            make_record("B", 1991, ["s"], ["r2", "r3"]),
            make_record("C", 1992, ["s"], ["r4"]),
        ]
    )
    net = build_cociting(corpus, "s")
    assert net.nodes == ("A", "B", "C")
    assert net.edges == {(0, 1): 1}
    assert net.years == (1990, 1991, 1992)
    assert net.ref_counts == (2, 2, 1)


def test_all_share_one_reference_complete_graph():
    corpus = Corpus.from_records(
        [make_record(f"p{i}", 1990 + i, ["s"], ["r", f"x{i}"]) for i in range(5)]
    )
    net = build_cociting(corpus, "s")
    assert len(net.edges) == 10
    assert all(w == 1 for w in net.edges.values())


def test_empty_reference_paper_is_isolated():
    corpus = Corpus.from_records(
        [
            make_record("A", 1990, ["s"], ["r"]),
            make_record("B", 1991, ["s"], ["r"]),
            make_record("C", 1992, ["s"], []),
        ]
    )
    net = build_cociting(corpus, "s")
    assert net.edges == {(0, 1): 1}
    assert net.ref_counts[2] == 0


def test_matches_bruteforce_on_random_scientists():
    rng = random.Random(5)
    for trial in range(20):
        n = rng.randint(2, 40)
        records = [
            make_record(
                f"p{i}",
                rng.randint(1980, 2000),
                ["s"],
                rng.sample([f"r{k}" for k in range(30)], rng.randint(0, 6)),
            )
            for i in range(n)
        ]
        corpus = Corpus.from_records(records)
        net = build_cociting(corpus, "s")
        assert net.edges == brute_force_edges(corpus, "s")
        assert all(isinstance(w, int) and w >= 1 for w in net.edges.values())


def test_matches_bruteforce_200_papers():
    rng = random.Random(6)
    records = [
        make_record(
            f"p{i:03d}", rng.randint(1970, 2005), ["s"],
            rng.sample([f"r{k}" for k in range(400)], 8),
        )
        for i in range(200)
    ]
    corpus = Corpus.from_records(records)
    net = build_cociting(corpus, "s")
    assert net.edges == brute_force_edges(corpus, "s")


def test_planted_pools_have_no_cross_edges(clean_corpus_truth):
    corpus, truth = clean_corpus_truth
    focal = sorted(truth.collaborator_topics)[0]
    net = build_cociting(corpus, focal)
    topic_of = truth.paper_topic
    cross = within = 0
    for (i, j) in net.edges:
        if topic_of[net.nodes[i]] == topic_of[net.nodes[j]]:
            within += 1
        else:
            cross += 1
    assert cross == 0
    assert within > 100  # pools of 18 papers sharing 8-of-30 refs are dense


def test_paper_ids_restriction(tiny_corpus):
    net = build_cociting(tiny_corpus, "f", paper_ids=["p1", "p2"])
    assert net.nodes == ("p1", "p2")
    assert net.edges == {(0, 1): 1}


def test_edge_list_export(tmp_path):
    corpus = Corpus.from_records(
        [
            make_record("A", 1990, ["s"], ["r1", "r2"]),
            make_record("B", 1991, ["s"], ["r1", "r2", "r3"]),
        ]
    )
    net = build_cociting(corpus, "s")
    path = tmp_path / "edges.csv"
    write_edge_list(net, path)
    assert path.read_text() == "paper_u,paper_v,weight\nA,B,2\n"
