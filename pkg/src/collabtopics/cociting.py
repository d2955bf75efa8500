"""Per-scientist co-citing networks.

Nodes are one author's papers in chronological order; two papers are
linked iff they share at least one reference, with the edge weight
equal to the size of the reference intersection. Construction goes
through a reference -> papers inverted index, so the cost scales with
the number of shared-reference pairs rather than all paper pairs.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from .records import Corpus

__all__ = ["CoCitingNetwork", "build_cociting", "write_edge_list"]


@dataclass(frozen=True)
class CoCitingNetwork:
    """Undirected weighted graph over one scientist's papers.

    ``nodes[i]`` is the i-th paper chronologically; ``edges`` maps an
    index pair (i, j) with i < j to the shared-reference count.
    Isolated papers stay in ``nodes`` as singletons. ``years`` and
    ``ref_counts`` mirror ``nodes`` so topic assignment does not need
    the corpus again.
    """

    owner: str
    nodes: tuple[str, ...]
    years: tuple[int, ...]
    ref_counts: tuple[int, ...]
    edges: dict[tuple[int, int], int]

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.nodes]
        for (i, j) in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj


def build_cociting(
    corpus: Corpus, author_id: str, paper_ids: list[str] | None = None
) -> CoCitingNetwork:
    """Co-citing network of ``author_id``.

    ``paper_ids`` restricts the network to a subset of the author's
    papers (used for career-window truncation); by default all papers
    are included. Papers with empty reference lists become isolated
    nodes.
    """
    if paper_ids is None:
        paper_ids = corpus.papers_of(author_id)
    nodes = tuple(paper_ids)
    by_ref: dict[str, list[int]] = {}
    for i, pid in enumerate(nodes):
        for ref in sorted(corpus.papers[pid].reference_ids):
            by_ref.setdefault(ref, []).append(i)
    edges: dict[tuple[int, int], int] = {}
    for members in by_ref.values():
        if len(members) < 2:
            continue
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                key = (members[a], members[b])
                edges[key] = edges.get(key, 0) + 1
    return CoCitingNetwork(
        owner=author_id,
        nodes=nodes,
        years=tuple(corpus.papers[p].year for p in nodes),
        ref_counts=tuple(len(corpus.papers[p].reference_ids) for p in nodes),
        edges=edges,
    )


def write_edge_list(net: CoCitingNetwork, path: str | Path) -> None:
    """CSV export: paper_u,paper_v,weight per edge, sorted by node index."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["paper_u", "paper_v", "weight"])
        for (i, j) in sorted(net.edges):
            writer.writerow([net.nodes[i], net.nodes[j], net.edges[(i, j)]])
