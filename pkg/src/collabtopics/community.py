"""Community detection on co-citing networks and topic assignment.

Communities are found by greedy multi-level modularity maximization
(local single-node moves followed by graph aggregation, repeated until
no level improves), with a final single-node refinement pass at the
original-node level so that the returned partition admits no
Q-improving single-node relocation. Node visit order is shuffled by a
seeded RNG and ties between candidate moves go to the lowest community
id, so results are a pure function of (graph, seed).

Communities holding more than a configurable fraction of the papers
(default 5%, strict) become the scientist's major topics, numbered by
the year of their earliest paper.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass
from pathlib import Path

from .cociting import CoCitingNetwork
from .records import Corpus

__all__ = [
    "ModularityContext",
    "TopicAssignment",
    "EdgelessNetworkError",
    "modularity",
    "louvain_partition",
    "detect_communities",
    "assign_topics",
    "colored_series",
    "empty_assignment",
    "write_topic_csv",
    "read_topic_csv",
]

# Minimum score improvement to accept a local move. Scores are m * dQ;
# genuine gains on integer-weighted graphs are >= 1/(2m), far above this.
_EPS = 1e-12


class EdgelessNetworkError(ValueError):
    """Community detection requires at least one edge."""


@dataclass
class ModularityContext:
    """A partitioned graph in the form the modularity function needs.

    ``adjacency[u]`` maps neighbor -> edge weight (symmetric, no self
    loops), ``degrees[u]`` is the weighted degree, ``m`` the total edge
    weight and ``assignment[u]`` the community id of node u (contiguous
    0..K-1).
    """

    n: int
    adjacency: list[dict[int, float]]
    degrees: list[float]
    m: float
    assignment: list[int]

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: list[tuple[int, int, float]],
        assignment: list[int] | None = None,
    ) -> "ModularityContext":
        adjacency: list[dict[int, float]] = [dict() for _ in range(n)]
        m = 0.0
        for u, v, w in edges:
            if u == v:
                raise ValueError("self-loops are not allowed")
            adjacency[u][v] = adjacency[u].get(v, 0.0) + w
            adjacency[v][u] = adjacency[v].get(u, 0.0) + w
            m += w
        degrees = [sum(nbrs.values()) for nbrs in adjacency]
        if assignment is None:
            assignment = list(range(n))
        return cls(n=n, adjacency=adjacency, degrees=degrees, m=m, assignment=list(assignment))

    def relabeled(self) -> "ModularityContext":
        """Copy with community ids compacted to 0..K-1 by first appearance."""
        mapping: dict[int, int] = {}
        new = []
        for c in self.assignment:
            if c not in mapping:
                mapping[c] = len(mapping)
            new.append(mapping[c])
        return ModularityContext(self.n, self.adjacency, self.degrees, self.m, new)


def modularity(ctx: ModularityContext) -> float:
    """Newman modularity Q of the partition in ``ctx``.

    Computed per community as sum_c [in_c/(2m) - (tot_c/(2m))^2], which
    equals the double sum over node pairs of (A_ij - k_i k_j / 2m) for
    same-community pairs, divided by 2m.
    """
    if ctx.m <= 0:
        raise ValueError("modularity undefined on an empty graph (m = 0)")
    two_m = 2.0 * ctx.m
    n_comm = max(ctx.assignment) + 1 if ctx.assignment else 0
    internal = [0.0] * n_comm
    total_deg = [0.0] * n_comm
    for u in range(ctx.n):
        cu = ctx.assignment[u]
        total_deg[cu] += ctx.degrees[u]
        for v, w in ctx.adjacency[u].items():
            if ctx.assignment[v] == cu:
                internal[cu] += w  # each internal edge counted from both ends
    q = 0.0
    for c in range(n_comm):
        q += internal[c] / two_m - (total_deg[c] / two_m) ** 2
    return q


def _local_moves(
    adjacency: list[dict[int, float]],
    degrees: list[float],
    two_m: float,
    labels: list[int],
    order: list[int],
) -> int:
    """Greedy single-node moves until a full pass makes none. Returns move count."""
    comm_tot: dict[int, float] = {}
    for u, c in enumerate(labels):
        comm_tot[c] = comm_tot.get(c, 0.0) + degrees[u]
    total_moves = 0
    while True:
        moves = 0
        for u in order:
            cu = labels[u]
            w_to: dict[int, float] = {}
            for v, w in adjacency[u].items():
                cv = labels[v]
                w_to[cv] = w_to.get(cv, 0.0) + w
            comm_tot[cu] -= degrees[u]
            # score(c) = m * dQ of inserting u into c after removal
            best_c = cu
            best_score = w_to.get(cu, 0.0) - comm_tot[cu] * degrees[u] / two_m
            for c in sorted(w_to):
                if c == cu:
                    continue
                score = w_to[c] - comm_tot.get(c, 0.0) * degrees[u] / two_m
                if score > best_score + _EPS:
                    best_c = c
                    best_score = score
            comm_tot[best_c] = comm_tot.get(best_c, 0.0) + degrees[u]
            if best_c != cu:
                labels[u] = best_c
                moves += 1
        total_moves += moves
        if moves == 0:
            return total_moves


def louvain_partition(
    n: int, edges: list[tuple[int, int, float]], seed: int
) -> list[int]:
    """Multi-level greedy modularity maximization over ``n`` nodes.

    ``edges`` lists each undirected edge once as (u, v, weight). The
    returned labels are contiguous community ids; no single-node move
    to a neighboring community can increase Q, and Q is at least the
    all-singletons value.
    """
    if not edges:
        raise EdgelessNetworkError("cannot detect communities without edges")
    rng = random.Random(seed)

    base_adj: list[dict[int, float]] = [dict() for _ in range(n)]
    for u, v, w in edges:
        if u == v:
            raise ValueError("self-loops are not allowed")
        base_adj[u][v] = base_adj[u].get(v, 0.0) + w
        base_adj[v][u] = base_adj[v].get(u, 0.0) + w
    base_degrees = [sum(nbrs.values()) for nbrs in base_adj]
    two_m = sum(base_degrees)

    node_comm = list(range(n))  # original node -> current top-level node

    adj = base_adj
    self_w = [0.0] * n
    level_n = n
    while True:
        degrees = [sum(adj[u].values()) + 2.0 * self_w[u] for u in range(level_n)]
        order = list(range(level_n))
        rng.shuffle(order)
        labels = list(range(level_n))
        moves = _local_moves(adj, degrees, two_m, labels, order)

        # compact labels by first appearance
        mapping: dict[int, int] = {}
        for u in range(level_n):
            c = labels[u]
            if c not in mapping:
                mapping[c] = len(mapping)
            labels[u] = mapping[c]
        k = len(mapping)
        node_comm = [labels[node_comm[i]] for i in range(n)]
        if moves == 0 or k == level_n:
            break

        # aggregate communities into supernodes
        new_adj: list[dict[int, float]] = [dict() for _ in range(k)]
        new_self = [0.0] * k
        for u in range(level_n):
            cu = labels[u]
            new_self[cu] += self_w[u]
            for v, w in adj[u].items():
                if v <= u:
                    continue
                cv = labels[v]
                if cu == cv:
                    new_self[cu] += w
                else:
                    new_adj[cu][cv] = new_adj[cu].get(cv, 0.0) + w
                    new_adj[cv][cu] = new_adj[cv].get(cu, 0.0) + w
        adj = new_adj
        self_w = new_self
        level_n = k

    # refinement at original granularity: guarantees a single-node local maximum
    order = list(range(n))
    rng.shuffle(order)
    _local_moves(base_adj, base_degrees, two_m, node_comm, order)

    mapping = {}
    for u in range(n):
        c = node_comm[u]
        if c not in mapping:
            mapping[c] = len(mapping)
        node_comm[u] = mapping[c]
    return node_comm


def detect_communities(
    net: CoCitingNetwork, seed: int, weighted: bool = False
) -> ModularityContext:
    """Run the community detector on a co-citing network.

    With ``weighted`` the shared-reference counts act as edge weights;
    the default treats the graph as binary.
    """
    if net.n_edges == 0:
        raise EdgelessNetworkError(f"network of {net.owner} has no edges")
    edges = [
        (i, j, float(w) if weighted else 1.0)
        for (i, j), w in sorted(net.edges.items())
    ]
    labels = louvain_partition(net.n_nodes, edges, seed)
    return ModularityContext.from_edges(net.n_nodes, edges, labels)


@dataclass(frozen=True)
class TopicAssignment:
    """Major topics of one scientist and the paper -> topic map.

    ``papers`` is the chronological paper list the assignment was built
    on; ``topic_of`` maps each of those papers to a major-topic id or
    None (minor community or reference-less paper). Major topics are
    numbered 0..n_topics-1 by the year of their earliest paper.
    """

    owner: str
    papers: tuple[str, ...]
    topic_of: dict[str, int | None]
    major_topics: tuple[int, ...]
    topic_first_year: dict[int, int]
    n_topics: int


def assign_topics(
    net: CoCitingNetwork, ctx: ModularityContext, threshold: float = 0.05
) -> TopicAssignment:
    """Derive major topics from a community partition.

    A community is major when it holds strictly more than ``threshold``
    of the scientist's papers. Reference-less papers never carry a
    topic and never make a community major.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must lie in (0, 1)")
    n = net.n_nodes
    members: dict[int, list[int]] = {}
    for i, c in enumerate(ctx.assignment):
        members.setdefault(c, []).append(i)

    majors: list[tuple[int, list[int]]] = []  # (first node index, member indices)
    for c in sorted(members):
        with_refs = [i for i in members[c] if net.ref_counts[i] > 0]
        if with_refs and len(with_refs) / n > threshold:
            majors.append((with_refs[0], with_refs))
    majors.sort()  # node order is chronological, so first index = earliest paper

    topic_of: dict[str, int | None] = {pid: None for pid in net.nodes}
    topic_first_year: dict[int, int] = {}
    for topic_id, (first_idx, idxs) in enumerate(majors):
        topic_first_year[topic_id] = net.years[first_idx]
        for i in idxs:
            topic_of[net.nodes[i]] = topic_id
    return TopicAssignment(
        owner=net.owner,
        papers=net.nodes,
        topic_of=topic_of,
        major_topics=tuple(range(len(majors))),
        topic_first_year=topic_first_year,
        n_topics=len(majors),
    )


def empty_assignment(owner: str, papers: tuple[str, ...]) -> TopicAssignment:
    """All-NONE assignment for scientists whose network has no edges."""
    return TopicAssignment(
        owner=owner,
        papers=papers,
        topic_of={pid: None for pid in papers},
        major_topics=(),
        topic_first_year={},
        n_topics=0,
    )


def colored_series(
    corpus: Corpus, ta: TopicAssignment
) -> list[tuple[str, int, int | None, int]]:
    """The owner's chronological series as (paper_id, year, topic, c10) rows."""
    out = []
    for pid in ta.papers:
        rec = corpus.papers[pid]
        out.append((pid, rec.year, ta.topic_of[pid], rec.c10))
    return out


def write_topic_csv(ta: TopicAssignment, corpus: Corpus, path: str | Path) -> None:
    """Per-scientist export: paper_id,year,topic_id,c10 with -1 for NONE."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["paper_id", "year", "topic_id", "c10"])
        for pid, year, topic, c10 in colored_series(corpus, ta):
            writer.writerow([pid, year, -1 if topic is None else topic, c10])


def read_topic_csv(path: str | Path, owner: str) -> TopicAssignment:
    """Reconstruct a TopicAssignment from its CSV export (exact round-trip)."""
    papers: list[str] = []
    topic_of: dict[str, int | None] = {}
    topic_first_year: dict[int, int] = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            pid = row["paper_id"]
            topic = int(row["topic_id"])
            year = int(row["year"])
            papers.append(pid)
            topic_of[pid] = None if topic < 0 else topic
            if topic >= 0 and topic not in topic_first_year:
                topic_first_year[topic] = year  # rows are chronological
    n_topics = len(topic_first_year)
    return TopicAssignment(
        owner=owner,
        papers=tuple(papers),
        topic_of=topic_of,
        major_topics=tuple(range(n_topics)),
        topic_first_year=topic_first_year,
        n_topics=n_topics,
    )
