"""Randomization schemes used as null models.

Two randomizers are provided. The first reshuffles the bipartite
collaborator-paper authorship of one focal scientist, swapping link
endpoints only between papers published in the same year; this keeps
every collaborator's number of coauthored papers, every paper's team
size and every collaborator's multiset of collaboration years intact
while scrambling which topics a collaborator touches. The second is a
plain degree-preserving double-edge swap on the network among a
scientist's collaborators, used to judge how significant its community
structure is (Q of the real network vs Q of rewired copies).

Swap attempts that would violate a constraint count toward the attempt
budget (rounds_factor times the link/edge count), so rigid instances
terminate.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass

from .community import EdgelessNetworkError, ModularityContext, louvain_partition, modularity
from .records import Corpus
from .seeds import derive_seed

__all__ = [
    "AuthorshipBipartite",
    "CollabNetwork",
    "QSignificance",
    "build_authorship_bipartite",
    "build_collab_network",
    "reshuffle_time_controlled",
    "rewire_degree_preserved",
    "q_significance",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AuthorshipBipartite:
    """Collaborator-paper authorship links of one focal scientist.

    ``links`` holds (collaborator_id, paper_id) pairs, one per
    coauthorship; ``paper_year`` gives the year of every linked paper.
    Solo papers carry no links and do not appear.
    """

    focal: str
    links: tuple[tuple[str, str], ...]
    paper_year: dict[str, int]

    @property
    def n_links(self) -> int:
        return len(self.links)

    def collaborator_degrees(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for c, _ in self.links:
            out[c] = out.get(c, 0) + 1
        return out

    def paper_degrees(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for _, p in self.links:
            out[p] = out.get(p, 0) + 1
        return out

    def collaborator_year_multisets(self) -> dict[str, tuple[int, ...]]:
        out: dict[str, list[int]] = {}
        for c, p in self.links:
            out.setdefault(c, []).append(self.paper_year[p])
        return {c: tuple(sorted(ys)) for c, ys in out.items()}


def build_authorship_bipartite(
    corpus: Corpus, focal: str, paper_ids: list[str] | None = None
) -> AuthorshipBipartite:
    """Authorship bipartite over the focal scientist's (optionally restricted) papers."""
    if paper_ids is None:
        paper_ids = corpus.papers_of(focal)
    links: list[tuple[str, str]] = []
    paper_year: dict[str, int] = {}
    for pid in paper_ids:
        rec = corpus.papers[pid]
        for a in rec.author_ids:
            if a != focal:
                links.append((a, pid))
                paper_year[pid] = rec.year
    return AuthorshipBipartite(focal=focal, links=tuple(links), paper_year=paper_year)


def reshuffle_time_controlled(
    bip: AuthorshipBipartite, rounds_factor: int = 4, seed: int = 0
) -> AuthorshipBipartite:
    """Swap authorship links between same-year papers.

    Performs ``rounds_factor * n_links`` attempts. Each attempt draws a
    link (a, j) uniformly, then a link (b, i) uniformly among links
    whose paper shares j's year, and exchanges the papers so the links
    become (a, i) and (b, j). Attempts are rejected when the two links
    coincide, share the collaborator or the paper, or when a swap would
    attach a collaborator twice to the same paper. Inputs without any
    two same-year links are returned unchanged.
    """
    if rounds_factor < 1:
        raise ValueError("rounds_factor must be >= 1")
    links = list(bip.links)
    n = len(links)
    year_class: dict[int, list[int]] = {}
    for idx, (_, p) in enumerate(links):
        year_class.setdefault(bip.paper_year[p], []).append(idx)
    if n < 2 or all(len(c) < 2 for c in year_class.values()):
        return bip

    # link index -> same-year link indices; class membership never changes
    # because swaps exchange papers of equal year
    class_of: dict[int, list[int]] = {}
    for cls in year_class.values():
        for idx in cls:
            class_of[idx] = cls

    link_set = set(links)
    rng = random.Random(seed)
    for _ in range(rounds_factor * n):
        i = rng.randrange(n)
        cls = class_of[i]
        j = cls[rng.randrange(len(cls))]
        if i == j:
            continue
        a, pa = links[i]
        b, pb = links[j]
        if a == b or pa == pb:
            continue
        new_i = (a, pb)
        new_j = (b, pa)
        if new_i in link_set or new_j in link_set:
            continue
        link_set.discard(links[i])
        link_set.discard(links[j])
        links[i] = new_i
        links[j] = new_j
        link_set.add(new_i)
        link_set.add(new_j)
    return AuthorshipBipartite(focal=bip.focal, links=tuple(links), paper_year=dict(bip.paper_year))


@dataclass(frozen=True)
class CollabNetwork:
    """Simple undirected network among one scientist's collaborators.

    Two collaborators are linked when they appear together on at least
    one of the focal scientist's papers. ``edges`` holds index pairs
    (i, j) with i < j into ``nodes``.
    """

    focal: str
    nodes: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degree_sequence(self) -> list[int]:
        deg = [0] * len(self.nodes)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg


def build_collab_network(
    corpus: Corpus, focal: str, paper_ids: list[str] | None = None
) -> CollabNetwork:
    """Collaboration network among the focal scientist's coauthors."""
    if paper_ids is None:
        paper_ids = corpus.papers_of(focal)
    collaborators: set[str] = set()
    for pid in paper_ids:
        for a in corpus.papers[pid].author_ids:
            if a != focal:
                collaborators.add(a)
    nodes = tuple(sorted(collaborators))
    index = {c: i for i, c in enumerate(nodes)}
    edge_set: set[tuple[int, int]] = set()
    for pid in paper_ids:
        team = sorted(a for a in corpus.papers[pid].author_ids if a != focal)
        for x in range(len(team)):
            for y in range(x + 1, len(team)):
                edge_set.add((index[team[x]], index[team[y]]))
    return CollabNetwork(focal=focal, nodes=nodes, edges=tuple(sorted(edge_set)))


def rewire_degree_preserved(
    net: CollabNetwork, rounds_factor: int = 4, seed: int = 0
) -> CollabNetwork:
    """Degree-preserving randomization by double-edge swaps.

    Attempts ``rounds_factor * n_edges`` swaps ((a,b),(c,d)) ->
    ((a,d),(c,b)), rejecting any that would create a self-loop or a
    duplicate edge. Networks with fewer than 2 edges cannot be rewired
    and are returned unchanged with a warning.
    """
    if rounds_factor < 1:
        raise ValueError("rounds_factor must be >= 1")
    if net.n_edges < 2:
        logger.warning("collab network of %s has %d edge(s); rewiring skipped",
                       net.focal, net.n_edges)
        return net
    edges = [tuple(e) for e in net.edges]
    edge_set = set(edges)
    m = len(edges)
    rng = random.Random(seed)
    for _ in range(rounds_factor * m):
        ei = rng.randrange(m)
        ej = rng.randrange(m)
        if ei == ej:
            continue
        a, b = edges[ei]
        c, d = edges[ej]
        if rng.random() < 0.5:
            c, d = d, c
        # proposed: (a, d) and (c, b)
        if a == d or c == b:
            continue
        new_i = (min(a, d), max(a, d))
        new_j = (min(c, b), max(c, b))
        if new_i == new_j or new_i in edge_set or new_j in edge_set:
            continue
        edge_set.discard(edges[ei])
        edge_set.discard(edges[ej])
        edges[ei] = new_i
        edges[ej] = new_j
        edge_set.add(new_i)
        edge_set.add(new_j)
    return CollabNetwork(focal=net.focal, nodes=net.nodes, edges=tuple(sorted(edges)))


@dataclass(frozen=True)
class QSignificance:
    """Maximized modularity of a collaboration network vs rewired copies."""

    q_real: float
    q_rand_mean: float
    ratio: float | None
    n_rewires: int


def _max_modularity(n: int, edges: tuple[tuple[int, int], ...], seed: int) -> float:
    edge_list = [(u, v, 1.0) for u, v in edges]
    labels = louvain_partition(n, edge_list, seed)
    ctx = ModularityContext.from_edges(n, edge_list, labels)
    return modularity(ctx)


def q_significance(
    net: CollabNetwork,
    n_rewires: int = 10,
    seed: int = 0,
    rounds_factor: int = 4,
) -> QSignificance:
    """Q_real / Q_rand community-significance ratio.

    Q_real is the maximized modularity of the collaboration network;
    Q_rand averages the maximized modularity of ``n_rewires``
    independently rewired degree-preserved copies. The ratio is None
    when Q_rand is numerically zero (structureless cases such as
    complete graphs or stars).
    """
    if net.n_edges == 0:
        raise EdgelessNetworkError(f"collab network of {net.focal} has no edges")
    if n_rewires < 1:
        raise ValueError("n_rewires must be >= 1")
    q_real = _max_modularity(len(net.nodes), net.edges, derive_seed(seed, "real"))
    q_rands = []
    for k in range(n_rewires):
        rewired = rewire_degree_preserved(net, rounds_factor, derive_seed(seed, "rewire", k))
        q_rands.append(_max_modularity(len(net.nodes), rewired.edges, derive_seed(seed, "detect", k)))
    q_rand_mean = sum(q_rands) / len(q_rands)
    ratio = q_real / q_rand_mean if abs(q_rand_mean) > 1e-12 else None
    return QSignificance(q_real=q_real, q_rand_mean=q_rand_mean, ratio=ratio, n_rewires=n_rewires)
