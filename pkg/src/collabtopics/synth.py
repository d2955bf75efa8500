"""Deterministic synthetic corpora with planted topic structure.

Each focal scientist gets K disjoint reference pools; every paper
draws its references from exactly one pool, so the co-citing network
has K planted communities. Collaborators are attached per topic, with
a configurable fraction spanning two topics, and receive a few solo
papers before their first collaboration so career features are
non-trivial. Topic start years are staggered while paper years overlap
heavily, which gives the time-controlled reshuffle plenty of same-year
swap partners. Generation is a pure function of the spec (seed
included): the serialized corpus is byte-identical across runs.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

from .records import Corpus, PaperRecord
from .seeds import derive_rng

__all__ = ["SynthSpec", "GroundTruth", "generate", "save_ground_truth", "preset", "SYNTH_PRESETS"]


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of one synthetic corpus."""

    n_focal: int = 6
    topics_per_focal: int = 3
    pool_size: int = 30
    papers_per_topic: int = 18
    refs_per_paper: int = 8
    collaborators_per_topic: int = 5
    multi_topic_fraction: float = 0.25
    year_start: int = 1980
    year_end: int = 2009
    topic_stagger: int = 2
    collaborator_prior_papers: int = 2
    c10_mu: float = 1.0
    c10_sigma: float = 1.0
    seed: int = 0

    def validate(self) -> None:
        positive = {
            "n_focal": self.n_focal,
            "topics_per_focal": self.topics_per_focal,
            "pool_size": self.pool_size,
            "papers_per_topic": self.papers_per_topic,
            "refs_per_paper": self.refs_per_paper,
            "collaborators_per_topic": self.collaborators_per_topic,
            "topic_stagger": self.topic_stagger,
        }
        for name, value in positive.items():
            if value < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.collaborator_prior_papers < 0:
            raise ValueError("collaborator_prior_papers must be >= 0")
        if not 0.0 <= self.multi_topic_fraction <= 1.0:
            raise ValueError("multi_topic_fraction must lie in [0, 1]")
        if self.pool_size < self.refs_per_paper:
            raise ValueError("pool_size must be >= refs_per_paper")
        last_start = self.year_start + (self.topics_per_focal - 1) * self.topic_stagger
        if last_start > self.year_end:
            raise ValueError("year range too short for the staggered topic starts")


@dataclass(frozen=True)
class GroundTruth:
    """Planted labels: paper -> topic index, collaborator -> topic set."""

    paper_topic: dict[str, int]
    paper_focal: dict[str, str]
    collaborator_topics: dict[str, dict[str, list[int]]]
    spec: SynthSpec


def generate(spec: SynthSpec) -> tuple[Corpus, GroundTruth]:
    """Build a corpus plus its planted ground truth."""
    spec.validate()
    records: list[PaperRecord] = []
    paper_topic: dict[str, int] = {}
    paper_focal: dict[str, str] = {}
    collaborator_topics: dict[str, dict[str, list[int]]] = {}

    for f_idx in range(spec.n_focal):
        fid = f"F{f_idx:04d}"
        rng = derive_rng(spec.seed, "focal", fid)
        k_topics = spec.topics_per_focal

        pools = [
            [f"R_{fid}_{k}_{i:03d}" for i in range(spec.pool_size)]
            for k in range(k_topics)
        ]
        starts = [spec.year_start + k * spec.topic_stagger for k in range(k_topics)]

        collaborators = [
            f"C_{fid}_{k}_{i:02d}"
            for k in range(k_topics)
            for i in range(spec.collaborators_per_topic)
        ]
        membership: dict[str, list[int]] = {
            c: [int(c.split("_")[2])] for c in collaborators
        }
        n_multi = round(spec.multi_topic_fraction * len(collaborators))
        for c in rng.sample(collaborators, n_multi):
            base = membership[c][0]
            membership[c] = sorted({base, (base + 1) % k_topics})
        collaborator_topics[fid] = {c: list(membership[c]) for c in collaborators}

        first_collab_year: dict[str, int] = {}
        for k in range(k_topics):
            members = [c for c in collaborators if k in membership[c]]
            n_papers = spec.papers_per_topic
            teams: list[set[str]] = [set() for _ in range(n_papers)]
            # two guaranteed appearances per member, then random fill to 2-3
            for idx, c in enumerate(members):
                teams[(2 * idx) % n_papers].add(c)
                if n_papers > 1:
                    teams[(2 * idx + 1) % n_papers].add(c)
            for j in range(n_papers):
                want = rng.randint(2, 3)
                free = [c for c in members if c not in teams[j]]
                if len(teams[j]) < want and free:
                    teams[j].update(rng.sample(free, min(want - len(teams[j]), len(free))))

            for j in range(n_papers):
                pid = f"P_{fid}_{k}_{j:03d}"
                year = starts[k] if j == 0 else rng.randint(starts[k], spec.year_end)
                refs = rng.sample(pools[k], spec.refs_per_paper)
                c10 = int(rng.lognormvariate(spec.c10_mu, spec.c10_sigma))
                records.append(
                    PaperRecord(
                        paper_id=pid,
                        year=year,
                        author_ids=tuple([fid] + sorted(teams[j])),
                        reference_ids=frozenset(refs),
                        c10=c10,
                    )
                )
                paper_topic[pid] = k
                paper_focal[pid] = fid
                for c in teams[j]:
                    if c not in first_collab_year or year < first_collab_year[c]:
                        first_collab_year[c] = year

        for c in collaborators:
            base = membership[c][0]
            start = first_collab_year.get(c, starts[base])
            for i in range(spec.collaborator_prior_papers):
                pid = f"Q_{c}_{i}"
                records.append(
                    PaperRecord(
                        paper_id=pid,
                        year=start - 1 - i,
                        author_ids=(c,),
                        reference_ids=frozenset(rng.sample(pools[base], spec.refs_per_paper)),
                        c10=int(rng.lognormvariate(spec.c10_mu, spec.c10_sigma)),
                    )
                )

    corpus = Corpus.from_records(records)
    truth = GroundTruth(
        paper_topic=paper_topic,
        paper_focal=paper_focal,
        collaborator_topics=collaborator_topics,
        spec=spec,
    )
    return corpus, truth


def save_ground_truth(truth: GroundTruth, path: str | Path) -> None:
    payload = {
        "spec": asdict(truth.spec),
        "paper_topic": truth.paper_topic,
        "paper_focal": truth.paper_focal,
        "collaborator_topics": truth.collaborator_topics,
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


SYNTH_PRESETS: dict[str, dict] = {
    # ~500 papers, 6 focal scientists; quick end-to-end checks
    "demo": dict(
        n_focal=6, topics_per_focal=3, pool_size=30, papers_per_topic=18,
        refs_per_paper=8, collaborators_per_topic=5, multi_topic_fraction=0.25,
        year_start=1980, year_end=2009, topic_stagger=2, collaborator_prior_papers=2,
    ),
    # ~10k papers
    "bench10k": dict(
        n_focal=40, topics_per_focal=4, pool_size=30, papers_per_topic=50,
        refs_per_paper=8, collaborators_per_topic=8, multi_topic_fraction=0.25,
        year_start=1975, year_end=2009, topic_stagger=3, collaborator_prior_papers=2,
    ),
    # ~100k papers
    "bench100k": dict(
        n_focal=380, topics_per_focal=4, pool_size=30, papers_per_topic=50,
        refs_per_paper=8, collaborators_per_topic=8, multi_topic_fraction=0.25,
        year_start=1975, year_end=2009, topic_stagger=3, collaborator_prior_papers=2,
    ),
}


def preset(name: str, seed: int) -> SynthSpec:
    try:
        params = SYNTH_PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; have {sorted(SYNTH_PRESETS)}") from None
    return SynthSpec(seed=seed, **params)
