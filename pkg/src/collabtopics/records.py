"""Publication records, corpus loading and per-scientist career views.

The corpus format is line-delimited JSON, one object per line:

    {"paper_id": "p1", "year": 1994, "author_ids": ["a", "b"],
     "reference_ids": ["r1", "r2"], "c10": 12}

``c10`` may be omitted when a ``citations`` event list is present
(pairs of ``[citing_paper_id, year]``); it is then computed as the
number of citation events within ten years of publication. A CSV
adapter with the same columns is accepted, arrays joined by ';'.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, TextIO

__all__ = [
    "PaperRecord",
    "Corpus",
    "ScientistProfile",
    "ValidationConfig",
    "LoadDiagnostic",
    "CorpusError",
    "DuplicatePaperError",
    "UnknownAuthorError",
    "c10_from_events",
    "load_corpus",
    "save_corpus",
    "select_focal",
    "profile",
]


class CorpusError(Exception):
    """Corpus-level loading failure."""


class DuplicatePaperError(CorpusError):
    """Two records share a paper_id."""


class UnknownAuthorError(KeyError):
    """Author id not present in the corpus."""


@dataclass(frozen=True, slots=True)
class PaperRecord:
    """One publication: identity, year, authors, references, 10-year citations."""

    paper_id: str
    year: int
    author_ids: tuple[str, ...]
    reference_ids: frozenset[str]
    c10: int

    def sort_key(self) -> tuple[int, str]:
        return (self.year, self.paper_id)


@dataclass(frozen=True, slots=True)
class LoadDiagnostic:
    """Why one input record was rejected."""

    line: int
    paper_id: str | None
    fld: str
    message: str

    def __str__(self) -> str:
        pid = self.paper_id if self.paper_id is not None else "<unknown>"
        return f"line {self.line}: paper {pid}: field {self.fld}: {self.message}"


@dataclass(frozen=True)
class ValidationConfig:
    """Record validation bounds. Years outside [year_min, year_max] are rejected."""

    year_min: int = 1850
    year_max: int = 2035
    strict: bool = False  # raise on first rejected record instead of collecting


@dataclass(frozen=True, slots=True)
class ScientistProfile:
    """Career summary: productivity, mean impact, career span."""

    author_id: str
    paper_count: int
    mean_c10: float
    career_start_year: int
    career_years: int


@dataclass(frozen=True)
class Corpus:
    """Immutable, fully indexed publication corpus.

    ``author_index`` maps every author id to their paper ids sorted by
    (year, paper_id); it is exactly the inverse of the per-paper author
    lists. Safe for concurrent reads.
    """

    papers: dict[str, PaperRecord]
    author_index: dict[str, list[str]]
    diagnostics: tuple[LoadDiagnostic, ...] = field(default=(), compare=False)

    @property
    def n_papers(self) -> int:
        return len(self.papers)

    @property
    def n_authors(self) -> int:
        return len(self.author_index)

    def papers_of(self, author_id: str) -> list[str]:
        try:
            return self.author_index[author_id]
        except KeyError:
            raise UnknownAuthorError(author_id) from None

    @staticmethod
    def from_records(
        records: Iterable[PaperRecord],
        diagnostics: Iterable[LoadDiagnostic] = (),
    ) -> "Corpus":
        papers: dict[str, PaperRecord] = {}
        for rec in records:
            if rec.paper_id in papers:
                raise DuplicatePaperError(f"duplicate paper_id {rec.paper_id!r}")
            papers[rec.paper_id] = rec
        index: dict[str, list[str]] = {}
        for rec in papers.values():
            for a in rec.author_ids:
                index.setdefault(a, []).append(rec.paper_id)
        for pids in index.values():
            pids.sort(key=lambda pid: papers[pid].sort_key())
        return Corpus(papers=papers, author_index=index, diagnostics=tuple(diagnostics))


def c10_from_events(pub_year: int, events: Iterable[tuple[str, int]]) -> int:
    """Citations within ten years of publication.

    Counts events whose year falls in [pub_year, pub_year + 9], ten
    calendar labels starting at the publication year. Events dated
    before publication are ignored as data noise.
    """
    return sum(1 for _, y in events if 0 <= y - pub_year < 10)


def _validate_record(
    raw: dict, line: int, config: ValidationConfig
) -> PaperRecord | LoadDiagnostic:
    pid = raw.get("paper_id")
    if not isinstance(pid, str) or not pid:
        return LoadDiagnostic(line, None, "paper_id", "missing or not a string")
    year = raw.get("year")
    if not isinstance(year, int):
        return LoadDiagnostic(line, pid, "year", "missing or not an integer")
    if not (config.year_min <= year <= config.year_max):
        return LoadDiagnostic(
            line, pid, "year", f"{year} outside [{config.year_min}, {config.year_max}]"
        )
    authors = raw.get("author_ids")
    if not isinstance(authors, list) or not authors:
        return LoadDiagnostic(line, pid, "author_ids", "missing or empty")
    if any(not isinstance(a, str) or not a for a in authors):
        return LoadDiagnostic(line, pid, "author_ids", "non-string author id")
    if len(set(authors)) != len(authors):
        return LoadDiagnostic(line, pid, "author_ids", "duplicate author id")
    refs = raw.get("reference_ids", [])
    if not isinstance(refs, list) or any(not isinstance(r, str) for r in refs):
        return LoadDiagnostic(line, pid, "reference_ids", "not a list of strings")
    c10 = raw.get("c10")
    if c10 is None and "citations" in raw:
        events = raw["citations"]
        try:
            c10 = c10_from_events(year, [(e[0], int(e[1])) for e in events])
        except (TypeError, ValueError, IndexError):
            return LoadDiagnostic(line, pid, "citations", "malformed event list")
    if not isinstance(c10, int):
        return LoadDiagnostic(line, pid, "c10", "missing or not an integer")
    if c10 < 0:
        return LoadDiagnostic(line, pid, "c10", "negative")
    return PaperRecord(
        paper_id=pid,
        year=year,
        author_ids=tuple(authors),
        reference_ids=frozenset(refs),
        c10=c10,
    )


def _iter_jsonl(stream: TextIO) -> Iterator[tuple[int, dict | LoadDiagnostic]]:
    for line_no, line in enumerate(stream, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            yield line_no, LoadDiagnostic(line_no, None, "<line>", f"invalid JSON: {exc.msg}")
            continue
        if not isinstance(obj, dict):
            yield line_no, LoadDiagnostic(line_no, None, "<line>", "record is not an object")
            continue
        yield line_no, obj


def _iter_csv(stream: TextIO) -> Iterator[tuple[int, dict | LoadDiagnostic]]:
    reader = csv.DictReader(stream)
    for line_no, row in enumerate(reader, start=2):  # header is line 1
        obj: dict = {"paper_id": row.get("paper_id") or None}
        try:
            obj["year"] = int(row["year"])
        except (KeyError, TypeError, ValueError):
            obj["year"] = None
        obj["author_ids"] = [a for a in (row.get("author_ids") or "").split(";") if a]
        obj["reference_ids"] = [r for r in (row.get("reference_ids") or "").split(";") if r]
        c10_raw = row.get("c10")
        if c10_raw not in (None, ""):
            try:
                obj["c10"] = int(c10_raw)
            except ValueError:
                obj["c10"] = c10_raw  # let validation report it
        yield line_no, obj


def load_corpus(
    source: str | Path | TextIO,
    config: ValidationConfig = ValidationConfig(),
    fmt: str | None = None,
) -> Corpus:
    """Load and validate a corpus from JSONL or CSV.

    Records failing validation are rejected and reported in
    ``Corpus.diagnostics`` (or raised immediately when
    ``config.strict``). Duplicate paper ids always raise
    DuplicatePaperError.
    """
    close = False
    if isinstance(source, (str, Path)):
        path = Path(source)
        if fmt is None:
            fmt = "csv" if path.suffix.lower() == ".csv" else "jsonl"
        stream: TextIO = open(path, "r", encoding="utf-8")
        close = True
    else:
        stream = source
        if fmt is None:
            fmt = "jsonl"

    records: list[PaperRecord] = []
    diagnostics: list[LoadDiagnostic] = []
    try:
        rows = _iter_csv(stream) if fmt == "csv" else _iter_jsonl(stream)
        for line_no, obj in rows:
            if isinstance(obj, LoadDiagnostic):
                result: PaperRecord | LoadDiagnostic = obj
            else:
                result = _validate_record(obj, line_no, config)
            if isinstance(result, LoadDiagnostic):
                if config.strict:
                    raise CorpusError(str(result))
                diagnostics.append(result)
            else:
                records.append(result)
    finally:
        if close:
            stream.close()
    return Corpus.from_records(records, diagnostics)


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write the corpus as JSONL, deterministically ordered by (year, paper_id)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in sorted(corpus.papers.values(), key=PaperRecord.sort_key):
            obj = {
                "paper_id": rec.paper_id,
                "year": rec.year,
                "author_ids": list(rec.author_ids),
                "reference_ids": sorted(rec.reference_ids),
                "c10": rec.c10,
            }
            fh.write(json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n")


def corpus_to_jsonl(corpus: Corpus) -> str:
    """Corpus serialized to a JSONL string (same bytes as save_corpus)."""
    buf = io.StringIO()
    for rec in sorted(corpus.papers.values(), key=PaperRecord.sort_key):
        obj = {
            "paper_id": rec.paper_id,
            "year": rec.year,
            "author_ids": list(rec.author_ids),
            "reference_ids": sorted(rec.reference_ids),
            "c10": rec.c10,
        }
        buf.write(json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n")
    return buf.getvalue()


def select_focal(corpus: Corpus, min_papers: int = 50) -> list[str]:
    """Authors with at least ``min_papers`` papers, sorted by author id."""
    if min_papers < 1:
        raise ValueError("min_papers must be >= 1")
    return sorted(a for a, pids in corpus.author_index.items() if len(pids) >= min_papers)


def profile(corpus: Corpus, author_id: str) -> ScientistProfile:
    """Productivity, mean c10 and career span for one author."""
    pids = corpus.papers_of(author_id)
    years = [corpus.papers[p].year for p in pids]
    total_c10 = sum(corpus.papers[p].c10 for p in pids)
    return ScientistProfile(
        author_id=author_id,
        paper_count=len(pids),
        mean_c10=total_c10 / len(pids),
        career_start_year=min(years),
        career_years=max(years) - min(years),
    )
