"""Named result tables and their deterministic CSV/JSON serialization.

Every statistic the pipeline emits is a StatTable keyed by the figure
it reconstructs (fig2a, figS4b, tableS1, ...). Floats are written with
repr() so identical runs produce identical bytes; None becomes an
empty cell.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

__all__ = ["StatTable", "write_tables", "read_table", "mean_se", "fmt_cell"]


def fmt_cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(value)
    return str(value)


def mean_se(values: Sequence[float]) -> tuple[float | None, float | None]:
    """Sample mean and standard error; (None, None) when empty, se 0 for n=1."""
    n = len(values)
    if n == 0:
        return None, None
    mean = sum(values) / n
    if n == 1:
        return mean, 0.0
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var / n)


@dataclass
class StatTable:
    """One named statistic: column names, rows, and a description line."""

    name: str
    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)
    description: str = ""

    def add(self, *values: object) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"{self.name}: expected {len(self.columns)} cells, got {len(values)}")
        self.rows.append(tuple(values))

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(self.columns)
            for row in self.rows:
                writer.writerow([fmt_cell(v) for v in row])

    def to_json(self) -> str:
        return json.dumps(
            {
                "name": self.name,
                "description": self.description,
                "columns": list(self.columns),
                "rows": [[None if v is None else v for v in row] for row in self.rows],
            },
            sort_keys=True,
        )


def write_tables(tables: Iterable[StatTable], out_dir: str | Path) -> list[str]:
    """Write every table as <name>.csv under out_dir; returns the file names."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = []
    for table in sorted(tables, key=lambda t: t.name):
        table.write_csv(out / f"{table.name}.csv")
        names.append(f"{table.name}.csv")
    return names


def read_table(path: str | Path) -> tuple[tuple[str, ...], list[tuple[str, ...]]]:
    """Read a table CSV back as raw string cells (header, rows)."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        return header, [tuple(row) for row in reader]
