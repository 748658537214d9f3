"""Paired-sample container, CSV ingestion, and the two built-in datasets."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError

__all__ = ["PairedSample", "BUILTIN_DATASETS", "ingest"]


@dataclass(frozen=True)
class PairedSample:
    """An ordered list of (x1, x2) observations with ingestion metadata."""

    rows: tuple[tuple[float, float], ...]
    source: str = "<memory>"

    def __post_init__(self) -> None:
        if len(self.rows) < 1:
            raise ParseError("a paired sample needs at least one row")
        for i, (a, b) in enumerate(self.rows, start=1):
            if not (math.isfinite(a) and math.isfinite(b)):
                raise ParseError(f"non-finite value in row {i}: ({a}, {b})")

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def x1(self) -> tuple[float, ...]:
        return tuple(r[0] for r in self.rows)

    @property
    def x2(self) -> tuple[float, ...]:
        return tuple(r[1] for r in self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x1", "x2"])
        for a, b in self.rows:
            w.writerow([repr(a), repr(b)])
        return buf.getvalue()


# Lifetimes of two types of cable installation (n = 9), and failure times
# of two components from a 20-unit system test (n = 20).
_CABLE = (
    (5.1, 11.0), (9.2, 15.1), (9.3, 18.3), (11.8, 24.0), (17.7, 29.1),
    (19.4, 38.6), (22.1, 44.2), (26.7, 45.1), (37.3, 50.9),
)
_COMPONENTS = (
    (0.37, 6.93), (0.06, 2.42), (0.2, 0.2), (1.62, 2.34), (5.7, 1.96),
    (2.25, 4.6), (2.5, 0.09), (2.44, 7.27), (0.12, 0.06), (0.79, 8.61),
    (7.22, 1.38), (2.81, 5.05), (4.13, 0.52), (5.67, 1.11), (0.96, 3.54),
    (7.16, 2.38), (0.32, 1.89), (7.32, 1.54), (2.58, 8.61), (1.73, 1.22),
)

BUILTIN_DATASETS = {
    "cable": PairedSample(_CABLE, source="builtin:cable"),
    "components": PairedSample(_COMPONENTS, source="builtin:components"),
}


def _parse_csv_text(text: str, source: str) -> PairedSample:
    rows: list[tuple[float, float]] = []
    reader = csv.reader(io.StringIO(text))
    for lineno, record in enumerate(reader, start=1):
        cells = [c.strip() for c in record if c.strip() != ""]
        if not cells:
            continue
        if len(cells) != 2:
            raise ParseError(
                f"{source}:{lineno}: expected two numeric columns, got {len(cells)}")
        try:
            pair = (float(cells[0]), float(cells[1]))
        except ValueError:
            if lineno == 1 and not rows:
                continue  # single header line
            raise ParseError(
                f"{source}:{lineno}: non-numeric cell in {cells!r}") from None
        rows.append(pair)
    if not rows:
        raise ParseError(f"{source}: no data rows found")
    return PairedSample(tuple(rows), source=source)


def ingest(path_or_name: str | Path) -> PairedSample:
    """Load a paired sample from a builtin name or a two-column CSV file.

    The CSV may carry one optional header line; decimal points, comma
    separators.  Parse failures report the offending line number.
    """
    key = str(path_or_name)
    if key in BUILTIN_DATASETS:
        return BUILTIN_DATASETS[key]
    p = Path(path_or_name)
    if not p.exists():
        raise ParseError(f"no such dataset or file: {key}")
    return _parse_csv_text(p.read_text(encoding="utf-8"), source=str(p))
