"""Journal ranking by h index, quartile assignment, and report rendering."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Sequence, Tuple

from .corpus import IbnpCategory, JournalRecord
from .errors import DomainError, MissingCpn
from .indicators import IndicatorSet


class QuartileMode(str, Enum):
    EMPIRICAL = "empirical"
    FIXED = "fixed"


@dataclass(frozen=True)
class QuartileBounds:
    mode: QuartileMode
    cuts: Tuple[int, int, int]  # h thresholds, non-increasing

    def __post_init__(self):
        q1, q2, q3 = self.cuts
        if not (q1 >= q2 >= q3):
            raise DomainError(f"quartile cuts must be non-increasing, got {self.cuts}")


#: conventional integer cutoffs: quartile 1 above 3, then 3, 2, 1 and below
FIXED_BOUNDS = QuartileBounds(mode=QuartileMode.FIXED, cuts=(3, 2, 1))


@dataclass(frozen=True)
class ClassificationRow:
    rank: int
    title: str
    h: int
    category: IbnpCategory
    cpn: float
    quartile: Optional[int] = None


def rank_journals(
    pairs: Sequence[Tuple[JournalRecord, IndicatorSet]]
) -> list[ClassificationRow]:
    """Order journals by h descending, normalized citation, then title."""
    for journal, indicator in pairs:
        if indicator.cpn is None:
            raise MissingCpn(journal.journal_id)
    ordered = sorted(pairs, key=lambda p: (-p[1].h, -p[1].cpn, p[0].title))
    return [
        ClassificationRow(
            rank=position,
            title=journal.title,
            h=indicator.h,
            category=journal.category,
            cpn=indicator.cpn,
        )
        for position, (journal, indicator) in enumerate(ordered, start=1)
    ]


def empirical_bounds(rows: Sequence[ClassificationRow]) -> QuartileBounds:
    """Cut points read off the ranked h values at the quartile positions."""
    if not rows:
        raise DomainError("cannot derive quartile bounds from an empty ranking")
    n = len(rows)
    hs = [row.h for row in rows]  # already descending
    cuts = tuple(hs[math.ceil(n * f / 4) - 1] for f in (1, 2, 3))
    return QuartileBounds(mode=QuartileMode.EMPIRICAL, cuts=cuts)


def assign_quartiles(
    rows: Sequence[ClassificationRow], bounds: QuartileBounds
) -> list[ClassificationRow]:
    """Attach quartiles; ties on h always land in the upper quartile."""
    q1, q2, q3 = bounds.cuts
    out = []
    for row in rows:
        if bounds.mode is QuartileMode.FIXED:
            # integer h turns the open interval between 2 and 3 into 2 < h <= 3
            if row.h > q1:
                quartile = 1
            elif row.h > q2:
                quartile = 2
            elif row.h > q3:
                quartile = 3
            else:
                quartile = 4
        else:
            if row.h >= q1:
                quartile = 1
            elif row.h >= q2:
                quartile = 2
            elif row.h >= q3:
                quartile = 3
            else:
                quartile = 4
        out.append(replace(row, quartile=quartile))
    return out


REPORT_COLUMNS = ("rank", "title", "h", "category", "cpn", "quartile")


def _row_cells(row: ClassificationRow) -> list[str]:
    return [
        str(row.rank),
        row.title,
        str(row.h),
        row.category.value,
        f"{row.cpn:.2f}",
        str(row.quartile),
    ]


def emit_report(
    rows: Sequence[ClassificationRow],
    fmt: str,
    top_quartiles: Optional[int] = None,
) -> bytes:
    """Render the classification as csv, json, or a pipe table (md).

    Output is deterministic bytes; top_quartiles keeps only the leading
    quartiles. Normalized citation values carry two decimals everywhere.
    """
    selected = [
        row
        for row in rows
        if top_quartiles is None or (row.quartile is not None and row.quartile <= top_quartiles)
    ]
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for row in selected:
            writer.writerow(_row_cells(row))
        return buffer.getvalue().encode("utf-8")
    if fmt == "json":
        doc = [
            {
                "rank": row.rank,
                "title": row.title,
                "h": row.h,
                "category": row.category.value,
                "cpn": round(row.cpn, 2),
                "quartile": row.quartile,
            }
            for row in selected
        ]
        return (json.dumps(doc, ensure_ascii=False, indent=2) + "\n").encode("utf-8")
    if fmt == "md":
        lines = [
            "| " + " | ".join(REPORT_COLUMNS) + " |",
            "| " + " | ".join("---" for _ in REPORT_COLUMNS) + " |",
        ]
        for row in selected:
            lines.append("| " + " | ".join(_row_cells(row)) + " |")
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise DomainError(f"unknown report format {fmt!r}; use 'csv', 'json' or 'md'")
