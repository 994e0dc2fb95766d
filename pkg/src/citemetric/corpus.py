"""Domain model: journals, citation records, and the validated in-memory corpus.

Every type here is immutable after construction and safe to share across
threads. Serialization lives in :mod:`citemetric.ingest`.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence, Tuple

DEFAULT_WINDOW: Tuple[int, int] = (2003, 2007)


class Area(str, Enum):
    CIENCIAS = "Ciencias"
    CIENCIAS_SOCIALES = "CienciasSociales"


class IbnpCategory(str, Enum):
    A1 = "A1"
    A2 = "A2"
    B = "B"
    C = "C"


class Library(str, Enum):
    WOK = "WoK"
    SCOPUS = "Scopus"
    REDALYC = "Redalyc"
    SCIELO = "Scielo"
    GOOGLE_SCHOLAR = "GoogleScholar"


class ArticleStatus(str, Enum):
    KEPT = "Kept"
    DROPPED_INCOMPLETE = "DroppedIncomplete"
    DROPPED_DUPLICATE = "DroppedDuplicate"
    NEEDS_REVIEW = "NeedsReview"


#: statuses that count as visible production downstream
VISIBLE_STATUSES = frozenset({ArticleStatus.KEPT, ArticleStatus.NEEDS_REVIEW})


@dataclass(frozen=True)
class JournalRecord:
    journal_id: str
    title: str
    area: Area
    category: IbnpCategory
    memberships: frozenset = frozenset()  # of Library


@dataclass(frozen=True)
class ArticleRecord:
    journal_id: str
    title: str
    year: Optional[int]  # None means the export row had no year
    cites: int
    authors: str = ""
    publication: str = ""
    publisher: str = ""
    url: str = ""
    status: ArticleStatus = ArticleStatus.KEPT


@dataclass(frozen=True)
class JournalCorpus:
    journals: Tuple[JournalRecord, ...]
    articles: Tuple[ArticleRecord, ...]
    ibnp_totals: Mapping[str, int]
    window: Tuple[int, int] = DEFAULT_WINDOW

    def journal_ids(self) -> Tuple[str, ...]:
        return tuple(j.journal_id for j in self.journals)

    def articles_for(self, journal_id: str) -> Tuple[ArticleRecord, ...]:
        return tuple(a for a in self.articles if a.journal_id == journal_id)

    def visible_articles_for(self, journal_id: str) -> Tuple[ArticleRecord, ...]:
        return tuple(
            a
            for a in self.articles
            if a.journal_id == journal_id and a.status in VISIBLE_STATUSES
        )


def validate_corpus(corpus: JournalCorpus) -> list[str]:
    """Check every type invariant; return one description per violation.

    Violations are data, not failures: an empty list means the corpus is valid.
    """
    violations: list[str] = []
    seen: set[str] = set()
    for journal in corpus.journals:
        if journal.journal_id in seen:
            violations.append(f"duplicate journal_id {journal.journal_id!r}")
        seen.add(journal.journal_id)
        if not journal.journal_id:
            violations.append("journal with empty journal_id")
        if not journal.title.strip():
            violations.append(f"journal {journal.journal_id!r} has empty title")
        if journal.journal_id not in corpus.ibnp_totals:
            violations.append(f"journal {journal.journal_id!r} missing from ibnp_totals")
        elif corpus.ibnp_totals[journal.journal_id] < 0:
            violations.append(f"journal {journal.journal_id!r} has negative ibnp total")

    start, end = corpus.window
    for index, article in enumerate(corpus.articles):
        where = f"article row {index} (journal {article.journal_id!r})"
        if article.journal_id not in seen:
            violations.append(f"{where}: unknown journal_id {article.journal_id!r}")
        if article.cites < 0:
            violations.append(f"{where}: negative cites")
        if article.status is ArticleStatus.KEPT:
            if not article.title.strip():
                violations.append(f"{where}: kept record with empty title")
            if article.year is None or not (start <= article.year <= end):
                violations.append(f"{where}: kept record with year outside window")
    return violations


def filter_by_area(corpus: JournalCorpus, area: Area) -> JournalCorpus:
    """Restrict the corpus to one knowledge area, keeping the window."""
    journals = tuple(j for j in corpus.journals if j.area is area)
    kept_ids = {j.journal_id for j in journals}
    return JournalCorpus(
        journals=journals,
        articles=tuple(a for a in corpus.articles if a.journal_id in kept_ids),
        ibnp_totals={k: v for k, v in corpus.ibnp_totals.items() if k in kept_ids},
        window=corpus.window,
    )
