"""Registry and citation-export parsing, record cleaning, and corpus assembly.

Cleaning applies three criteria in a fixed order: incomplete rows are dropped
first, then near-identical titles are collapsed keeping the most-cited record,
then same-year same-cites pairs with no shared title words are flagged as
possible cross-language duplicates (dropped only when an alias file confirms
the match).
"""

from __future__ import annotations

import csv
import io
import json
import re
import unicodedata
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence, Tuple

from .corpus import (
    Area,
    ArticleRecord,
    ArticleStatus,
    IbnpCategory,
    JournalCorpus,
    JournalRecord,
    Library,
    validate_corpus,
)
from .errors import (
    BadCell,
    DuplicateId,
    MalformedHeader,
    MixedJournal,
    UnknownJournal,
)

REGISTRY_HEADER = "journal_id,title,area,ibnp_category,air_ibnp,wok,scopus,redalyc,scielo,gscholar"
EXPORT_HEADER = "cites,authors,title,year,publication,publisher,url"
ALIAS_HEADER = "from_title,to_title"

# registry membership columns in file order
_MEMBERSHIP_COLUMNS = (
    ("wok", Library.WOK),
    ("scopus", Library.SCOPUS),
    ("redalyc", Library.REDALYC),
    ("scielo", Library.SCIELO),
    ("gscholar", Library.GOOGLE_SCHOLAR),
)


@dataclass(frozen=True)
class RawRow:
    line_number: int
    fields: Tuple[str, ...]


class DedupRule(str, Enum):
    SIMILAR_TITLE = "SimilarTitle"
    CROSS_LANGUAGE_SUSPECT = "CrossLanguageSuspect"
    INCOMPLETE_FIELDS = "IncompleteFields"


@dataclass(frozen=True)
class DedupDecision:
    kept_line: int
    dropped_lines: Tuple[int, ...]
    rule: DedupRule
    similarity: Optional[float] = None  # only for SimilarTitle


@dataclass(frozen=True)
class IngestReport:
    rows_read: int
    rows_kept: int
    rows_dropped_incomplete: int
    rows_dropped_duplicate: int
    rows_flagged_review: int
    decisions: Tuple[DedupDecision, ...]


@dataclass(frozen=True)
class DedupConfig:
    window: Tuple[int, int] = (2003, 2007)
    title_threshold: float = 0.92
    alias_map: Mapping[str, str] = field(default_factory=dict)


def _decode(content) -> str:
    if isinstance(content, bytes):
        return content.decode("utf-8-sig")
    return content.lstrip("﻿")


def _read_rows(content, expected_header: str) -> list[RawRow]:
    """Parse CSV content into rows, enforcing the exact header and cell counts."""
    text = _decode(content)
    reader = csv.reader(io.StringIO(text, newline=""))
    rows = list(reader)
    if not rows:
        raise MalformedHeader(expected_header, "")
    header = ",".join(cell.strip() for cell in rows[0])
    if header != expected_header:
        raise MalformedHeader(expected_header, header)
    width = len(rows[0])
    out = []
    for offset, cells in enumerate(rows[1:], start=2):
        if not cells:
            continue  # blank trailing line
        if len(cells) != width:
            raise BadCell(offset, "*", f"expected {width} cells, found {len(cells)}")
        out.append(RawRow(line_number=offset, fields=tuple(cells)))
    return out


def _int_cell(row: RawRow, column: str, value: str, minimum: int = 0) -> int:
    try:
        parsed = int(value.strip())
    except ValueError:
        raise BadCell(row.line_number, column, f"not an integer: {value!r}") from None
    if parsed < minimum:
        raise BadCell(row.line_number, column, f"below {minimum}: {parsed}")
    return parsed


def parse_registry(content) -> tuple[list[JournalRecord], dict[str, int]]:
    """Parse the journal registry CSV into records plus per-journal totals."""
    journals: list[JournalRecord] = []
    totals: dict[str, int] = {}
    for row in _read_rows(content, REGISTRY_HEADER):
        cells = dict(zip(REGISTRY_HEADER.split(","), row.fields))
        journal_id = cells["journal_id"].strip()
        if not journal_id:
            raise BadCell(row.line_number, "journal_id", "empty")
        if journal_id in totals:
            raise DuplicateId(row.line_number, journal_id)
        title = cells["title"].strip()
        if not title:
            raise BadCell(row.line_number, "title", "empty")
        try:
            area = Area(cells["area"].strip())
        except ValueError:
            raise BadCell(row.line_number, "area", f"unknown area {cells['area']!r}") from None
        try:
            category = IbnpCategory(cells["ibnp_category"].strip())
        except ValueError:
            raise BadCell(
                row.line_number, "ibnp_category", f"unknown category {cells['ibnp_category']!r}"
            ) from None
        memberships = set()
        for column, tag in _MEMBERSHIP_COLUMNS:
            flag = cells[column].strip()
            if flag not in ("0", "1"):
                raise BadCell(row.line_number, column, f"flag must be 0 or 1, got {flag!r}")
            if flag == "1":
                memberships.add(tag)
        totals[journal_id] = _int_cell(row, "air_ibnp", cells["air_ibnp"])
        journals.append(
            JournalRecord(
                journal_id=journal_id,
                title=title,
                area=area,
                category=category,
                memberships=frozenset(memberships),
            )
        )
    return journals, totals


def parse_citation_export(content, journal_id: str) -> list[ArticleRecord]:
    """Parse one citation-export CSV; all records come back with status Kept."""
    records: list[ArticleRecord] = []
    for row in _read_rows(content, EXPORT_HEADER):
        cells = dict(zip(EXPORT_HEADER.split(","), row.fields))
        year_text = cells["year"].strip()
        year = _int_cell(row, "year", year_text, minimum=-(10**9)) if year_text else None
        records.append(
            ArticleRecord(
                journal_id=journal_id,
                title=cells["title"].strip(),
                year=year,
                cites=_int_cell(row, "cites", cells["cites"]),
                authors=cells["authors"].strip(),
                publication=cells["publication"].strip(),
                publisher=cells["publisher"].strip(),
                url=cells["url"].strip(),
                status=ArticleStatus.KEPT,
            )
        )
    return records


def parse_alias_file(content) -> dict[str, str]:
    """Parse the title-alias CSV; both sides are stored normalized."""
    aliases: dict[str, str] = {}
    for row in _read_rows(content, ALIAS_HEADER):
        source, target = row.fields
        aliases[normalize_title(source)] = normalize_title(target)
    return aliases


_PUNCT = re.compile(r"[^0-9a-z\s]+")
_SPACES = re.compile(r"\s+")


def normalize_title(title: str) -> str:
    """Lowercase, strip accents and punctuation, collapse whitespace."""
    text = unicodedata.normalize("NFD", title.lower())
    text = "".join(ch for ch in text if not unicodedata.combining(ch))
    text = _PUNCT.sub(" ", text)
    return _SPACES.sub(" ", text).strip()


def levenshtein(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(
                min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + (ca != cb))
            )
        previous = current
    return previous[-1]


def title_similarity(a: str, b: str) -> float:
    """Normalized Levenshtein similarity, 1 - distance / max-length."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(a, b) / longest


def _line_of(index: int) -> int:
    # records arrive in file order; the header is line 1, so data starts at 2
    return index + 2


def deduplicate(
    records: Sequence[ArticleRecord], config: DedupConfig
) -> tuple[list[ArticleRecord], IngestReport]:
    """Apply the three cleaning criteria and return restatused records plus a report.

    Order matters: incomplete rows leave first, similar-title groups collapse
    second (highest cites wins, earlier row wins ties), and cross-language
    suspects are flagged last. All decisions are deterministic in input order.
    """
    ids = {r.journal_id for r in records}
    if len(ids) > 1:
        raise MixedJournal(f"records span journals {sorted(ids)}")

    start, end = config.window
    statuses: dict[int, ArticleStatus] = {}
    decisions: list[DedupDecision] = []

    for i, record in enumerate(records):
        incomplete = (
            not record.title.strip()
            or record.year is None
            or not (start <= record.year <= end)
        )
        if incomplete:
            statuses[i] = ArticleStatus.DROPPED_INCOMPLETE
            decisions.append(
                DedupDecision(
                    kept_line=_line_of(i),
                    dropped_lines=(_line_of(i),),
                    rule=DedupRule.INCOMPLETE_FIELDS,
                )
            )
        else:
            statuses[i] = ArticleStatus.KEPT

    survivors = [i for i in range(len(records)) if statuses[i] is ArticleStatus.KEPT]
    normalized = {i: normalize_title(records[i].title) for i in survivors}

    # similar-title groups via union-find over pairs at or above the threshold
    parent = {i: i for i in survivors}

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for pos, i in enumerate(survivors):
        for j in survivors[pos + 1 :]:
            if title_similarity(normalized[i], normalized[j]) >= config.title_threshold:
                parent[find(j)] = find(i)

    groups: dict[int, list[int]] = {}
    for i in survivors:
        groups.setdefault(find(i), []).append(i)
    for members in groups.values():
        if len(members) < 2:
            continue
        winner = max(members, key=lambda i: (records[i].cites, -i))
        dropped = [i for i in members if i != winner]
        for i in dropped:
            statuses[i] = ArticleStatus.DROPPED_DUPLICATE
        decisions.append(
            DedupDecision(
                kept_line=_line_of(winner),
                dropped_lines=tuple(_line_of(i) for i in dropped),
                rule=DedupRule.SIMILAR_TITLE,
                similarity=min(
                    title_similarity(normalized[winner], normalized[i]) for i in dropped
                ),
            )
        )

    # cross-language suspects: same (year, cites), no shared title words
    alias = {normalize_title(k): normalize_title(v) for k, v in config.alias_map.items()}
    kept = [i for i in survivors if statuses[i] is ArticleStatus.KEPT]
    for pos, i in enumerate(kept):
        if statuses[i] is not ArticleStatus.KEPT:
            continue
        for j in kept[pos + 1 :]:
            if statuses[j] not in (ArticleStatus.KEPT, ArticleStatus.NEEDS_REVIEW):
                continue
            a, b = records[i], records[j]
            if (a.year, a.cites) != (b.year, b.cites):
                continue
            tokens_a, tokens_b = set(normalized[i].split()), set(normalized[j].split())
            if not tokens_a or not tokens_b or tokens_a & tokens_b:
                continue
            if alias.get(normalized[i]) == normalized[j]:
                statuses[i] = ArticleStatus.DROPPED_DUPLICATE
                decisions.append(
                    DedupDecision(_line_of(j), (_line_of(i),), DedupRule.CROSS_LANGUAGE_SUSPECT)
                )
                break  # i is gone; stop pairing it
            if alias.get(normalized[j]) == normalized[i]:
                statuses[j] = ArticleStatus.DROPPED_DUPLICATE
                decisions.append(
                    DedupDecision(_line_of(i), (_line_of(j),), DedupRule.CROSS_LANGUAGE_SUSPECT)
                )
                continue
            statuses[i] = ArticleStatus.NEEDS_REVIEW
            statuses[j] = ArticleStatus.NEEDS_REVIEW
            decisions.append(
                DedupDecision(min(_line_of(i), _line_of(j)), (), DedupRule.CROSS_LANGUAGE_SUSPECT)
            )

    restatused = [replace(r, status=statuses[i]) for i, r in enumerate(records)]
    counts = {status: 0 for status in ArticleStatus}
    for status in statuses.values():
        counts[status] += 1
    report = IngestReport(
        rows_read=len(records),
        rows_kept=counts[ArticleStatus.KEPT] + counts[ArticleStatus.NEEDS_REVIEW],
        rows_dropped_incomplete=counts[ArticleStatus.DROPPED_INCOMPLETE],
        rows_dropped_duplicate=counts[ArticleStatus.DROPPED_DUPLICATE],
        rows_flagged_review=counts[ArticleStatus.NEEDS_REVIEW],
        decisions=tuple(decisions),
    )
    return restatused, report


def build_corpus(
    journals: Sequence[JournalRecord],
    ibnp_totals: Mapping[str, int],
    records_by_journal: Mapping[str, Sequence[ArticleRecord]],
    window: Tuple[int, int],
) -> JournalCorpus:
    """Assemble a corpus from parsed pieces; fails loudly on dangling ids."""
    known = {j.journal_id for j in journals}
    for journal_id in records_by_journal:
        if journal_id not in known:
            raise UnknownJournal(journal_id)
    articles: list[ArticleRecord] = []
    for journal in journals:
        articles.extend(records_by_journal.get(journal.journal_id, ()))
    corpus = JournalCorpus(
        journals=tuple(journals),
        articles=tuple(articles),
        ibnp_totals=dict(ibnp_totals),
        window=window,
    )
    violations = validate_corpus(corpus)
    if violations:
        raise ValueError("invalid corpus: " + "; ".join(violations))
    return corpus


# --- corpus JSON -----------------------------------------------------------

_LIBRARY_ORDER = list(Library)


def corpus_to_json(corpus: JournalCorpus) -> str:
    """Serialize to the canonical single-document JSON form (deterministic bytes)."""
    doc = {
        "window": list(corpus.window),
        "journals": [
            {
                "journal_id": j.journal_id,
                "title": j.title,
                "area": j.area.value,
                "category": j.category.value,
                "memberships": [t.value for t in _LIBRARY_ORDER if t in j.memberships],
            }
            for j in corpus.journals
        ],
        "articles": [
            {
                "journal_id": a.journal_id,
                "title": a.title,
                "year": a.year,
                "cites": a.cites,
                "authors": a.authors,
                "publication": a.publication,
                "publisher": a.publisher,
                "url": a.url,
                "status": a.status.value,
            }
            for a in corpus.articles
        ],
        "ibnp_totals": {j.journal_id: corpus.ibnp_totals[j.journal_id] for j in corpus.journals},
    }
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


def corpus_from_json(content) -> JournalCorpus:
    doc = json.loads(_decode(content))
    journals = tuple(
        JournalRecord(
            journal_id=j["journal_id"],
            title=j["title"],
            area=Area(j["area"]),
            category=IbnpCategory(j["category"]),
            memberships=frozenset(Library(t) for t in j["memberships"]),
        )
        for j in doc["journals"]
    )
    articles = tuple(
        ArticleRecord(
            journal_id=a["journal_id"],
            title=a["title"],
            year=a["year"],
            cites=a["cites"],
            authors=a.get("authors", ""),
            publication=a.get("publication", ""),
            publisher=a.get("publisher", ""),
            url=a.get("url", ""),
            status=ArticleStatus(a["status"]),
        )
        for a in doc["articles"]
    )
    return JournalCorpus(
        journals=journals,
        articles=articles,
        ibnp_totals=dict(doc["ibnp_totals"]),
        window=tuple(doc["window"]),
    )
