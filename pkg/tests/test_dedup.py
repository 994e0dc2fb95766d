import random

import pytest
from hypothesis import given, strategies as st

from citemetric.corpus import ArticleRecord, ArticleStatus
from citemetric.errors import MixedJournal
from citemetric.ingest import (
    DedupConfig,
    DedupRule,
    deduplicate,
    levenshtein,
    normalize_title,
    title_similarity,
)

CONFIG = DedupConfig(window=(2003, 2007))


def _record(title, cites=0, year=2005, journal_id="j1"):
    return ArticleRecord(journal_id=journal_id, title=title, year=year, cites=cites)


def test_punctuation_variant_collapses_keeping_higher_cites():
    records = [_record("Efecto del clima", cites=5), _record("Efecto del clima.", cites=3)]
    cleaned, report = deduplicate(records, CONFIG)
    assert cleaned[0].status is ArticleStatus.KEPT
    assert cleaned[1].status is ArticleStatus.DROPPED_DUPLICATE
    decision = [d for d in report.decisions if d.rule is DedupRule.SIMILAR_TITLE][0]
    assert decision.kept_line == 2
    assert decision.dropped_lines == (3,)
    assert decision.similarity == 1.0


def test_tied_cites_keep_the_earlier_row():
    records = [_record("Efecto del clima", cites=3), _record("Efecto del clima.", cites=3)]
    cleaned, _ = deduplicate(records, CONFIG)
    assert cleaned[0].status is ArticleStatus.KEPT
    assert cleaned[1].status is ArticleStatus.DROPPED_DUPLICATE


def test_empty_title_missing_year_and_out_of_window_are_incomplete():
    records = [
        _record("", cites=2),
        _record("Sin fecha", year=None),
        _record("Muy viejo", year=1998),
        _record("Valido", year=2003),
    ]
    cleaned, report = deduplicate(records, CONFIG)
    statuses = [r.status for r in cleaned]
    assert statuses[:3] == [ArticleStatus.DROPPED_INCOMPLETE] * 3
    assert statuses[3] is ArticleStatus.KEPT
    assert report.rows_dropped_incomplete == 3
    assert report.rows_kept == 1


def test_cross_language_pair_is_flagged_but_kept():
    records = [
        _record("Efecto del clima en café", cites=4, year=2005),
        _record("Climate effect on coffee", cites=4, year=2005),
    ]
    cleaned, report = deduplicate(records, CONFIG)
    assert cleaned[0].status is ArticleStatus.NEEDS_REVIEW
    assert cleaned[1].status is ArticleStatus.NEEDS_REVIEW
    assert report.rows_kept == 2  # flagged rows still count as kept
    assert report.rows_flagged_review == 2
    flag = [d for d in report.decisions if d.rule is DedupRule.CROSS_LANGUAGE_SUSPECT][0]
    assert flag.dropped_lines == ()


def test_alias_confirms_cross_language_duplicate():
    config = DedupConfig(
        window=(2003, 2007),
        alias_map={"Climate effect on coffee": "Efecto del clima en café"},
    )
    records = [
        _record("Efecto del clima en café", cites=4, year=2005),
        _record("Climate effect on coffee", cites=4, year=2005),
    ]
    cleaned, report = deduplicate(records, config)
    assert cleaned[0].status is ArticleStatus.KEPT
    assert cleaned[1].status is ArticleStatus.DROPPED_DUPLICATE
    assert report.rows_dropped_duplicate == 1


def test_shared_token_prevents_cross_language_flag():
    records = [
        _record("Estudio del clima andino", cites=2, year=2004),
        _record("Clima de la sabana", cites=2, year=2004),
    ]
    cleaned, _ = deduplicate(records, CONFIG)
    assert all(r.status is ArticleStatus.KEPT for r in cleaned)


def test_mixed_journal_batch_is_rejected():
    records = [_record("Uno"), _record("Dos", journal_id="j2")]
    with pytest.raises(MixedJournal):
        deduplicate(records, CONFIG)


def test_report_arithmetic_reconciles():
    records = [
        _record("Efecto del clima", cites=5),
        _record("Efecto del clima.", cites=3),
        _record("", cites=1),
        _record("Otro asunto distinto por completo", cites=2),
    ]
    _, report = deduplicate(records, CONFIG)
    assert report.rows_read == 4
    assert (
        report.rows_read
        == report.rows_kept + report.rows_dropped_incomplete + report.rows_dropped_duplicate
    )


WORDS = (
    "clima suelo fauna flora cuenca paramo manglar sabana bosque rio mar costa "
    "anden valle sierra llanura selva arrecife caverna nevado"
).split()


def _random_records(rng: random.Random) -> list[ArticleRecord]:
    records = []
    for _ in range(rng.randint(0, 25)):
        style = rng.random()
        if style < 0.15:
            title = ""  # incomplete
        else:
            title = " ".join(rng.sample(WORDS, rng.randint(1, 4)))
            if rng.random() < 0.3:
                title += rng.choice([".", ",", "!", "  "])
            if rng.random() < 0.2:
                title = title.upper()
        year = rng.choice([None, 1999, 2003, 2004, 2005, 2006, 2007, 2009])
        records.append(_record(title, cites=rng.randint(0, 20), year=year))
    return records


def test_dedup_idempotent_and_reconciled_on_random_inputs():
    rng = random.Random(20080801)
    for _ in range(200):
        records = _random_records(rng)
        cleaned, report = deduplicate(records, CONFIG)
        assert (
            report.rows_read
            == report.rows_kept + report.rows_dropped_incomplete + report.rows_dropped_duplicate
        )
        assert report.rows_flagged_review <= report.rows_kept
        survivors = [r for r in cleaned if r.status in (ArticleStatus.KEPT, ArticleStatus.NEEDS_REVIEW)]
        again, second_report = deduplicate(survivors, CONFIG)
        assert [r.status for r in again] == [r.status for r in survivors]
        assert second_report.rows_dropped_incomplete == 0
        assert second_report.rows_dropped_duplicate == 0


def test_dedup_is_deterministic():
    rng = random.Random(7)
    records = _random_records(rng)
    first = deduplicate(records, CONFIG)
    second = deduplicate(records, CONFIG)
    assert first == second


def test_levenshtein_basics():
    assert levenshtein("", "abc") == 3
    assert levenshtein("kitten", "sitting") == 3
    assert title_similarity("abcd", "abcd") == 1.0
    assert title_similarity("", "") == 1.0


def test_normalize_title_strips_accents_and_punctuation():
    assert normalize_title("  Efecto del CLIMA, en el páramo!  ") == "efecto del clima en el paramo"


@given(st.text(max_size=60))
def test_normalize_title_is_idempotent(text):
    once = normalize_title(text)
    assert normalize_title(once) == once


@given(st.text(alphabet="aáeéiíoóuúnÑ .,;", max_size=40))
def test_normalize_title_is_case_and_accent_insensitive(text):
    assert normalize_title(text.upper()) == normalize_title(text.lower())
