from citemetric.corpus import (
    Area,
    ArticleRecord,
    ArticleStatus,
    IbnpCategory,
    JournalCorpus,
    JournalRecord,
    Library,
    filter_by_area,
    validate_corpus,
)


def _journal(journal_id="j1", title="Revista Uno", area=Area.CIENCIAS, category=IbnpCategory.A2):
    return JournalRecord(
        journal_id=journal_id,
        title=title,
        area=area,
        category=category,
        memberships=frozenset({Library.GOOGLE_SCHOLAR}),
    )


def _article(journal_id="j1", title="Nota", year=2005, cites=1, status=ArticleStatus.KEPT):
    return ArticleRecord(journal_id=journal_id, title=title, year=year, cites=cites, status=status)


def test_single_journal_no_articles_is_valid():
    corpus = JournalCorpus(journals=(_journal(),), articles=(), ibnp_totals={"j1": 10})
    assert validate_corpus(corpus) == []


def test_empty_corpus_is_valid():
    corpus = JournalCorpus(journals=(), articles=(), ibnp_totals={})
    assert validate_corpus(corpus) == []


def test_unknown_journal_reference_is_reported():
    corpus = JournalCorpus(
        journals=(_journal(),),
        articles=(_article(journal_id="X9"),),
        ibnp_totals={"j1": 10},
    )
    violations = validate_corpus(corpus)
    assert len(violations) == 1
    assert "X9" in violations[0]


def test_duplicate_journal_id_is_reported():
    corpus = JournalCorpus(
        journals=(_journal(), _journal(title="Revista Dos")),
        articles=(),
        ibnp_totals={"j1": 10},
    )
    violations = validate_corpus(corpus)
    assert len(violations) == 1
    assert "j1" in violations[0]


def test_kept_article_needs_title_and_year_in_window():
    corpus = JournalCorpus(
        journals=(_journal(),),
        articles=(
            _article(title="  ", year=2005),
            _article(year=None),
            _article(year=1999),
            _article(year=2008, status=ArticleStatus.DROPPED_INCOMPLETE),
        ),
        ibnp_totals={"j1": 10},
    )
    violations = validate_corpus(corpus)
    assert len(violations) == 3  # the dropped record is exempt


def test_missing_ibnp_total_is_reported():
    corpus = JournalCorpus(journals=(_journal(),), articles=(), ibnp_totals={})
    assert any("ibnp_totals" in v for v in validate_corpus(corpus))


def _two_area_corpus():
    journals = (
        _journal("a1", "Ciencias Uno"),
        _journal("a2", "Ciencias Dos"),
        _journal("b1", "Sociales Uno", area=Area.CIENCIAS_SOCIALES),
    )
    articles = (_article("a1"), _article("b1"), _article("a2"))
    return JournalCorpus(
        journals=journals, articles=articles, ibnp_totals={"a1": 5, "a2": 5, "b1": 5}
    )


def test_filter_by_area_keeps_matching_journals_and_articles():
    corpus = _two_area_corpus()
    ciencias = filter_by_area(corpus, Area.CIENCIAS)
    assert ciencias.journal_ids() == ("a1", "a2")
    assert {a.journal_id for a in ciencias.articles} == {"a1", "a2"}
    assert set(ciencias.ibnp_totals) == {"a1", "a2"}
    assert ciencias.window == corpus.window


def test_filter_by_area_empty_result():
    corpus = JournalCorpus(journals=(_journal(),), articles=(), ibnp_totals={"j1": 1})
    sociales = filter_by_area(corpus, Area.CIENCIAS_SOCIALES)
    assert sociales.journals == ()
    assert sociales.articles == ()


def test_area_filters_partition_the_corpus():
    corpus = _two_area_corpus()
    ciencias = filter_by_area(corpus, Area.CIENCIAS)
    sociales = filter_by_area(corpus, Area.CIENCIAS_SOCIALES)
    assert set(ciencias.journal_ids()) | set(sociales.journal_ids()) == set(corpus.journal_ids())
    assert set(ciencias.journal_ids()) & set(sociales.journal_ids()) == set()


def test_filter_by_area_is_idempotent():
    corpus = _two_area_corpus()
    once = filter_by_area(corpus, Area.CIENCIAS)
    twice = filter_by_area(once, Area.CIENCIAS)
    assert once == twice
