"""Corpus-level analyses: group comparisons, correlation matrices, the
citation factor analysis, and the two citation regressions.

Everything works on one knowledge area at a time and reads indicator values
through a named-variable registry so callers can pick columns by name.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Mapping, Optional, Sequence, Tuple

from .corpus import Area, IbnpCategory, JournalCorpus, Library, filter_by_area
from .errors import DomainError, NoGroups, TooFewJournals
from .indicators import (
    GroupSummary,
    IndicatorSet,
    corpus_indicator_sets,
    log10_shifted,
    summarize_group,
)
from .statkit import (
    FactorResult,
    HomogeneousGroups,
    RegressionResult,
    TestResult,
    anova_oneway,
    kruskal_wallis,
    ols_fit,
    pca_unrotated,
    spearman,
    tukey_groups,
)


class GroupDimension(str, Enum):
    BY_LIBRARY = "library"
    BY_CATEGORY = "category"


def _optional(value) -> Optional[float]:
    return None if value is None else float(value)


#: named per-journal variables; extractors return None where undefined
VARIABLES: Mapping[str, Callable[[IndicatorSet], Optional[float]]] = {
    "air_ibnp_log10": lambda s: log10_shifted(s.air_ibnp, "articles") if s.air_ibnp > 0 else None,
    "air_ga_log10": lambda s: log10_shifted(s.air_ga, "articles") if s.air_ga > 0 else None,
    "pi_ibnp": lambda s: float(s.pi_ibnp),
    "pi_ld": lambda s: float(s.pi_ld),
    "cr_ga_log10": lambda s: log10_shifted(s.cr_ga, "citations"),
    "ca_mean": lambda s: _optional(s.ca_mean),
    "ratio_ba": lambda s: _optional(s.visibility_ratio),
    "h": lambda s: float(s.h),
    "h_sc": lambda s: _optional(s.h_sc),
    "cpn": lambda s: _optional(s.cpn),
}

#: the size / indexation / citation columns the comparison tables report
DEFAULT_COMPARE_VARIABLES = ("air_ibnp_log10", "ratio_ba", "pi_ld", "cr_ga_log10", "ca_mean")

#: citation indicators entering the factor analysis, in reporting order
FACTOR_VARIABLES = ("h", "cr_ga_log10", "ca_mean")


@dataclass(frozen=True)
class ComparisonTable:
    dimension: GroupDimension
    area: Area
    rows: Tuple[GroupSummary, ...]
    tests: Mapping[str, TestResult]
    letters: Mapping[str, HomogeneousGroups]
    excluded: Tuple[Tuple[str, str], ...]
    method: str
    alpha: float


@dataclass(frozen=True)
class CorrelationMatrix:
    variables: Tuple[str, ...]
    r: Tuple[Tuple[float, ...], ...]
    significant: Tuple[Tuple[bool, ...], ...]
    n: Tuple[Tuple[int, ...], ...]
    alpha: float


def _extractor(name: str) -> Callable[[IndicatorSet], Optional[float]]:
    try:
        return VARIABLES[name]
    except KeyError:
        raise DomainError(f"unknown variable {name!r}; choose from {sorted(VARIABLES)}") from None


def _area_sets(
    corpus: JournalCorpus, area: Area, mean_mode: str
) -> list[Tuple[object, IndicatorSet]]:
    return corpus_indicator_sets(filter_by_area(corpus, area), mean_mode=mean_mode)


def compare_groups(
    corpus: JournalCorpus,
    area: Area,
    dimension: GroupDimension,
    variables: Sequence[str] = DEFAULT_COMPARE_VARIABLES,
    method: str = "anova",
    alpha: float = 0.05,
    mean_mode: str = "ratios",
) -> ComparisonTable:
    """Compare indicator variables across libraries or registry categories.

    Library groups overlap: a journal contributes to every library it belongs
    to. Groups below two journals are excluded and reported as such. Letters
    are always computed on the plain variable values, whichever omnibus test
    runs.
    """
    dimension = GroupDimension(dimension)
    if method not in ("anova", "kw"):
        raise DomainError(f"unknown method {method!r}; use 'anova' or 'kw'")
    pairs = _area_sets(corpus, area, mean_mode)

    grouped: list[Tuple[str, list[IndicatorSet]]] = []
    if dimension is GroupDimension.BY_LIBRARY:
        for tag in Library:
            members = [s for j, s in pairs if tag in j.memberships]
            grouped.append((tag.value, members))
    else:
        for category in IbnpCategory:
            members = [s for j, s in pairs if j.category is category]
            grouped.append((category.value, members))

    included = [(label, sets) for label, sets in grouped if len(sets) >= 2]
    excluded = tuple((label, f"n={len(sets)}") for label, sets in grouped if len(sets) < 2)
    if len(included) < 2:
        raise NoGroups("fewer than two groups with at least two journals")

    rows = tuple(summarize_group(sets, label) for label, sets in included)

    tests: dict[str, TestResult] = {}
    letters: dict[str, HomogeneousGroups] = {}
    for name in variables:
        extract = _extractor(name)
        labels: list[str] = []
        value_groups: list[list[float]] = []
        for label, sets in included:
            values = [v for v in (extract(s) for s in sets) if v is not None]
            if values:
                labels.append(label)
                value_groups.append(values)
        if len(value_groups) < 2:
            raise NoGroups(f"variable {name!r} is defined in fewer than two groups")
        if method == "anova":
            tests[name] = anova_oneway(value_groups, alpha)[0]
        else:
            tests[name] = kruskal_wallis(value_groups, alpha)
        letters[name] = tukey_groups(value_groups, alpha, labels)

    return ComparisonTable(
        dimension=dimension,
        area=area,
        rows=rows,
        tests=tests,
        letters=letters,
        excluded=excluded,
        method=method,
        alpha=alpha,
    )


def correlation_matrix(
    corpus: JournalCorpus,
    area: Area,
    variables: Sequence[str],
    alpha: float = 0.05,
    mean_mode: str = "ratios",
) -> CorrelationMatrix:
    """Pairwise rank correlations with pairwise deletion of undefined values."""
    names = tuple(variables)
    if len(names) < 2:
        raise DomainError("need at least two variables")
    sets = [s for _, s in _area_sets(corpus, area, mean_mode)]
    columns = {name: [_extractor(name)(s) for s in sets] for name in names}

    size = len(names)
    r = [[1.0] * size for _ in range(size)]
    significant = [[True] * size for _ in range(size)]
    counts = [[0] * size for _ in range(size)]
    for i, name in enumerate(names):
        counts[i][i] = sum(1 for v in columns[name] if v is not None)
    for i in range(size):
        for j in range(i + 1, size):
            xs, ys = [], []
            for a, b in zip(columns[names[i]], columns[names[j]]):
                if a is not None and b is not None:
                    xs.append(a)
                    ys.append(b)
            if len(xs) < 3:
                raise TooFewJournals(f"{names[i]} vs {names[j]}: only {len(xs)} journals")
            result = spearman(xs, ys, alpha)
            r[i][j] = r[j][i] = result.r
            significant[i][j] = significant[j][i] = result.significant
            counts[i][j] = counts[j][i] = result.n
    return CorrelationMatrix(
        variables=names,
        r=tuple(tuple(row) for row in r),
        significant=tuple(tuple(row) for row in significant),
        n=tuple(tuple(row) for row in counts),
        alpha=alpha,
    )


def citation_factor_analysis(
    corpus: JournalCorpus, area: Area, mean_mode: str = "ratios"
) -> FactorResult:
    """Unrotated principal components over the three citation indicators."""
    sets = [s for _, s in _area_sets(corpus, area, mean_mode)]
    extractors = [_extractor(name) for name in FACTOR_VARIABLES]
    rows = []
    for s in sets:
        values = [extract(s) for extract in extractors]
        if all(v is not None for v in values):
            rows.append(values)
    if len(rows) < 4:
        raise TooFewJournals(f"only {len(rows)} journals with all citation indicators")
    return pca_unrotated(rows)


def contributing_variables(
    result: FactorResult,
    loading_threshold: float = 0.7,
    communality_threshold: float = 0.80,
) -> Tuple[bool, ...]:
    """Flag variables whose loading and communality clear the usual cutoffs."""
    return tuple(
        abs(loading) > loading_threshold and communality > communality_threshold
        for loading, communality in zip(result.loadings, result.communalities)
    )


REGRESSION_PREDICTORS = ("air_ga_log10", "pi_ld")


def citation_regression(
    corpus: JournalCorpus,
    area: Area,
    response: str = "logcr",
    mean_mode: str = "ratios",
) -> RegressionResult:
    """Regress citations (log scale) or the h index on visible size and indexation."""
    if response not in ("logcr", "h"):
        raise DomainError(f"unknown response {response!r}; use 'logcr' or 'h'")
    sets = [s for _, s in _area_sets(corpus, area, mean_mode)]
    response_name = "cr_ga_log10" if response == "logcr" else "h"
    extractors = [_extractor(response_name)] + [_extractor(p) for p in REGRESSION_PREDICTORS]
    rows = []
    for s in sets:
        values = [extract(s) for extract in extractors]
        if all(v is not None for v in values):
            rows.append(values)
    if len(rows) < 5:
        raise TooFewJournals(f"only {len(rows)} journals with response and predictors")
    y = [row[0] for row in rows]
    x1 = [row[1] for row in rows]
    x2 = [row[2] for row in rows]
    return ols_fit(y, [x1, x2])


# --- serialization ----------------------------------------------------------


def _finite(value):
    if value is None:
        return None
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _dumps(doc) -> str:
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


def comparison_to_json(table: ComparisonTable) -> str:
    doc = {
        "dimension": table.dimension.value,
        "area": table.area.value,
        "method": table.method,
        "alpha": table.alpha,
        "variables": list(table.tests.keys()),
        "rows": [
            {
                "label": row.label,
                "n_journals": row.n_journals,
                "total_articles": row.total_articles,
                "total_articles_ga": row.total_articles_ga,
                "total_cites": row.total_cites,
                "mean_log10_cr": _finite(row.mean_log10_cr),
                "sd_log10_cr": _finite(row.sd_log10_cr),
                "mean_ca": _finite(row.mean_ca),
                "sd_ca": _finite(row.sd_ca),
                "mean_ratio_ba": _finite(row.mean_ratio_ba),
                "sd_ratio_ba": _finite(row.sd_ratio_ba),
                "mean_log10_air": _finite(row.mean_log10_air),
                "mean_pi_ld": _finite(row.mean_pi_ld),
            }
            for row in table.rows
        ],
        "tests": {
            name: {
                "method": test.method.value,
                "statistic": _finite(test.statistic),
                "df1": test.df1,
                "df2": test.df2,
                "p_value": test.p_value,
                "n": test.n,
            }
            for name, test in table.tests.items()
        },
        "letters": {
            name: {"labels": list(groups.labels), "letters": list(groups.letters)}
            for name, groups in table.letters.items()
        },
        "excluded": [[label, reason] for label, reason in table.excluded],
    }
    return _dumps(doc)


def correlation_to_json(matrix: CorrelationMatrix) -> str:
    return _dumps(
        {
            "variables": list(matrix.variables),
            "r": [list(row) for row in matrix.r],
            "significant": [list(row) for row in matrix.significant],
            "n": [list(row) for row in matrix.n],
            "alpha": matrix.alpha,
        }
    )


def factor_to_json(result: FactorResult, variables: Sequence[str] = FACTOR_VARIABLES) -> str:
    return _dumps(
        {
            "variables": list(variables),
            "eigenvalues": list(result.eigenvalues),
            "retained": result.retained,
            "loadings": list(result.loadings),
            "communalities": list(result.communalities),
            "variance_explained": result.variance_explained,
            "contributing": list(contributing_variables(result)),
        }
    )


def regression_to_json(result: RegressionResult, response: str) -> str:
    return _dumps(
        {
            "response": response,
            "predictors": list(REGRESSION_PREDICTORS),
            "coefficients": list(result.coefficients),
            "r2": _finite(result.r2),
            "r2_adjusted": _finite(result.r2_adjusted),
            "f": _finite(result.f_statistic),
            "f_p_value": result.f_p_value,
            "sequential_ss": list(result.sequential_ss),
            "residual_ss": result.residual_ss,
            "vif": [_finite(v) for v in result.vif],
            "n": result.n,
        }
    )
