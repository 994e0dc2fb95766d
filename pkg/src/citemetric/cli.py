"""Command-line front door: ingest, indicators, compare, correlate, factor,
regress, and classify, composed through the corpus JSON file.

Exit codes: 0 success, 1 data error (diagnostic on stderr), 2 usage error.
Outputs are written atomically (temp file plus rename), so a failing run
never leaves a partial file behind.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Tuple

from . import analysis, classify, indicators, ingest
from .corpus import Area, DEFAULT_WINDOW, filter_by_area
from .errors import CitemetricError, DomainError
from .ingest import DedupConfig


@dataclass(frozen=True)
class RunConfig:
    window: Tuple[int, int] = DEFAULT_WINDOW
    alpha: float = 0.05
    title_threshold: float = 0.92
    area_mean_mode: str = "ratios"
    quartile_mode: str = "empirical"

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 0.0 < self.title_threshold <= 1.0:
            raise DomainError(f"title threshold must lie in (0, 1], got {self.title_threshold}")
        if self.window[0] > self.window[1]:
            raise DomainError(f"window start exceeds end: {self.window}")


_AREAS = {"ciencias": Area.CIENCIAS, "sociales": Area.CIENCIAS_SOCIALES}
_MEAN_MODES = {"ratios": "ratios", "pooled": "pooled"}


def _parse_window(text: str) -> Tuple[int, int]:
    try:
        start, end = text.split(":")
        window = (int(start), int(end))
    except ValueError:
        raise DomainError(f"window must look like 2003:2007, got {text!r}") from None
    if window[0] > window[1]:
        raise DomainError(f"window start exceeds end: {text!r}")
    return window


def _write_atomic(path: str, data: bytes) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, temp_name = tempfile.mkstemp(dir=target.parent, prefix=target.name + ".")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(temp_name, target)
    except BaseException:
        if os.path.exists(temp_name):
            os.unlink(temp_name)
        raise


def _read_bytes(path: str) -> bytes:
    with open(path, "rb") as handle:
        return handle.read()


def _load_corpus(path: str):
    return ingest.corpus_from_json(_read_bytes(path))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="citemetric",
        description="Journal size, indexation and citation indicators with h-index classification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse registry and citation exports into a corpus JSON")
    p.add_argument("--registry", required=True)
    p.add_argument("--records-dir", required=True)
    p.add_argument("--alias")
    p.add_argument("--window", default="2003:2007")
    p.add_argument("--title-threshold", type=float, default=0.92)
    p.add_argument("--out", required=True)

    p = sub.add_parser("indicators", help="per-journal indicator table as CSV")
    p.add_argument("--corpus", required=True)
    p.add_argument("--area", required=True, choices=sorted(_AREAS))
    p.add_argument("--area-mean", default="ratios", choices=sorted(_MEAN_MODES))
    p.add_argument("--out", required=True)

    p = sub.add_parser("compare", help="compare indicators across libraries or categories")
    p.add_argument("--corpus", required=True)
    p.add_argument("--area", required=True, choices=sorted(_AREAS))
    p.add_argument("--by", required=True, choices=["library", "category"])
    p.add_argument("--method", default="anova", choices=["anova", "kw"])
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--vars", default=",".join(analysis.DEFAULT_COMPARE_VARIABLES))
    p.add_argument("--out", required=True)

    p = sub.add_parser("correlate", help="rank-correlation matrix over chosen variables")
    p.add_argument("--corpus", required=True)
    p.add_argument("--area", required=True, choices=sorted(_AREAS))
    p.add_argument("--vars", required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--out", required=True)

    p = sub.add_parser("factor", help="citation indicator factor analysis")
    p.add_argument("--corpus", required=True)
    p.add_argument("--area", required=True, choices=sorted(_AREAS))
    p.add_argument("--out", required=True)

    p = sub.add_parser("regress", help="citation regression on size and indexation")
    p.add_argument("--corpus", required=True)
    p.add_argument("--area", required=True, choices=sorted(_AREAS))
    p.add_argument("--response", default="logcr", choices=["logcr", "h"])
    p.add_argument("--out", required=True)

    p = sub.add_parser("classify", help="h-ranked quartile classification table")
    p.add_argument("--corpus", required=True)
    p.add_argument("--area", choices=sorted(_AREAS))
    p.add_argument("--quartile-mode", default="empirical", choices=["empirical", "fixed"])
    p.add_argument("--area-mean", default="ratios", choices=sorted(_MEAN_MODES))
    p.add_argument("--top", type=int)
    p.add_argument("--format", default="csv", choices=["csv", "json", "md"])
    p.add_argument("--out", required=True)

    return parser


def _run_ingest(args) -> None:
    config = RunConfig(window=_parse_window(args.window), title_threshold=args.title_threshold)
    journals, totals = ingest.parse_registry(_read_bytes(args.registry))
    alias_map = ingest.parse_alias_file(_read_bytes(args.alias)) if args.alias else {}
    dedup_config = DedupConfig(
        window=config.window,
        title_threshold=config.title_threshold,
        alias_map=alias_map,
    )

    records_dir = Path(args.records_dir)
    if not records_dir.is_dir():
        raise DomainError(f"records directory not found: {records_dir}")
    records_by_journal = {}
    for path in sorted(records_dir.glob("*.csv")):
        journal_id = path.stem
        records = ingest.parse_citation_export(_read_bytes(str(path)), journal_id)
        cleaned, _report = ingest.deduplicate(records, dedup_config)
        records_by_journal[journal_id] = cleaned
    corpus = ingest.build_corpus(journals, totals, records_by_journal, config.window)
    _write_atomic(args.out, ingest.corpus_to_json(corpus).encode("utf-8"))


def _run_indicators(args) -> None:
    corpus = _load_corpus(args.corpus)
    area_corpus = filter_by_area(corpus, _AREAS[args.area])
    pairs = indicators.corpus_indicator_sets(area_corpus, mean_mode=_MEAN_MODES[args.area_mean])
    _write_atomic(args.out, indicators.indicators_csv(pairs).encode("utf-8"))


def _run_compare(args) -> None:
    table = analysis.compare_groups(
        _load_corpus(args.corpus),
        _AREAS[args.area],
        analysis.GroupDimension(args.by),
        variables=[v for v in args.vars.split(",") if v],
        method=args.method,
        alpha=args.alpha,
    )
    _write_atomic(args.out, analysis.comparison_to_json(table).encode("utf-8"))


def _run_correlate(args) -> None:
    matrix = analysis.correlation_matrix(
        _load_corpus(args.corpus),
        _AREAS[args.area],
        variables=[v for v in args.vars.split(",") if v],
        alpha=args.alpha,
    )
    _write_atomic(args.out, analysis.correlation_to_json(matrix).encode("utf-8"))


def _run_factor(args) -> None:
    result = analysis.citation_factor_analysis(_load_corpus(args.corpus), _AREAS[args.area])
    _write_atomic(args.out, analysis.factor_to_json(result).encode("utf-8"))


def _run_regress(args) -> None:
    result = analysis.citation_regression(
        _load_corpus(args.corpus), _AREAS[args.area], response=args.response
    )
    _write_atomic(args.out, analysis.regression_to_json(result, args.response).encode("utf-8"))


def _run_classify(args) -> None:
    corpus = _load_corpus(args.corpus)
    if args.area:
        corpus = filter_by_area(corpus, _AREAS[args.area])
    pairs = indicators.corpus_indicator_sets(corpus, mean_mode=_MEAN_MODES[args.area_mean])
    rows = classify.rank_journals(pairs)
    if args.quartile_mode == "fixed":
        bounds = classify.FIXED_BOUNDS
    else:
        bounds = classify.empirical_bounds(rows)
    rows = classify.assign_quartiles(rows, bounds)
    _write_atomic(args.out, classify.emit_report(rows, args.format, top_quartiles=args.top))


_COMMANDS = {
    "ingest": _run_ingest,
    "indicators": _run_indicators,
    "compare": _run_compare,
    "correlate": _run_correlate,
    "factor": _run_factor,
    "regress": _run_regress,
    "classify": _run_classify,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _COMMANDS[args.command](args)
    except (CitemetricError, ValueError, OSError) as error:
        print(f"citemetric {args.command}: {error}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
