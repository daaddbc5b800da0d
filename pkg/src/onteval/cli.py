"""Command-line interface.

Exit codes: 0 success, 1 findings of severity Error (including unparsable
ontologies), 2 usage or config error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .config import default_config_text, load_config
from .context.query import evaluate_query, parse_query, sorted_rows
from .context.rules import load_rules, materialize_inferences
from .corpus import DEFAULT_TOP_K, DEFAULT_WINDOW, extract_terms, lexical_coverage, load_corpus_dir, structural_fit
from .errors import (
    ConfigError,
    CyclicGraphError,
    DuplicateDocIdError,
    EmptyCorpusError,
    FixpointOverflowError,
    InputIOError,
    OntEvalError,
    PlanError,
    RDFSyntaxError,
    UnboundProjectionError,
    ValidationError,
)
from .gold import DEFAULT_THRESHOLD, compare_lexicon
from .pipeline import prepare_plan, run_pipeline
from .rdf.graph import OntologyGraph, build_ontology
from .rdf.ntriples import format_term
from .rdf.turtle import guess_format, parse_rdf
from .report import plan_table, plan_to_dict, render_report
from .syntax import Severity, check_syntax

EXIT_OK, EXIT_FINDINGS, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class _Failure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read_text(path: str, what: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError:
        raise _Failure(EXIT_FINDINGS, f"{what} {path} is not UTF-8") from None
    except OSError as exc:
        raise _Failure(EXIT_IO, f"cannot read {what} {path}: {exc.strerror or exc}") from None


def _load_graph(path: str, fmt: str | None, what: str = "ontology") -> OntologyGraph:
    text = _read_text(path, what)
    try:
        return build_ontology(parse_rdf(text, fmt or guess_format(path), path))
    except RDFSyntaxError as exc:
        raise _Failure(EXIT_FINDINGS, f"{what} {path}: {exc}") from None


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise _Failure(EXIT_IO, f"cannot write {path}: {exc.strerror or exc}") from None


def cmd_validate(args) -> int:
    try:
        raw = Path(args.file).read_bytes()
    except OSError as exc:
        raise _Failure(EXIT_IO, f"cannot read {args.file}: {exc.strerror or exc}") from None
    report = check_syntax(raw, args.format or guess_format(args.file), args.file)
    if args.json:
        _write(None, json.dumps(report.to_dict(), indent=2) + "\n")
    else:
        for issue in report.issues:
            print(f"{issue.severity.value.upper()} {issue.code}: {issue.message}")
        errors = sum(i.severity is Severity.ERROR for i in report.issues)
        print(f"{args.file}: {errors} error(s), {len(report.issues) - errors} warning(s)")
    return EXIT_FINDINGS if report.has_errors else EXIT_OK


def cmd_plan(args) -> int:
    plan = prepare_plan(load_config(args.config))
    if args.json:
        _write(None, json.dumps(plan_to_dict(plan), indent=2) + "\n")
    else:
        _write(None, "\n".join(plan_table(plan)) + "\n")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    report = run_pipeline(load_config(args.config))
    if args.out or not args.markdown:
        _write(args.out, render_report(report, "json"))
    if args.markdown:
        _write(args.markdown, render_report(report, "markdown"))
    return EXIT_FINDINGS if report.syntactic.has_errors else EXIT_OK


def cmd_compare(args) -> int:
    if not 0 < args.threshold <= 1:
        raise _Failure(EXIT_USAGE, "--threshold must be in (0, 1]")
    candidate = _load_graph(args.candidate, args.format, "candidate")
    gold = _load_graph(args.gold, args.format, "gold standard")
    alignment, scores = compare_lexicon(candidate, gold, args.threshold)
    out = {
        "threshold": args.threshold,
        "scores": {r.metric_name: r.value for r in scores},
        "pairs": [
            {"candidate": p.candidate, "gold": p.gold, "similarity": p.similarity, "labels": list(p.matched_label_pair)}
            for p in alignment.pairs
        ],
        "unmatched_candidate": sorted(alignment.unmatched_candidate),
        "unmatched_gold": sorted(alignment.unmatched_gold),
    }
    _write(None, json.dumps(out, indent=2, ensure_ascii=False) + "\n")
    return EXIT_OK


def cmd_corpus_fit(args) -> int:
    if args.top_k < 1 or args.window < 2:
        raise _Failure(EXIT_USAGE, "--top-k must be at least 1 and --window at least 2")
    g = _load_graph(args.ontology, args.format)
    if not Path(args.corpus).is_dir():
        raise _Failure(EXIT_IO, f"corpus directory {args.corpus} does not exist")
    try:
        corpus = load_corpus_dir(args.corpus)
    except UnicodeDecodeError as exc:
        raise _Failure(EXIT_FINDINGS, f"corpus document is not UTF-8: {exc}") from None
    except OSError as exc:
        raise _Failure(EXIT_IO, f"cannot read corpus {args.corpus}: {exc}") from None
    coverage, focus = lexical_coverage(g, corpus, args.top_k)
    fit = structural_fit(g, corpus, args.window)
    out = {
        "documents": len(corpus.documents),
        "tokens": corpus.total_tokens,
        "metrics": [r.to_dict() for r in (coverage, focus, fit)],
        "top_terms": [{"term": t, "score": s} for t, s in extract_terms(corpus, args.top_k).terms],
    }
    _write(None, json.dumps(out, indent=2, ensure_ascii=False) + "\n")
    return EXIT_OK


def cmd_query(args) -> int:
    g = _load_graph(args.ontology, args.format)
    try:
        q = parse_query(_read_text(args.query, "query"))
    except RDFSyntaxError as exc:
        raise _Failure(EXIT_USAGE, f"query {args.query}: {exc}") from None
    rules = []
    if args.rules:
        try:
            rules = load_rules(_read_text(args.rules, "rules file"))
        except (RDFSyntaxError, ValueError) as exc:
            raise _Failure(EXIT_USAGE, f"rules file {args.rules}: {exc}") from None
    if args.materialize or rules:
        g = materialize_inferences(g, rules, args.triple_cap)
    rows = sorted_rows(evaluate_query(g, q))
    if args.json:
        data = [{v: format_term(t) for v, t in zip(q.projected, row)} for row in rows]
        _write(None, json.dumps(data, indent=2, ensure_ascii=False) + "\n")
    else:
        print("\t".join("?" + v for v in q.projected))
        for row in rows:
            print("\t".join(format_term(t) for t in row))
    return EXIT_OK


def cmd_init(args) -> int:
    _write(args.out, default_config_text())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="onteval", description="Purpose-driven ontology evaluation.")
    parser.add_argument("--version", action="version", version=f"onteval {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    formats = ("ntriples", "turtle")

    p = sub.add_parser("validate", help="syntactic check of one ontology file")
    p.add_argument("file")
    p.add_argument("--format", choices=formats, help="default: guessed from the file extension")
    p.add_argument("--json", action="store_true", help="print the syntactic report as JSON")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("plan", help="print the evaluation plan for a config")
    p.add_argument("--config", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("evaluate", help="run the full evaluation pipeline")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="JSON report path (default: stdout)")
    p.add_argument("--markdown", help="also write a Markdown report")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare", help="lexical alignment against a gold standard")
    p.add_argument("--candidate", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p.add_argument("--format", choices=formats)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("corpus-fit", help="data-driven fit of an ontology to a text corpus")
    p.add_argument("--ontology", required=True)
    p.add_argument("--corpus", required=True, help="directory of .txt documents")
    p.add_argument("--top-k", type=int, default=DEFAULT_TOP_K)
    p.add_argument("--window", type=int, default=DEFAULT_WINDOW)
    p.add_argument("--format", choices=formats)
    p.set_defaults(func=cmd_corpus_fit)

    p = sub.add_parser("query", help="run a conjunctive SELECT query")
    p.add_argument("--ontology", required=True)
    p.add_argument("--query", required=True, help="file holding the query text")
    p.add_argument("--rules", help="JSON rules file; implies --materialize")
    p.add_argument("--materialize", action="store_true", help="apply the built-in rules before querying")
    p.add_argument("--triple-cap", type=int, default=1_000_000)
    p.add_argument("--format", choices=formats)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("init", help="emit a default config")
    p.add_argument("--out", help="write to a file instead of stdout")
    p.set_defaults(func=cmd_init)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Failure as exc:
        print(f"onteval: {exc}", file=sys.stderr)
        return exc.code
    except InputIOError as exc:
        print(f"onteval: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, PlanError, ValidationError, UnboundProjectionError, DuplicateDocIdError) as exc:
        print(f"onteval: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CyclicGraphError, EmptyCorpusError, FixpointOverflowError) as exc:
        print(f"onteval: {exc}", file=sys.stderr)
        return EXIT_FINDINGS
    except OntEvalError as exc:
        print(f"onteval: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
