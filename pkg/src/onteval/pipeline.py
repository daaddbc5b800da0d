"""End-to-end evaluation run: purposes -> plan -> per-level methods -> report."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from . import __version__
from .config import RunConfig
from .context.competency import CompetencyTask, ContextReport, load_suite, run_competency_suite
from .context.rules import Rule, load_rules
from .corpus import Corpus, ingest_corpus, lexical_coverage, structural_fit
from .criteria import (
    CRITERION_LEVEL,
    ExpertScore,
    aggregate_counts,
    circularity_errors,
    completeness_coverage,
    grammatical_redundancy_errors,
    identical_definitions,
    ingest_expert_scores,
    partition_errors,
    redundancy_errors,
    semantic_inconsistency_errors,
)
from .errors import (
    ConfigError,
    CyclicGraphError,
    EmptyCorpusError,
    EmptyReferenceError,
    InputIOError,
    RDFSyntaxError,
    ValidationError,
)
from .framework import EvaluationPlan, Level, Method, build_plan, default_matrix
from .gold import Alignment, compare_lexicon, taxonomic_overlap
from .rdf.graph import OntologyGraph, build_ontology
from .rdf.terms import TripleSet
from .rdf.turtle import parse_rdf
from .report import LevelStatus, LevelSummary, Report, SkippedMethod
from .results import MetricResult
from .syntax import SyntacticReport, check_and_parse

NO_GOLD = "no gold standard available"
NO_CORPUS = "no corpus available"
NO_SUITE = "no competency suite available"
NO_EXPERT = "no expert scores available"
NOT_AUTOMATED = "no automated measure for this method at this level"
APPLICATION_AT_CONTEXT = "application-based evaluation runs once, at the Context level"
PARSE_FAILED = "ontology failed to parse"


class Skip(Exception):
    """Raised inside a dispatcher when a method cannot run; carries the reason."""


@dataclass
class _Inputs:
    """Everything read from disk, decoded and validated before evaluation starts."""

    ontology_texts: list[tuple[str, str, bytes]]  # (source, format, raw)
    digests: dict[str, str]
    gold: OntologyGraph | None = None
    corpus: Corpus | None = None
    rules: list[Rule] = field(default_factory=list)
    suite: list[CompetencyTask] | None = None
    expert: list[ExpertScore] | None = None
    expected_terms: list[str] | None = None


def _read(path: Path, what: str) -> bytes:
    try:
        return path.read_bytes()
    except OSError as exc:
        raise InputIOError(f"cannot read {what} {path}: {exc.strerror or exc}") from None


def _text(raw: bytes, path: Path, what: str) -> str:
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError:
        raise InputIOError(f"{what} {path} is not UTF-8") from None


def _digest(raw: bytes) -> str:
    return hashlib.sha256(raw).hexdigest()


def _load_inputs(cfg: RunConfig) -> _Inputs:
    digests: dict[str, str] = {}
    ontologies = []
    for ont in cfg.ontologies:
        raw = _read(ont.path, "ontology")
        digests[str(ont.path)] = _digest(raw)
        ontologies.append((str(ont.path), ont.format, raw))
    inputs = _Inputs(ontologies, digests)

    if cfg.gold_path is not None:
        raw = _read(cfg.gold_path, "gold standard")
        digests[str(cfg.gold_path)] = _digest(raw)
        try:
            ts = parse_rdf(_text(raw, cfg.gold_path, "gold standard"), cfg.gold_format or "ntriples", str(cfg.gold_path))
        except RDFSyntaxError as exc:
            raise ValidationError(f"gold standard {cfg.gold_path}: {exc}") from None
        inputs.gold = build_ontology(ts)

    if cfg.corpus_dir is not None:
        if not cfg.corpus_dir.is_dir():
            raise InputIOError(f"corpus directory {cfg.corpus_dir} does not exist")
        docs = []
        for p in sorted(cfg.corpus_dir.iterdir()):
            if p.is_file() and p.suffix == ".txt":
                raw = _read(p, "corpus document")
                digests[str(p)] = _digest(raw)
                docs.append((p.name, _text(raw, p, "corpus document")))
        inputs.corpus = ingest_corpus(docs)

    if cfg.rules_path is not None:
        raw = _read(cfg.rules_path, "rules file")
        digests[str(cfg.rules_path)] = _digest(raw)
        try:
            inputs.rules = load_rules(_text(raw, cfg.rules_path, "rules file"))
        except (RDFSyntaxError, ValueError) as exc:
            raise ValidationError(f"rules file {cfg.rules_path}: {exc}") from None

    if cfg.suite_path is not None:
        raw = _read(cfg.suite_path, "competency suite")
        digests[str(cfg.suite_path)] = _digest(raw)
        try:
            inputs.suite = load_suite(_text(raw, cfg.suite_path, "competency suite"))
        except RDFSyntaxError as exc:
            raise ValidationError(f"competency suite {cfg.suite_path}: {exc}") from None

    if cfg.expert_scores_path is not None:
        raw = _read(cfg.expert_scores_path, "expert scores")
        digests[str(cfg.expert_scores_path)] = _digest(raw)
        try:
            data = json.loads(_text(raw, cfg.expert_scores_path, "expert scores"))
        except json.JSONDecodeError as exc:
            raise ValidationError(f"expert scores {cfg.expert_scores_path}: invalid JSON: {exc}") from None
        if not isinstance(data, list):
            raise ValidationError(f"expert scores {cfg.expert_scores_path}: expected a JSON array")
        inputs.expert = [ExpertScore.from_dict(d, i) for i, d in enumerate(data)]

    if cfg.expected_terms_path is not None:
        raw = _read(cfg.expected_terms_path, "expected terms")
        digests[str(cfg.expected_terms_path)] = _digest(raw)
        lines = _text(raw, cfg.expected_terms_path, "expected terms").splitlines()
        inputs.expected_terms = [ln.strip() for ln in lines if ln.strip() and not ln.lstrip().startswith("#")]

    return inputs


class _Run:
    """Per-run state shared by the (level, method) dispatchers."""

    def __init__(
        self,
        cfg: RunConfig,
        inputs: _Inputs,
        plan: EvaluationPlan,
        sources: list[TripleSet],
        graph: OntologyGraph | None = None,
    ):
        self.cfg = cfg
        self.inputs = inputs
        self.plan = plan
        self.sources = sources
        if graph is None and sources:
            graph = build_ontology(sources[0].union(*sources[1:]))
        self.graph = graph
        self.triple_count = len(self.graph.index) if self.graph is not None else 0
        self.pairs = set(plan.selected_pairs())
        self.context: ContextReport | None = None
        self._alignment: Alignment | None = None
        self._alignment_scores: tuple[MetricResult, ...] = ()

    # shared helpers

    def need_gold(self) -> OntologyGraph:
        if self.inputs.gold is None:
            raise Skip(NO_GOLD)
        return self.inputs.gold

    def need_corpus(self) -> Corpus:
        if self.inputs.corpus is None:
            raise Skip(NO_CORPUS)
        return self.inputs.corpus

    def alignment(self) -> tuple[Alignment, tuple[MetricResult, ...]]:
        if self._alignment is None:
            self._alignment, self._alignment_scores = compare_lexicon(
                self.graph, self.need_gold(), self.cfg.thresholds.similarity
            )
        return self._alignment, self._alignment_scores

    def expert_for(self, level: Level) -> list[MetricResult]:
        if not self.inputs.expert:
            raise Skip(NO_EXPERT)
        relevant = [s for s in self.inputs.expert if CRITERION_LEVEL[s.criterion] is level]
        if not relevant:
            raise Skip(f"no expert scores for {level.value} criteria")
        return ingest_expert_scores(relevant)

    # dispatchers, one per (level, method)

    def lexical_gold(self) -> list[MetricResult]:
        return list(self.alignment()[1])

    def lexical_data(self) -> list[MetricResult]:
        try:
            return list(lexical_coverage(self.graph, self.need_corpus(), self.cfg.thresholds.term_k))
        except EmptyCorpusError as exc:
            raise Skip(str(exc)) from None

    def lexical_criteria(self) -> list[MetricResult]:
        if not self.inputs.expected_terms:
            raise Skip("no expected terms available")
        return [completeness_coverage(self.graph, self.inputs.expected_terms, Level.LEXICAL)]

    def hierarchy_criteria(self) -> list[MetricResult]:
        return self._taxonomy_measures(Level.HIERARCHY)

    def _taxonomy_measures(self, level: Level) -> list[MetricResult]:
        g = self.graph
        out = [circularity_errors(g, level), partition_errors(g, level)]
        try:
            out.append(redundancy_errors(g, level))
        except CyclicGraphError:
            pass  # circularity already reports the cycle
        return out

    def hierarchy_gold(self) -> list[MetricResult]:
        alignment, _ = self.alignment()
        try:
            return [taxonomic_overlap(self.graph, self.need_gold(), alignment)]
        except CyclicGraphError as exc:
            raise Skip(f"taxonomic overlap needs acyclic hierarchies: {exc}") from None

    def hierarchy_data(self) -> list[MetricResult]:
        try:
            return [structural_fit(self.graph, self.need_corpus(), self.cfg.thresholds.window)]
        except CyclicGraphError as exc:
            raise Skip(f"structural fit needs an acyclic hierarchy: {exc}") from None

    def relations_criteria(self) -> list[MetricResult]:
        g, level = self.graph, Level.SEMANTIC_RELATIONS
        out: list[MetricResult] = []
        # Taxonomy-based consistency measures report here unless Hierarchy owns them.
        if (Level.HIERARCHY, Method.CRITERIA_BASED) not in self.pairs:
            out += self._taxonomy_measures(level)
        out += [
            semantic_inconsistency_errors(g, level),
            grammatical_redundancy_errors(self.sources, level),
            identical_definitions(g, level),
        ]
        if self.inputs.expected_terms and (Level.LEXICAL, Method.CRITERIA_BASED) not in self.pairs:
            out.append(completeness_coverage(g, self.inputs.expected_terms, level))
        if self.inputs.expert:
            try:
                out += self.expert_for(level)
            except Skip:
                pass
        return out

    def context_application(self) -> list[MetricResult]:
        if self.inputs.suite is None:
            raise Skip(NO_SUITE)
        report = run_competency_suite(self.graph, self.inputs.rules, self.inputs.suite, self.cfg.thresholds.triple_cap)
        if not self.cfg.record_timings:
            report = report.without_timings()
        self.context = report
        passed = sum(t.passed for t in report.per_task)
        notes = ("empty competency suite",) if report.degenerate else tuple(
            f"{t.task_id}: {t.reason}" for t in report.per_task if not t.passed
        )
        return [
            MetricResult(
                "competency_pass_rate",
                report.pass_rate,
                Level.CONTEXT,
                Method.APPLICATION_BASED,
                f"{passed} of {len(report.per_task)} competency tasks answered correctly",
                notes=notes,
            )
        ]

    def expert_level(self, level: Level) -> Callable[[], list[MetricResult]]:
        return lambda: self.expert_for(level)

    def syntactic_criteria(self, syntactic: SyntacticReport) -> list[MetricResult]:
        errors = [i for i in syntactic.issues if i.severity.value == "Error"]
        warnings = [i for i in syntactic.issues if i.severity.value == "Warning"]
        return [
            MetricResult(
                "syntax_valid",
                1.0 if syntactic.parse_ok and not errors else 0.0,
                Level.SYNTACTIC,
                Method.CRITERIA_BASED,
                "every ontology file parses as RDF",
                notes=tuple(i.message for i in errors),
            ),
            MetricResult(
                "syntax_warnings",
                len(warnings),
                Level.SYNTACTIC,
                Method.CRITERIA_BASED,
                "referential hygiene warnings; details in the syntactic report",
                notes=tuple(sorted({i.code for i in warnings})),
            ),
        ]

    def dispatcher(self, level: Level, method: Method, syntactic: SyntacticReport):
        L, M = Level, Method
        table = {
            (L.LEXICAL, M.GOLD_STANDARD): self.lexical_gold,
            (L.LEXICAL, M.DATA_DRIVEN): self.lexical_data,
            (L.LEXICAL, M.CRITERIA_BASED): self.lexical_criteria,
            (L.HIERARCHY, M.GOLD_STANDARD): self.hierarchy_gold,
            (L.HIERARCHY, M.CRITERIA_BASED): self.hierarchy_criteria,
            (L.HIERARCHY, M.DATA_DRIVEN): self.hierarchy_data,
            (L.SEMANTIC_RELATIONS, M.CRITERIA_BASED): self.relations_criteria,
            (L.CONTEXT, M.APPLICATION_BASED): self.context_application,
            (L.CONTEXT, M.CRITERIA_BASED): self.expert_level(L.CONTEXT),
            (L.SYNTACTIC, M.CRITERIA_BASED): lambda: self.syntactic_criteria(syntactic),
            (L.STRUCTURE_ARCHITECTURE_DESIGN, M.CRITERIA_BASED): self.expert_level(L.STRUCTURE_ARCHITECTURE_DESIGN),
        }
        if (level, method) in table:
            return table[(level, method)]
        # A missing resource explains the skip better than the absent measure does.
        if method is M.GOLD_STANDARD and self.inputs.gold is None:
            reason = NO_GOLD
        elif method is M.DATA_DRIVEN and self.inputs.corpus is None:
            reason = NO_CORPUS
        elif method is M.APPLICATION_BASED:
            reason = APPLICATION_AT_CONTEXT
        else:
            reason = NOT_AUTOMATED

        def skipped():
            raise Skip(reason)

        return skipped


def _check_inputs_exist(cfg: RunConfig):
    for ont in cfg.ontologies:
        if not ont.path.is_file():
            raise InputIOError(f"ontology file {ont.path} does not exist")
    for name, path in cfg.optional_paths().items():
        if not path.exists():
            raise InputIOError(f"{name} {path} does not exist")


def prepare_plan(cfg: RunConfig) -> EvaluationPlan:
    """Steps 1-3: purposes, levels and methods. Raises ConfigError on a bad overlay."""
    matrix = default_matrix()
    if cfg.matrix_overlay is not None:
        try:
            matrix = matrix.with_overlay(cfg.matrix_overlay, cfg.matrix_overlay_source)
        except (ValueError, AttributeError, TypeError) as exc:
            raise ConfigError(f"matrix overlay: {exc}") from None
    return build_plan(cfg.purposes, cfg.resource_flags, cfg.exclusions, matrix, cfg.include_levels)


def _summarize(level: Level, results: list[MetricResult], skipped: list[SkippedMethod], run: _Run, syntactic: SyntacticReport):
    if not results:
        reasons = list(dict.fromkeys(s.reason for s in skipped if s.level is level))
        return LevelSummary(LevelStatus.SKIPPED, "; ".join(reasons) or NOT_AUTOMATED)
    has_findings = any(r.findings for r in results)
    if level is Level.SYNTACTIC:
        has_findings = has_findings or bool(syntactic.issues)
    if level is Level.CONTEXT and run.context is not None:
        has_findings = has_findings or any(not t.passed for t in run.context.per_task)
    return LevelSummary(LevelStatus.FINDINGS if has_findings else LevelStatus.PASS)


def run_pipeline(cfg: RunConfig, tool_version: str = __version__) -> Report:
    """Run every Selected (level, method) pair of the plan and assemble a report.

    All inputs are read and validated before any evaluation; a method whose
    inputs are missing is recorded as skipped with a reason. Output is
    deterministic for identical inputs (timings are dropped unless
    ``record_timings`` is set).
    """
    _check_inputs_exist(cfg)
    plan = prepare_plan(cfg)
    inputs = _load_inputs(cfg)

    reports = []
    sources: list[TripleSet] = []
    graphs: list[OntologyGraph] = []
    for source, fmt, raw in inputs.ontology_texts:
        rep, ts, g = check_and_parse(raw, fmt, source)
        reports.append(rep)
        if ts is not None:
            sources.append(ts)
            graphs.append(g)
    syntactic = SyntacticReport.merge(reports)
    parsed = syntactic.parse_ok

    run = _Run(cfg, inputs, plan, sources if parsed else [], graphs[0] if parsed and len(graphs) == 1 else None)
    results: list[MetricResult] = []
    skipped: list[SkippedMethod] = []
    for level, method in plan.selected_pairs():
        if not parsed and level is not Level.SYNTACTIC:
            skipped.append(SkippedMethod(level, method, PARSE_FAILED))
            continue
        try:
            results += run.dispatcher(level, method, syntactic)()
        except Skip as skip:
            skipped.append(SkippedMethod(level, method, str(skip)))
        except EmptyReferenceError as exc:
            skipped.append(SkippedMethod(level, method, str(exc)))

    for level in sorted(plan.selected_levels(), key=lambda lv: list(Level).index(lv)):
        level_results = [r for r in results if r.level is level]
        names = {r.metric_name for r in level_results}
        if level in (Level.HIERARCHY, Level.SEMANTIC_RELATIONS) and names & {
            "circularity_errors", "semantic_inconsistency_errors", "redundancy_errors", "identical_definitions"
        }:
            results += aggregate_counts(level_results, run.triple_count, level)

    summary = {
        level: _summarize(level, [r for r in results if r.level is level], skipped, run, syntactic)
        for level in sorted(plan.selected_levels(), key=lambda lv: list(Level).index(lv))
    }
    return Report(
        plan=plan,
        results=tuple(results),
        syntactic=syntactic,
        context=run.context,
        summary=summary,
        skipped=tuple(skipped),
        tool_version=tool_version,
        input_digests=dict(sorted(inputs.digests.items())),
        matrix_source=cfg.matrix_overlay_source,
    )
