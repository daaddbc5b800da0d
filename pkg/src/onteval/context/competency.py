"""Competency-question harness: does the ontology answer its decision-support tasks?"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from ..errors import OntEvalError, RDFSyntaxError, ValidationError
from ..rdf.graph import OntologyGraph
from ..rdf.ntriples import format_term
from ..rdf.terms import Variable
from .query import GraphPatternQuery, Row, evaluate_query, parse_query, row_key, sorted_rows
from ..rdf.index import TripleIndex
from .rules import DEFAULT_TRIPLE_CAP, Rule, materialize_index, parse_term


@dataclass(frozen=True)
class CompetencyTask:
    task_id: str
    description: str
    query_text: str
    expected_bindings: tuple[Mapping[str, str], ...]
    require_inference: bool = False
    prefixes: Mapping[str, str] = field(default_factory=dict)

    def parsed_query(self) -> GraphPatternQuery:
        return parse_query(self.query_text, self.prefixes)

    def expected_rows(self, q: GraphPatternQuery) -> set[Row]:
        rows = set()
        for binding in self.expected_bindings:
            if set(binding) != set(q.projected):
                raise ValidationError(
                    f"task {self.task_id!r}: expected row binds {sorted(binding)}, query projects {list(q.projected)}"
                )
            row = []
            for var in q.projected:
                term = parse_term(binding[var], self.prefixes)
                if isinstance(term, Variable):
                    raise ValidationError(f"task {self.task_id!r}: expected value for ?{var} is a variable")
                row.append(term)
            rows.add(tuple(row))
        return rows


@dataclass(frozen=True)
class TaskOutcome:
    task_id: str
    passed: bool
    actual_bindings: tuple[dict[str, str], ...]
    elapsed_ms: float | None = None
    reason: str = ""

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "passed": self.passed,
            "actual_bindings": [dict(b) for b in self.actual_bindings],
            "elapsed_ms": self.elapsed_ms,
            "reason": self.reason,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TaskOutcome":
        return cls(d["task_id"], d["passed"], tuple(dict(b) for b in d["actual_bindings"]), d.get("elapsed_ms"), d.get("reason", ""))


@dataclass(frozen=True)
class ContextReport:
    per_task: tuple[TaskOutcome, ...]
    pass_rate: float
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {
            "per_task": [t.to_dict() for t in self.per_task],
            "pass_rate": self.pass_rate,
            "degenerate": self.degenerate,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ContextReport":
        return cls(tuple(TaskOutcome.from_dict(t) for t in d["per_task"]), d["pass_rate"], d.get("degenerate", False))

    def without_timings(self) -> "ContextReport":
        return replace(self, per_task=tuple(replace(t, elapsed_ms=None) for t in self.per_task))


def _render_rows(q: GraphPatternQuery, rows) -> tuple[dict[str, str], ...]:
    return tuple({v: format_term(t) for v, t in zip(q.projected, row)} for row in sorted_rows(rows))


def run_competency_suite(
    g: OntologyGraph,
    rules: Sequence[Rule],
    suite: Sequence[CompetencyTask],
    triple_cap: int = DEFAULT_TRIPLE_CAP,
) -> ContextReport:
    """Run every task; errors become failed tasks, never abort the suite.

    Tasks with ``require_inference`` run over the materialized graph,
    the rest over the graph as given.
    """
    ids = [t.task_id for t in suite]
    if len(set(ids)) != len(ids):
        raise ValidationError("competency task ids must be unique")
    if not suite:
        return ContextReport((), 1.0, degenerate=True)

    materialized: TripleIndex | None = None
    materialize_error: str | None = None
    outcomes = []
    for task in suite:
        start = time.perf_counter()
        try:
            q = task.parsed_query()
            expected = task.expected_rows(q)
            target: OntologyGraph | TripleIndex = g
            if task.require_inference:
                if materialized is None and materialize_error is None:
                    try:
                        materialized = materialize_index(g, rules, triple_cap)
                    except OntEvalError as exc:
                        materialize_error = str(exc)
                if materialize_error is not None:
                    raise ValidationError(f"materialization failed: {materialize_error}")
                target = materialized
            actual = evaluate_query(target, q)
            passed = actual == expected
            reason = "" if passed else _diff(actual, expected)
            rendered = _render_rows(q, actual)
        except (OntEvalError, ValueError) as exc:
            passed, reason, rendered = False, f"{type(exc).__name__}: {exc}", ()
        elapsed = (time.perf_counter() - start) * 1000.0
        outcomes.append(TaskOutcome(task.task_id, passed, rendered, elapsed, reason))
    passed_count = sum(o.passed for o in outcomes)
    return ContextReport(tuple(outcomes), passed_count / len(outcomes))


def _diff(actual: set[Row], expected: set[Row]) -> str:
    missing = sorted(row_key(r) for r in expected - actual)
    extra = sorted(row_key(r) for r in actual - expected)
    parts = []
    if missing:
        parts.append("missing " + "; ".join(" ".join(r) for r in missing))
    if extra:
        parts.append("unexpected " + "; ".join(" ".join(r) for r in extra))
    return ", ".join(parts)


def task_from_dict(d: Mapping, prefixes: Mapping[str, str] | None = None) -> CompetencyTask:
    try:
        expected = d["expected_bindings"]
        if not isinstance(expected, list) or not all(isinstance(r, dict) for r in expected):
            raise ValidationError(f"task {d.get('task_id')!r}: expected_bindings must be a list of objects")
        return CompetencyTask(
            task_id=str(d["task_id"]),
            description=d.get("description", ""),
            query_text=d["query"],
            expected_bindings=tuple({k.lstrip("?$"): v for k, v in row.items()} for row in expected),
            require_inference=bool(d.get("require_inference", False)),
            prefixes=dict(prefixes or {}),
        )
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValidationError(f"malformed competency task record: {exc}") from None


def load_suite(text: str) -> list[CompetencyTask]:
    """Suite file: a JSON list of tasks, optionally wrapped as {"prefixes": {...}, "tasks": [...]}."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RDFSyntaxError(exc.lineno, exc.colno, f"invalid JSON: {exc.msg}") from None
    prefixes = None
    if isinstance(data, dict):
        prefixes = data.get("prefixes")
        data = data.get("tasks", [])
    if not isinstance(data, list):
        raise ValidationError("suite file must hold a JSON list of tasks")
    return [task_from_dict(d, prefixes) for d in data]
