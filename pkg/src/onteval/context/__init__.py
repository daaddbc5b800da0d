"""Application-based (context-level) evaluation."""

from .competency import CompetencyTask, ContextReport, TaskOutcome, load_suite, run_competency_suite
from .query import GraphPatternQuery, evaluate_query, parse_query, sorted_rows
from .rules import BUILTIN_RULES, Rule, load_rules, materialize_index, materialize_inferences, materialize_triples, parse_term

__all__ = [
    "BUILTIN_RULES",
    "CompetencyTask",
    "ContextReport",
    "GraphPatternQuery",
    "Rule",
    "TaskOutcome",
    "evaluate_query",
    "load_rules",
    "load_suite",
    "materialize_index",
    "materialize_inferences",
    "materialize_triples",
    "parse_query",
    "parse_term",
    "run_competency_suite",
    "sorted_rows",
]
