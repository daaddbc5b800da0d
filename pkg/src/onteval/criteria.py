"""Criteria-based measures: consistency, conciseness, completeness, expert scores."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from statistics import fmean
from typing import Iterable, Sequence

from .errors import EmptyReferenceError, ValidationError
from .framework import Level, Method
from .lexicon import lexical_entities, normalize_text, surface_forms
from .rdf.graph import OntologyGraph
from .rdf.ntriples import format_triple
from .rdf.terms import RDFS_LABEL, Literal, TripleSet, is_builtin
from .results import Finding, FindingKind, MetricResult, count_result
from .taxonomy import adjacency, ancestor_sets, cycles, topological_order

CB = Method.CRITERIA_BASED

CONSISTENCY_METRICS = ("circularity_errors", "partition_errors", "semantic_inconsistency_errors")
CONCISENESS_METRICS = ("redundancy_errors", "grammatical_redundancy_errors", "identical_definitions")


def _subclass_adjacency(g: OntologyGraph) -> dict[str, set[str]]:
    adj = adjacency(g.subclass_edges)
    for c in g.classes:
        adj.setdefault(c, set())
    return adj


def _upward(g: OntologyGraph, ancestors: dict[str, frozenset[str]], cls: str) -> frozenset[str]:
    return ancestors.get(cls, frozenset()) | {cls}


def _instance_types(g: OntologyGraph, ancestors) -> dict[str, frozenset[str]]:
    return {
        inst: frozenset().union(*(_upward(g, ancestors, t) for t in types))
        for inst, types in g.asserted_types.items()
    }


def circularity_errors(g: OntologyGraph, level: Level = Level.HIERARCHY) -> MetricResult:
    findings = [
        Finding(FindingKind.CIRCULARITY_ERROR, tuple(comp), "subclass cycle through " + ", ".join(comp))
        for comp in cycles(_subclass_adjacency(g))
    ]
    return count_result("circularity_errors", findings, level, CB, "consistency: cycles in the subclass hierarchy")


def _partition_hits(entity: str, up: frozenset[str], partners) -> list[tuple[str, str]]:
    hits = set()
    for b in up:
        for c in partners.get(b, ()):
            if c in up:
                hits.add((b, c) if b < c else (c, b))
    return sorted(hits)


def partition_errors(g: OntologyGraph, level: Level = Level.HIERARCHY) -> MetricResult:
    """Entities placed under both members of a disjoint pair.

    Classes are checked against their reflexive-transitive superclasses,
    instances against every inherited type.
    """
    ancestors = ancestor_sets(_subclass_adjacency(g))
    partners = g.disjoint_partners
    findings = []
    for cls in sorted(g.classes):
        for b, c in _partition_hits(cls, _upward(g, ancestors, cls), partners):
            findings.append(Finding(FindingKind.PARTITION_ERROR, (cls, b, c), f"class is a subclass of disjoint {b} and {c}"))
    for inst, types in sorted(_instance_types(g, ancestors).items()):
        for b, c in _partition_hits(inst, types, partners):
            findings.append(Finding(FindingKind.PARTITION_ERROR, (inst, b, c), f"instance has disjoint types {b} and {c}"))
    return count_result("partition_errors", findings, level, CB, "consistency: entities under both sides of a disjointness axiom")


def semantic_inconsistency_errors(g: OntologyGraph, level: Level = Level.SEMANTIC_RELATIONS) -> MetricResult:
    """Property uses whose subject (object) is typed disjoint from a declared domain (range).

    Disjointness is inherited downward through the hierarchy; nodes without
    a type are never flagged.
    """
    ancestors = ancestor_sets(_subclass_adjacency(g))
    partners = g.disjoint_partners
    types = _instance_types(g, ancestors)
    excluded_by: dict[str, frozenset[str]] = {}

    def excluded(cls: str) -> frozenset[str]:
        if cls not in excluded_by:
            acc: set[str] = set()
            for a in _upward(g, ancestors, cls):
                acc |= partners.get(a, frozenset())
            excluded_by[cls] = frozenset(acc)
        return excluded_by[cls]

    def conflict(node, declared: frozenset[str]) -> list[tuple[str, str]]:
        node_types = types.get(node) if isinstance(node, str) else None
        if not node_types:
            return []
        out = []
        for d in sorted(declared):
            clash = excluded(d) & node_types
            if clash:
                out.append((d, min(clash)))
        return out

    findings = []
    constrained = set(g.domains) | set(g.ranges)
    for t in sorted((t for t in g.triples if t.predicate in constrained), key=format_triple):
        s, p, o = t
        parts = [f"domain {d} disjoint with type {c} of subject" for d, c in conflict(s, g.domains.get(p, frozenset()))]
        if not isinstance(o, Literal):
            parts += [f"range {r} disjoint with type {c} of object" for r, c in conflict(o, g.ranges.get(p, frozenset()))]
        if parts:
            subjects = (s, p) if isinstance(o, Literal) else (s, p, o)
            findings.append(Finding(FindingKind.SEMANTIC_INCONSISTENCY_ERROR, subjects, "; ".join(parts)))
    return count_result(
        "semantic_inconsistency_errors", findings, level, CB, "consistency: domain/range conflicts with disjoint types"
    )


def redundancy_errors(g: OntologyGraph, level: Level = Level.HIERARCHY) -> MetricResult:
    """Asserted subclass edges and type assertions already implied by others.

    Raises CyclicGraphError on a cyclic hierarchy.
    """
    adj = _subclass_adjacency(g)
    topological_order(adj)
    ancestors = ancestor_sets(adj)
    parents = g.parents
    findings = []
    for a, c in sorted(g.subclass_edges):
        via = sorted(b for b in parents.get(a, ()) if b != c and c in ancestors.get(b, ()))
        if via:
            findings.append(Finding(FindingKind.REDUNDANCY_ERROR, (a, c), f"subclass edge implied via {via[0]}"))
    for inst, asserted in sorted(g.asserted_types.items()):
        for t in sorted(asserted):
            via = sorted(u for u in asserted if u != t and t in ancestors.get(u, ()))
            if via:
                findings.append(Finding(FindingKind.REDUNDANCY_ERROR, (inst, t), f"type assertion implied via {via[0]}"))
    return count_result("redundancy_errors", findings, level, CB, "conciseness: assertions implied by subclass paths")


def grammatical_redundancy_errors(
    sources: Sequence[TripleSet], level: Level = Level.SEMANTIC_RELATIONS
) -> MetricResult:
    """Triples asserted in more than one source, and labels that collide after normalization."""
    occurrences: Counter = Counter()
    for ts in sources:
        occurrences.update(ts.triples)
    findings = []
    for t in sorted((t for t, n in occurrences.items() if n > 1), key=format_triple):
        subjects = (t.subject, t.predicate) + ((t.object,) if isinstance(t.object, str) else ())
        findings.append(
            Finding(FindingKind.GRAMMATICAL_REDUNDANCY_ERROR, subjects, f"asserted in {occurrences[t]} sources: {format_triple(t)}")
        )
    groups: dict[tuple[str, str, str], set[str]] = defaultdict(set)
    for t in occurrences:
        if t.predicate == RDFS_LABEL and isinstance(t.object, Literal):
            lit = t.object
            groups[(t.subject, lit.language or "", normalize_text(lit.lexical))].add(lit.lexical)
    for (entity, lang, norm), variants in sorted(groups.items()):
        if len(variants) > 1:
            shown = ", ".join(repr(v) for v in sorted(variants))
            findings.append(
                Finding(
                    FindingKind.GRAMMATICAL_REDUNDANCY_ERROR,
                    (entity,),
                    f"labels {shown} collide as {norm!r}" + (f" (@{lang})" if lang else ""),
                )
            )
    return count_result(
        "grammatical_redundancy_errors", findings, level, CB, "conciseness: duplicated assertions and colliding labels"
    )


def class_signature(g: OntologyGraph, cls: str, properties_by_domain) -> tuple[frozenset, frozenset, frozenset]:
    return (
        g.parents.get(cls, frozenset()),
        properties_by_domain.get(cls, frozenset()),
        g.disjoint_partners.get(cls, frozenset()),
    )


def identical_definitions(g: OntologyGraph, level: Level = Level.SEMANTIC_RELATIONS) -> MetricResult:
    """Class pairs with the same superclasses, domain-properties and disjointness partners."""
    by_domain: dict[str, set[str]] = defaultdict(set)
    for prop, doms in g.domains.items():
        for d in doms:
            by_domain[d].add(prop)
    by_domain_frozen = {k: frozenset(v) for k, v in by_domain.items()}
    groups: dict[tuple, list[str]] = defaultdict(list)
    for cls in sorted(g.classes):
        if not is_builtin(cls):
            groups[class_signature(g, cls, by_domain_frozen)].append(cls)
    pairs = sorted(pair for members in groups.values() for pair in combinations(members, 2))
    findings = [Finding(FindingKind.IDENTICAL_DEFINITION, pair, "identical formal definition") for pair in pairs]
    return count_result("identical_definitions", findings, level, CB, "conciseness: classes with indistinguishable definitions")


def completeness_coverage(
    g: OntologyGraph, expected_terms: Sequence[str], level: Level = Level.SEMANTIC_RELATIONS
) -> MetricResult:
    if not expected_terms:
        raise EmptyReferenceError("completeness needs at least one expected term")
    known = {form for e in lexical_entities(g) for form in surface_forms(g, e)}
    known |= {normalize_text(lit.lexical) for lits in g.labels.values() for lit in lits}
    expected = [normalize_text(t) for t in expected_terms]
    missing = sorted({t for t in expected if t not in known})
    matched = sum(1 for t in expected if t in known)
    notes = tuple(f"missing term: {t}" for t in missing)
    return MetricResult(
        "completeness_coverage",
        matched / len(expected),
        level,
        CB,
        "completeness: share of expected terms found among labels",
        notes=notes,
    )


class Criterion(str, Enum):
    CLARITY = "Clarity"
    COHERENCE = "Coherence"
    EXTENDIBILITY = "Extendibility"
    MINIMAL_ENCODING_BIAS = "MinimalEncodingBias"
    MINIMAL_ONTOLOGICAL_COMMITMENT = "MinimalOntologicalCommitment"
    CONCISENESS = "Conciseness"
    COMPLETENESS = "Completeness"
    SENSITIVENESS = "Sensitiveness"


CRITERION_LEVEL = {
    Criterion.CLARITY: Level.SEMANTIC_RELATIONS,
    Criterion.COHERENCE: Level.SEMANTIC_RELATIONS,
    Criterion.MINIMAL_ENCODING_BIAS: Level.SEMANTIC_RELATIONS,
    Criterion.CONCISENESS: Level.SEMANTIC_RELATIONS,
    Criterion.COMPLETENESS: Level.SEMANTIC_RELATIONS,
    Criterion.EXTENDIBILITY: Level.CONTEXT,
    Criterion.MINIMAL_ONTOLOGICAL_COMMITMENT: Level.CONTEXT,
    Criterion.SENSITIVENESS: Level.STRUCTURE_ARCHITECTURE_DESIGN,
}


@dataclass(frozen=True)
class ExpertScore:
    criterion: Criterion
    score: int
    assessor: str
    comment: str = ""

    @classmethod
    def from_dict(cls, d: dict, index: int = 0) -> "ExpertScore":
        if not isinstance(d, dict):
            raise ValidationError(f"expert score #{index}: expected an object")
        try:
            criterion = Criterion(d.get("criterion"))
        except ValueError:
            raise ValidationError(f"expert score #{index}: unknown criterion {d.get('criterion')!r}") from None
        score = ExpertScore(criterion, d.get("score"), d.get("assessor", ""), d.get("comment", "") or "")
        score.validate(index)
        return score

    def validate(self, index: int = 0):
        if isinstance(self.score, bool) or not isinstance(self.score, int) or not 1 <= self.score <= 5:
            raise ValidationError(f"expert score #{index} ({self.assessor or '?'}): score {self.score!r} is not an integer in 1-5")
        if not isinstance(self.assessor, str) or not self.assessor.strip():
            raise ValidationError(f"expert score #{index}: assessor is missing")
        if not isinstance(self.comment, str):
            raise ValidationError(f"expert score #{index}: comment must be text")


def ingest_expert_scores(scores: Iterable[ExpertScore]) -> list[MetricResult]:
    scores = list(scores)
    for i, s in enumerate(scores):
        if not isinstance(s.criterion, Criterion):
            raise ValidationError(f"expert score #{i}: unknown criterion {s.criterion!r}")
        s.validate(i)
    by_criterion: dict[Criterion, list[ExpertScore]] = defaultdict(list)
    for s in scores:
        by_criterion[s.criterion].append(s)
    results = []
    for criterion in Criterion:
        group = by_criterion.get(criterion)
        if not group:
            continue
        notes = tuple(f"{s.assessor} ({s.score}): {s.comment}" if s.comment else f"{s.assessor} ({s.score})" for s in group)
        results.append(
            MetricResult(
                f"expert_{criterion.value}",
                fmean(s.score for s in group),
                CRITERION_LEVEL[criterion],
                CB,
                f"mean expert score over {len(group)} assessment(s)",
                notes=notes,
            )
        )
    return results


def aggregate_counts(results: Iterable[MetricResult], triple_count: int, level: Level) -> list[MetricResult]:
    """Consistency and conciseness totals plus per-1000-triples densities."""
    by_name = {r.metric_name: r for r in results}
    out = []
    for group, names in (("consistency", CONSISTENCY_METRICS), ("conciseness", CONCISENESS_METRICS)):
        present = [by_name[n] for n in names if n in by_name]
        if not present:
            continue
        total = sum(r.value for r in present)
        used = ", ".join(r.metric_name for r in present)
        out.append(MetricResult(f"{group}_error_count", total, level, CB, f"sum of {used}"))
        density = 1000.0 * total / triple_count if triple_count else 0.0
        out.append(MetricResult(f"{group}_errors_per_1000_triples", density, level, CB, f"sum of {used} per 1000 triples"))
    return out
