"""Comparison of a candidate ontology with a benchmark (gold standard) ontology."""

from __future__ import annotations

from dataclasses import dataclass
from statistics import fmean

from .framework import Level, Method
from .lexicon import lexical_entities, normalize_text, surface_forms
from .rdf.graph import OntologyGraph
from .results import MetricResult
from .taxonomy import adjacency, ancestor_sets, topological_order

GS = Method.GOLD_STANDARD
DEFAULT_THRESHOLD = 0.8


def edit_distance(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def string_similarity(a: str, b: str) -> float:
    """1 - Levenshtein distance / longer length, on normalized text."""
    a, b = normalize_text(a), normalize_text(b)
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - edit_distance(a, b) / longest


@dataclass(frozen=True)
class MatchPair:
    candidate: str
    gold: str
    similarity: float
    matched_label_pair: tuple[str, str]


@dataclass(frozen=True)
class Alignment:
    pairs: tuple[MatchPair, ...]
    threshold: float
    unmatched_candidate: frozenset[str]
    unmatched_gold: frozenset[str]

    def mapping(self) -> dict[str, str]:
        return {p.candidate: p.gold for p in self.pairs}


def _best_label_pair(forms_a: list[str], forms_b: list[str], floor: float = 0.0) -> tuple[float, tuple[str, str]]:
    best = (-1.0, ("", ""))
    for fa in forms_a:
        for fb in forms_b:
            longest = max(len(fa), len(fb))
            # length difference alone bounds the similarity from above
            if longest and 1.0 - abs(len(fa) - len(fb)) / longest < floor:
                continue
            sim = string_similarity(fa, fb)
            if sim > best[0] or (sim == best[0] and (fa, fb) < best[1]):
                best = (sim, (fa, fb))
    return best


def align_lexicon(candidate: OntologyGraph, gold: OntologyGraph, threshold: float = DEFAULT_THRESHOLD) -> Alignment:
    """Greedy one-to-one label matching, best similarity first.

    Ties are broken by (candidate IRI, gold IRI). Unlabeled entities take
    part through their local names.
    """
    if not 0 < threshold <= 1:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    cand_entities = lexical_entities(candidate)
    gold_entities = lexical_entities(gold)
    cand_forms = {e: surface_forms(candidate, e) for e in cand_entities}
    gold_forms = {e: surface_forms(gold, e) for e in gold_entities}

    scored: list[tuple[float, str, str, tuple[str, str]]] = []
    for c in cand_entities:
        for g in gold_entities:
            sim, labels = _best_label_pair(cand_forms[c], gold_forms[g], threshold)
            if sim >= threshold:
                scored.append((sim, c, g, labels))
    scored.sort(key=lambda x: (-x[0], x[1], x[2]))

    used_c: set[str] = set()
    used_g: set[str] = set()
    pairs = []
    for sim, c, g, labels in scored:
        if c in used_c or g in used_g:
            continue
        used_c.add(c)
        used_g.add(g)
        pairs.append(MatchPair(c, g, sim, labels))
    return Alignment(
        tuple(pairs),
        threshold,
        frozenset(cand_entities) - used_c,
        frozenset(gold_entities) - used_g,
    )


def lexical_precision_recall(
    alignment: Alignment, candidate_count: int, gold_count: int
) -> tuple[MetricResult, MetricResult, MetricResult]:
    n = len(alignment.pairs)
    if candidate_count < n or gold_count < n:
        raise ValueError("entity counts must be at least the number of matched pairs")
    precision = n / candidate_count if candidate_count else 0.0
    recall = n / gold_count if gold_count else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    prov = f"{n} matched pairs, {candidate_count} candidate and {gold_count} gold entities, threshold {alignment.threshold}"
    return (
        MetricResult("lexical_precision", precision, Level.LEXICAL, GS, prov),
        MetricResult("lexical_recall", recall, Level.LEXICAL, GS, prov),
        MetricResult("lexical_f1", f1, Level.LEXICAL, GS, prov),
    )


def compare_lexicon(candidate: OntologyGraph, gold: OntologyGraph, threshold: float = DEFAULT_THRESHOLD):
    alignment = align_lexicon(candidate, gold, threshold)
    scores = lexical_precision_recall(
        alignment, len(lexical_entities(candidate)), len(lexical_entities(gold))
    )
    return alignment, scores


def _ancestors(g: OntologyGraph) -> dict[str, frozenset[str]]:
    adj = adjacency(g.subclass_edges)
    topological_order(adj)
    return ancestor_sets(adj)


def taxonomic_overlap(candidate: OntologyGraph, gold: OntologyGraph, alignment: Alignment) -> MetricResult:
    """Mean Jaccard agreement of aligned entities' ancestor sets.

    Candidate ancestors are translated through the alignment; ones without a
    counterpart stay distinct so they count against the overlap.
    """
    cand_anc = _ancestors(candidate)
    gold_anc = _ancestors(gold)
    mapping = alignment.mapping()
    scores = []
    for pair in alignment.pairs:
        image = {("gold", mapping[a]) if a in mapping else ("candidate", a) for a in cand_anc.get(pair.candidate, ())}
        target = {("gold", a) for a in gold_anc.get(pair.gold, ())}
        union = image | target
        scores.append(len(image & target) / len(union) if union else 1.0)
    value = fmean(scores) if scores else 0.0
    notes = () if scores else ("no aligned pairs",)
    return MetricResult(
        "taxonomic_overlap",
        value,
        Level.HIERARCHY,
        GS,
        f"mean ancestor-set Jaccard over {len(scores)} aligned pairs",
        notes=notes,
    )
