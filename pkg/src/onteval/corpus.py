"""Data-driven evaluation against a document corpus."""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import DuplicateDocIdError, EmptyCorpusError
from .framework import Level, Method
from .lexicon import humanize_local_name, lexical_entities, term_key, tokenize
from .rdf.graph import OntologyGraph
from .results import MetricResult
from .taxonomy import adjacency, topological_order

DD = Method.DATA_DRIVEN
DEFAULT_WINDOW = 10
DEFAULT_TOP_K = 50

STOP_WORDS = frozenset(
    """a about after all also an and any are as at be been but by can for from had has have if in
    into is it its more no not of on or other so than that the their then there these they this to
    was were which will with""".split()
)
assert len(STOP_WORDS) == 50


def ngrams(tokens: Sequence[str]) -> list[str]:
    """Unigram and bigram terms of a token sequence."""
    return list(tokens) + [f"{a} {b}" for a, b in zip(tokens, tokens[1:])]


@dataclass(frozen=True)
class Corpus:
    documents: tuple[tuple[str, tuple[str, ...]], ...]
    term_frequencies: Mapping[str, int]
    document_frequencies: Mapping[str, int]
    total_tokens: int

    @property
    def vocabulary(self) -> frozenset[str]:
        return frozenset(self.term_frequencies)

    @cached_property
    def positions(self) -> list[dict[str, list[int]]]:
        """Per document: token -> sorted positions."""
        out = []
        for _, tokens in self.documents:
            index: dict[str, list[int]] = defaultdict(list)
            for i, tok in enumerate(tokens):
                index[tok].append(i)
            out.append(dict(index))
        return out


def ingest_corpus(docs: Iterable[tuple[str, str]]) -> Corpus:
    documents = []
    seen: set[str] = set()
    tf: Counter = Counter()
    df: Counter = Counter()
    total = 0
    for doc_id, text in docs:
        if doc_id in seen:
            raise DuplicateDocIdError(f"duplicate document id {doc_id!r}")
        seen.add(doc_id)
        tokens = tuple(tokenize(text))
        terms = ngrams(tokens)
        tf.update(terms)
        df.update(set(terms))
        total += len(tokens)
        documents.append((doc_id, tokens))
    return Corpus(tuple(documents), dict(tf), dict(df), total)


def load_corpus_dir(path: str | Path) -> Corpus:
    """Every ``*.txt`` file in a directory, doc id = file name."""
    root = Path(path)
    files = sorted(p for p in root.iterdir() if p.is_file() and p.suffix == ".txt")
    return ingest_corpus((p.name, p.read_text(encoding="utf-8")) for p in files)


@dataclass(frozen=True)
class TermRanking:
    terms: tuple[tuple[str, float], ...]
    scoring: str = "tfidf"

    def top(self) -> list[str]:
        return [t for t, _ in self.terms]


def tfidf(c: Corpus, term: str) -> float:
    return c.term_frequencies[term] * math.log(1 + len(c.documents) / c.document_frequencies[term])


def extract_terms(c: Corpus, k: int) -> TermRanking:
    """Top-k terms by tf * log(1 + N/df). Stop words are dropped as unigrams only."""
    if k < 1:
        raise ValueError("k must be at least 1")
    scored = [
        (term, tfidf(c, term))
        for term in c.term_frequencies
        if " " in term or term not in STOP_WORDS
    ]
    scored.sort(key=lambda x: (-x[1], x[0]))
    return TermRanking(tuple(scored[:k]), "tfidf: tf * log(1 + N/df)")


def label_keys(g: OntologyGraph) -> set[str]:
    """Token-normalized labels of every entity; unlabeled classes and instances use their local name."""
    keys = {term_key(lit.lexical) for lits in g.labels.values() for lit in lits}
    for e in lexical_entities(g):
        if not g.labels_of(e):
            keys.add(term_key(humanize_local_name(e)))
    keys.discard("")
    return keys


def lexical_coverage(g: OntologyGraph, c: Corpus, k: int = DEFAULT_TOP_K) -> tuple[MetricResult, MetricResult]:
    """Coverage: share of one- and two-word labels found in the corpus.
    Focus: share of the top-k corpus terms that some label matches."""
    if c.total_tokens == 0:
        raise EmptyCorpusError("corpus contains no tokens")
    keys = label_keys(g)
    eligible = sorted(key for key in keys if key.count(" ") <= 1)
    present = [key for key in eligible if key in c.term_frequencies]
    coverage = len(present) / len(eligible) if eligible else 0.0
    cov_notes = ["no one- or two-word labels"] if not eligible else [
        f"absent from corpus: {key}" for key in eligible if key not in c.term_frequencies
    ]

    top = extract_terms(c, k).top()
    matched = [t for t in top if t in keys]
    focus = len(matched) / len(top) if top else 0.0
    focus_notes = ["no extractable terms"] if not top else [f"unmatched corpus term: {t}" for t in top if t not in keys]
    return (
        MetricResult(
            "lexical_coverage", coverage, Level.LEXICAL, DD,
            f"{len(present)} of {len(eligible)} labels occur in {len(c.documents)} documents",
            notes=tuple(cov_notes),
        ),
        MetricResult(
            "lexical_focus", focus, Level.LEXICAL, DD,
            f"{len(matched)} of top {len(top)} tf-idf terms match a label",
            notes=tuple(focus_notes),
        ),
    )


def _occurrences(c: Corpus, doc: int, form: tuple[str, ...]) -> list[int]:
    index = c.positions[doc]
    tokens = c.documents[doc][1]
    n = len(form)
    return [
        i for i in index.get(form[0], ())
        if tokens[i : i + n] == form
    ]


def _cooccur(starts_a: list[int], len_a: int, starts_b: list[int], len_b: int, window: int) -> bool:
    for a in starts_a:
        lo = bisect_left(starts_b, a - window)
        hi = bisect_right(starts_b, a + window)
        for b in starts_b[lo:hi]:
            if max(a + len_a, b + len_b) - min(a, b) <= window:
                return True
    return False


def _forms(g: OntologyGraph, cls: str) -> list[tuple[str, ...]]:
    labels = g.labels_of(cls)
    texts = [lit.lexical for lit in labels] if labels else [humanize_local_name(cls)]
    return sorted({tuple(tokenize(t)) for t in texts} - {()})


def structural_fit(g: OntologyGraph, c: Corpus, window: int = DEFAULT_WINDOW) -> MetricResult:
    """Share of subclass edges whose two labels co-occur within a span of ``window`` tokens.

    Edges with a label absent from the corpus are left out; with no eligible
    edge the value is 1.0 and flagged degenerate.
    """
    if window < 2:
        raise ValueError("window must be at least 2")
    topological_order(adjacency(g.subclass_edges))
    occ_cache: dict[tuple[str, ...], list[list[int]]] = {}

    def occurrences(form):
        if form not in occ_cache:
            occ_cache[form] = [_occurrences(c, d, form) for d in range(len(c.documents))]
        return occ_cache[form]

    def present(cls):
        return any(per_doc for form in _forms(g, cls) for per_doc in occurrences(form))

    eligible = fitting = 0
    misses = []
    for child, parent in sorted(g.subclass_edges):
        if not (present(child) and present(parent)):
            continue
        eligible += 1
        hit = any(
            _cooccur(occurrences(fa)[d], len(fa), occurrences(fb)[d], len(fb), window)
            for fa in _forms(g, child)
            for fb in _forms(g, parent)
            for d in range(len(c.documents))
        )
        if hit:
            fitting += 1
        else:
            misses.append(f"no co-occurrence: {child} -> {parent}")
    if eligible == 0:
        return MetricResult(
            "structural_fit", 1.0, Level.HIERARCHY, DD,
            f"window {window}; no subclass edge has both labels in the corpus",
            notes=("degenerate",),
        )
    return MetricResult(
        "structural_fit", fitting / eligible, Level.HIERARCHY, DD,
        f"{fitting} of {eligible} subclass edges co-occur within {window} tokens",
        notes=tuple(misses),
    )
