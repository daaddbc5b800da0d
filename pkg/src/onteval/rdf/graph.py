"""Immutable indexed view over a triple set."""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Mapping

from ..errors import ModelError
from .terms import (
    CLASS_TYPES,
    OWL_DISJOINT_WITH,
    OWL_EQUIVALENT_CLASS,
    OWL_SAME_AS,
    PROPERTY_TYPES,
    RDF_TYPE,
    RDFS_DOMAIN,
    RDFS_LABEL,
    RDFS_RANGE,
    RDFS_SUBCLASS_OF,
    Literal,
    Triple,
    TripleSet,
    is_builtin,
    namespace_of,
)

log = logging.getLogger(__name__)

Pair = tuple[str, str]


def canonical_pair(a: str, b: str) -> Pair:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True, eq=False)
class OntologyGraph:
    triples: TripleSet
    classes: frozenset[str]
    declared_classes: frozenset[str]
    properties: frozenset[str]
    instances: frozenset[str]
    subclass_edges: frozenset[Pair]
    disjoint_pairs: frozenset[Pair]
    equivalent_pairs: frozenset[Pair]
    same_as_pairs: frozenset[Pair]
    labels: Mapping[str, frozenset[Literal]]
    domains: Mapping[str, frozenset[str]]
    ranges: Mapping[str, frozenset[str]]
    type_assertions: frozenset[Pair]
    namespaces: frozenset[str]
    model_problems: tuple[str, ...] = field(default=())

    def _key(self):
        return (
            self.triples.triples,
            self.classes,
            self.declared_classes,
            self.properties,
            self.instances,
            self.subclass_edges,
            self.disjoint_pairs,
            self.equivalent_pairs,
            self.same_as_pairs,
            dict(self.labels),
            dict(self.domains),
            dict(self.ranges),
            self.type_assertions,
            self.namespaces,
        )

    def __eq__(self, other):
        if not isinstance(other, OntologyGraph):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self.triples.triples)

    def __len__(self):
        return len(self.triples)

    @cached_property
    def parents(self) -> Mapping[str, frozenset[str]]:
        out: dict[str, set[str]] = defaultdict(set)
        for child, parent in self.subclass_edges:
            out[child].add(parent)
        return MappingProxyType({k: frozenset(v) for k, v in out.items()})

    @cached_property
    def asserted_types(self) -> Mapping[str, frozenset[str]]:
        out: dict[str, set[str]] = defaultdict(set)
        for inst, cls in self.type_assertions:
            out[inst].add(cls)
        return MappingProxyType({k: frozenset(v) for k, v in out.items()})

    @cached_property
    def disjoint_partners(self) -> Mapping[str, frozenset[str]]:
        out: dict[str, set[str]] = defaultdict(set)
        for a, b in self.disjoint_pairs:
            out[a].add(b)
            out[b].add(a)
        return MappingProxyType({k: frozenset(v) for k, v in out.items()})

    @cached_property
    def index(self):
        from .index import TripleIndex

        return TripleIndex(self.triples)

    def labels_of(self, entity: str) -> frozenset[Literal]:
        return self.labels.get(entity, frozenset())


def _freeze(index: dict[str, set]) -> Mapping[str, frozenset]:
    return MappingProxyType({k: frozenset(v) for k, v in sorted(index.items())})


def build_ontology(ts: TripleSet, strict: bool = False) -> OntologyGraph:
    """Index a triple set. Anything in class position counts as a class.

    With ``strict=True`` a modelling conflict (an IRI used both as a literal
    datatype and as a class) raises ModelError; otherwise it is recorded in
    ``model_problems``.
    """
    declared_classes: set[str] = set()
    classes: set[str] = set()
    properties: set[str] = set()
    subclass_edges: set[Pair] = set()
    disjoint: set[Pair] = set()
    equivalent: set[Pair] = set()
    same_as: set[Pair] = set()
    labels: dict[str, set[Literal]] = defaultdict(set)
    domains: dict[str, set[str]] = defaultdict(set)
    ranges: dict[str, set[str]] = defaultdict(set)
    typed: list[Pair] = []
    datatypes: set[str] = set()
    namespaces: set[str] = set()

    for s, p, o in ts.triples:
        for term in (s, p, o):
            if isinstance(term, str) and not term.startswith("_:"):
                namespaces.add(namespace_of(term))
        if isinstance(o, Literal):
            if o.datatype:
                datatypes.add(o.datatype)
            if p == RDFS_LABEL:
                labels[s].add(o)
            continue
        if p == RDF_TYPE:
            if o in CLASS_TYPES:
                declared_classes.add(s)
            elif o in PROPERTY_TYPES:
                properties.add(s)
            elif not is_builtin(o):
                typed.append((s, o))
        elif p == RDFS_SUBCLASS_OF:
            subclass_edges.add((s, o))
            classes.update((s, o))
        elif p == OWL_DISJOINT_WITH:
            classes.update((s, o))
            if s != o:
                disjoint.add(canonical_pair(s, o))
        elif p == OWL_EQUIVALENT_CLASS:
            classes.update((s, o))
            if s != o:
                equivalent.add(canonical_pair(s, o))
        elif p == OWL_SAME_AS:
            if s != o:
                same_as.add(canonical_pair(s, o))
        elif p == RDFS_DOMAIN:
            properties.add(s)
            domains[s].add(o)
            classes.add(o)
        elif p == RDFS_RANGE:
            properties.add(s)
            ranges[s].add(o)
            classes.add(o)

    classes |= declared_classes
    classes.update(cls for _, cls in typed)
    instances = {inst for inst, _ in typed}

    problems = tuple(
        f"{iri} is used both as a literal datatype and as a class" for iri in sorted(datatypes & classes)
    )
    if problems:
        if strict:
            raise ModelError("; ".join(problems))
        for msg in problems:
            log.warning(msg)

    return OntologyGraph(
        triples=ts,
        classes=frozenset(classes),
        declared_classes=frozenset(declared_classes),
        properties=frozenset(properties),
        instances=frozenset(instances),
        subclass_edges=frozenset(subclass_edges),
        disjoint_pairs=frozenset(disjoint),
        equivalent_pairs=frozenset(equivalent),
        same_as_pairs=frozenset(same_as),
        labels=_freeze(labels),
        domains=_freeze(domains),
        ranges=_freeze(ranges),
        type_assertions=frozenset(typed),
        namespaces=frozenset(namespaces),
        model_problems=problems,
    )
