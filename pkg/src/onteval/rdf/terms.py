"""RDF terms, triples and the fixed vocabulary the toolkit understands.

IRIs and blank nodes are plain ``str`` values; blank nodes keep their
document label with the ``_:`` prefix. Literals are a small frozen dataclass
so they can never be confused with an IRI.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NamedTuple, Union

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
OWL = "http://www.w3.org/2002/07/owl#"
XSD = "http://www.w3.org/2001/XMLSchema#"

RDF_TYPE = RDF + "type"
RDF_PROPERTY = RDF + "Property"
RDFS_SUBCLASS_OF = RDFS + "subClassOf"
RDFS_LABEL = RDFS + "label"
RDFS_COMMENT = RDFS + "comment"
RDFS_DOMAIN = RDFS + "domain"
RDFS_RANGE = RDFS + "range"
RDFS_CLASS = RDFS + "Class"
OWL_CLASS = OWL + "Class"
OWL_OBJECT_PROPERTY = OWL + "ObjectProperty"
OWL_DATATYPE_PROPERTY = OWL + "DatatypeProperty"
OWL_ANNOTATION_PROPERTY = OWL + "AnnotationProperty"
OWL_DISJOINT_WITH = OWL + "disjointWith"
OWL_EQUIVALENT_CLASS = OWL + "equivalentClass"
OWL_SAME_AS = OWL + "sameAs"
OWL_THING = OWL + "Thing"

CLASS_TYPES = frozenset({OWL_CLASS, RDFS_CLASS})
PROPERTY_TYPES = frozenset({OWL_OBJECT_PROPERTY, OWL_DATATYPE_PROPERTY, OWL_ANNOTATION_PROPERTY, RDF_PROPERTY})

# rdf:type objects in these namespaces declare a schema role, not instance membership.
BUILTIN_NAMESPACES = (RDF, RDFS, OWL, XSD)

DEFAULT_PREFIXES = {"rdf": RDF, "rdfs": RDFS, "owl": OWL, "xsd": XSD}

_SCHEME = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")


@dataclass(frozen=True, order=True)
class Literal:
    lexical: str
    language: str | None = None
    datatype: str | None = None

    def __post_init__(self):
        if self.language is not None and self.datatype is not None:
            raise ValueError("a literal cannot carry both a language tag and a datatype")
        if self.language is not None:
            object.__setattr__(self, "language", self.language.lower())


Term = Union[str, Literal]


@dataclass(frozen=True, order=True)
class Variable:
    """A named variable in a rule or query pattern."""

    name: str

    def __str__(self) -> str:
        return "?" + self.name


PatternTerm = Union[str, Literal, Variable]


class Triple(NamedTuple):
    subject: str
    predicate: str
    object: Term


def is_blank(term: Term) -> bool:
    return isinstance(term, str) and term.startswith("_:")


def is_iri(term: Term) -> bool:
    return isinstance(term, str) and not term.startswith("_:")


def is_absolute(iri: str) -> bool:
    return bool(_SCHEME.match(iri))


def is_builtin(iri: str) -> bool:
    return iri.startswith(BUILTIN_NAMESPACES)


def namespace_of(iri: str) -> str:
    """Namespace part of an IRI: everything up to the last '#' or '/'."""
    cut = max(iri.rfind("#"), iri.rfind("/"))
    if cut < 0:
        cut = iri.find(":")
    return iri[: cut + 1]


def local_name(iri: str) -> str:
    """Fragment after the last '#' or '/' (or after the scheme colon)."""
    if iri.startswith("_:"):
        return iri[2:]
    cut = max(iri.rfind("#"), iri.rfind("/"))
    if cut < 0:
        cut = iri.find(":")
    return iri[cut + 1 :]


@dataclass(frozen=True)
class TripleSet:
    triples: frozenset[Triple]
    source_name: str = ""

    def __len__(self) -> int:
        return len(self.triples)

    def __iter__(self):
        return iter(self.triples)

    def __contains__(self, item) -> bool:
        return item in self.triples

    @classmethod
    def of(cls, triples, source_name: str = "") -> "TripleSet":
        return cls(frozenset(Triple(*t) for t in triples), source_name)

    def union(self, *others: "TripleSet", source_name: str = "") -> "TripleSet":
        merged = set(self.triples)
        for other in others:
            merged |= other.triples
        return TripleSet(frozenset(merged), source_name or self.source_name)
