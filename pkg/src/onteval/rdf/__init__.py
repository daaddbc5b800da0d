"""RDF parsing, serialization and the indexed ontology graph."""

from .graph import OntologyGraph, build_ontology, canonical_pair
from .ntriples import format_term, format_triple, parse_ntriples, serialize_ntriples
from .terms import Literal, Term, Triple, TripleSet, local_name
from .turtle import guess_format, parse_rdf, parse_turtle_subset

__all__ = [
    "Literal",
    "OntologyGraph",
    "Term",
    "Triple",
    "TripleSet",
    "build_ontology",
    "canonical_pair",
    "format_term",
    "format_triple",
    "guess_format",
    "local_name",
    "parse_ntriples",
    "parse_rdf",
    "parse_turtle_subset",
    "serialize_ntriples",
]
