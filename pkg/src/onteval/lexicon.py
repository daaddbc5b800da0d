"""Text normalization and entity surface forms."""

from __future__ import annotations

import re

from .rdf.graph import OntologyGraph
from .rdf.terms import is_builtin, local_name

_WS = re.compile(r"\s+")
_TOKEN = re.compile(r"[^\W_]+")
_CAMEL = re.compile(r"(?<=[a-z0-9])(?=[A-Z])|(?<=[A-Z])(?=[A-Z][a-z])")


def normalize_text(text: str) -> str:
    """Case-fold, trim and collapse internal whitespace."""
    return _WS.sub(" ", text.casefold()).strip()


def tokenize(text: str) -> list[str]:
    """Maximal alphanumeric runs, case-folded."""
    return [t.casefold() for t in _TOKEN.findall(text)]


def term_key(text: str) -> str:
    """Token-level normal form used to match labels against corpus terms."""
    return " ".join(tokenize(text))


def humanize_local_name(iri: str) -> str:
    name = local_name(iri)
    name = _CAMEL.sub(" ", name)
    return normalize_text(re.sub(r"[_\-]+", " ", name))


def surface_forms(g: OntologyGraph, entity: str) -> list[str]:
    """Normalized labels of an entity, or its humanized local name if unlabeled."""
    labels = g.labels_of(entity)
    if labels:
        return sorted({normalize_text(lit.lexical) for lit in labels})
    name = humanize_local_name(entity)
    return [name] if name else []


def lexical_entities(g: OntologyGraph) -> list[str]:
    """Classes and instances that carry vocabulary (built-in terms excluded)."""
    return sorted(e for e in g.classes | g.instances if not is_builtin(e))
