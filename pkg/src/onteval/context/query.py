"""Conjunctive SELECT queries (basic graph patterns only).

Grammar::

    query    := prefix* SELECT [DISTINCT|REDUCED] ( '*' | var+ ) [WHERE] '{' triples '}'
    prefix   := PREFIX pname: <iri>
    triples  := subject verb objects ( ';' verb objects )* ( '.' triples? )?

Terms are IRIs, prefixed names (rdf, rdfs, owl, xsd predeclared), the ``a``
keyword, double-quoted literals and ``?var`` / ``$var`` variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from ..errors import UnboundProjectionError
from ..rdf.graph import OntologyGraph
from ..rdf.index import TripleIndex
from ..rdf.lexer import TokenStream, end_position, tokenize
from ..rdf.ntriples import format_term
from ..rdf.terms import DEFAULT_PREFIXES, Term, Variable
from ..rdf.turtle import TermReader, read_prefix
from .rules import Pattern, pattern_variables, solve

_UNSUPPORTED_KEYWORDS = {
    "OPTIONAL": "OPTIONAL",
    "FILTER": "FILTER",
    "UNION": "UNION",
    "MINUS": "MINUS",
    "GRAPH": "GRAPH",
    "BIND": "BIND",
    "VALUES": "VALUES",
    "SERVICE": "SERVICE",
    "ORDER": "ORDER BY",
    "GROUP": "GROUP BY",
    "HAVING": "HAVING",
    "LIMIT": "LIMIT",
    "OFFSET": "OFFSET",
    "ASK": "ASK",
    "CONSTRUCT": "CONSTRUCT",
    "DESCRIBE": "DESCRIBE",
    "FROM": "FROM",
}

Row = tuple[Term, ...]


@dataclass(frozen=True)
class GraphPatternQuery:
    patterns: tuple[Pattern, ...]
    projected: tuple[str, ...]

    def __post_init__(self):
        if not self.patterns:
            raise ValueError("a query needs at least one pattern")
        used = {v.name for v in pattern_variables(self.patterns)}
        missing = [v for v in self.projected if v not in used]
        if missing:
            raise UnboundProjectionError(missing)


def _check_keyword(stream: TokenStream, tok):
    if tok is not None and tok.kind == "WORD" and tok.text.upper() in _UNSUPPORTED_KEYWORDS:
        stream.fail(tok, f"unsupported construct: {_UNSUPPORTED_KEYWORDS[tok.text.upper()]}")


def parse_query(text: str, prefixes: Mapping[str, str] | None = None) -> GraphPatternQuery:
    stream = TokenStream(tokenize(text), end_position(text))
    table = {**DEFAULT_PREFIXES, **(prefixes or {})}
    reader = TermReader(stream, table, allow_variables=True)

    while (tok := stream.peek()) is not None and tok.kind == "WORD" and tok.text.upper() == "PREFIX":
        stream.next()
        read_prefix(stream, table)

    tok = stream.next()
    _check_keyword(stream, tok)
    if tok.kind != "WORD" or tok.text.upper() != "SELECT":
        stream.fail(tok, "expected SELECT")
    tok = stream.peek()
    if tok is not None and tok.kind == "WORD" and tok.text.upper() in ("DISTINCT", "REDUCED"):
        stream.next()

    projected: list[str] = []
    star = False
    if stream.is_punct("*"):
        stream.next()
        star = True
    else:
        while (tok := stream.peek()) is not None and tok.kind == "VAR":
            stream.next()
            projected.append(tok.text[1:])
        if not projected:
            stream.fail(stream.peek(), "expected projected variables or '*'")

    tok = stream.peek()
    _check_keyword(stream, tok)
    if tok is not None and tok.kind == "WORD" and tok.text.upper() == "WHERE":
        stream.next()
    stream.expect_punct("{", "to open the graph pattern")

    patterns: list[Pattern] = []
    while not stream.is_punct("}"):
        tok = stream.peek()
        if tok is None:
            stream.fail(None, "unterminated graph pattern")
        _check_keyword(stream, tok)
        if stream.is_punct("{"):
            stream.fail(tok, "unsupported construct: nested group pattern")
        reader.reject_unsupported(tok)
        subject = reader.subject()
        while True:
            _check_keyword(stream, stream.peek())
            reader.reject_unsupported(stream.peek())
            verb = reader.verb()
            while True:
                _check_keyword(stream, stream.peek())
                reader.reject_unsupported(stream.peek())
                patterns.append((subject, verb, reader.object()))
                if not stream.is_punct(","):
                    break
                stream.next()
            if not stream.is_punct(";"):
                break
            stream.next()
            if stream.is_punct(".") or stream.is_punct("}"):
                break
        if stream.is_punct("."):
            stream.next()
        elif not stream.is_punct("}"):
            _check_keyword(stream, stream.peek())
            stream.fail(stream.peek(), "expected '.' or '}' after pattern")
    close = stream.next()
    if not stream.at_end():
        tok = stream.peek()
        _check_keyword(stream, tok)
        stream.fail(tok, "unexpected content after query")
    if not patterns:
        stream.fail(close, "empty graph pattern")
    if star:
        projected = [v.name for v in pattern_variables(patterns)]
    return GraphPatternQuery(tuple(patterns), tuple(dict.fromkeys(projected)))


def evaluate_query(g: OntologyGraph | TripleIndex, q: GraphPatternQuery) -> set[Row]:
    """Projected rows of every assignment satisfying all patterns (set semantics)."""
    index = g.index if isinstance(g, OntologyGraph) else g
    variables = [Variable(name) for name in q.projected]
    return {tuple(b[v] for v in variables) for b in solve(index, q.patterns)}


def row_key(row: Iterable[Term]) -> tuple[str, ...]:
    return tuple(format_term(t) for t in row)


def sorted_rows(rows: Iterable[Row]) -> list[Row]:
    return sorted(rows, key=row_key)
