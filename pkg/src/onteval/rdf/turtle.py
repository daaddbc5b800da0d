"""Reader for a documented subset of Turtle.

Supported: ``@prefix`` / ``PREFIX`` declarations, IRIs, prefixed names, the
``a`` keyword, ``;`` and ``,`` abbreviations, plain, language-tagged and
datatyped double-quoted literals, ``#`` comments.

Rejected with a named construct: blank nodes, blank-node property lists,
collections, numeric and boolean literals, long and single-quoted strings,
``@base``.
"""

from __future__ import annotations

from ..errors import RDFSyntaxError
from .lexer import Token, TokenStream, end_position, tokenize
from .ntriples import unescape
from .terms import RDF_TYPE, Literal, Term, Triple, TripleSet, Variable

_UNSUPPORTED = {
    "[": "blank-node property list",
    "(": "collection",
    "BLANK": "blank node",
    "NUMBER": "numeric literal",
    "LONG_STRING": "long string literal",
    "SQ_STRING": "single-quoted literal",
}


class TermReader:
    """Turns lexer tokens into RDF terms, resolving prefixed names."""

    def __init__(self, stream: TokenStream, prefixes: dict[str, str], allow_variables: bool = False):
        self.s = stream
        self.prefixes = prefixes
        self.allow_variables = allow_variables

    def unsupported(self, tok: Token) -> str | None:
        if tok.kind == "PUNCT" and tok.text in _UNSUPPORTED:
            return _UNSUPPORTED[tok.text]
        if tok.kind in _UNSUPPORTED:
            return _UNSUPPORTED[tok.kind]
        if tok.kind == "WORD" and tok.text in ("true", "false"):
            return "boolean literal"
        return None

    def reject_unsupported(self, tok: Token | None):
        if tok is None:
            return
        construct = self.unsupported(tok)
        if construct:
            self.s.fail(tok, f"unsupported construct: {construct}")

    def expand(self, tok: Token) -> str:
        prefix, _, local = tok.text.partition(":")
        if prefix not in self.prefixes:
            self.s.fail(tok, f"undeclared prefix '{prefix}:'")
        return self.prefixes[prefix] + local

    def iri(self) -> str:
        tok = self.s.next()
        if tok.kind == "IRIREF":
            value = unescape(tok.text[1:-1])
            if not value:
                self.s.fail(tok, "empty IRI")
            return value
        if tok.kind == "PNAME":
            return self.expand(tok)
        self.reject_unsupported(tok)
        self.s.fail(tok, "expected IRI or prefixed name")

    def variable_or(self, read):
        tok = self.s.peek()
        if self.allow_variables and tok is not None and tok.kind == "VAR":
            self.s.next()
            return Variable(tok.text[1:])
        return read()

    def subject(self) -> str:
        return self.variable_or(self.iri)

    def verb(self) -> str:
        tok = self.s.peek()
        if tok is not None and tok.kind == "WORD" and tok.text == "a":
            self.s.next()
            return RDF_TYPE
        return self.variable_or(self.iri)

    def object(self) -> Term:
        tok = self.s.peek()
        if tok is not None and tok.kind == "STRING":
            return self.literal()
        return self.variable_or(self.iri)

    def literal(self) -> Literal:
        tok = self.s.next()
        lexical = unescape(tok.text[1:-1])
        nxt = self.s.peek()
        if nxt is not None and nxt.kind == "LANGTAG" and nxt.line == tok.line and nxt.column == tok.column + len(tok.text):
            self.s.next()
            return Literal(lexical, language=nxt.text[1:])
        if nxt is not None and nxt.kind == "DTYPE":
            self.s.next()
            return Literal(lexical, datatype=self.iri())
        return Literal(lexical)


def read_prefix(stream: TokenStream, prefixes: dict[str, str]):
    name = stream.next()
    if name.kind != "PNAME" or not name.text.endswith(":") or name.text.count(":") != 1:
        stream.fail(name, "expected prefix name ending in ':'")
    target = stream.next()
    if target.kind != "IRIREF":
        stream.fail(target, "expected IRI in prefix declaration")
    prefixes[name.text[:-1]] = unescape(target.text[1:-1])


def parse_turtle_subset(text: str, source_name: str = "") -> TripleSet:
    stream = TokenStream(tokenize(text), end_position(text))
    prefixes: dict[str, str] = {}
    reader = TermReader(stream, prefixes)
    triples: set[Triple] = set()
    while not stream.at_end():
        tok = stream.peek()
        if tok.kind == "LANGTAG" and tok.text == "@prefix":
            stream.next()
            read_prefix(stream, prefixes)
            stream.expect_punct(".", "after @prefix declaration")
            continue
        if tok.kind == "LANGTAG" and tok.text == "@base":
            stream.fail(tok, "unsupported construct: @base")
        if tok.kind == "WORD" and tok.text.upper() == "PREFIX":
            stream.next()
            read_prefix(stream, prefixes)
            continue
        if tok.kind == "WORD" and tok.text.upper() == "BASE":
            stream.fail(tok, "unsupported construct: BASE")
        reader.reject_unsupported(tok)
        subject = reader.subject()
        while True:
            reader.reject_unsupported(stream.peek())
            predicate = reader.verb()
            while True:
                reader.reject_unsupported(stream.peek())
                triples.add(Triple(subject, predicate, reader.object()))
                if not stream.is_punct(","):
                    break
                stream.next()
            if not stream.is_punct(";"):
                break
            stream.next()
            # trailing ';' before '.' is legal Turtle
            if stream.is_punct("."):
                break
        stream.expect_punct(".", "to end statement")
    return TripleSet(frozenset(triples), source_name)


def parse_rdf(text: str, fmt: str, source_name: str = "") -> TripleSet:
    from .ntriples import parse_ntriples

    if fmt == "ntriples":
        return parse_ntriples(text, source_name)
    if fmt == "turtle":
        return parse_turtle_subset(text, source_name)
    raise ValueError(f"unknown RDF format {fmt!r}")


def guess_format(path: str) -> str:
    return "turtle" if path.lower().endswith((".ttl", ".turtle")) else "ntriples"


__all__ = ["parse_turtle_subset", "parse_rdf", "guess_format", "TermReader", "RDFSyntaxError"]
