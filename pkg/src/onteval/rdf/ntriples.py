"""Line-oriented N-Triples reader and deterministic writer."""

from __future__ import annotations

import re

from ..errors import RDFSyntaxError
from .terms import Literal, Term, Triple, TripleSet

_UCHAR = r"\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8}"
IRIREF = re.compile(r"<((?:[^\x00-\x20<>\"{}|^`\\]|" + _UCHAR + r")*)>")
BLANK = re.compile(r"_:([A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?)")
STRING = re.compile(r'"((?:[^"\\\n\r]|\\[tbnrf"\'\\]|' + _UCHAR + r')*)"')
LANGTAG = re.compile(r"@([a-zA-Z]+(?:-[a-zA-Z0-9]+)*)")
_WS = re.compile(r"[ \t]*")
_EOL = re.compile(r"\r\n|\r|\n")
_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}
_ESCAPE_SEQ = re.compile(r"\\(u[0-9A-Fa-f]{4}|U[0-9A-Fa-f]{8}|[tbnrf\"'\\])")


def unescape(text: str) -> str:
    def repl(m: re.Match) -> str:
        code = m.group(1)
        if code[0] in "uU":
            return chr(int(code[1:], 16))
        return _ESCAPES[code]

    return _ESCAPE_SEQ.sub(repl, text)


class _LineReader:
    def __init__(self, line: str, lineno: int):
        self.line = line
        self.lineno = lineno
        self.pos = 0

    def fail(self, reason: str):
        raise RDFSyntaxError(self.lineno, self.pos + 1, reason)

    def skip_ws(self):
        self.pos = _WS.match(self.line, self.pos).end()

    def at_end(self) -> bool:
        rest = self.line[self.pos :]
        return not rest or rest.startswith("#")

    def iri(self) -> str:
        m = IRIREF.match(self.line, self.pos)
        if not m:
            self.fail("expected IRI")
        self.pos = m.end()
        value = unescape(m.group(1))
        if not value:
            self.fail("empty IRI")
        return value

    def subject(self) -> str:
        if self.line.startswith("_:", self.pos):
            return self.blank()
        if self.line.startswith("<", self.pos):
            return self.iri()
        self.fail("expected IRI or blank node as subject")

    def blank(self) -> str:
        m = BLANK.match(self.line, self.pos)
        if not m:
            self.fail("malformed blank node label")
        self.pos = m.end()
        return "_:" + m.group(1)

    def object(self) -> Term:
        ch = self.line[self.pos : self.pos + 1]
        if ch == "<":
            return self.iri()
        if ch == "_":
            return self.blank()
        if ch == '"':
            return self.literal()
        self.fail("expected IRI, blank node or literal as object")

    def literal(self) -> Literal:
        m = STRING.match(self.line, self.pos)
        if not m:
            self.fail("unterminated or malformed string literal")
        self.pos = m.end()
        lexical = unescape(m.group(1))
        if self.line.startswith("@", self.pos):
            lang = LANGTAG.match(self.line, self.pos)
            if not lang:
                self.fail("malformed language tag")
            self.pos = lang.end()
            return Literal(lexical, language=lang.group(1))
        if self.line.startswith("^^", self.pos):
            self.pos += 2
            return Literal(lexical, datatype=self.iri())
        return Literal(lexical)


def parse_ntriples(text: str, source_name: str = "") -> TripleSet:
    """Parse N-Triples text. Raises RDFSyntaxError on the first malformed line."""
    triples: set[Triple] = set()
    # Only CR and LF end a line; str.splitlines would also split on U+0085 and U+2028.
    for lineno, line in enumerate(_EOL.split(text), start=1):
        r = _LineReader(line, lineno)
        r.skip_ws()
        if r.at_end():
            continue
        s = r.subject()
        r.skip_ws()
        if not line.startswith("<", r.pos):
            r.fail("expected IRI as predicate")
        p = r.iri()
        r.skip_ws()
        o = r.object()
        r.skip_ws()
        if not line.startswith(".", r.pos):
            r.fail("missing terminating '.'")
        r.pos += 1
        r.skip_ws()
        if not r.at_end():
            r.fail("unexpected content after statement")
        triples.add(Triple(s, p, o))
    return TripleSet(frozenset(triples), source_name)


def _escape_iri(iri: str) -> str:
    out = []
    for ch in iri:
        if ch <= " " or ch in '<>"{}|^`\\':
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def _escape_string(text: str) -> str:
    out = []
    for ch in text:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ord(ch) < 0x20 or 0xD800 <= ord(ch) <= 0xDFFF:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def format_term(term: Term) -> str:
    if isinstance(term, Literal):
        body = '"' + _escape_string(term.lexical) + '"'
        if term.language:
            return body + "@" + term.language
        if term.datatype:
            return body + "^^<" + _escape_iri(term.datatype) + ">"
        return body
    if term.startswith("_:"):
        return term
    return "<" + _escape_iri(term) + ">"


def format_triple(t: Triple) -> str:
    return f"{format_term(t.subject)} {format_term(t.predicate)} {format_term(t.object)} ."


def serialize_ntriples(ts) -> str:
    lines = sorted(format_triple(t) for t in ts)
    return "".join(line + "\n" for line in lines)
