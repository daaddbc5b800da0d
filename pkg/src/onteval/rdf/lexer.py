"""Tokenizer shared by the Turtle-subset reader and the query parser."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import RDFSyntaxError

_TOKEN_SPEC = [
    ("WS", r"[ \t\r\n]+"),
    ("COMMENT", r"#[^\n]*"),
    ("LONG_STRING", r'"""|\'\'\''),
    ("IRIREF", r"<[^\x00-\x20<>\"{}|^`\\]*>"),
    ("STRING", r'"(?:[^"\\\n\r]|\\[tbnrf"\'\\]|\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8})*"'),
    ("SQ_STRING", r"'(?:[^'\\\n\r]|\\.)*'"),
    ("LANGTAG", r"@[a-zA-Z]+(?:-[a-zA-Z0-9]+)*"),
    ("DTYPE", r"\^\^"),
    ("VAR", r"[?$][A-Za-z0-9_]+"),
    ("BLANK", r"_:[A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?"),
    ("NUMBER", r"[+-]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?"),
    ("PNAME", r"(?:[A-Za-z][\w\-]*(?:\.[\w\-]+)*)?:(?:[\w\-:%](?:[\w\-:%.]*[\w\-:%])?)?"),
    ("WORD", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("PUNCT", r"[.;,{}\[\]()*]"),
]
_MASTER = re.compile("|".join(f"(?P<{name}>{pat})" for name, pat in _TOKEN_SPEC))


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _MASTER.match(text, pos)
        if not m:
            raise RDFSyntaxError(line, pos - line_start + 1, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("WS", "COMMENT"):
            tokens.append(Token(kind, chunk, line, pos - line_start + 1))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    return tokens


class TokenStream:
    def __init__(self, tokens: list[Token], end: tuple[int, int] = (1, 1)):
        self.tokens = tokens
        self.i = 0
        self.end = end

    def peek(self, offset: int = 0) -> Token | None:
        j = self.i + offset
        return self.tokens[j] if j < len(self.tokens) else None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            self.fail(None, "unexpected end of input")
        self.i += 1
        return tok

    def at_end(self) -> bool:
        return self.i >= len(self.tokens)

    def is_punct(self, ch: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == "PUNCT" and tok.text == ch

    def expect_punct(self, ch: str, what: str | None = None) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != "PUNCT" or tok.text != ch:
            self.fail(tok, f"expected '{ch}'" + (f" {what}" if what else ""))
        return self.next()

    def fail(self, tok: Token | None, reason: str):
        if tok is None:
            raise RDFSyntaxError(self.end[0], self.end[1], reason)
        raise RDFSyntaxError(tok.line, tok.column, reason)


def end_position(text: str) -> tuple[int, int]:
    line = text.count("\n") + 1
    return line, len(text) - (text.rfind("\n") + 1) + 1
