"""Syntactic-level checks: parser outcome plus referential hygiene warnings.

Warning codes:

- ``UNDECLARED_CLASS``: used in class position, never typed owl:Class/rdfs:Class
- ``UNDECLARED_PROPERTY``: used as a predicate, never declared as a property
- ``RELATIVE_IRI``: IRI without a scheme
- ``MISSING_LABEL``: class without rdfs:label
- ``DANGLING_REFERENCE``: superclass that is never the subject of any triple
- ``MODEL_CONFLICT``: an IRI used both as a literal datatype and as a class

Error codes: ``PARSE_ERROR``, ``ENCODING_ERROR``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import RDFSyntaxError
from .rdf.graph import OntologyGraph, build_ontology
from .rdf.terms import Literal, TripleSet, is_absolute, is_blank, is_builtin
from .rdf.turtle import parse_rdf


class Severity(str, Enum):
    ERROR = "Error"
    WARNING = "Warning"


_SEVERITY_ORDER = {Severity.ERROR: 0, Severity.WARNING: 1}


@dataclass(frozen=True)
class Issue:
    severity: Severity
    code: str
    subject: str | None
    message: str

    def sort_key(self):
        return (_SEVERITY_ORDER[self.severity], self.code, self.subject or "", self.message)

    def to_dict(self) -> dict:
        return {"severity": self.severity.value, "code": self.code, "subject": self.subject, "message": self.message}

    @classmethod
    def from_dict(cls, d: dict) -> "Issue":
        return cls(Severity(d["severity"]), d["code"], d.get("subject"), d["message"])


@dataclass(frozen=True)
class SyntacticReport:
    parse_ok: bool
    issues: tuple[Issue, ...] = field(default=())

    @property
    def has_errors(self) -> bool:
        return any(i.severity is Severity.ERROR for i in self.issues)

    def to_dict(self) -> dict:
        return {"parse_ok": self.parse_ok, "issues": [i.to_dict() for i in self.issues]}

    @classmethod
    def from_dict(cls, d: dict) -> "SyntacticReport":
        return cls(d["parse_ok"], tuple(Issue.from_dict(i) for i in d["issues"]))

    @staticmethod
    def merge(reports: list["SyntacticReport"]) -> "SyntacticReport":
        issues = sorted((i for r in reports for i in r.issues), key=Issue.sort_key)
        return SyntacticReport(all(r.parse_ok for r in reports), tuple(issues))


def check_syntax(raw: str | bytes, fmt: str = "ntriples", source: str = "") -> SyntacticReport:
    """Never raises on content; every failure is reported as an issue."""
    return check_and_parse(raw, fmt, source)[0]


def check_and_parse(
    raw: str | bytes, fmt: str = "ntriples", source: str = ""
) -> tuple[SyntacticReport, TripleSet | None, OntologyGraph | None]:
    """Like check_syntax, also handing back the parsed triples and graph when parsing succeeded."""
    where = f"{source}: " if source else ""
    if isinstance(raw, (bytes, bytearray)):
        try:
            raw = bytes(raw).decode("utf-8")
        except UnicodeDecodeError as exc:
            return SyntacticReport(False, (Issue(Severity.ERROR, "ENCODING_ERROR", None, f"{where}input is not UTF-8: {exc}"),)), None, None
    try:
        ts = parse_rdf(raw, fmt, source)
    except RDFSyntaxError as exc:
        return SyntacticReport(False, (Issue(Severity.ERROR, "PARSE_ERROR", None, f"{where}{exc}"),)), None, None
    except RecursionError:
        return SyntacticReport(False, (Issue(Severity.ERROR, "PARSE_ERROR", None, f"{where}input nests too deeply"),)), None, None

    g = build_ontology(ts)
    issues: list[Issue] = []

    def warn(code: str, subject: str, message: str):
        issues.append(Issue(Severity.WARNING, code, subject, where + message))

    for problem in g.model_problems:
        warn("MODEL_CONFLICT", problem.split(" ", 1)[0], problem)

    iris: set[str] = set()
    for s, p, o in ts.triples:
        iris.update(x for x in (s, p, o) if isinstance(x, str) and not is_blank(x))
        if isinstance(o, Literal) and o.datatype:
            iris.add(o.datatype)
    for iri in sorted(iris):
        if not is_absolute(iri):
            warn("RELATIVE_IRI", iri, f"relative IRI <{iri}>")

    own_classes = sorted(c for c in g.classes if not is_builtin(c) and not is_blank(c))
    for cls in own_classes:
        if cls not in g.declared_classes:
            warn("UNDECLARED_CLASS", cls, f"{cls} is used as a class but never declared")
        if not g.labels_of(cls):
            warn("MISSING_LABEL", cls, f"class {cls} has no rdfs:label")

    predicates = {t.predicate for t in ts.triples}
    for p in sorted(predicates):
        if not is_builtin(p) and p not in g.properties:
            warn("UNDECLARED_PROPERTY", p, f"{p} is used as a property but never declared")

    described = {t.subject for t in ts.triples}
    for parent in sorted({parent for _, parent in g.subclass_edges}):
        if parent not in described and not is_builtin(parent):
            warn("DANGLING_REFERENCE", parent, f"superclass {parent} is never described")

    return SyntacticReport(True, tuple(sorted(issues, key=Issue.sort_key))), ts, g
