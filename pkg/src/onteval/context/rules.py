"""Datalog-style rules over triples and forward-chaining materialization."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from ..errors import FixpointOverflowError, RDFSyntaxError, ValidationError
from ..rdf.graph import OntologyGraph, build_ontology
from ..rdf.index import TripleIndex
from ..rdf.ntriples import STRING, LANGTAG, unescape
from ..rdf.terms import (
    DEFAULT_PREFIXES,
    OWL_SAME_AS,
    RDF_TYPE,
    RDFS_SUBCLASS_OF,
    Literal,
    PatternTerm,
    Triple,
    TripleSet,
    Variable,
)

DEFAULT_TRIPLE_CAP = 1_000_000

Pattern = tuple[PatternTerm, PatternTerm, PatternTerm]
Binding = dict[Variable, object]


def pattern_variables(patterns: Iterable[Pattern]) -> list[Variable]:
    seen: dict[Variable, None] = {}
    for pattern in patterns:
        for term in pattern:
            if isinstance(term, Variable):
                seen.setdefault(term, None)
    return list(seen)


@dataclass(frozen=True)
class Rule:
    name: str
    body: tuple[Pattern, ...]
    head: Pattern

    def __post_init__(self):
        if not self.body:
            raise ValidationError(f"rule {self.name!r}: body is empty")
        unbound = set(pattern_variables([self.head])) - set(pattern_variables(self.body))
        if unbound:
            names = ", ".join(sorted(str(v) for v in unbound))
            raise ValidationError(f"rule {self.name!r}: head variables {names} do not occur in the body")


def _v(name: str) -> Variable:
    return Variable(name)


A, B, C, I, P, O, S = (_v(n) for n in "abcipos")

BUILTIN_RULES: tuple[Rule, ...] = (
    Rule("subclass-transitivity", ((A, RDFS_SUBCLASS_OF, B), (B, RDFS_SUBCLASS_OF, C)), (A, RDFS_SUBCLASS_OF, C)),
    Rule("type-inheritance", ((I, RDF_TYPE, A), (A, RDFS_SUBCLASS_OF, B)), (I, RDF_TYPE, B)),
    Rule("sameas-symmetry", ((A, OWL_SAME_AS, B),), (B, OWL_SAME_AS, A)),
    Rule("sameas-transitivity", ((A, OWL_SAME_AS, B), (B, OWL_SAME_AS, C)), (A, OWL_SAME_AS, C)),
    Rule("sameas-copy-subject", ((A, OWL_SAME_AS, B), (A, P, O)), (B, P, O)),
    Rule("sameas-copy-object", ((A, OWL_SAME_AS, B), (S, P, A)), (S, P, B)),
)


def _resolve(term: PatternTerm, binding: Mapping[Variable, object]):
    return binding.get(term) if isinstance(term, Variable) else term


# Compiled form: each position is (True, slot) for a variable or (False, term)
# for a constant; bindings are lists indexed by slot. This keeps the join loop
# free of per-step dict copies.
_CPattern = tuple[tuple[bool, object], ...]


def _compile(patterns: Iterable[Pattern], slots: dict[Variable, int]) -> list[_CPattern]:
    out = []
    for pattern in patterns:
        compiled = []
        for term in pattern:
            if isinstance(term, Variable):
                compiled.append((True, slots.setdefault(term, len(slots))))
            else:
                compiled.append((False, term))
        out.append(tuple(compiled))
    return out


def _bind(pattern: _CPattern, t: Triple, b: list) -> list | None:
    """Extend ``b`` so ``pattern`` matches ``t``; ``b`` itself is never mutated."""
    nb = None
    for (is_var, x), value in zip(pattern, t):
        if is_var:
            current = (nb or b)[x]
            if current is None:
                if nb is None:
                    nb = list(b)
                nb[x] = value
            elif current != value:
                return None
        elif x != value:
            return None
    return nb or b


def _csolve(index: TripleIndex, patterns: list[_CPattern], b: list) -> Iterator[list]:
    if not patterns:
        yield b
        return
    # Most-bound pattern first; the answer set does not depend on the order.
    best, best_score = 0, -1
    for i, pattern in enumerate(patterns):
        score = sum(1 for is_var, x in pattern if not is_var or b[x] is not None)
        if score > best_score:
            best, best_score = i, score
    pattern = patterns[best]
    rest = patterns[:best] + patterns[best + 1 :]
    args = [b[x] if is_var else x for is_var, x in pattern]
    for t in index.match(*args):
        extended = _bind(pattern, t, b)
        if extended is not None:
            yield from _csolve(index, rest, extended)


def solve(index: TripleIndex, patterns: Sequence[Pattern], binding: Binding | None = None) -> Iterator[Binding]:
    """All extensions of ``binding`` matching every pattern against ``index``."""
    binding = binding or {}
    slots: dict[Variable, int] = {}
    compiled = _compile(patterns, slots)
    names = sorted(slots, key=slots.get)
    seed = [binding.get(v) for v in names]
    extra = {k: v for k, v in binding.items() if k not in slots}
    for b in _csolve(index, compiled, seed):
        out = dict(extra)
        out.update(zip(names, b))
        yield out


def _instantiate(head: Pattern, binding: Mapping[Variable, object]) -> Triple | None:
    s, p, o = (_resolve(term, binding) for term in head)
    return _triple_or_none(s, p, o)


def _triple_or_none(s, p, o) -> Triple | None:
    if not isinstance(s, str) or not isinstance(p, str) or p.startswith("_:") or o is None:
        return None
    return Triple(s, p, o)


def _materialize_index(
    triples: Iterable[Triple], rules: Sequence[Rule], cap: int, builtins: bool
) -> TripleIndex:
    all_rules = list(rules) + (list(BUILTIN_RULES) if builtins else [])
    compiled = []
    for rule in all_rules:
        slots: dict[Variable, int] = {}
        body = _compile(rule.body, slots)
        head = _compile([rule.head], slots)[0]
        compiled.append((body, head, len(slots)))
    known = TripleIndex(triples)
    delta = set(known.all)
    derived = 0
    while delta:
        delta_index = TripleIndex(delta)
        fresh: set[Triple] = set()
        for body, head, width in compiled:
            empty = [None] * width
            for i, pattern in enumerate(body):
                others = body[:i] + body[i + 1 :]
                # Skip when some other atom names a predicate with no triples at all.
                if any(not pv and not known.by_p.get(pt) for _, (pv, pt), _ in others):
                    continue
                consts = [None if is_var else x for is_var, x in pattern]
                for t in delta_index.match(*consts):
                    seed = _bind(pattern, t, empty)
                    if seed is None:
                        continue
                    for b in _csolve(known, others, seed):
                        new = _triple_or_none(*(b[x] if is_var else x for is_var, x in head))
                        if new is not None and new not in known.all and new not in fresh:
                            fresh.add(new)
                            if derived + len(fresh) > cap:
                                raise FixpointOverflowError(cap)
        for t in fresh:
            known.add(t)
        derived += len(fresh)
        delta = fresh
    return known


def materialize_triples(
    triples: Iterable[Triple], rules: Sequence[Rule] = (), cap: int = DEFAULT_TRIPLE_CAP, builtins: bool = True
) -> set[Triple]:
    """Semi-naive forward chaining to the fixpoint.

    Each round joins one body pattern against the previous round's new
    triples and the rest against everything known. Raises
    FixpointOverflowError once more than ``cap`` triples have been derived.
    """
    return _materialize_index(triples, rules, cap, builtins).all


def materialize_index(g: OntologyGraph, rules: Sequence[Rule] = (), cap: int = DEFAULT_TRIPLE_CAP) -> TripleIndex:
    """Closure of ``g`` as a query-ready index, skipping the graph rebuild."""
    return _materialize_index(g.triples.triples, rules, cap, True)


def materialize_inferences(
    g: OntologyGraph, rules: Sequence[Rule] = (), cap: int = DEFAULT_TRIPLE_CAP
) -> OntologyGraph:
    closed = materialize_triples(g.triples.triples, rules, cap)
    return build_ontology(TripleSet(frozenset(closed), g.triples.source_name))


_PNAME = re.compile(r"^([A-Za-z][\w\-]*)?:(.*)$")


def parse_term(token: str, prefixes: Mapping[str, str] | None = None) -> PatternTerm:
    """Read one term as written in rule and suite files.

    ``?x`` is a variable, ``<...>`` an IRI, a double-quoted string a literal
    (optionally ``@lang`` or ``^^<datatype>``), ``pfx:local`` a prefixed name
    when ``pfx`` is known, anything else an IRI as written.
    """
    prefixes = {**DEFAULT_PREFIXES, **(prefixes or {})}
    if not isinstance(token, str) or not token:
        raise ValidationError(f"term must be a non-empty string, got {token!r}")
    if token.startswith(("?", "$")):
        if not re.fullmatch(r"[?$][A-Za-z0-9_]+", token):
            raise ValidationError(f"malformed variable {token!r}")
        return Variable(token[1:])
    if token.startswith('"'):
        m = STRING.match(token)
        if not m:
            raise ValidationError(f"malformed literal {token!r}")
        lexical, rest = unescape(m.group(1)), token[m.end() :]
        if not rest:
            return Literal(lexical)
        lang = LANGTAG.fullmatch(rest)
        if lang:
            return Literal(lexical, language=lang.group(1))
        if rest.startswith("^^"):
            return Literal(lexical, datatype=parse_iri(rest[2:], prefixes))
        raise ValidationError(f"malformed literal {token!r}")
    return parse_iri(token, prefixes)


def parse_iri(token: str, prefixes: Mapping[str, str]) -> str:
    if token.startswith("<") and token.endswith(">") and len(token) > 2:
        return unescape(token[1:-1])
    m = _PNAME.match(token)
    if m and (m.group(1) or "") in prefixes and not m.group(2).startswith("//"):
        return prefixes[m.group(1) or ""] + m.group(2)
    return token


def rule_from_dict(d: Mapping, prefixes: Mapping[str, str] | None = None) -> Rule:
    try:
        name = d["name"]
        body = tuple(tuple(parse_term(x, prefixes) for x in atom) for atom in d["body"])
        head = tuple(parse_term(x, prefixes) for x in d["head"])
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed rule record {d!r}: {exc}") from None
    if any(len(atom) != 3 for atom in body) or len(head) != 3:
        raise ValidationError(f"rule {name!r}: every pattern needs exactly three terms")
    for atom in body + (head,):
        if isinstance(atom[0], Literal) or isinstance(atom[1], Literal):
            raise ValidationError(f"rule {name!r}: literals may only appear in object position")
    return Rule(name, body, head)


def load_rules(text: str) -> list[Rule]:
    """Rules file: a JSON list of {name, body: [[s,p,o],...], head: [s,p,o]}.

    The list may also be wrapped as {"prefixes": {...}, "rules": [...]}.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RDFSyntaxError(exc.lineno, exc.colno, f"invalid JSON: {exc.msg}") from None
    prefixes = None
    if isinstance(data, dict):
        prefixes = data.get("prefixes")
        data = data.get("rules", [])
    if not isinstance(data, list):
        raise ValidationError("rules file must hold a JSON list of rules")
    return [rule_from_dict(d, prefixes) for d in data]
