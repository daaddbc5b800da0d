"""Brute-force reference implementations and random instance generators.

The oracles work from raw triples with the most direct definition available
(full reachability, exhaustive enumeration) and share no code with the
package beyond the term types.
"""

from __future__ import annotations

import itertools
import random
from collections import defaultdict

from onteval.rdf.terms import (
    OWL_CLASS,
    OWL_DISJOINT_WITH,
    OWL_SAME_AS,
    RDF_TYPE,
    RDFS_DOMAIN,
    RDFS_RANGE,
    RDFS_SUBCLASS_OF,
    Literal,
    Triple,
    TripleSet,
    Variable,
)

EX = "http://example.org/t#"


def cls(i: int) -> str:
    return f"{EX}C{i}"


def inst(i: int) -> str:
    return f"{EX}i{i}"


def prop(i: int) -> str:
    return f"{EX}p{i}"


# ---------------------------------------------------------------- generators


def random_schema(rng: random.Random, max_classes: int = 12, acyclic: bool = False) -> dict:
    """Random classes, subclass edges, disjointness, typed instances and property uses.

    Every class is declared owl:Class; instances never appear in class position.
    Self-disjointness may occur; it does not form a pair.
    """
    n = rng.randint(1, max_classes)
    classes = [cls(i) for i in range(n)]
    order = classes[:]
    rng.shuffle(order)
    rank = {c: k for k, c in enumerate(order)}
    edges = set()
    for _ in range(rng.randint(0, 2 * n)):
        a, b = rng.choice(classes), rng.choice(classes)
        if acyclic and rank[a] >= rank[b]:
            continue
        edges.add((a, b))
    disjoint = set()
    for _ in range(rng.randint(0, 3)):
        a, b = rng.choice(classes), rng.choice(classes)
        disjoint.add((a, b))
    instances = [inst(i) for i in range(rng.randint(0, 5))]
    types = set()
    for i in instances:
        for c in rng.sample(classes, rng.randint(0, min(3, n))):
            types.add((i, c))
    props = [prop(i) for i in range(rng.randint(0, 3))]
    domains, ranges, uses = set(), set(), set()
    for p in props:
        if rng.random() < 0.7:
            domains.add((p, rng.choice(classes)))
        if rng.random() < 0.5:
            ranges.add((p, rng.choice(classes)))
        for _ in range(rng.randint(0, 3)):
            if not instances:
                break
            o = rng.choice(instances) if rng.random() < 0.8 else Literal("v")
            uses.add((rng.choice(instances), p, o))

    triples = {Triple(c, RDF_TYPE, OWL_CLASS) for c in classes}
    triples |= {Triple(a, RDFS_SUBCLASS_OF, b) for a, b in edges}
    triples |= {Triple(a, OWL_DISJOINT_WITH, b) for a, b in disjoint}
    triples |= {Triple(i, RDF_TYPE, c) for i, c in types}
    triples |= {Triple(p, RDFS_DOMAIN, c) for p, c in domains}
    triples |= {Triple(p, RDFS_RANGE, c) for p, c in ranges}
    triples |= {Triple(*u) for u in uses}
    return {
        "classes": classes,
        "edges": edges,
        "disjoint": disjoint,
        "instances": instances,
        "types": types,
        "domains": domains,
        "ranges": ranges,
        "uses": uses,
        "triples": TripleSet(frozenset(triples)),
    }


def random_small_graph(rng: random.Random, max_triples: int = 10) -> set[Triple]:
    nodes = [f"{EX}n{i}" for i in range(4)]
    preds = [f"{EX}q{i}" for i in range(2)]
    objects = nodes + [Literal("a"), Literal("b", language="en")]
    return {
        Triple(rng.choice(nodes), rng.choice(preds), rng.choice(objects))
        for _ in range(rng.randint(0, max_triples))
    }


def random_patterns(rng: random.Random, max_patterns: int = 3) -> list[tuple]:
    nodes = [f"{EX}n{i}" for i in range(4)]
    preds = [f"{EX}q{i}" for i in range(2)]
    variables = [Variable(v) for v in "abc"]
    pats = []
    for _ in range(rng.randint(1, max_patterns)):
        s = rng.choice(variables) if rng.random() < 0.6 else rng.choice(nodes)
        p = rng.choice(variables) if rng.random() < 0.2 else rng.choice(preds)
        o = rng.choice(variables) if rng.random() < 0.6 else rng.choice(nodes + [Literal("a")])
        pats.append((s, p, o))
    return pats


# ---------------------------------------------------------------- graph oracles


def reach(edges) -> dict[str, set[str]]:
    """Nodes reachable by one or more edges, by repeated breadth-first search."""
    succ = defaultdict(set)
    for a, b in edges:
        succ[a].add(b)
    out = {}
    for start in set(succ) | {b for _, b in edges}:
        seen, frontier = set(), list(succ[start])
        while frontier:
            n = frontier.pop()
            if n not in seen:
                seen.add(n)
                frontier.extend(succ[n])
        out[start] = seen
    return out


def cycle_groups(edges) -> list[frozenset[str]]:
    """Nodes on some cycle, grouped by mutual reachability."""
    r = reach(edges)
    on_cycle = [n for n in r if n in r[n]]
    groups = {frozenset(m for m in on_cycle if m in r[n] and n in r[m]) | {n} for n in on_cycle}
    return sorted(groups, key=sorted)


def _up(r, c) -> set[str]:
    return {c} | r.get(c, set())


def partition_oracle(schema) -> int:
    r = reach(schema["edges"])
    pairs = {frozenset(p) for p in schema["disjoint"] if p[0] != p[1]}
    count = 0
    for c in schema["classes"]:
        up = _up(r, c)
        count += sum(1 for p in pairs if p <= up)
    by_inst = defaultdict(set)
    for i, c in schema["types"]:
        by_inst[i] |= _up(r, c)
    for i, up in by_inst.items():
        count += sum(1 for p in pairs if p <= up)
    return count


def semantic_inconsistency_oracle(schema) -> int:
    r = reach(schema["edges"])
    proper = {(a, b) for a, b in schema["disjoint"] if a != b}
    pairs = proper | {(b, a) for a, b in proper}
    types = defaultdict(set)
    for i, c in schema["types"]:
        types[i].add(c)
    dom = defaultdict(set)
    rng_ = defaultdict(set)
    for p, c in schema["domains"]:
        dom[p].add(c)
    for p, c in schema["ranges"]:
        rng_[p].add(c)

    def clash(declared, node) -> bool:
        for d in declared:
            for t in types.get(node, ()):
                for b, c in pairs:
                    if b in _up(r, d) and c in _up(r, t):
                        return True
        return False

    count = 0
    for s, p, o in schema["uses"]:
        bad = clash(dom[p], s) or (not isinstance(o, Literal) and clash(rng_[p], o))
        count += bad
    return count


def redundancy_oracle(schema) -> int:
    """Edges whose removal keeps their endpoints connected, plus implied type assertions."""
    edges = schema["edges"]
    count = 0
    for e in edges:
        if e[1] in reach(edges - {e}).get(e[0], set()):
            count += 1
    r = reach(edges)
    by_inst = defaultdict(set)
    for i, c in schema["types"]:
        by_inst[i].add(c)
    for i, asserted in by_inst.items():
        count += sum(1 for t in asserted if any(u != t and t in r.get(u, ()) for u in asserted))
    return count


def identical_definitions_oracle(schema) -> int:
    def signature(c):
        return (
            frozenset(b for a, b in schema["edges"] if a == c),
            frozenset(p for p, d in schema["domains"] if d == c),
            frozenset({b for a, b in schema["disjoint"] if a == c != b} | {a for a, b in schema["disjoint"] if b == c != a}),
        )

    return sum(1 for a, b in itertools.combinations(schema["classes"], 2) if signature(a) == signature(b))


# ---------------------------------------------------------------- query / rule oracles


def brute_force_query(triples: set[Triple], patterns, projected) -> set[tuple]:
    """Try every assignment of the pattern variables over the active domain."""
    variables = sorted({t for p in patterns for t in p if isinstance(t, Variable)}, key=lambda v: v.name)
    domain = {t for tr in triples for t in tr}
    rows = set()
    for values in itertools.product(domain, repeat=len(variables)):
        b = dict(zip(variables, values))
        if all(tuple(b.get(t, t) if isinstance(t, Variable) else t for t in p) in triples for p in patterns):
            rows.add(tuple(b[Variable(v)] for v in projected))
    return rows


def naive_closure(triples: set[Triple], rules) -> set[Triple]:
    """Apply every rule to every assignment until nothing changes."""
    known = set(triples)
    while True:
        fresh = set()
        for rule in rules:
            for row in brute_force_query(known, list(rule.body), [v.name for v in _rule_vars(rule)]):
                b = dict(zip(_rule_vars(rule), row))
                s, p, o = (b.get(t, t) if isinstance(t, Variable) else t for t in rule.head)
                if isinstance(s, Literal) or not isinstance(p, str):
                    continue
                t = Triple(s, p, o)
                if t not in known:
                    fresh.add(t)
        if not fresh:
            return known
        known |= fresh


def _rule_vars(rule):
    return sorted({t for p in rule.body for t in p if isinstance(t, Variable)}, key=lambda v: v.name)


def random_rule_graph(rng: random.Random) -> set[Triple]:
    """Small graphs exercising subclass, typing, sameAs and one custom predicate."""
    classes = [cls(i) for i in range(4)]
    things = [inst(i) for i in range(4)]
    p = prop(0)
    out = set()
    for _ in range(rng.randint(0, 10)):
        kind = rng.randrange(4)
        if kind == 0:
            out.add(Triple(rng.choice(classes), RDFS_SUBCLASS_OF, rng.choice(classes)))
        elif kind == 1:
            out.add(Triple(rng.choice(things), RDF_TYPE, rng.choice(classes)))
        elif kind == 2:
            out.add(Triple(rng.choice(things), OWL_SAME_AS, rng.choice(things)))
        else:
            out.add(Triple(rng.choice(things), p, rng.choice(things + [Literal("x")])))
    return out
