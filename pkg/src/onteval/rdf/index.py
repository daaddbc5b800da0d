"""Hash indexes over a mutable triple collection, used by the rule engine and query evaluator."""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Iterator

from .terms import Term, Triple


class TripleIndex:
    def __init__(self, triples: Iterable[Triple] = ()):
        self.all: set[Triple] = set()
        self.by_s: dict[Term, set[Triple]] = defaultdict(set)
        self.by_p: dict[str, set[Triple]] = defaultdict(set)
        self.by_o: dict[Term, set[Triple]] = defaultdict(set)
        self.by_sp: dict[tuple, set[Triple]] = defaultdict(set)
        self.by_po: dict[tuple, set[Triple]] = defaultdict(set)
        for t in triples:
            self.add(t)

    def __len__(self) -> int:
        return len(self.all)

    def __contains__(self, t) -> bool:
        return t in self.all

    def add(self, t: Triple) -> bool:
        if t in self.all:
            return False
        s, p, o = t
        self.all.add(t)
        self.by_s[s].add(t)
        self.by_p[p].add(t)
        self.by_o[o].add(t)
        self.by_sp[(s, p)].add(t)
        self.by_po[(p, o)].add(t)
        return True

    def match(self, s=None, p=None, o=None) -> Iterator[Triple]:
        """Triples agreeing with every bound (non-None) position."""
        if s is not None and p is not None and o is not None:
            t = Triple(s, p, o)
            return iter((t,) if t in self.all else ())
        if s is not None and p is not None:
            return iter(self.by_sp.get((s, p), ()))
        if p is not None and o is not None:
            return iter(self.by_po.get((p, o), ()))
        if s is not None:
            found = self.by_s.get(s, ())
            return iter(found) if o is None else (t for t in found if t.object == o)
        if o is not None:
            return iter(self.by_o.get(o, ()))
        if p is not None:
            return iter(self.by_p.get(p, ()))
        return iter(self.all)
