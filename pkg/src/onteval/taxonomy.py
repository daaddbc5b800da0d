"""Directed-graph helpers for the subclass hierarchy."""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Mapping

from .errors import CyclicGraphError


def adjacency(edges: Iterable[tuple[str, str]]) -> dict[str, set[str]]:
    out: dict[str, set[str]] = defaultdict(set)
    for a, b in edges:
        out[a].add(b)
        out.setdefault(b, set())
    return out


def strongly_connected_components(adj: Mapping[str, Iterable[str]]) -> list[list[str]]:
    """Tarjan's algorithm, iterative so deep hierarchies do not hit the recursion limit."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    components: list[list[str]] = []
    counter = 0

    for root in sorted(adj):
        if root in index:
            continue
        work = [(root, iter(sorted(adj.get(root, ()))))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, children = work[-1]
            advanced = False
            for child in children:
                if child not in index:
                    index[child] = low[child] = counter
                    counter += 1
                    stack.append(child)
                    on_stack.add(child)
                    work.append((child, iter(sorted(adj.get(child, ())))))
                    advanced = True
                    break
                if child in on_stack:
                    low[node] = min(low[node], index[child])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    comp.append(member)
                    if member == node:
                        break
                components.append(sorted(comp))
    return components


def cycles(adj: Mapping[str, Iterable[str]]) -> list[list[str]]:
    """Components that contain a cycle: size >= 2, or a self-loop."""
    found = [c for c in strongly_connected_components(adj) if len(c) > 1 or c[0] in adj.get(c[0], ())]
    return sorted(found)


def topological_order(adj: Mapping[str, Iterable[str]]) -> list[str]:
    """Nodes ordered so every node precedes the targets of its edges.

    Raises CyclicGraphError when no such order exists.
    """
    indegree: dict[str, int] = {n: 0 for n in adj}
    for n, targets in adj.items():
        for t in targets:
            indegree[t] = indegree.get(t, 0) + 1
    ready = sorted(n for n, d in indegree.items() if d == 0)
    order: list[str] = []
    while ready:
        n = ready.pop()
        order.append(n)
        for t in adj.get(n, ()):
            indegree[t] -= 1
            if indegree[t] == 0:
                ready.append(t)
    if len(order) != len(indegree):
        found = cycles(adj)
        raise CyclicGraphError(found[0] if found else sorted(set(indegree) - set(order)))
    return order


def ancestor_sets(adj: Mapping[str, Iterable[str]]) -> dict[str, frozenset[str]]:
    """Strict ancestors (all nodes reachable by >= 1 edge) of every node.

    Works on cyclic graphs too: members of a cycle are their own ancestors.
    """
    comps = strongly_connected_components(adj)
    comp_of = {n: i for i, comp in enumerate(comps) for n in comp}
    # Tarjan emits components in reverse topological order: targets first.
    reach: list[frozenset[str]] = []
    for i, comp in enumerate(comps):
        acc: set[str] = set()
        cyclic = len(comp) > 1 or comp[0] in adj.get(comp[0], ())
        if cyclic:
            acc.update(comp)
        for n in comp:
            for t in adj.get(n, ()):
                j = comp_of[t]
                if j != i:
                    acc.add(t)
                    acc |= reach[j]
        reach.append(frozenset(acc))
    return {n: reach[comp_of[n]] for n in comp_of}
