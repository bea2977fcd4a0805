"""Naive reference implementations used as independent oracles.

Everything here enumerates permutations with itertools and plain set
arithmetic, deliberately sharing no code with the package's evaluators.
Slow, small-n only.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

from impartial.graphs import AnyGraph, NominationGraph


def scan_select(g: AnyGraph, order: tuple[int, ...], exclude_candidate: bool = True) -> int:
    cand = order[0]
    d = 0
    for j in range(1, g.n):
        v = order[j]
        left = set(order[:j])
        cmp_set = left - {cand} if exclude_candidate else left
        if g.indegree_from(v, cmp_set) >= d:
            cand = v
            d = g.indegree_from(v, left)
    return cand


def perm_dist(g: AnyGraph, exclude_candidate: bool = True) -> list[Fraction]:
    counts = [0] * g.n
    for order in itertools.permutations(g.vertices):
        counts[scan_select(g, order, exclude_candidate) - 1] += 1
    total = math.factorial(g.n)
    return [Fraction(c, total) for c in counts]


def prug_p(g: AnyGraph, order: tuple[int, ...]) -> list[Fraction]:
    n = g.n
    pos = {v: i for i, v in enumerate(order, start=1)}
    degs = {v: g.indegree(v) for v in g.vertices}
    dmax = max(degs.values())
    front = max(g.vertices, key=lambda v: (degs[v], pos[v]))
    reduced = g.remove_out_edge(front)
    gap = all(degs[front] >= reduced.indegree(v) + 2 for v in g.vertices if v != front)
    p = [Fraction(0)] * n
    p[front - 1] = Fraction(3, 4) if gap else Fraction(1, 2)
    runner = max((v for v in g.vertices if v != front), key=lambda v: (degs[v], pos[v]))
    if g.target_of(runner) == front and (
        degs[runner] == dmax or (degs[runner] == dmax - 1 and pos[runner] > pos[front])
    ):
        p[runner - 1] = Fraction(1, 2)
    return p


def prug_dist(g: AnyGraph) -> list[Fraction]:
    total = [Fraction(0)] * g.n
    for order in itertools.permutations(g.vertices):
        for v, p in enumerate(prug_p(g, order)):
            total[v] += p
    return [t / math.factorial(g.n) for t in total]


def prugd_dist(g: NominationGraph) -> list[Fraction]:
    """Default-vertex wrap of the two-slot rule, averaged over every
    (default vertex, ordering) pair through the reverse-paired q vector."""
    n = g.n
    acc = [Fraction(0)] * n
    for vbar in g.vertices:
        reduced = g.remove_out_edge(vbar)
        for order in itertools.permutations(g.vertices):
            p1 = prug_p(reduced, order)
            p2 = prug_p(reduced, order[::-1])
            q = [(a + b) / 2 for a, b in zip(p1, p2)]
            for v in range(n):
                acc[v] += q[v]
            acc[vbar - 1] += 1 - sum(q)
    total = n * math.factorial(n)
    return [a / total for a in acc]


def rd_dist(g: NominationGraph) -> list[Fraction]:
    return [Fraction(g.indegree(v), g.n) for v in g.vertices]


def mix_dist(g: NominationGraph) -> list[Fraction]:
    if g.n <= 5:
        return rd_dist(g)
    pe = perm_dist(g)
    pd = prugd_dist(g)
    return [Fraction(825, 1049) * a + Fraction(224, 1049) * b for a, b in zip(pe, pd)]


def all_graphs(n: int):
    choices = [[t for t in range(1, n + 1) if t != v] for v in range(1, n + 1)]
    for out in itertools.product(*choices):
        yield NominationGraph(out)
