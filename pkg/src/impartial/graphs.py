"""Core value types: nomination graphs, permutations, selection distributions.

A nomination graph has n vertices (labelled 1..n), exactly one outgoing
edge per vertex and no self-loops.  A partial nomination graph relaxes
this to *at most* one outgoing edge per vertex; it is what remains after
a vertex's outgoing edge is removed.

All types are immutable values and all operations are pure, so instances
can be shared freely across parallel workers.  Vertices are 1-based
everywhere, including the serialized text form.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence


class InputError(ValueError):
    """Raised for invalid arguments: bad vertex indices, bad parameters."""


class CapacityError(RuntimeError):
    """Raised when an exact computation would exceed its enumeration cap."""


def _check_vertex(v: int, n: int) -> None:
    if not isinstance(v, int) or not 1 <= v <= n:
        raise InputError(f"vertex {v!r} out of range 1..{n}")


@dataclass(frozen=True)
class PartialNominationGraph:
    """Directed graph with at most one outgoing edge per vertex, no loops.

    ``out[v-1]`` is the 1-based target of vertex v's nomination, or None
    if v currently has no outgoing edge.
    """

    out: tuple[Optional[int], ...]

    def __post_init__(self) -> None:
        out = tuple(self.out)
        object.__setattr__(self, "out", out)
        n = len(out)
        if n < 2:
            raise InputError(f"need at least 2 vertices, got {n}")
        for v, t in enumerate(out, start=1):
            if t is None:
                continue
            if not isinstance(t, int) or not 1 <= t <= n:
                raise InputError(f"target {t!r} of vertex {v} out of range 1..{n}")
            if t == v:
                raise InputError(f"vertex {v} nominates itself")

    @property
    def n(self) -> int:
        return len(self.out)

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def target_of(self, v: int) -> Optional[int]:
        _check_vertex(v, self.n)
        return self.out[v - 1]

    def edges(self) -> list[tuple[int, int]]:
        return [(v, t) for v, t in enumerate(self.out, start=1) if t is not None]

    def indegree(self, v: int) -> int:
        _check_vertex(v, self.n)
        return sum(1 for t in self.out if t == v)

    def indegree_from(self, v: int, sources: Iterable[int]) -> int:
        _check_vertex(v, self.n)
        seen = set()
        for u in sources:
            _check_vertex(u, self.n)
            seen.add(u)
        return sum(1 for u in seen if self.out[u - 1] == v)

    def indegrees(self) -> tuple[int, ...]:
        degs = [0] * self.n
        for t in self.out:
            if t is not None:
                degs[t - 1] += 1
        return tuple(degs)

    def max_indegree_and_top(self) -> tuple[int, frozenset[int], int]:
        """Maximum indegree, the set attaining it, and its smallest member.

        The smallest-index member is the fixed deterministic choice of
        top vertex used wherever a single representative is needed.
        """
        degs = self.indegrees()
        dmax = max(degs)
        top = frozenset(v for v in self.vertices if degs[v - 1] == dmax)
        return dmax, top, min(top)

    def remove_out_edge(self, v: int) -> "PartialNominationGraph":
        """Drop v's outgoing edge; idempotent if it is already absent."""
        _check_vertex(v, self.n)
        if self.out[v - 1] is None:
            return self
        out = list(self.out)
        out[v - 1] = None
        return PartialNominationGraph(tuple(out))

    def relabel(self, pi: "Permutation") -> "PartialNominationGraph":
        """Rename vertices by pi, mapping each edge (u, w) to (pi(u), pi(w))."""
        if pi.n != self.n:
            raise InputError(f"permutation size {pi.n} != graph size {self.n}")
        out: list[Optional[int]] = [None] * self.n
        for v, t in enumerate(self.out, start=1):
            if t is not None:
                out[pi.image_of(v) - 1] = pi.image_of(t)
        return PartialNominationGraph(tuple(out))

    def is_total(self) -> bool:
        return all(t is not None for t in self.out)


@dataclass(frozen=True)
class NominationGraph:
    """Directed graph with exactly one outgoing edge per vertex, no loops.

    ``out[v-1]`` is the 1-based target of vertex v's nomination.  Since
    there are n edges among n vertices, the maximum indegree is >= 1.
    """

    out: tuple[int, ...]

    def __post_init__(self) -> None:
        out = tuple(self.out)
        object.__setattr__(self, "out", out)
        n = len(out)
        if n < 2:
            raise InputError(f"need at least 2 vertices, got {n}")
        for v, t in enumerate(out, start=1):
            if not isinstance(t, int) or not 1 <= t <= n:
                raise InputError(f"target {t!r} of vertex {v} out of range 1..{n}")
            if t == v:
                raise InputError(f"vertex {v} nominates itself")

    @property
    def n(self) -> int:
        return len(self.out)

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def target_of(self, v: int) -> int:
        _check_vertex(v, self.n)
        return self.out[v - 1]

    def edges(self) -> list[tuple[int, int]]:
        return [(v, t) for v, t in enumerate(self.out, start=1)]

    def indegree(self, v: int) -> int:
        _check_vertex(v, self.n)
        return sum(1 for t in self.out if t == v)

    def indegree_from(self, v: int, sources: Iterable[int]) -> int:
        _check_vertex(v, self.n)
        seen = set()
        for u in sources:
            _check_vertex(u, self.n)
            seen.add(u)
        return sum(1 for u in seen if self.out[u - 1] == v)

    def indegrees(self) -> tuple[int, ...]:
        degs = [0] * self.n
        for t in self.out:
            degs[t - 1] += 1
        return tuple(degs)

    def max_indegree_and_top(self) -> tuple[int, frozenset[int], int]:
        degs = self.indegrees()
        dmax = max(degs)
        top = frozenset(v for v in self.vertices if degs[v - 1] == dmax)
        return dmax, top, min(top)

    def to_partial(self) -> PartialNominationGraph:
        return PartialNominationGraph(self.out)

    def remove_out_edge(self, v: int) -> PartialNominationGraph:
        return self.to_partial().remove_out_edge(v)

    def retarget(self, v: int, new_target: int) -> "NominationGraph":
        """The graph with v's nomination redirected to new_target."""
        _check_vertex(v, self.n)
        out = list(self.out)
        out[v - 1] = new_target
        return NominationGraph(tuple(out))

    def relabel(self, pi: "Permutation") -> "NominationGraph":
        if pi.n != self.n:
            raise InputError(f"permutation size {pi.n} != graph size {self.n}")
        out = [0] * self.n
        for v, t in enumerate(self.out, start=1):
            out[pi.image_of(v) - 1] = pi.image_of(t)
        return NominationGraph(tuple(out))


AnyGraph = NominationGraph | PartialNominationGraph


def as_partial(g: AnyGraph) -> PartialNominationGraph:
    return g.to_partial() if isinstance(g, NominationGraph) else g


@dataclass(frozen=True)
class Permutation:
    """An ordering of the vertices 1..n.

    ``seq[i-1]`` is the vertex at position i.  The same object doubles
    as a relabelling map via :meth:`image_of`, which sends v to seq[v-1];
    this is the convention used when renaming graph vertices.
    """

    seq: tuple[int, ...]

    def __post_init__(self) -> None:
        seq = tuple(self.seq)
        object.__setattr__(self, "seq", seq)
        n = len(seq)
        if n < 1 or sorted(seq) != list(range(1, n + 1)):
            raise InputError(f"not a permutation of 1..{n}: {seq!r}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.seq)

    @cached_property
    def _pos(self) -> tuple[int, ...]:
        pos = [0] * self.n
        for i, v in enumerate(self.seq, start=1):
            pos[v - 1] = i
        return tuple(pos)

    def vertex_at(self, i: int) -> int:
        _check_vertex(i, self.n)
        return self.seq[i - 1]

    def position_of(self, v: int) -> int:
        _check_vertex(v, self.n)
        return self._pos[v - 1]

    def image_of(self, v: int) -> int:
        """The relabelling view: v is renamed to the v-th entry of seq."""
        _check_vertex(v, self.n)
        return self.seq[v - 1]

    def reverse(self) -> "Permutation":
        return Permutation(self.seq[::-1])

    def swap(self, i: int, j: int) -> "Permutation":
        """Exchange the vertices at positions i and j (i == j allowed)."""
        _check_vertex(i, self.n)
        _check_vertex(j, self.n)
        seq = list(self.seq)
        seq[i - 1], seq[j - 1] = seq[j - 1], seq[i - 1]
        return Permutation(tuple(seq))

    def prefix_set(self, v: int) -> frozenset[int]:
        """Vertices strictly to the left of v in this ordering."""
        p = self.position_of(v)
        return frozenset(self.seq[: p - 1])

    def restrict(self, subset: Iterable[int]) -> tuple[int, ...]:
        """The members of subset in the order they appear here."""
        keep = set(subset)
        for u in keep:
            _check_vertex(u, self.n)
        return tuple(v for v in self.seq if v in keep)


@dataclass(frozen=True)
class SelectionDistribution:
    """Exact per-vertex selection probabilities.

    Probabilities are arbitrary-precision rationals.  The total is at
    most 1; mechanisms that always select sum to exactly 1, inexact ones
    may leave a deficit (the probability of selecting no one).
    """

    probs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        probs = tuple(Fraction(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        if len(probs) < 2:
            raise InputError("distribution needs at least 2 vertices")
        for v, p in enumerate(probs, start=1):
            if not 0 <= p <= 1:
                raise InputError(f"probability of vertex {v} out of [0,1]: {p}")
        if sum(probs) > 1:
            raise InputError(f"probabilities sum to {sum(probs)} > 1")

    @classmethod
    def from_counts(cls, counts: Sequence[int], denominator: int) -> "SelectionDistribution":
        return cls(tuple(Fraction(int(c), denominator) for c in counts))

    @property
    def n(self) -> int:
        return len(self.probs)

    def prob_of(self, v: int) -> Fraction:
        _check_vertex(v, self.n)
        return self.probs[v - 1]

    @property
    def total(self) -> Fraction:
        return sum(self.probs, Fraction(0))

    @property
    def is_exact(self) -> bool:
        return self.total == 1

    def deficit(self) -> Fraction:
        """Probability mass not assigned to any vertex."""
        return 1 - self.total

    def expected_indegree(self, g: AnyGraph) -> Fraction:
        if g.n != self.n:
            raise InputError(f"graph size {g.n} != distribution size {self.n}")
        degs = g.indegrees()
        return sum((Fraction(degs[v]) * p for v, p in enumerate(self.probs)), Fraction(0))


# ---------------------------------------------------------------------------
# Text interchange format: one graph per line, "n; t1,t2,...,tn".
# Targets are 1-based; 0 marks an absent edge (partial graphs only).

def graph_to_text(g: AnyGraph) -> str:
    targets = ",".join("0" if t is None else str(t) for t in g.out)
    return f"{g.n}; {targets}"


def graph_from_text(line: str) -> AnyGraph:
    try:
        head, _, body = line.partition(";")
        n = int(head.strip())
        raw = [int(tok.strip()) for tok in body.strip().split(",")]
    except ValueError as exc:
        raise InputError(f"malformed graph line: {line!r}") from exc
    if len(raw) != n:
        raise InputError(f"expected {n} targets, got {len(raw)}: {line!r}")
    if any(t == 0 for t in raw):
        return PartialNominationGraph(tuple(None if t == 0 else t for t in raw))
    return NominationGraph(tuple(raw))


def graphs_from_text(text: str) -> list[AnyGraph]:
    return [graph_from_text(line) for line in text.splitlines() if line.strip()]
