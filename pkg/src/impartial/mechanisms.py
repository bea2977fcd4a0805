"""The five selection mechanisms.

Each mechanism comes in two forms: an exact evaluator returning the full
selection distribution as rationals (enumerating all n! vertex
orderings, so guarded by an enumeration cap), and a seeded sampler
returning a single outcome.

perm  - left-to-right candidate scan along a uniform random ordering.
rd    - random dictatorship: a uniform vertex's nominee.
prug  - two-slot rule with a gap bonus, averaged over an ordering and
        its reverse; may select no one (inexact).
prugd - prug wrapped with a uniformly chosen default vertex that absorbs
        the unassigned probability.
mix   - rd for n <= 5, otherwise a fixed coin between perm and prugd.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from . import engine
from .graphs import (
    AnyGraph,
    CapacityError,
    InputError,
    NominationGraph,
    PartialNominationGraph,
    Permutation,
    SelectionDistribution,
)
from .rng import SeedStream, as_stream

ENUM_CAP = 10       # exact perm / prug
DEFAULT_WRAP_CAP = 8  # exact prugd / mix (extra factor n over the above)

MIX_PERM_WEIGHT = Fraction(825, 1049)
MIX_PRUGD_WEIGHT = Fraction(224, 1049)
MIX_SMALL_N = 5


def _require_total(g: AnyGraph, name: str) -> NominationGraph:
    if not isinstance(g, NominationGraph):
        raise InputError(f"{name} is only defined on total nomination graphs")
    return g


def _check_cap(n: int, cap: int, name: str, sampler: str) -> None:
    if n > cap:
        raise CapacityError(
            f"exact {name} enumerates {n}! orderings and is capped at "
            f"n <= {cap}; use {sampler} instead"
        )


# ---------------------------------------------------------------------------
# Permutation mechanism

@dataclass(frozen=True)
class PermRunTrace:
    """One deterministic run of the candidate scan.

    steps[k] is the (candidate, candidate_left_indegree) pair after the
    scan has considered k+1 vertices; steps[0] is the initial state.
    The candidate's left indegree never decreases, and the selected
    vertex always attains the maximum indegree from the left.
    """

    permutation: Permutation
    steps: tuple[tuple[int, int], ...]
    selected: int
    selected_indegree: int
    max_left_indegree: int


def perm_run(g: AnyGraph, pi: Permutation, exclude_candidate: bool = True) -> PermRunTrace:
    """Scan the vertices in pi's order, keeping the candidate with the
    highest indegree from the left.

    A newly considered vertex takes over on ties (>=), and the edge from
    the current candidate is ignored in the comparison, while the stored
    indegree counts the full prefix.  That asymmetry is what keeps the
    rule impartial; exclude_candidate=False switches to the naive
    comparison and is kept only as a negative control.
    """
    n = g.n
    if pi.n != n:
        raise InputError(f"permutation size {pi.n} != graph size {n}")
    cand = pi.vertex_at(1)
    d = 0
    steps = [(cand, d)]
    prefix: set[int] = {cand}
    for j in range(2, n + 1):
        v = pi.vertex_at(j)
        full = g.indegree_from(v, prefix)
        comparand = full - (1 if g.out[cand - 1] == v else 0) if exclude_candidate else full
        if comparand >= d:
            cand = v
            d = full
        steps.append((cand, d))
        prefix.add(v)
    max_left = max(g.indegree_from(v, pi.prefix_set(v)) for v in g.vertices)
    if d != max_left:
        raise RuntimeError(
            f"selected vertex {cand} has left indegree {d}, not the maximum {max_left}"
        )
    return PermRunTrace(pi, tuple(steps), cand, g.indegree(cand), max_left)


def perm_exact(g: AnyGraph, cap: int = ENUM_CAP) -> SelectionDistribution:
    """Selection probabilities under a uniform random ordering: the
    fraction of the n! orderings whose scan selects each vertex."""
    _check_cap(g.n, cap, "perm", "perm_sample")
    counts, runs, violations = engine.selection_counts(engine.out_array(g))
    if violations:
        raise RuntimeError(f"{violations} runs missed the maximum left indegree")
    return SelectionDistribution.from_counts(counts.tolist(), runs)


def perm_sample(g: AnyGraph, seed: int | SeedStream) -> int:
    rng = as_stream(seed)
    return perm_run(g, rng.permutation(g.n)).selected


# ---------------------------------------------------------------------------
# Random dictatorship

def rd_exact(g: NominationGraph) -> SelectionDistribution:
    """Each vertex is selected with probability indegree/n."""
    g = _require_total(g, "rd")
    return SelectionDistribution(tuple(Fraction(d, g.n) for d in g.indegrees()))


def rd_sample(g: NominationGraph, seed: int | SeedStream) -> int:
    g = _require_total(g, "rd")
    rng = as_stream(seed)
    return g.target_of(rng.vertex(g.n))


# ---------------------------------------------------------------------------
# Plurality with runner-up and gap

def prug_p_vector(g: AnyGraph, pi: Permutation) -> tuple[Fraction, ...]:
    """The single-ordering weight vector of the two-slot rule.

    The front vertex (lexicographic maximum of (indegree, position))
    gets 3/4 if, once its own edge is removed, it still leads every
    other vertex by at least 2; otherwise 1/2.  The runner-up gets 1/2
    if it nominates the front vertex and either ties the maximum
    indegree or sits one below it while placed to the right of the
    front vertex.

    The entries can sum to 5/4, so this is a raw weight vector, not a
    SelectionDistribution; averaging an ordering with its reverse brings
    the total back to at most 1.
    """
    n = g.n
    if pi.n != n:
        raise InputError(f"permutation size {pi.n} != graph size {n}")
    degs = g.indegrees()
    dmax = max(degs)

    def key(v: int) -> tuple[int, int]:
        return degs[v - 1], pi.position_of(v)

    front = max(g.vertices, key=key)
    reduced = list(degs)
    front_target = g.out[front - 1]
    if front_target is not None:
        reduced[front_target - 1] -= 1
    gap = all(
        degs[front - 1] >= reduced[v - 1] + 2 for v in g.vertices if v != front
    )
    p = [Fraction(0)] * n
    p[front - 1] = Fraction(3, 4) if gap else Fraction(1, 2)
    runner = max((v for v in g.vertices if v != front), key=key)
    if g.out[runner - 1] == front and (
        degs[runner - 1] == dmax
        or (
            degs[runner - 1] == dmax - 1
            and pi.position_of(runner) > pi.position_of(front)
        )
    ):
        p[runner - 1] = Fraction(1, 2)
    return tuple(p)


def prug_q_vector(g: AnyGraph, pi: Permutation) -> SelectionDistribution:
    """Average of the weight vectors of pi and its reverse; always a
    valid (possibly deficient) distribution."""
    p1 = prug_p_vector(g, pi)
    p2 = prug_p_vector(g, pi.reverse())
    return SelectionDistribution(tuple((a + b) / 2 for a, b in zip(p1, p2)))


def prug_exact(g: AnyGraph, cap: int = ENUM_CAP) -> SelectionDistribution:
    """Average of the single-ordering weight vectors over all orderings.

    Averaging p directly equals averaging the reverse-paired q vectors,
    since reversal is a bijection on orderings.  The total may fall
    short of 1: the rule is allowed to select no one.
    """
    _check_cap(g.n, cap, "prug", "prug_sample")
    counts, runs = engine.runner_up_gap_quarter_counts(engine.out_array(g))
    return SelectionDistribution.from_counts(counts.tolist(), 4 * runs)


def prug_sample(g: AnyGraph, seed: int | SeedStream) -> Optional[int]:
    """Draw an ordering, form the reverse-averaged vector, then draw a
    vertex from it; None when no vertex is selected."""
    rng = as_stream(seed)
    q = prug_q_vector(g, rng.permutation(g.n))
    return rng.categorical(list(zip(g.vertices, q.probs)))


# ---------------------------------------------------------------------------
# Default-vertex wrapper

def dv_wrap_exact(
    inner_exact: Callable[[PartialNominationGraph], SelectionDistribution],
    g: NominationGraph,
) -> SelectionDistribution:
    """Run an inexact rule with a uniformly chosen default vertex.

    The default vertex's outgoing edge is removed before the inner rule
    runs, and the default vertex picks up the inner rule's unassigned
    mass on top of its own share, so the wrapped rule always selects.
    """
    g = _require_total(g, "dv_wrap")
    n = g.n
    acc = [Fraction(0)] * n
    for vbar in g.vertices:
        inner = inner_exact(g.remove_out_edge(vbar))
        if inner.n != n:
            raise InputError("inner mechanism changed the vertex count")
        for v in g.vertices:
            acc[v - 1] += inner.prob_of(v)
        acc[vbar - 1] += inner.deficit()
    dist = SelectionDistribution(tuple(a / n for a in acc))
    if not dist.is_exact:
        raise RuntimeError(f"default-vertex wrap lost mass: total {dist.total}")
    return dist


def prugd_exact(g: NominationGraph, cap: int = DEFAULT_WRAP_CAP) -> SelectionDistribution:
    g = _require_total(g, "prugd")
    _check_cap(g.n, cap, "prugd", "prugd_sample")
    return dv_wrap_exact(lambda h: prug_exact(h, cap=max(cap, ENUM_CAP)), g)


def prugd_sample(g: NominationGraph, seed: int | SeedStream) -> int:
    g = _require_total(g, "prugd")
    rng = as_stream(seed)
    vbar = rng.vertex(g.n)
    picked = prug_sample(g.remove_out_edge(vbar), rng)
    return vbar if picked is None else picked


# ---------------------------------------------------------------------------
# Mixture mechanism

def mix_exact(g: NominationGraph, cap: int = DEFAULT_WRAP_CAP) -> SelectionDistribution:
    """rd for n <= 5; otherwise the fixed 825/1049 : 224/1049 blend of
    perm and prugd."""
    g = _require_total(g, "mix")
    if g.n <= MIX_SMALL_N:
        return rd_exact(g)
    pe = perm_exact(g, cap=max(cap, ENUM_CAP))
    pd = prugd_exact(g, cap=cap)
    return SelectionDistribution(
        tuple(
            MIX_PERM_WEIGHT * a + MIX_PRUGD_WEIGHT * b
            for a, b in zip(pe.probs, pd.probs)
        )
    )


def mix_sample(g: NominationGraph, seed: int | SeedStream) -> int:
    g = _require_total(g, "mix")
    rng = as_stream(seed)
    if g.n <= MIX_SMALL_N:
        return rd_sample(g, rng)
    if rng.unit_fraction() < MIX_PERM_WEIGHT:
        return perm_sample(g, rng)
    return prugd_sample(g, rng)


# ---------------------------------------------------------------------------
# Registry

@dataclass(frozen=True)
class Mechanism:
    """A named evaluator pair plus its metadata.

    always_selects: the exact distribution sums to 1 (versus an inexact
    rule that may select no one).  accepts_partial: defined on graphs
    with missing out-edges.  asserted_symmetric: relabelling invariance
    is part of the contract (position-based tie-breaking rules make no
    such promise, whatever their averages do).
    """

    name: str
    always_selects: bool
    accepts_partial: bool
    asserted_symmetric: bool
    default_cap: int
    _exact: Callable[..., SelectionDistribution]
    _sample: Callable[..., Optional[int]]

    def exact(self, g: AnyGraph, cap: Optional[int] = None) -> SelectionDistribution:
        g = self._coerce(g)
        return self._exact(g, cap=self.default_cap if cap is None else cap)

    def sample(self, g: AnyGraph, seed: int | SeedStream) -> Optional[int]:
        return self._sample(self._coerce(g), seed)

    def _coerce(self, g: AnyGraph) -> AnyGraph:
        if not self.accepts_partial:
            return _require_total(g, self.name)
        return g


def _rd_exact_capless(g: NominationGraph, cap: int = 0) -> SelectionDistribution:
    return rd_exact(g)


MECHANISMS: dict[str, Mechanism] = {
    "perm": Mechanism("perm", True, True, True, ENUM_CAP, perm_exact, perm_sample),
    "rd": Mechanism("rd", True, False, True, ENUM_CAP, _rd_exact_capless, rd_sample),
    "prug": Mechanism("prug", False, True, False, ENUM_CAP, prug_exact, prug_sample),
    "prugd": Mechanism(
        "prugd", True, False, False, DEFAULT_WRAP_CAP, prugd_exact, prugd_sample
    ),
    "mix": Mechanism("mix", True, False, False, DEFAULT_WRAP_CAP, mix_exact, mix_sample),
}


def get_mechanism(name: str) -> Mechanism:
    try:
        return MECHANISMS[name]
    except KeyError:
        raise InputError(
            f"unknown mechanism {name!r}; expected one of {sorted(MECHANISMS)}"
        ) from None
