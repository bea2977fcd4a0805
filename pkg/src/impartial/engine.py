"""Vectorized permutation-space evaluation.

The exact evaluators and the exhaustive sweeps all reduce to running a
selection rule over every permutation of the vertices (or a sampled
batch of permutations) and tallying integer counts.  This module does
that with numpy over whole batches of permutations at once; the counts
are exact integers, so dividing by the batch size at the end loses
nothing.

The key shortcut: when the left-to-right scan considers vertex v, the
prefix is exactly the set of vertices placed before v.  So the indegree
from the left that the scan sees for v equals the number of in-neighbors
of v placed before v, which can be computed for all permutations and all
vertices in O(n) vector operations, without materializing prefixes.

Everything here is 0-based and array-typed; the public modules convert
at the boundary.
"""
from __future__ import annotations

import numpy as np

from .graphs import AnyGraph, CapacityError

_TABLE_MAX_N = 10
_table_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def _build_perms(n: int) -> np.ndarray:
    if n == 1:
        return np.zeros((1, 1), dtype=np.int16)
    base = _build_perms(n - 1)
    rows = base.shape[0]
    blocks = []
    for cut in range(n):
        col = np.full((rows, 1), n - 1, dtype=np.int16)
        blocks.append(np.concatenate([base[:, :cut], col, base[:, cut:]], axis=1))
    return np.concatenate(blocks, axis=0)


def permutation_table(n: int) -> tuple[np.ndarray, np.ndarray]:
    """(perms, pos): all n! orderings, perms[r, j] = vertex at position j,
    pos[r, v] = position of vertex v.  Cached per n."""
    if n > _TABLE_MAX_N:
        raise CapacityError(
            f"full permutation table for n={n} exceeds the n<={_TABLE_MAX_N} cap"
        )
    if n not in _table_cache:
        perms = _build_perms(n)
        pos = np.argsort(perms, axis=1).astype(np.int16)
        while len(_table_cache) >= 2:
            _table_cache.pop(next(iter(_table_cache)))
        _table_cache[n] = (perms, pos)
    return _table_cache[n]


def out_array(g: AnyGraph) -> np.ndarray:
    """0-based target array; -1 marks an absent edge."""
    return np.array([-1 if t is None else t - 1 for t in g.out], dtype=np.int16)


def indegrees(out0: np.ndarray) -> np.ndarray:
    n = out0.shape[0]
    present = out0[out0 >= 0]
    return np.bincount(present, minlength=n).astype(np.int64)


def adjacency(out0: np.ndarray) -> np.ndarray:
    n = out0.shape[0]
    a = np.zeros((n, n), dtype=bool)
    src = np.nonzero(out0 >= 0)[0]
    a[src, out0[src]] = True
    return a


def left_indegree_matrix(out0: np.ndarray, pos: np.ndarray) -> np.ndarray:
    """C[r, v] = number of in-neighbors of v placed before v in ordering r."""
    rows, n = pos.shape
    c = np.zeros((rows, n), dtype=np.int16)
    for u in range(n):
        t = int(out0[u])
        if t >= 0:
            c[:, t] += pos[:, u] < pos[:, t]
    return c


def run_selection(
    out0: np.ndarray,
    perms: np.ndarray,
    pos: np.ndarray,
    exclude_candidate: bool = True,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Left-to-right candidate scan over a batch of orderings.

    Returns (selected, final_d, max_left) per ordering, where final_d is
    the selected vertex's indegree from the left and max_left the maximum
    indegree from the left over all vertices.  The two must agree; the
    caller is expected to assert that.

    With exclude_candidate=False the scan compares against the full
    prefix indegree instead of ignoring the current candidate's edge.
    This deliberately wrong variant exists as a negative control.
    """
    rows, n = perms.shape
    c = left_indegree_matrix(out0, pos)
    a = adjacency(out0)
    idx = np.arange(rows)
    cand = perms[:, 0].copy()
    d = np.zeros(rows, dtype=np.int16)
    for j in range(1, n):
        v = perms[:, j]
        contrib = c[idx, v]
        if exclude_candidate:
            comparand = contrib - a[cand, v]
        else:
            comparand = contrib
        upd = comparand >= d
        cand = np.where(upd, v, cand)
        d = np.where(upd, contrib, d)
    return cand, d, c.max(axis=1)


def selection_counts(
    out0: np.ndarray, exclude_candidate: bool = True
) -> tuple[np.ndarray, int, int]:
    """Exact per-vertex selection counts over all n! orderings.

    Returns (counts, runs, violations) where violations counts orderings
    whose selected vertex misses the maximum indegree from the left.
    """
    n = out0.shape[0]
    perms, pos = permutation_table(n)
    sel, d, m = run_selection(out0, perms, pos, exclude_candidate)
    counts = np.bincount(sel, minlength=n)
    return counts, perms.shape[0], int((d != m).sum())


def sampled_selection_counts(
    out0: np.ndarray,
    samples: int,
    seed: int,
    chunk: int = 20000,
) -> tuple[np.ndarray, int]:
    """Per-vertex selection counts over uniformly sampled orderings.

    Deterministic per seed.  Returns (counts, violations).
    """
    n = out0.shape[0]
    rng = np.random.default_rng(seed)
    counts = np.zeros(n, dtype=np.int64)
    violations = 0
    remaining = samples
    while remaining > 0:
        b = min(chunk, remaining)
        u = rng.random((b, n))
        perms = np.argsort(u, axis=1).astype(np.int16)
        pos = np.argsort(perms, axis=1).astype(np.int16)
        sel, d, m = run_selection(out0, perms, pos)
        counts += np.bincount(sel, minlength=n)
        violations += int((d != m).sum())
        remaining -= b
    return counts, violations


def runner_up_gap_quarter_counts(out0: np.ndarray) -> tuple[np.ndarray, int]:
    """Exact per-vertex counts, in quarter units, of the two-slot rule
    over all n! orderings.

    Per ordering the rule gives the lexicographic (indegree, position)
    maximum 3/4 (if removing its own edge leaves it ahead of everyone
    else by at least 2) or 1/2, and gives the runner-up 1/2 when the
    runner-up nominates the front vertex and either ties the maximum
    indegree or sits one below it while placed to the right of the front
    vertex.  Returns (quarter_counts, runs).
    """
    n = out0.shape[0]
    perms, pos = permutation_table(n)
    rows = perms.shape[0]
    deg = indegrees(out0)
    dmax = int(deg.max())

    gap_ok = np.zeros(n, dtype=bool)
    for v in range(n):
        others = deg.copy()
        t = int(out0[v])
        if t >= 0:
            others[t] -= 1
        others[v] = -1
        gap_ok[v] = deg[v] >= others.max() + 2

    keys = (deg.astype(np.int16) * (n + 1))[None, :] + pos
    idx = np.arange(rows)
    v_first = np.argmax(keys, axis=1)
    keys2 = keys.copy()
    keys2[idx, v_first] = -1
    v_second = np.argmax(keys2, axis=1)

    first_weights = np.where(gap_ok[v_first], 3, 2)
    deg_second = deg[v_second]
    nominates_first = out0[v_second] == v_first
    second_hit = nominates_first & (
        (deg_second == dmax)
        | ((deg_second == dmax - 1) & (pos[idx, v_second] > pos[idx, v_first]))
    )

    counts = 3 * np.bincount(v_first[first_weights == 3], minlength=n)
    counts = counts + 2 * np.bincount(v_first[first_weights == 2], minlength=n)
    counts = counts + 2 * np.bincount(v_second[second_hit], minlength=n)
    return counts.astype(np.int64), rows


def left_indegree_profile(out0: np.ndarray, vstar0: int) -> tuple[np.ndarray, np.ndarray]:
    """Per ordering: (left indegree of vstar, max left indegree among the
    other vertices), over all n! orderings."""
    n = out0.shape[0]
    _, pos = permutation_table(n)
    c = left_indegree_matrix(out0, pos)
    a = c[:, vstar0].copy()
    c[:, vstar0] = -1
    return a, c.max(axis=1)
