import pytest
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from impartial.generators import cycle, lower_bound_family, two_cycle_path, ub_family
from impartial.graphs import (
    InputError,
    NominationGraph,
    PartialNominationGraph,
    Permutation,
    SelectionDistribution,
    graph_from_text,
    graph_to_text,
    graphs_from_text,
)


def random_graphs(n):
    choices = st.integers(min_value=1, max_value=n - 1)
    return st.lists(choices, min_size=n, max_size=n).map(
        lambda ks: NominationGraph(
            tuple(k if k < v else k + 1 for v, k in enumerate(ks, start=1))
        )
    )


def permutations_of(n):
    return st.permutations(list(range(1, n + 1))).map(lambda s: Permutation(tuple(s)))


# ---------------------------------------------------------------------------
# construction and validation

def test_rejects_self_loops():
    with pytest.raises(InputError):
        NominationGraph((1, 1))
    with pytest.raises(InputError):
        PartialNominationGraph((None, 2))


def test_rejects_small_and_out_of_range():
    with pytest.raises(InputError):
        NominationGraph((1,))
    with pytest.raises(InputError):
        NominationGraph((2, 3))
    with pytest.raises(InputError):
        NominationGraph((2, 0))


def test_total_graph_embeds_as_partial():
    g = NominationGraph((2, 1, 1))
    p = g.to_partial()
    assert p.out == g.out and p.is_total()


# ---------------------------------------------------------------------------
# indegree queries

def test_indegree_two_cycle():
    g = NominationGraph((2, 1))
    assert g.indegree(1) == 1 and g.indegree(2) == 1


def test_indegree_family_member():
    g0 = ub_family(7, 0)
    assert g0.indegree(2) == 2


def test_indegree_block_family_top():
    g = lower_bound_family(4, 2)
    assert g.indegree(1) == 4


def test_indegree_range_check():
    g = NominationGraph((2, 1))
    with pytest.raises(InputError):
        g.indegree(3)
    with pytest.raises(InputError):
        g.indegree(0)


def test_indegree_from():
    g = NominationGraph((2, 1))
    assert g.indegree_from(2, set()) == 0
    assert g.indegree_from(2, {1}) == 1
    g0 = ub_family(7, 0)
    assert g0.indegree_from(2, {1, 3}) == 2


def test_max_indegree_and_top():
    assert cycle(5).max_indegree_and_top() == (1, frozenset({1, 2, 3, 4, 5}), 1)
    assert ub_family(7, 0).max_indegree_and_top() == (2, frozenset({2}), 2)
    assert lower_bound_family(4, 2).max_indegree_and_top() == (4, frozenset({1}), 1)


def test_remove_out_edge():
    g = NominationGraph((2, 1))
    h = g.remove_out_edge(1)
    assert h.edges() == [(2, 1)]
    assert h.remove_out_edge(1) is h  # idempotent


def test_remove_out_edge_family_identity():
    # dropping vertex 3's edge from the i=0 member leaves the same graph
    # as dropping it from the two-cycle-plus-path graph
    left = ub_family(7, 0).remove_out_edge(3)
    right = two_cycle_path(7).remove_out_edge(3)
    assert left.out == right.out


# ---------------------------------------------------------------------------
# permutations

def test_reverse_and_swap_examples():
    pi = Permutation((1, 2, 3))
    assert pi.reverse().seq == (3, 2, 1)
    assert pi.swap(1, 3).seq == (3, 2, 1)
    assert pi.swap(2, 2).seq == pi.seq


def test_prefix_set_and_restrict():
    pi = Permutation((3, 1, 2))
    assert pi.prefix_set(3) == frozenset()
    assert pi.prefix_set(2) == frozenset({3, 1})
    assert pi.restrict({1, 2}) == (1, 2)
    assert pi.restrict({2, 3}) == (3, 2)


def test_relabel_cycle_rotation_preserves_structure():
    g = cycle(5)
    rot = Permutation((2, 3, 4, 5, 1))
    h = g.relabel(rot)
    assert sorted(h.indegrees()) == sorted(g.indegrees())
    assert h.max_indegree_and_top()[0] == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=2, max_value=7).flatmap(permutations_of))
def test_permutation_roundtrips(pi):
    n = pi.n
    assert all(pi.position_of(pi.vertex_at(i)) == i for i in range(1, n + 1))
    assert pi.reverse().reverse() == pi
    assert pi.swap(1, n).swap(1, n) == pi


@settings(max_examples=60, deadline=None)
@given(
    st.integers(min_value=2, max_value=6).flatmap(
        lambda n: st.tuples(random_graphs(n), permutations_of(n))
    )
)
def test_relabel_preserves_indegree_multiset(case):
    g, pi = case
    assert sorted(g.relabel(pi).indegrees()) == sorted(g.indegrees())


@settings(max_examples=60, deadline=None)
@given(
    st.integers(min_value=2, max_value=6).flatmap(
        lambda n: st.tuples(random_graphs(n), permutations_of(n))
    )
)
def test_prefix_indegree_sum(case):
    # the sum of left-indegrees counts the edges whose source precedes
    # the target; equality with n iff that holds for every edge
    g, pi = case
    total = sum(g.indegree_from(v, pi.prefix_set(v)) for v in g.vertices)
    assert total <= g.n
    all_forward = all(
        pi.position_of(v) < pi.position_of(g.target_of(v)) for v in g.vertices
    )
    assert (total == g.n) == all_forward
    assert all(g.indegree_from(v, g.vertices) == g.indegree(v) for v in g.vertices)


def test_prefix_indegree_sum_attains_n_on_partial_path():
    # 1 -> 2 -> 3 with vertex 3 bare, scanned in order (1, 2, 3)
    g = PartialNominationGraph((2, 3, None))
    pi = Permutation((1, 2, 3))
    assert sum(g.indegree_from(v, pi.prefix_set(v)) for v in g.vertices) == 2
    assert len(g.edges()) == 2


# ---------------------------------------------------------------------------
# selection distributions

def test_distribution_validation():
    SelectionDistribution((Fraction(1, 2), Fraction(1, 2)))
    with pytest.raises(InputError):
        SelectionDistribution((Fraction(3, 4), Fraction(1, 2)))
    with pytest.raises(InputError):
        SelectionDistribution((Fraction(-1, 4), Fraction(1, 2)))


def test_distribution_accessors():
    d = SelectionDistribution((Fraction(1, 4), Fraction(1, 2)))
    assert d.prob_of(2) == Fraction(1, 2)
    assert d.total == Fraction(3, 4)
    assert not d.is_exact
    assert d.deficit() == Fraction(1, 4)


def test_expected_indegree():
    g = NominationGraph((2, 1, 1))
    d = SelectionDistribution((Fraction(1, 2), Fraction(1, 2), Fraction(0)))
    assert d.expected_indegree(g) == Fraction(3, 2)


# ---------------------------------------------------------------------------
# text format

def test_text_roundtrip_total():
    g = cycle(7)
    line = graph_to_text(g)
    assert line == "7; 7,1,2,3,4,5,6"
    assert graph_from_text(line) == g


def test_text_roundtrip_partial():
    p = PartialNominationGraph((2, None, 1))
    line = graph_to_text(p)
    assert line == "3; 2,0,1"
    assert graph_from_text(line) == p


def test_text_errors():
    with pytest.raises(InputError):
        graph_from_text("3; 1,2")
    with pytest.raises(InputError):
        graph_from_text("nonsense")
    with pytest.raises(InputError):
        graph_from_text("2; 1,1")


def test_multi_line_parse():
    text = graph_to_text(cycle(3)) + "\n\n" + graph_to_text(cycle(4)) + "\n"
    assert [g.n for g in graphs_from_text(text)] == [3, 4]
