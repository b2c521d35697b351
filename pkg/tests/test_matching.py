import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hedonic_sp.errors import GuardExceededError, ValidationError
from hedonic_sp.matching import (
    UndirectedWeightedGraph,
    brute_force_max_matching,
    edge_index,
    enumerate_matchings,
    intra_coalition_max_matching,
    is_matching,
    matching_precedes,
    matching_weight,
    max_weight_matching,
    one_factorization,
    order_key,
)


def cycle(n, w=1):
    return UndirectedWeightedGraph(n, {(i, (i + 1) % n): w for i in range(n)})


def all_edge_subsets_that_match(g):
    """Independent enumeration: filter every subset of the edge list."""
    edges = list(g.edges)
    for r in range(len(edges) + 1):
        for subset in itertools.combinations(edges, r):
            if is_matching(g, subset):
                yield frozenset(subset)


@st.composite
def graphs(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    weight = st.sampled_from([Fraction(1), Fraction(2), Fraction(3), Fraction(1, 2), Fraction(4, 3)])
    edges = {}
    for i in range(n):
        for j in range(i + 1, n):
            if draw(st.booleans()):
                edges[(i, j)] = draw(weight)
    return UndirectedWeightedGraph(n, edges)


def test_edge_index_is_lexicographic():
    n = 5
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    assert [edge_index(i, j, n) for i, j in pairs] == list(range(len(pairs)))
    assert edge_index(3, 1, n) == edge_index(1, 3, n)
    with pytest.raises(ValidationError):
        edge_index(2, 2, n)


def test_precedes_examples():
    assert matching_precedes(frozenset(), {(0, 1)}, 3)
    assert matching_precedes({(0, 1)}, {(0, 2)}, 3)
    m = {(0, 1), (2, 3)}
    assert not matching_precedes(m, m, 4)


def test_max_matching_path_tie():
    g = UndirectedWeightedGraph(3, {(0, 1): 2, (1, 2): 2})
    assert max_weight_matching(g) == {(0, 1)}
    assert brute_force_max_matching(g) == {(0, 1)}


def test_max_matching_seven_cycle():
    g = cycle(7)
    m = max_weight_matching(g)
    assert len(m) == 3 and matching_weight(g, m) == 3
    assert max(matching_weight(g, x) for x in all_edge_subsets_that_match(g)) == 3


def test_empty_and_single_edge():
    assert max_weight_matching(UndirectedWeightedGraph(4, {})) == frozenset()
    assert brute_force_max_matching(UndirectedWeightedGraph(2, {(0, 1): 2})) == {(0, 1)}


def test_triangle_prefers_heavy_edge():
    g = UndirectedWeightedGraph(3, {(0, 1): 1, (1, 2): 1, (0, 2): 2})
    assert len(list(all_edge_subsets_that_match(g))) == 4
    assert brute_force_max_matching(g) == {(0, 2)}
    assert max_weight_matching(g) == {(0, 2)}


def test_intra_coalition():
    g = cycle(7)
    assert intra_coalition_max_matching(g, [3]) == frozenset()
    sub = intra_coalition_max_matching(g, [4, 5, 6])
    assert len(sub) == 1 and matching_weight(g, sub) == 1
    assert intra_coalition_max_matching(g, range(7)) == max_weight_matching(g)


def test_graph_validation():
    with pytest.raises(ValidationError):
        UndirectedWeightedGraph(3, {(1, 1): 1})
    with pytest.raises(ValidationError):
        UndirectedWeightedGraph(3, {(0, 1): 0})
    with pytest.raises(ValidationError):
        UndirectedWeightedGraph(3, {(0, 1): 1, (1, 0): 2})


def test_brute_force_guard():
    with pytest.raises(GuardExceededError):
        brute_force_max_matching(UndirectedWeightedGraph(17, {}))


@given(graphs())
def test_enumeration_matches_subset_filter(g):
    assert set(enumerate_matchings(g)) == set(all_edge_subsets_that_match(g))


@given(graphs(max_n=8))
def test_blossom_agrees_with_brute_force(g):
    fast = max_weight_matching(g)
    assert is_matching(g, fast)
    assert fast == brute_force_max_matching(g)


@given(graphs(max_n=6))
def test_result_is_order_minimal(g):
    m = max_weight_matching(g)
    best = matching_weight(g, m)
    for other in all_edge_subsets_that_match(g):
        w = matching_weight(g, other)
        assert w <= best
        if w == best:
            assert other == m or matching_precedes(m, other, g.n)


@given(st.integers(2, 7), st.data())
def test_order_ignores_weights(n, data):
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    a = frozenset(data.draw(st.sets(st.sampled_from(edges))))
    b = frozenset(data.draw(st.sets(st.sampled_from(edges))))
    # the order is defined on edge sets alone, so it is total and antisymmetric
    if a != b:
        assert matching_precedes(a, b, n) != matching_precedes(b, a, n)
    assert order_key(a, n) == sum(2 ** edge_index(i, j, n) for i, j in a)


def test_weights_do_not_change_tie_order():
    # 4-cycle 0-1-3-2: both perfect matchings tie at every uniform weight.
    # keys: {01, 23} -> 2**0 + 2**5 = 33, {02, 13} -> 2**1 + 2**4 = 18
    g1 = UndirectedWeightedGraph(4, {(0, 1): 1, (2, 3): 1, (0, 2): 1, (1, 3): 1})
    g2 = UndirectedWeightedGraph(4, {e: Fraction(7, 3) for e in g1.edges})
    assert order_key({(0, 2), (1, 3)}, 4) == 18
    assert max_weight_matching(g1) == max_weight_matching(g2) == {(0, 2), (1, 3)}


@pytest.mark.parametrize("k", [2, 4, 6, 8])
def test_one_factorization_covers_complete_graph(k):
    vertices = list(range(10, 10 + k))
    rounds = one_factorization(vertices)
    assert len(rounds) == k - 1
    seen = set()
    for m in rounds:
        assert len(m) == k // 2
        assert {a for e in m for a in e} == set(vertices)
        seen |= m
    assert seen == {(i, j) for i, j in itertools.combinations(vertices, 2)}
    assert sum(len(m) for m in rounds) == len(seen)


def test_one_factorization_rejects_odd():
    with pytest.raises(ValidationError):
        one_factorization([0, 1, 2])
