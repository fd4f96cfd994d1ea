from itertools import combinations

import pytest

from extform.combinatorics import (
    Graph,
    cut_edge_count,
    enumerate_objects,
    enumerate_odd_sets,
    enumerate_proper_subsets,
    induced_component_count,
)


def test_spanning_tree_counts_match_cayley():
    assert len(enumerate_objects("spanning_tree", Graph.complete(3))) == 3
    assert len(enumerate_objects("spanning_tree", Graph.complete(4))) == 16
    assert len(enumerate_objects("spanning_tree", Graph.complete(5))) == 125


def test_perfect_matching_counts_match_double_factorial():
    expected = {2: 1, 4: 3, 6: 15, 8: 105, 10: 945}
    for n, count in expected.items():
        assert len(enumerate_objects("perfect_matching", Graph.complete(n))) == count


def test_perfect_matching_odd_order_is_empty():
    assert enumerate_objects("perfect_matching", Graph.complete(5)) == []


def test_stable_sets_of_short_path():
    got = enumerate_objects("stable_set", Graph.path(3))
    assert set(got) == {(), (1,), (2,), (3,), (1, 3)}
    assert got == sorted(got)


def test_cliques_are_nonempty_and_sorted():
    got = enumerate_objects("clique", Graph.path(3))
    assert set(got) == {(1,), (2,), (3,), (1, 2), (2, 3)}
    assert got == sorted(got)


def test_enumerations_are_duplicate_free():
    for family in ("spanning_tree", "perfect_matching", "stable_set", "clique"):
        objs = enumerate_objects(family, Graph.complete(4))
        assert len(objs) == len(set(objs))
        assert objs == sorted(objs)


def test_unknown_family_rejected():
    with pytest.raises(ValueError):
        enumerate_objects("hamiltonian_cycle", Graph.complete(4))


def test_induced_component_count_examples():
    assert induced_component_count(((1, 3), (2, 3)), (1, 2)) == 2
    assert induced_component_count(((1, 2), (1, 3)), (1, 2)) == 1
    for t in enumerate_objects("spanning_tree", Graph.complete(4)):
        for v in range(1, 5):
            assert induced_component_count(t, (v,)) == 1


def test_induced_component_count_rejects_bad_subsets():
    tree = ((1, 2), (1, 3))
    with pytest.raises(ValueError):
        induced_component_count(tree, ())
    with pytest.raises(ValueError):
        induced_component_count(tree, (1, 7))


def test_forest_identity_on_all_k4_trees():
    # components(T[U]) = |U| - #{edges of T inside U}
    for t in enumerate_objects("spanning_tree", Graph.complete(4)):
        for u in enumerate_proper_subsets(4):
            inside = sum(1 for a, b in t if a in u and b in u)
            assert induced_component_count(t, u) == len(u) - inside


def test_cut_edge_count_examples():
    assert cut_edge_count((1, 2, 3), ((1, 2), (3, 4), (5, 6))) == 1
    assert cut_edge_count((1, 2, 3), ((1, 4), (2, 5), (3, 6))) == 3
    m = ((1, 2), (3, 4), (5, 6))
    assert cut_edge_count((), m) == 0
    assert cut_edge_count(tuple(range(1, 7)), m) == 0


def test_cut_complement_symmetry_and_parity():
    matchings = enumerate_objects("perfect_matching", Graph.complete(6))
    odd_sets = enumerate_odd_sets(6)
    full = tuple(range(1, 7))
    for m in matchings:
        for u in odd_sets:
            cut = cut_edge_count(u, m)
            complement = tuple(v for v in full if v not in u)
            assert cut == cut_edge_count(complement, m)
            assert cut >= 1
            assert cut % 2 == len(u) % 2


def test_odd_set_enumeration():
    assert set(enumerate_odd_sets(3)) == {(1,), (2,), (3,), (1, 2, 3)}
    assert len(enumerate_odd_sets(4)) == 8
    assert len(enumerate_odd_sets(6)) == 32
    got = enumerate_odd_sets(5)
    assert got == sorted(got)
    with pytest.raises(ValueError):
        enumerate_odd_sets(1)


def test_proper_subset_enumeration():
    assert set(enumerate_proper_subsets(2)) == {(1,), (2,), (1, 2)}
    assert len(enumerate_proper_subsets(3)) == 7
    assert len(enumerate_proper_subsets(4)) == 15
    assert (1, 2, 3, 4) in enumerate_proper_subsets(4)


def test_graph_validation():
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(1, 1)])
    with pytest.raises(ValueError):
        Graph(3, frozenset({(1, 5)}))
    g = Graph.from_edges(4, [(2, 1), (3, 4)])
    assert g.has_edge(1, 2) and g.has_edge(4, 3)
    assert g.neighbors(1) == (2,)


def test_spanning_trees_of_sparse_graph():
    # a 4-cycle has exactly 4 spanning trees
    g = Graph.cycle(4)
    trees = enumerate_objects("spanning_tree", g)
    assert len(trees) == 4
    for t in trees:
        assert len(t) == 3
        assert all(e in g.edges for e in t)
