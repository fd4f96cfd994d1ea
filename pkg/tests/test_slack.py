from fractions import Fraction

import pytest

from extform.combinatorics import Graph, enumerate_objects
from extform.slack import (
    LabeledMatrix,
    RowLabel,
    rational_rank,
    slack_matrix,
    split_rows,
    support_matrix,
    vstack,
)


def test_spanning_tree_slack_entries():
    m = slack_matrix("spanning_tree", Graph.complete(3))
    assert m.n_rows == 7 and m.n_cols == 3
    assert m.by_label("U:1-2", "T:13.23") == 1
    assert m.by_label("U:1-2", "T:12.13") == 0
    # the full-set row is the tight one
    assert all(x == 0 for x in m.row(m.row_labels.index("U:1-2-3")))


def test_spanning_tree_slack_bounded_by_subset_size():
    m = slack_matrix("spanning_tree", Graph.complete(4))
    for lab, row in zip(m.row_labels, m.entries):
        size = len(RowLabel.parse(lab).payload)
        assert all(0 <= x <= size - 1 for x in row)


def test_perfect_matching_slack_entries():
    m = slack_matrix("perfect_matching", Graph.complete(6))
    assert m.n_rows == 32 and m.n_cols == 15
    assert m.by_label("U:1-2-3", "M:14.25.36") == 2
    assert m.by_label("U:1-2-3", "M:12.34.56") == 0


def test_perfect_matching_slack_parity():
    m = slack_matrix("perfect_matching", Graph.complete(6))
    for lab, row in zip(m.row_labels, m.entries):
        size = len(RowLabel.parse(lab, "perfect_matching").payload)
        assert all(x % 2 == (size - 1) % 2 for x in row)


def test_perfect_matching_rejects_bad_order():
    with pytest.raises(ValueError):
        slack_matrix("perfect_matching", Graph.complete(5))
    with pytest.raises(ValueError):
        slack_matrix("perfect_matching", Graph.complete(2))


def test_stable_set_slack_is_intersection_indicator():
    g = Graph.path(4)
    m = slack_matrix("stable_set", g)
    cliques = enumerate_objects("clique", g)
    stables = enumerate_objects("stable_set", g)
    assert m.n_rows == len(cliques) and m.n_cols == len(stables)
    for i, k in enumerate(cliques):
        for j, s in enumerate(stables):
            expected = 0 if set(k) & set(s) else 1
            assert m.entries[i][j] == expected


def test_trivial_rows_are_coordinates():
    g = Graph.complete(3)
    m = slack_matrix("spanning_tree", g, include_trivial_rows=True)
    assert m.n_rows == 7 + 3
    trees = enumerate_objects("spanning_tree", g)
    for e, lab in [((1, 2), "x:12"), ((1, 3), "x:13"), ((2, 3), "x:23")]:
        i = m.row_labels.index(lab)
        assert m.entries[i] == tuple(Fraction(1 if e in t else 0) for t in trees)


def test_full_slack_rank_is_dimension_plus_one():
    # dim SPAN(K_n) = C(n,2) - 1, dim PM(K_n) = C(n,2) - n, dim STAB = n;
    # the identity needs the full matrix: PM(K_4)'s odd-cut block alone is
    # identically zero (each odd set has exactly one crossing matching edge)
    for n in (3, 4, 5):
        m = slack_matrix("spanning_tree", Graph.complete(n), include_trivial_rows=True)
        assert rational_rank(m) == n * (n - 1) // 2
    full4 = slack_matrix("perfect_matching", Graph.complete(4), include_trivial_rows=True)
    assert rational_rank(full4) == 3
    full6 = slack_matrix("perfect_matching", Graph.complete(6), include_trivial_rows=True)
    assert rational_rank(full6) == 10
    stab = slack_matrix("stable_set", Graph.path(4), include_trivial_rows=True)
    assert rational_rank(stab) == 5


def test_support_matrix():
    zero = LabeledMatrix(("a",), ("b",), ((0,),))
    assert support_matrix(zero) == zero
    m = slack_matrix("perfect_matching", Graph.complete(6))
    s = support_matrix(m)
    for row, srow in zip(m.entries, s.entries):
        assert all((x > 0) == (y == 1) for x, y in zip(row, srow))
    st = slack_matrix("spanning_tree", Graph.complete(3))
    i = st.row_labels.index("U:1-2-3")
    assert all(x == 0 for x in support_matrix(st).row(i))


def test_split_rows_partitions_and_stacks_back():
    m = slack_matrix("spanning_tree", Graph.complete(3), include_trivial_rows=True)
    nontrivial, trivial = split_rows(m, lambda lab: lab.kind != "nonnegativity")
    assert nontrivial.n_rows == 7 and trivial.n_rows == 3
    assert vstack(nontrivial, trivial) == m
    everything, none = split_rows(m, lambda lab: True)
    assert everything == m and none.n_rows == 0
    none2, everything2 = split_rows(m, lambda lab: False)
    assert none2.n_rows == 0 and everything2 == m


def test_csv_roundtrip():
    m = slack_matrix("perfect_matching", Graph.complete(4), include_trivial_rows=True)
    again = LabeledMatrix.from_csv(m.to_csv())
    assert again == m
    frac = LabeledMatrix(("r",), ("c1", "c2"), ((Fraction(1, 3), Fraction(7, 2)),))
    assert LabeledMatrix.from_csv(frac.to_csv()) == frac


def test_labeled_matrix_validation():
    with pytest.raises(ValueError):
        LabeledMatrix(("a", "a"), ("b",), ((1,), (2,)))
    with pytest.raises(ValueError):
        LabeledMatrix(("a",), ("b",), ((-1,),))
    with pytest.raises(ValueError):
        LabeledMatrix(("a",), ("b", "c"), ((1,),))


def test_matmul_checks_inner_labels():
    a = LabeledMatrix(("r",), ("1", "2"), ((1, 2),))
    b = LabeledMatrix(("1", "2"), ("c",), ((3,), (4,)))
    assert a.matmul(b).entries == ((Fraction(11),),)
    with pytest.raises(ValueError):
        b.matmul(b)


def test_row_label_roundtrip():
    for label, kind in [
        ("U:1-2-3", "subset_rank"),
        ("K:2-4", "clique"),
        ("x:12", "nonnegativity"),
        ("x:1", "nonnegativity"),
    ]:
        parsed = RowLabel.parse(label)
        assert parsed.kind == kind
        assert parsed.text == label
    assert RowLabel.parse("U:1-3-5", "perfect_matching").kind == "odd_cut"
    assert RowLabel.parse("x:3", "stable_set").payload == (3,)
