from dataclasses import replace
from fractions import Fraction

import pytest

from extform.catalog import spanning_tree_protocol
from extform.combinatorics import Graph
from extform.convert import Factorization, protocol_to_factorization
from extform.extension import (
    build_extension,
    check_bounded,
    format_extension,
    polytope_description,
    strip_zero_columns,
    verify_projection,
)
from extform.slack import LabeledMatrix, slack_matrix


def identity_factorization_of(m: LabeledMatrix) -> Factorization:
    """S = I * S, the trivial rank-m factorization."""
    inner = tuple(str(i + 1) for i in range(m.n_rows))
    eye = tuple(
        tuple(Fraction(1 if i == j else 0) for j in range(m.n_rows))
        for i in range(m.n_rows)
    )
    return Factorization(
        LabeledMatrix(m.row_labels, inner, eye),
        LabeledMatrix(inner, m.col_labels, m.entries),
    )


def test_polytope_description_reproduces_slack():
    for family, g, trivial in [
        ("spanning_tree", Graph.complete(4), False),
        ("spanning_tree", Graph.complete(3), True),
        ("perfect_matching", Graph.complete(4), True),
        ("stable_set", Graph.path(4), True),
    ]:
        p = polytope_description(family, g, trivial)
        assert p.induced_slack() == slack_matrix(family, g, trivial)


def test_build_extension_from_identity_factorization():
    # S = I * S is a legal factorization; r equals the row count
    g = Graph.complete(3)
    p = polytope_description("spanning_tree", g, include_trivial_rows=True)
    s = p.induced_slack()
    f = identity_factorization_of(s)
    q = build_extension(p, f)
    assert q.size == s.n_rows  # identity left factor has no zero columns
    ok, why = verify_projection(q, p, f)
    assert ok, why


def test_build_extension_rejects_mismatched_factorization():
    g = Graph.complete(3)
    p = polytope_description("spanning_tree", g)
    s = p.induced_slack()
    wrong = Factorization(
        LabeledMatrix(s.row_labels, ("1",), tuple((Fraction(1),) for _ in s.row_labels)),
        LabeledMatrix(("1",), s.col_labels, ((Fraction(1),) * s.n_cols,)),
    )
    with pytest.raises(ValueError):
        build_extension(p, wrong)


def test_extension_from_spanning_tree_protocol():
    p = polytope_description("spanning_tree", Graph.complete(4))
    f = protocol_to_factorization(spanning_tree_protocol(4))
    q = build_extension(p, f)
    reduced = strip_zero_columns(f)
    assert q.size == reduced.rank < f.rank
    assert check_bounded(reduced)
    ok, why = verify_projection(q, p, f)
    assert ok, why


def test_check_bounded_detects_zero_column():
    left = LabeledMatrix(("r1", "r2"), ("1", "2"), ((1, 0), (2, 0)))
    right = LabeledMatrix(("1", "2"), ("c1",), ((1,), (5,)))
    f = Factorization(left, right)
    assert not check_bounded(f)
    stripped = strip_zero_columns(f)
    assert check_bounded(stripped)
    assert stripped.product() == f.product()
    eye = LabeledMatrix(("r1", "r2"), ("1", "2"), ((1, 0), (0, 1)))
    assert check_bounded(Factorization(eye, right))


def test_corrupting_lift_matrix_names_the_failing_row():
    p = polytope_description("spanning_tree", Graph.complete(4))
    f = protocol_to_factorization(spanning_tree_protocol(4))
    q = build_extension(p, f)
    reduced = strip_zero_columns(f)
    k = next(
        j
        for j in range(reduced.rank)
        if any(x != 0 for x in reduced.right.entries[j])
    )
    bad = [list(row) for row in q.lifted.entries]
    bad[0][k] += 1
    qbad = replace(
        q,
        lifted=LabeledMatrix(
            q.lifted.row_labels, q.lifted.col_labels, tuple(tuple(r) for r in bad)
        ),
    )
    ok, why = verify_projection(qbad, p, f)
    assert not ok
    assert why.startswith("LIFT fails at row ")


def test_midpoints_of_lifts_stay_inside():
    # convexity makes this trivially true; it is the CONTAIN sample check
    g = Graph.complete(3)
    p = polytope_description("spanning_tree", g, include_trivial_rows=True)
    f = identity_factorization_of(p.induced_slack())
    q = build_extension(p, f)
    ok, why = verify_projection(q, p, f)
    assert ok, why


def test_format_extension_manifest():
    p = polytope_description("spanning_tree", Graph.complete(3))
    f = identity_factorization_of(p.induced_slack())
    q = build_extension(p, f)
    text = format_extension(q)
    head = text.splitlines()[0]
    assert head == f"extension rows={len(q.row_labels)} d=3 r={q.size}"
    assert "\nE\n" in text and "\ng\n" in text and "\nF\n" in text
