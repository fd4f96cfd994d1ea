"""Conversions between protocol trees and nonnegative factorizations, in
both directions, plus the row-partition combinators and simple nonnegative
rank bounds.

protocol_to_factorization turns every leaf into a rank-one term: the
traversal probability of a node factors as p(x)q(y) along the whole tree, so
the expectation matrix is the sum of leaf terms weighted by leaf values.
factorization_to_protocol goes back: normalize the left factor to a
row-stochastic matrix (one slack column appended), let the row player
announce a sampled column index, and let the column player emit the matching
entry of the rescaled right factor with a scaled coin.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .protocol import (
    Internal,
    Leaf,
    Node,
    ProtocolTree,
    one_hot,
    scaled_output_node,
    selection_tree,
    validate,
)
from .slack import LabeledMatrix


@dataclass(frozen=True)
class Factorization:
    """Nonnegative factorization M = left @ right.

    left is m x r with M's row labels and inner columns "1".."r"; right is
    r x n with the same inner row labels and M's column labels.
    """

    left: LabeledMatrix
    right: LabeledMatrix

    def __post_init__(self):
        if self.left.col_labels != self.right.row_labels:
            raise ValueError("inner labels of the two factors differ")

    @property
    def rank(self) -> int:
        return len(self.left.col_labels)

    def product(self) -> LabeledMatrix:
        return self.left.matmul(self.right)


@dataclass(frozen=True)
class RankOneTerm:
    """One leaf's contribution: weight * (row_vector outer column_vector)."""

    row_vector: tuple[Fraction, ...]
    column_vector: tuple[Fraction, ...]
    weight: Fraction
    path: str


def leaf_traversal_terms(t: ProtocolTree) -> list[RankOneTerm]:
    """Rank-one traversal terms of all leaves, in left-to-right order.

    The traversal probability of reaching a node is a product of X-side and
    Y-side transition factors, hence a rank-one matrix; descending multiplies
    one of the factors pointwise by the transition (left) or its complement
    (right).
    """
    terms: list[RankOneTerm] = []

    def walk(node: Node, p: tuple[Fraction, ...], q: tuple[Fraction, ...], path: str):
        if isinstance(node, Leaf):
            terms.append(RankOneTerm(p, q, node.value, path))
            return
        if node.kind == "X":
            probs = tuple(node.transition[x] for x in t.x_domain)
            walk(node.left, tuple(a * b for a, b in zip(p, probs)), q, path + "L")
            walk(node.right, tuple(a * (1 - b) for a, b in zip(p, probs)), q, path + "R")
        else:
            probs = tuple(node.transition[y] for y in t.y_domain)
            walk(node.left, p, tuple(a * b for a, b in zip(q, probs)), path + "L")
            walk(node.right, p, tuple(a * (1 - b) for a, b in zip(q, probs)), path + "R")

    ones_x = tuple(Fraction(1) for _ in t.x_domain)
    ones_y = tuple(Fraction(1) for _ in t.y_domain)
    walk(t.root, ones_x, ones_y, "")
    return terms


def protocol_to_factorization(t: ProtocolTree) -> Factorization:
    """Factorization of the matrix t computes, with rank = number of leaves.

    Leaf weights are folded into the left factor (column = weight * row
    vector); the right factor keeps the bare column vectors.  Zero-weight
    leaves stay as zero columns so the rank really is the leaf count.
    """
    problems = validate(t)
    if problems:
        raise ValueError("invalid protocol tree: " + "; ".join(problems))
    terms = leaf_traversal_terms(t)
    inner = tuple(str(i + 1) for i in range(len(terms)))
    left = LabeledMatrix(
        t.x_domain,
        inner,
        tuple(
            tuple(term.weight * term.row_vector[i] for term in terms)
            for i in range(len(t.x_domain))
        ),
    )
    right = LabeledMatrix(
        inner,
        t.y_domain,
        tuple(term.column_vector for term in terms),
    )
    return Factorization(left, right)


def stochastic_normal_form(f: Factorization):
    """(row-stochastic left factor with slack column, rescaled right factor
    with zero row) used by factorization_to_protocol.

    Returns (None, None) when the left factor is identically zero.
    """
    row_sums = [sum(row, Fraction(0)) for row in f.left.entries]
    delta = max(row_sums, default=Fraction(0))
    if delta == 0:
        return None, None
    inner = f.left.col_labels + ("slack",)
    a_hat = LabeledMatrix(
        f.left.row_labels,
        inner,
        tuple(
            tuple(x / delta for x in row) + (1 - s / delta,)
            for row, s in zip(f.left.entries, row_sums)
        ),
    )
    b_hat = LabeledMatrix(
        inner,
        f.right.col_labels,
        tuple(tuple(delta * x for x in row) for row in f.right.entries)
        + ((Fraction(0),) * len(f.right.col_labels),),
    )
    return a_hat, b_hat


def factorization_to_protocol(f: Factorization) -> ProtocolTree:
    """One-way protocol computing f.product() in expectation.

    The row player samples a column index of the row-stochastic normal form
    (a balanced selection subtree over r+1 slots), then a single column-player
    node per slot emits the rescaled right-factor entry.  The height is
    exactly ceil(lg(r+1)) + 1; an identically-zero left factor degenerates to
    the single-leaf zero protocol.
    """
    x_domain = f.left.row_labels
    y_domain = f.right.col_labels
    a_hat, b_hat = stochastic_normal_form(f)
    if a_hat is None:
        return ProtocolTree(Leaf(Fraction(0)), x_domain, y_domain)
    slots = a_hat.n_cols
    children = []
    for k in range(slots):
        row = b_hat.entries[k]
        top = max(row)
        children.append(
            scaled_output_node(
                "Y",
                y_domain,
                lambda y, row=row, b=b_hat: row[b.col_labels.index(y)],
                top,
            )
        )
    row_index = {x: i for i, x in enumerate(x_domain)}
    root = selection_tree(
        "X",
        x_domain,
        lambda x: a_hat.entries[row_index[x]],
        children,
    )
    return ProtocolTree(root, x_domain, y_domain)


def combine_row_partition(t1: ProtocolTree, t2: ProtocolTree) -> ProtocolTree:
    """Protocol for the row-stacked matrix: one root bit announces which
    block the row lies in, then the matching subprotocol runs.

    Height is 1 + max of the two heights.  X tables of each subtree are
    extended to the merged row domain with probability-1 entries on foreign
    rows, which are unreachable but keep validation clean.
    """
    overlap = set(t1.x_domain) & set(t2.x_domain)
    if overlap:
        raise ValueError(f"row domains overlap: {sorted(overlap)}")
    if set(t1.y_domain) != set(t2.y_domain):
        raise ValueError("column domains differ")
    merged = t1.x_domain + t2.x_domain

    def redomain(node: Node) -> Node:
        if isinstance(node, Leaf):
            return node
        if node.kind == "X":
            table = {x: node.transition.get(x, Fraction(1)) for x in merged}
        else:
            table = dict(node.transition)
        return Internal(node.kind, table, redomain(node.left), redomain(node.right))

    in_first = set(t1.x_domain)
    root = Internal(
        "X",
        {x: Fraction(1 if x in in_first else 0) for x in merged},
        redomain(t1.root),
        redomain(t2.root),
    )
    return ProtocolTree(root, merged, t1.y_domain)


def nonnegativity_rows_protocol(d: int, vertex_columns: LabeledMatrix) -> ProtocolTree:
    """Deterministic-selection protocol for the nonnegativity block of a
    slack matrix: the row player announces which of the d coordinates her row
    is, and the column player emits that coordinate of his vertex with a
    scaled coin.  Height is ceil(lg d) + 1.
    """
    if d == 0:
        raise ValueError("no coordinates to select")
    if d != vertex_columns.n_rows:
        raise ValueError("d does not match the coordinate row count")
    x_domain = vertex_columns.row_labels
    y_domain = vertex_columns.col_labels
    children = []
    for k in range(d):
        row = vertex_columns.entries[k]
        children.append(
            scaled_output_node(
                "Y",
                y_domain,
                lambda y, row=row, m=vertex_columns: row[m.col_labels.index(y)],
                max(row),
            )
        )
    index = {x: i for i, x in enumerate(x_domain)}
    root = selection_tree("X", x_domain, lambda x: one_hot(index[x], d), children)
    return ProtocolTree(root, x_domain, y_domain)


def verify_factorization(m: LabeledMatrix, f: Factorization) -> bool:
    """Exact check that the factor product reproduces m, labels included."""
    if f.left.row_labels != m.row_labels or f.right.col_labels != m.col_labels:
        raise ValueError("factorization labels do not match the matrix")
    return f.product().entries == m.entries


# ---------------------------------------------------------------------------
# rectangle cover lower bound
# ---------------------------------------------------------------------------


def _closed_column_sets(row_masks: list[int], full: int) -> list[int]:
    # All intersections of row masks (plus the full set); these are exactly
    # the column sets of inclusion-maximal all-ones rectangles.
    closed = {full}
    frontier = {full}
    while frontier:
        new = set()
        for c in frontier:
            for mask in row_masks:
                x = c & mask
                if x and x not in closed:
                    new.add(x)
        closed |= new
        frontier = new
    return sorted(closed)


def rectangle_cover_lower_bound(support: LabeledMatrix) -> int:
    """Minimum number of all-ones rectangles covering the 1-entries.

    Every rank-one term of a nonnegative factorization has rectangular
    support, so this is a valid lower bound on the nonnegative rank.  The
    minimum cover is computed exactly (maximal rectangles via closed column
    sets, then branch and bound seeded with a greedy cover), which is the
    point: a heuristic cover size alone would bound in the wrong direction.
    Intended for desk-scale supports.
    """
    for row in support.entries:
        for x in row:
            if x not in (0, 1):
                raise ValueError("support matrix entries must be 0 or 1")
    n_cols = support.n_cols
    row_masks = [
        sum(1 << j for j, x in enumerate(row) if x == 1) for row in support.entries
    ]
    ones = [(i, j) for i, row in enumerate(support.entries) for j, x in enumerate(row) if x == 1]
    if not ones:
        return 0
    cell_bit = {cell: k for k, cell in enumerate(ones)}
    full_cols = (1 << n_cols) - 1
    rects: list[int] = []  # bitmask over 1-cells
    for cmask in _closed_column_sets([m for m in row_masks if m], full_cols):
        mask = 0
        for i, m in enumerate(row_masks):
            if m & cmask == cmask:
                for j in range(n_cols):
                    if cmask >> j & 1:
                        mask |= 1 << cell_bit[(i, j)]
        if mask:
            rects.append(mask)
    covering = [
        [r for r in rects if r >> k & 1] for k in range(len(ones))
    ]
    # conflict[k]: cells sharing some rectangle with cell k
    conflict = [0] * len(ones)
    for k in range(len(ones)):
        for r in covering[k]:
            conflict[k] |= r

    all_cells = (1 << len(ones)) - 1

    def greedy_upper(uncovered: int) -> int:
        used = 0
        while uncovered:
            best = max(rects, key=lambda r: (r & uncovered).bit_count())
            uncovered &= ~best
            used += 1
        return used

    def independent_lower(uncovered: int) -> int:
        # cells no two of which fit one rectangle; any cover needs one
        # rectangle per such cell
        count = 0
        while uncovered:
            k = (uncovered & -uncovered).bit_length() - 1
            uncovered &= ~conflict[k]
            count += 1
        return count

    best_size = greedy_upper(all_cells)
    seen: dict[int, int] = {}

    def search(uncovered: int, used: int):
        nonlocal best_size
        if not uncovered:
            best_size = min(best_size, used)
            return
        if used + independent_lower(uncovered) >= best_size:
            return
        if seen.get(uncovered, len(rects) + 1) <= used:
            return
        seen[uncovered] = used
        k = min(
            (c for c in range(len(ones)) if uncovered >> c & 1),
            key=lambda c: len(covering[c]),
        )
        for rect in covering[k]:
            search(uncovered & ~rect, used + 1)

    search(all_cells, 0)
    assert best_size <= min(support.n_rows, support.n_cols)
    return best_size
