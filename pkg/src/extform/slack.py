"""Exact rational slack matrices of the three polytope families, and the
labeled-matrix container they live in.

Row/column labels are short strings safe for CSV and the protocol text
format (no commas, spaces or '='):

* subset / odd-cut rows:   "U:1-2-3"
* clique rows:             "K:1-2"
* nonnegativity rows:      "x:12" (edge coordinate) or "x:1" (vertex)
* spanning tree columns:   "T:12.13"
* perfect matching columns:"M:12.34.56"
* stable set columns:      "S:1-3" (empty stable set is "S:")

An edge {u,v} is rendered "uv" when both endpoints are single digits and
"u-v" otherwise, which keeps the compact form of small instances while
staying unambiguous for n >= 10.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .combinatorics import (
    Edge,
    EdgeSet,
    Graph,
    VertexSet,
    cut_edge_count,
    enumerate_objects,
    enumerate_odd_sets,
    enumerate_proper_subsets,
    induced_component_count,
)

ROW_KINDS = ("subset_rank", "odd_cut", "clique", "nonnegativity", "degree_equality")


def edge_text(e: Edge) -> str:
    u, v = e
    return f"{u}{v}" if v < 10 else f"{u}-{v}"


def parse_edge_text(s: str) -> Edge:
    if "-" in s:
        a, b = s.split("-")
        return (int(a), int(b))
    return (int(s[0]), int(s[1:]))


def vertex_set_text(u: VertexSet) -> str:
    return "-".join(str(v) for v in u)


def edge_set_text(es: EdgeSet) -> str:
    return ".".join(edge_text(e) for e in es)


def tree_label(t: EdgeSet) -> str:
    return "T:" + edge_set_text(t)


def matching_label(m: EdgeSet) -> str:
    return "M:" + edge_set_text(m)


def stable_set_label(s: VertexSet) -> str:
    return "S:" + vertex_set_text(s)


@dataclass(frozen=True)
class RowLabel:
    """Structured view of an inequality row: its kind plus payload.

    The payload is a vertex tuple for subset_rank/odd_cut/clique rows, an
    edge for edge-coordinate nonnegativity rows, and a vertex for
    vertex-coordinate ones.
    """

    kind: str
    payload: tuple

    def __post_init__(self):
        if self.kind not in ROW_KINDS:
            raise ValueError(f"unknown row kind {self.kind!r}")

    @property
    def text(self) -> str:
        if self.kind in ("subset_rank", "odd_cut"):
            return "U:" + vertex_set_text(self.payload)
        if self.kind == "clique":
            return "K:" + vertex_set_text(self.payload)
        if self.kind == "nonnegativity":
            if len(self.payload) == 2:
                return "x:" + edge_text(self.payload)
            return "x:" + str(self.payload[0])
        raise ValueError(f"{self.kind} rows are never emitted")

    @classmethod
    def parse(cls, text: str, family: str | None = None) -> "RowLabel":
        """Parse a row-label string.

        "U:" prefixes are subset_rank rows unless the family hint says
        perfect_matching, in which case they are odd cuts.
        """
        prefix, _, payload = text.partition(":")
        if prefix == "x":
            if family == "stable_set":
                return cls("nonnegativity", (int(payload),))
            if "-" in payload or len(payload) > 1:
                return cls("nonnegativity", parse_edge_text(payload))
            return cls("nonnegativity", (int(payload),))
        members = tuple(int(p) for p in payload.split("-")) if payload else ()
        if prefix == "K":
            return cls("clique", members)
        if prefix == "U":
            kind = "odd_cut" if family == "perfect_matching" else "subset_rank"
            return cls(kind, members)
        raise ValueError(f"cannot parse row label {text!r}")


def _as_fraction_rows(entries) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(x) for x in row) for row in entries)


@dataclass(frozen=True)
class LabeledMatrix:
    """Dense matrix of nonnegative exact rationals with string labels."""

    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "row_labels", tuple(self.row_labels))
        object.__setattr__(self, "col_labels", tuple(self.col_labels))
        object.__setattr__(self, "entries", _as_fraction_rows(self.entries))
        if len(self.entries) != len(self.row_labels):
            raise ValueError("row count does not match row labels")
        for lab, row in zip(self.row_labels, self.entries):
            if len(row) != len(self.col_labels):
                raise ValueError(f"row {lab!r} has wrong width")
        if len(set(self.row_labels)) != len(self.row_labels):
            raise ValueError("duplicate row labels")
        if len(set(self.col_labels)) != len(self.col_labels):
            raise ValueError("duplicate column labels")
        for lab, row in zip(self.row_labels, self.entries):
            for cab, x in zip(self.col_labels, row):
                if x < 0:
                    raise ValueError(f"negative entry {x} at ({lab}, {cab})")

    @property
    def n_rows(self) -> int:
        return len(self.row_labels)

    @property
    def n_cols(self) -> int:
        return len(self.col_labels)

    def entry(self, i: int, j: int) -> Fraction:
        return self.entries[i][j]

    def by_label(self, row: str, col: str) -> Fraction:
        return self.entries[self.row_labels.index(row)][self.col_labels.index(col)]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.entries)

    def matmul(self, other: "LabeledMatrix") -> "LabeledMatrix":
        """Exact product; inner labels must agree."""
        if self.col_labels != other.row_labels:
            raise ValueError("inner labels do not match")
        cols = list(zip(*other.entries)) if other.entries else []
        prod = tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
            for row in self.entries
        )
        return LabeledMatrix(self.row_labels, other.col_labels, prod)

    def to_csv(self) -> str:
        lines = ["," + ",".join(self.col_labels)]
        for lab, row in zip(self.row_labels, self.entries):
            lines.append(lab + "," + ",".join(str(x) for x in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "LabeledMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        header = lines[0].split(",")
        col_labels = tuple(header[1:])
        row_labels = []
        entries = []
        for ln in lines[1:]:
            parts = ln.split(",")
            row_labels.append(parts[0])
            entries.append(tuple(Fraction(p) for p in parts[1:]))
        return cls(tuple(row_labels), col_labels, tuple(entries))


def vstack(top: LabeledMatrix, bottom: LabeledMatrix) -> LabeledMatrix:
    if top.col_labels != bottom.col_labels:
        raise ValueError("column labels differ")
    return LabeledMatrix(
        top.row_labels + bottom.row_labels,
        top.col_labels,
        top.entries + bottom.entries,
    )


def rational_rank(m: LabeledMatrix) -> int:
    """Exact linear-algebra rank over the rationals (Gaussian elimination)."""
    rows = [list(r) for r in m.entries]
    rank = 0
    col = 0
    n_cols = m.n_cols
    while rank < len(rows) and col < n_cols:
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pr = rows[rank]
        for i in range(rank + 1, len(rows)):
            if rows[i][col] != 0:
                f = rows[i][col] / pr[col]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        rank += 1
        col += 1
    return rank


def _column_objects(family: str, g: Graph):
    objs = enumerate_objects(family, g)
    if family == "spanning_tree":
        labels = [tree_label(t) for t in objs]
    elif family == "perfect_matching":
        labels = [matching_label(m) for m in objs]
    else:
        labels = [stable_set_label(s) for s in objs]
    return objs, labels


def _coordinate_labels(family: str, g: Graph) -> tuple[list[tuple], list[str]]:
    """The polytope coordinates: edges for the edge polytopes, vertices for STAB."""
    if family == "stable_set":
        coords = [(v,) for v in g.vertices()]
    else:
        coords = list(g.edge_list())
    labels = [RowLabel("nonnegativity", c).text for c in coords]
    return coords, labels


def _incidence(family: str, coord: tuple, obj) -> Fraction:
    if family == "stable_set":
        return Fraction(1 if coord[0] in obj else 0)
    return Fraction(1 if coord in obj else 0)


def slack_matrix(family: str, g: Graph, include_trivial_rows: bool = False) -> LabeledMatrix:
    """Slack matrix of the chosen polytope family over the graph g.

    Rows are the non-trivial facet-style inequalities in lexicographic
    payload order; columns are the polytope vertices in enumeration order.

    * spanning_tree: rank rows x(E[U]) <= |U|-1 for nonempty U, slack at a
      tree T is components(T[U]) - 1.
    * perfect_matching: odd-cut rows x(cut(U)) >= 1 for odd U, slack at a
      matching M is |cut(U) & M| - 1.  Requires even n >= 4.
    * stable_set: clique rows x(K) <= 1, slack at a stable set S is
      1 - |K & S|.  Complete only for perfect graphs; that is the caller's
      responsibility.

    Equality constraints (tree cardinality, matching degrees) have slack
    identically zero and are never emitted.  With include_trivial_rows the
    nonnegativity rows (slack = coordinate value) are appended after the
    non-trivial block.
    """
    if family == "spanning_tree":
        objs, col_labels = _column_objects(family, g)
        row_payloads = enumerate_proper_subsets(g.n)
        row_labels = [RowLabel("subset_rank", u).text for u in row_payloads]
        entries = [
            [Fraction(induced_component_count(t, u) - 1) for t in objs]
            for u in row_payloads
        ]
    elif family == "perfect_matching":
        if g.n % 2 != 0 or g.n < 4:
            raise ValueError("perfect matching slack needs even n >= 4")
        objs, col_labels = _column_objects(family, g)
        row_payloads = enumerate_odd_sets(g.n)
        row_labels = [RowLabel("odd_cut", u).text for u in row_payloads]
        entries = [
            [Fraction(cut_edge_count(u, m) - 1) for m in objs] for u in row_payloads
        ]
    elif family == "stable_set":
        objs, col_labels = _column_objects(family, g)
        row_payloads = enumerate_objects("clique", g)
        row_labels = [RowLabel("clique", k).text for k in row_payloads]
        entries = []
        for k in row_payloads:
            row = []
            for s in objs:
                overlap = len(set(k) & set(s))
                if overlap > 1:
                    raise ValueError(
                        f"clique {k} meets stable set {s} in {overlap} vertices"
                    )
                row.append(Fraction(1 - overlap))
            entries.append(row)
    else:
        raise ValueError(f"no slack matrix for family {family!r}")

    if include_trivial_rows:
        coords, coord_labels = _coordinate_labels(family, g)
        for coord, lab in zip(coords, coord_labels):
            row_labels.append(lab)
            entries.append([_incidence(family, coord, o) for o in objs])

    return LabeledMatrix(tuple(row_labels), tuple(col_labels), tuple(entries))


def support_matrix(s: LabeledMatrix) -> LabeledMatrix:
    """0/1 matrix marking the positive entries of s; labels preserved."""
    entries = tuple(
        tuple(Fraction(1 if x > 0 else 0) for x in row) for row in s.entries
    )
    return LabeledMatrix(s.row_labels, s.col_labels, entries)


def split_rows(s: LabeledMatrix, predicate, family: str | None = None):
    """Partition rows into (predicate-true block, predicate-false block).

    The predicate receives a parsed RowLabel; column labels are shared and
    stacking the two blocks back in original row order reproduces s.
    """
    true_rows, false_rows = [], []
    for lab, row in zip(s.row_labels, s.entries):
        target = true_rows if predicate(RowLabel.parse(lab, family)) else false_rows
        target.append((lab, row))
    return (
        LabeledMatrix(
            tuple(l for l, _ in true_rows), s.col_labels, tuple(r for _, r in true_rows)
        ),
        LabeledMatrix(
            tuple(l for l, _ in false_rows),
            s.col_labels,
            tuple(r for _, r in false_rows),
        ),
    )
