"""Lifted linear systems built from slack-matrix factorizations.

Given a polytope P = {x : Ex <= g} with vertex list V and a nonnegative
factorization S = F * W of its slack matrix, the lifted system is

    Q = {(x, y) : Ex + Fy = g, y >= 0}.

Every vertex v_j lifts to (v_j, W e_j) exactly, because E v_j + F W e_j =
E v_j + S e_j = g row by row; and any point of Q projects into {Ex <= g}
because Fy >= 0.  Zero columns of F (unreachable or zero-weight protocol
leaves) are stripped first, together with the matching rows of W: they leave
the product unchanged and their absence is exactly what makes Q bounded for
bounded P.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .combinatorics import Graph
from .convert import Factorization, verify_factorization
from .slack import LabeledMatrix, slack_matrix

Row = tuple[Fraction, ...]


def _dot(row: Row, vec) -> Fraction:
    return sum((a * b for a, b in zip(row, vec)), Fraction(0))


@dataclass(frozen=True)
class PolytopeDescription:
    """Inequality system Ex <= g together with the vertex list.

    Row i against vertex j leaves slack g_i - E_i . v_j, which must be
    nonnegative; the matrix of these slacks is the slack matrix the
    description induces.
    """

    row_labels: tuple[str, ...]
    coord_labels: tuple[str, ...]
    lhs: tuple[Row, ...]  # E, one row per inequality
    rhs: tuple[Fraction, ...]  # g
    vertices: LabeledMatrix  # coord_labels x vertex labels

    def __post_init__(self):
        if len(self.lhs) != len(self.row_labels) or len(self.rhs) != len(self.row_labels):
            raise ValueError("row count mismatch")
        if self.vertices.row_labels != self.coord_labels:
            raise ValueError("vertex coordinates do not match coord labels")
        for lab, row in zip(self.row_labels, self.lhs):
            if len(row) != len(self.coord_labels):
                raise ValueError(f"row {lab!r} has wrong width")
        for j, vlab in enumerate(self.vertices.col_labels):
            v = self.vertices.col(j)
            for lab, row, b in zip(self.row_labels, self.lhs, self.rhs):
                if _dot(row, v) > b:
                    raise ValueError(f"vertex {vlab} violates row {lab}")

    def induced_slack(self) -> LabeledMatrix:
        entries = tuple(
            tuple(
                b - _dot(row, self.vertices.col(j))
                for j in range(self.vertices.n_cols)
            )
            for row, b in zip(self.lhs, self.rhs)
        )
        return LabeledMatrix(self.row_labels, self.vertices.col_labels, entries)


def polytope_description(
    family: str, g: Graph, include_trivial_rows: bool = False
) -> PolytopeDescription:
    """Inequality description and 0/1 vertices of one of the three polytope
    families, with rows aligned to slack_matrix(family, g, ...).

    Rank rows are x(E[U]) <= |U|-1; odd-cut rows enter as -x(cut(U)) <= -1;
    clique rows as x(K) <= 1; trivial rows as -x_e <= 0.  The induced slack
    matrix therefore reproduces slack_matrix exactly.
    """
    s = slack_matrix(family, g, include_trivial_rows)
    from .combinatorics import enumerate_objects  # local to avoid cycle noise
    from .slack import RowLabel

    if family == "stable_set":
        coords = [(v,) for v in g.vertices()]
    else:
        coords = list(g.edge_list())
    coord_index = {c: i for i, c in enumerate(coords)}
    coord_labels = tuple(RowLabel("nonnegativity", c).text for c in coords)

    objs = enumerate_objects(family, g)
    vert_entries = tuple(
        tuple(
            Fraction(1 if (c[0] in o if family == "stable_set" else c in o) else 0)
            for o in objs
        )
        for c in coords
    )
    vertices = LabeledMatrix(coord_labels, s.col_labels, vert_entries)

    lhs: list[Row] = []
    rhs: list[Fraction] = []
    d = len(coords)
    for lab in s.row_labels:
        parsed = RowLabel.parse(lab, family)
        row = [Fraction(0)] * d
        if parsed.kind == "subset_rank":
            members = set(parsed.payload)
            for c, i in coord_index.items():
                if c[0] in members and c[1] in members:
                    row[i] = Fraction(1)
            b = Fraction(len(parsed.payload) - 1)
        elif parsed.kind == "odd_cut":
            members = set(parsed.payload)
            for c, i in coord_index.items():
                if (c[0] in members) != (c[1] in members):
                    row[i] = Fraction(-1)
            b = Fraction(-1)
        elif parsed.kind == "clique":
            members = set(parsed.payload)
            for c, i in coord_index.items():
                if c[0] in members:
                    row[i] = Fraction(1)
            b = Fraction(1)
        elif parsed.kind == "nonnegativity":
            row[coord_index[parsed.payload]] = Fraction(-1)
            b = Fraction(0)
        else:
            raise AssertionError(f"unexpected row kind {parsed.kind}")
        lhs.append(tuple(row))
        rhs.append(b)

    return PolytopeDescription(
        s.row_labels, coord_labels, tuple(lhs), tuple(rhs), vertices
    )


@dataclass(frozen=True)
class ExtensionSystem:
    """The lifted system Q = {(x, y) : Ex + Fy = g, y >= 0}."""

    row_labels: tuple[str, ...]
    coord_labels: tuple[str, ...]
    lhs: tuple[Row, ...]  # E
    rhs: tuple[Fraction, ...]  # g
    lifted: LabeledMatrix  # F: row_labels x y-variable labels

    @property
    def size(self) -> int:
        """Facet count of Q: one nonnegativity facet per extra variable."""
        return self.lifted.n_cols


def strip_zero_columns(f: Factorization) -> Factorization:
    """Drop zero columns of the left factor with the matching right rows.

    The product is unchanged; afterwards check_bounded holds whenever it can.
    """
    keep = [
        j
        for j in range(f.rank)
        if any(row[j] != 0 for row in f.left.entries)
    ]
    left = LabeledMatrix(
        f.left.row_labels,
        tuple(f.left.col_labels[j] for j in keep),
        tuple(tuple(row[j] for j in keep) for row in f.left.entries),
    )
    right = LabeledMatrix(
        tuple(f.right.row_labels[j] for j in keep),
        f.right.col_labels,
        tuple(f.right.entries[j] for j in keep),
    )
    return Factorization(left, right)


def check_bounded(f: Factorization) -> bool:
    """For a bounded P, the lift is bounded exactly when no column of the
    left factor is identically zero (a zero column would let y grow freely)."""
    return all(
        any(row[j] != 0 for row in f.left.entries) for j in range(f.rank)
    )


def build_extension(p: PolytopeDescription, f: Factorization) -> ExtensionSystem:
    """Lifted system from a verified slack factorization of p.

    The factorization must reproduce p's induced slack matrix exactly; zero
    columns are stripped before F is installed, so the system has one y
    variable (and one facet) per surviving column.
    """
    slack = p.induced_slack()
    if not verify_factorization(slack, f):
        raise ValueError("factorization does not reproduce the slack matrix")
    reduced = strip_zero_columns(f)
    return ExtensionSystem(p.row_labels, p.coord_labels, p.lhs, p.rhs, reduced.left)


def verify_projection(q: ExtensionSystem, p: PolytopeDescription, f: Factorization):
    """Desk-scale verification that Q is an extension of P.

    LIFT: every vertex v_j of P satisfies E v_j + F (W e_j) = g exactly with
    the nonnegative lift y = W e_j.  CONTAIN: structurally, F >= 0 forces
    Ex = g - Fy <= g on all of Q; additionally all pairwise midpoints of
    lifted vertices (sample points of Q) are checked against Ex <= g.

    Returns (True, None) or (False, reason).
    """
    reduced = strip_zero_columns(f)
    if q.lifted.col_labels != reduced.right.row_labels:
        raise ValueError("lift dimensions do not match the factorization")
    lifts = []
    for j, vlab in enumerate(p.vertices.col_labels):
        x = p.vertices.col(j)
        y = reduced.right.col(j)
        for lab, row, b, frow in zip(q.row_labels, q.lhs, q.rhs, q.lifted.entries):
            if _dot(row, x) + _dot(frow, y) != b:
                return False, f"LIFT fails at row {lab} for vertex {vlab}"
        lifts.append((x, y))
    # F >= 0 is enforced by the LabeledMatrix type; spot-check Q's points.
    half = Fraction(1, 2)
    for a in range(len(lifts)):
        for b in range(a + 1, len(lifts)):
            x = tuple((xa + xb) * half for xa, xb in zip(lifts[a][0], lifts[b][0]))
            for lab, row, rhs in zip(q.row_labels, q.lhs, q.rhs):
                if _dot(row, x) > rhs:
                    return False, f"CONTAIN fails at row {lab} for midpoint {a},{b}"
    return True, None


def format_extension(q: ExtensionSystem) -> str:
    """Three labeled CSV blocks (E, g, F) under a manifest line naming the
    dimensions: rows, polytope dimension d, and lift dimension r."""
    lines = [f"extension rows={len(q.row_labels)} d={len(q.coord_labels)} r={q.size}"]
    lines.append("E")
    lines.append("," + ",".join(q.coord_labels))
    for lab, row in zip(q.row_labels, q.lhs):
        lines.append(lab + "," + ",".join(str(x) for x in row))
    lines.append("g")
    for lab, b in zip(q.row_labels, q.rhs):
        lines.append(f"{lab},{b}")
    lines.append("F")
    lines.append("," + ",".join(q.lifted.col_labels))
    for lab, row in zip(q.row_labels, q.lifted.entries):
        lines.append(lab + "," + ",".join(str(x) for x in row))
    return "\n".join(lines) + "\n"
