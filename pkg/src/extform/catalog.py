"""Executable constructions of the named slack-matrix protocols:

* stable-set slack of claw-free perfect graphs (deterministic),
* spanning-tree slack of complete graphs (randomized),
* perfect-matching slack of complete graphs via a balanced-bipartition
  cover (randomized), with the greedy cover construction,
* the hint-edge variant for perfect matchings where the column player
  already knows one crossing matching edge.

Vertex announcements are balanced binary subtrees of ceil(lg n) deterministic
nodes; random picks reuse the same subtree shape with uniform weights.  Where
a player "outputs" a value that depends on her own input, the final node is a
scaled coin whose expectation is that value, so leaf values stay constants.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .combinatorics import (
    EdgeSet,
    Graph,
    VertexSet,
    canonical_edge,
    cut_edge_count,
    enumerate_objects,
    enumerate_odd_sets,
    enumerate_proper_subsets,
)
from .protocol import (
    ProtocolTree,
    one_hot,
    scaled_output_node,
    selection_tree,
    uniform_over,
)
from .slack import (
    RowLabel,
    edge_text,
    matching_label,
    stable_set_label,
    tree_label,
)

# Documented height slack constants: height <= a*ceil(lg n) + HEIGHT_SLACK.
CLAWFREE_HEIGHT_SLACK = 3  # vs. 3*ceil(lg n)
SPANNING_TREE_HEIGHT_SLACK = 1  # vs. 3*ceil(lg n)
HINT_EDGE_HEIGHT_SLACK = 1  # vs. 2*ceil(lg n)


@dataclass(frozen=True)
class CoverFamily:
    """Half-size vertex subsets such that every perfect matching of K_n has
    all edges crossing at least one of the bipartitions (X_i, complement)."""

    n: int
    subsets: tuple[VertexSet, ...]

    def __post_init__(self):
        if self.n % 2 != 0:
            raise ValueError("cover families need even n")
        if len(set(self.subsets)) != len(self.subsets):
            raise ValueError("duplicate subsets in cover")
        for s in self.subsets:
            if len(s) != self.n // 2:
                raise ValueError(f"subset {s} does not have n/2 members")


@dataclass(frozen=True)
class HintedInput:
    """Column-player input for the hint-edge protocol: a perfect matching
    plus one of its edges promised to cross the row player's odd set."""

    matching: EdgeSet
    hint_edge: tuple[int, int]

    def __post_init__(self):
        if self.hint_edge not in self.matching:
            raise ValueError(f"hint edge {self.hint_edge} is not in the matching")

    @property
    def label(self) -> str:
        return f"{matching_label(self.matching)}|e:{edge_text(self.hint_edge)}"


def is_compatible(x: VertexSet, m: EdgeSet) -> bool:
    """True when every edge of m crosses the bipartition (x, complement)."""
    inside = set(x)
    return all((a in inside) != (b in inside) for a, b in m)


def greedy_matching_cover(n: int) -> CoverFamily:
    """Greedy set cover over all (n/2)-subsets against all perfect matchings
    of K_n: repeatedly take the subset compatible with the most uncovered
    matchings, ties broken lexicographically."""
    if n % 2 != 0:
        raise ValueError("n must be even")
    if not 4 <= n <= 10:
        raise ValueError("greedy cover is exhaustive; intended for 4 <= n <= 10")
    matchings = enumerate_objects("perfect_matching", Graph.complete(n))
    candidates = list(combinations(range(1, n + 1), n // 2))
    covered_by = {x: {m for m in matchings if is_compatible(x, m)} for x in candidates}
    uncovered = set(matchings)
    picked: list[VertexSet] = []
    while uncovered:
        best = max(candidates, key=lambda x: (len(covered_by[x] & uncovered), [-v for v in x]))
        gain = covered_by[best] & uncovered
        if not gain:
            raise AssertionError("uncoverable matching; cannot happen for complete graphs")
        picked.append(best)
        uncovered -= gain
    return CoverFamily(n, tuple(picked))


def _vertex_announcement_weights(n: int, members: VertexSet, pick: str):
    """Weight vector over vertex slots 1..n announcing one member.

    pick="min"/"max" are deterministic; pick="uniform" spreads evenly.  An
    empty member set announces vertex 1 (callers treat that path as a
    degenerate case)."""
    if not members:
        return one_hot(0, n)
    if pick == "min":
        return one_hot(members[0] - 1, n)
    if pick == "max":
        return one_hot(members[-1] - 1, n)
    if pick == "uniform":
        return uniform_over([v - 1 for v in members], n)
    raise ValueError(f"unknown pick rule {pick!r}")


# ---------------------------------------------------------------------------
# claw-free stable set protocol
# ---------------------------------------------------------------------------


def find_claw(g: Graph):
    """A (center, three pairwise non-adjacent neighbors) witness, or None."""
    for v in g.vertices():
        nbrs = g.neighbors(v)
        for trio in combinations(nbrs, 3):
            if not any(g.has_edge(a, b) for a, b in combinations(trio, 2)):
                return (v, trio)
    return None


def clawfree_stable_set_protocol(g: Graph) -> ProtocolTree:
    """Deterministic protocol computing the clique-row stable-set slack
    1 - |K & S| for a claw-free graph (complete slack for perfect graphs).

    The row player announces the smallest clique vertex u; the column player
    announces the at most two stable vertices in the closed neighborhood of
    u (as a sorted pair padded with 0); the row player then announces the
    verdict.  Height <= 3*ceil(lg n) + CLAWFREE_HEIGHT_SLACK.
    """
    claw = find_claw(g)
    if claw is not None:
        raise ValueError(f"graph has a claw at {claw[0]} with neighbors {claw[1]}")
    n = g.n
    cliques = enumerate_objects("clique", g)
    stables = enumerate_objects("stable_set", g)
    x_domain = tuple(RowLabel("clique", k).text for k in cliques)
    y_domain = tuple(stable_set_label(s) for s in stables)
    clique_of = dict(zip(x_domain, cliques))
    stable_of = dict(zip(y_domain, stables))

    pair_slots = [(a, b) for a in range(n + 1) for b in range(a, n + 1)]
    slot_index = {p: i for i, p in enumerate(pair_slots)}

    def visible_pair(s: VertexSet, u: int) -> tuple[int, int]:
        closed = set(g.neighbors(u)) | {u}
        vis = sorted(v for v in s if v in closed)
        if len(vis) > 2:
            raise AssertionError("claw-free graph exposed 3 stable neighbors")
        return tuple([0] * (2 - len(vis)) + vis)

    def branch_for_u(u: int):
        def reply_weights(y: str):
            return one_hot(slot_index[visible_pair(stable_of[y], u)], len(pair_slots))

        verdicts = []
        for a, b in pair_slots:
            announced = {a, b} - {0}

            def value(x: str, announced=announced) -> Fraction:
                # clamped at 0 for (clique, pair) combinations no stable set
                # can reach; a clique meets a stable set at most once
                return Fraction(max(0, 1 - len(set(clique_of[x]) & announced)))

            verdicts.append(scaled_output_node("X", x_domain, value, Fraction(1)))
        return selection_tree("Y", y_domain, reply_weights, verdicts)

    children = [branch_for_u(u) for u in range(1, n + 1)]

    def announce_weights(x: str):
        return _vertex_announcement_weights(n, clique_of[x], "min")

    root = selection_tree("X", x_domain, announce_weights, children)
    return ProtocolTree(root, x_domain, y_domain)


# ---------------------------------------------------------------------------
# spanning tree protocol
# ---------------------------------------------------------------------------


def _parent_map(tree: EdgeSet, root: int) -> dict[int, int]:
    adj: dict[int, list[int]] = {}
    for a, b in tree:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    parent = {root: 0}
    stack = [root]
    while stack:
        v = stack.pop()
        for w in adj.get(v, []):
            if w not in parent:
                parent[w] = v
                stack.append(w)
    return parent


def spanning_tree_protocol(
    n: int, trees: Sequence[EdgeSet] | None = None, pick: str = "min"
) -> ProtocolTree:
    """Randomized protocol computing the rank-row slack components(T[U]) - 1
    over K_n in expectation.

    The row player announces a vertex u of U (any fixed choice works; pick
    selects min or max).  The column player picks a uniformly random tree
    edge and announces it oriented towards u; exactly one oriented edge per
    component of T[U] other than u's leaves U, so announcing value n-1 on
    "leaves U" paths has expectation components - 1.  Height is
    ceil(lg n) + ceil(lg n(n-1)) + 1 <= 3*ceil(lg n) + 1.

    The column domain defaults to all spanning trees of K_n; passing an
    explicit tree list restricts it (useful for spot checks at larger n).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if trees is None:
        trees = enumerate_objects("spanning_tree", Graph.complete(n))
    subsets = enumerate_proper_subsets(n)
    x_domain = tuple(RowLabel("subset_rank", u).text for u in subsets)
    y_domain = tuple(tree_label(t) for t in trees)
    subset_of = dict(zip(x_domain, subsets))
    tree_of = dict(zip(y_domain, trees))

    pair_slots = [(v, w) for v in range(1, n + 1) for w in range(1, n + 1) if v != w]
    slot_index = {p: i for i, p in enumerate(pair_slots)}

    def branch_for_u(u: int):
        def edge_weights(y: str):
            t = tree_of[y]
            parent = _parent_map(t, u)
            slots = [slot_index[(v, parent[v])] for v in parent if v != u]
            return uniform_over(slots, len(pair_slots))

        verdicts = []
        for v, w in pair_slots:

            def value(x: str, v=v, w=w) -> Fraction:
                u_set = set(subset_of[x])
                return Fraction(n - 1 if (v in u_set and w not in u_set) else 0)

            verdicts.append(scaled_output_node("X", x_domain, value, Fraction(n - 1)))
        return selection_tree("Y", y_domain, edge_weights, verdicts)

    children = [branch_for_u(u) for u in range(1, n + 1)]

    def announce_weights(x: str):
        return _vertex_announcement_weights(n, subset_of[x], pick)

    root = selection_tree("X", x_domain, announce_weights, children)
    return ProtocolTree(root, x_domain, y_domain)


# ---------------------------------------------------------------------------
# perfect matching protocol
# ---------------------------------------------------------------------------


def perfect_matching_protocol(
    n: int,
    cover: CoverFamily,
    matchings: Sequence[EdgeSet] | None = None,
    odd_sets: Sequence[VertexSet] | None = None,
) -> ProtocolTree:
    """Randomized protocol computing the odd-cut slack |cut(U) & M| - 1 of
    K_n in expectation.

    The column player announces the first cover subset compatible with his
    matching; the row player takes the side of that bipartition meeting her
    odd set U in fewer vertices (ties to the subset itself) and announces a
    uniformly random vertex u of the intersection; the column player answers
    with u's matching mate; the row player then emits |U|-1 when the mate
    left U and |U|-1-2|side & U| when it stayed, via a scaled coin.  When the
    chosen side misses U entirely, U lies fully on one side, every matching
    edge at U crosses, and the protocol emits |U|-1 deterministically.
    """
    if cover.n != n:
        raise ValueError("cover was built for a different n")
    if matchings is None:
        matchings = enumerate_objects("perfect_matching", Graph.complete(n))
    if odd_sets is None:
        odd_sets = enumerate_odd_sets(n)
    uncovered = [m for m in matchings if not any(is_compatible(x, m) for x in cover.subsets)]
    if uncovered:
        raise ValueError(f"cover misses matching {uncovered[0]}")
    x_domain = tuple(RowLabel("odd_cut", u).text for u in odd_sets)
    y_domain = tuple(matching_label(m) for m in matchings)
    set_of = dict(zip(x_domain, odd_sets))
    matching_of = dict(zip(y_domain, matchings))
    k = len(cover.subsets)

    def first_compatible(m: EdgeSet) -> int:
        for i, x in enumerate(cover.subsets):
            if is_compatible(x, m):
                return i
        raise AssertionError("unreachable: cover verified above")

    def chosen_side(u: VertexSet, x: VertexSet) -> set:
        inside = set(u) & set(x)
        outside = set(u) - set(x)
        return inside if len(inside) <= len(outside) else outside

    def mate(m: EdgeSet, v: int) -> int:
        for a, b in m:
            if a == v:
                return b
            if b == v:
                return a
        raise AssertionError(f"vertex {v} unmatched")

    def branch_for_subset(xi: VertexSet):
        def pick_weights(x: str):
            side = sorted(chosen_side(set_of[x], xi))
            return _vertex_announcement_weights(n, tuple(side), "uniform")

        vertex_children = []
        for u in range(1, n + 1):

            def mate_weights(y: str, u=u):
                return one_hot(mate(matching_of[y], u) - 1, n)

            verdicts = []
            for u_mate in range(1, n + 1):

                def value(x: str, u_mate=u_mate) -> Fraction:
                    members = set_of[x]
                    side = chosen_side(members, xi)
                    if not side:
                        return Fraction(len(members) - 1)
                    if u_mate in members:
                        return Fraction(len(members) - 1 - 2 * len(side))
                    return Fraction(len(members) - 1)

                verdicts.append(scaled_output_node("X", x_domain, value, Fraction(n - 2)))
            vertex_children.append(selection_tree("Y", y_domain, mate_weights, verdicts))
        return selection_tree("X", x_domain, pick_weights, vertex_children)

    children = [branch_for_subset(x) for x in cover.subsets]

    def index_weights(y: str):
        return one_hot(first_compatible(matching_of[y]), k)

    root = selection_tree("Y", y_domain, index_weights, children)
    return ProtocolTree(root, x_domain, y_domain)


# ---------------------------------------------------------------------------
# hint-edge protocol
# ---------------------------------------------------------------------------


def hinted_inputs(n: int, matchings: Sequence[EdgeSet] | None = None) -> list[HintedInput]:
    """All (matching, hint edge) pairs of K_n, in enumeration order."""
    if matchings is None:
        matchings = enumerate_objects("perfect_matching", Graph.complete(n))
    return [HintedInput(m, e) for m in matchings for e in m]


def hint_edge_protocol(n: int, hints: Sequence[HintedInput] | None = None) -> ProtocolTree:
    """Protocol for the odd-cut slack when the column player also knows a
    matching edge crossing the odd set.

    He announces a uniformly random matching edge other than the hint; the
    row player answers n/2 - 1 when it crosses her set and 0 otherwise.  On
    hint-consistent pairs the expectation is |cut(U) & M| - 1 because the
    remaining crossing edges number exactly one less than all of them.
    Height is ceil(lg C(n,2)) + 1 <= 2*ceil(lg n) + 1.
    """
    if n < 4 or n % 2 != 0:
        raise ValueError("n must be even and >= 4")
    if hints is None:
        hints = hinted_inputs(n)
    odd_sets = enumerate_odd_sets(n)
    x_domain = tuple(RowLabel("odd_cut", u).text for u in odd_sets)
    y_domain = tuple(h.label for h in hints)
    set_of = dict(zip(x_domain, odd_sets))
    hint_of = dict(zip(y_domain, hints))

    edge_slots = [canonical_edge(a, b) for a, b in combinations(range(1, n + 1), 2)]
    slot_index = {e: i for i, e in enumerate(edge_slots)}

    def edge_weights(y: str):
        h = hint_of[y]
        rest = [slot_index[e] for e in h.matching if e != h.hint_edge]
        return uniform_over(rest, len(edge_slots))

    verdicts = []
    for a, b in edge_slots:

        def value(x: str, a=a, b=b) -> Fraction:
            inside = set(set_of[x])
            return Fraction(n // 2 - 1 if (a in inside) != (b in inside) else 0)

        verdicts.append(scaled_output_node("X", x_domain, value, Fraction(n // 2 - 1)))

    root = selection_tree("Y", y_domain, edge_weights, verdicts)
    return ProtocolTree(root, x_domain, y_domain)
