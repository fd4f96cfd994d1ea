"""Enumeration of spanning trees, perfect matchings, stable sets and cliques,
plus the graph quantities (induced components, cut sizes) that slack entries
are made of.

Conventions used throughout the package:

* vertices are the integers 1..n,
* an edge is a tuple (u, v) with u < v,
* a vertex set is a strictly increasing tuple of vertices,
* an edge set is a tuple of edges sorted lexicographically,
* every enumeration is lexicographic on these canonical tuples, so matrix
  layouts are reproducible run to run.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

Edge = tuple[int, int]
VertexSet = tuple[int, ...]
EdgeSet = tuple[Edge, ...]

FAMILIES = ("spanning_tree", "perfect_matching", "stable_set", "clique")


def canonical_edge(u: int, v: int) -> Edge:
    if u == v:
        raise ValueError(f"self-loop {u}")
    return (u, v) if u < v else (v, u)


def vertex_set(members) -> VertexSet:
    """Canonicalize an iterable of vertices into a sorted duplicate-free tuple."""
    out = tuple(sorted(set(members)))
    return out


def edge_set(edges) -> EdgeSet:
    """Canonicalize an iterable of vertex pairs into a sorted edge tuple."""
    canon = {canonical_edge(u, v) for u, v in edges}
    return tuple(sorted(canon))


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 1..n."""

    n: int
    edges: frozenset[Edge]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        for u, v in self.edges:
            if not (1 <= u < v <= self.n):
                raise ValueError(f"edge ({u},{v}) not canonical inside [1..{self.n}]")

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        return cls(n, frozenset(canonical_edge(u, v) for u, v in edges))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, frozenset((u, v) for u, v in combinations(range(1, n + 1), 2)))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(n, frozenset((i, i + 1) for i in range(1, n)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        if n < 3:
            raise ValueError("cycle needs n >= 3")
        edges = {(i, i + 1) for i in range(1, n)} | {(1, n)}
        return cls(n, frozenset(edges))

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def edge_list(self) -> EdgeSet:
        return tuple(sorted(self.edges))

    def has_edge(self, u: int, v: int) -> bool:
        return canonical_edge(u, v) in self.edges

    def neighbors(self, u: int) -> VertexSet:
        out = []
        for a, b in self.edges:
            if a == u:
                out.append(b)
            elif b == u:
                out.append(a)
        return tuple(sorted(out))


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, x, y) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[rx] = ry
        return True


def _spanning_trees(g: Graph) -> list[EdgeSet]:
    """All spanning trees of g, generated in lexicographic edge-tuple order.

    Backtracking over the sorted edge list; a partial forest is extended only
    with edges that do not close a cycle, and a branch is cut as soon as the
    remaining edges cannot complete a tree.
    """
    edges = g.edge_list()
    m = len(edges)
    need = g.n - 1
    out: list[EdgeSet] = []
    chosen: list[Edge] = []

    def extend(i: int, uf_parent: dict):
        taken = len(chosen)
        if taken == need:
            out.append(tuple(chosen))
            return
        if m - i < need - taken:
            return
        for j in range(i, m):
            if m - j < need - taken:
                break
            u, v = edges[j]
            uf = _UnionFind([])
            uf.parent = dict(uf_parent)
            if not uf.union(u, v):
                continue
            chosen.append(edges[j])
            extend(j + 1, uf.parent)
            chosen.pop()

    extend(0, {v: v for v in g.vertices()})
    return out


def _perfect_matchings(g: Graph) -> list[EdgeSet]:
    """All perfect matchings, lexicographic.

    Always matches the smallest unmatched vertex, so the produced edge tuples
    come out already lexicographically sorted.
    """
    if g.n % 2 != 0:
        return []
    out: list[EdgeSet] = []
    matched: set[int] = set()
    chosen: list[Edge] = []

    def extend():
        free = [v for v in g.vertices() if v not in matched]
        if not free:
            out.append(tuple(chosen))
            return
        u = free[0]
        for v in free[1:]:
            if g.has_edge(u, v):
                matched.add(u)
                matched.add(v)
                chosen.append((u, v))
                extend()
                chosen.pop()
                matched.discard(u)
                matched.discard(v)

    extend()
    return out


def _independent_subsets(g: Graph, adjacent_required: bool) -> list[VertexSet]:
    # adjacent_required=True enumerates cliques, False enumerates stable sets.
    out: list[VertexSet] = []

    def compatible(members: list[int], v: int) -> bool:
        for u in members:
            if g.has_edge(u, v) != adjacent_required:
                return False
        return True

    def extend(members: list[int], start: int):
        out.append(tuple(members))
        for v in range(start, g.n + 1):
            if compatible(members, v):
                members.append(v)
                extend(members, v + 1)
                members.pop()

    extend([], 1)
    return out


def enumerate_objects(family: str, g: Graph) -> list[EdgeSet] | list[VertexSet]:
    """Enumerate a combinatorial family of g, lexicographically sorted.

    spanning_tree and perfect_matching yield edge sets; stable_set and clique
    yield vertex sets.  The empty set is a stable set (it is a polytope
    vertex) but is not listed as a clique (clique rows index inequalities and
    need a vertex to name).  An odd-order graph has no perfect matchings and
    yields [].
    """
    if family == "spanning_tree":
        return sorted(_spanning_trees(g))
    if family == "perfect_matching":
        return _perfect_matchings(g)
    if family == "stable_set":
        return sorted(_independent_subsets(g, adjacent_required=False))
    if family == "clique":
        return sorted(s for s in _independent_subsets(g, adjacent_required=True) if s)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def induced_component_count(t: EdgeSet, u: VertexSet) -> int:
    """Number of connected components of T[U] for a spanning tree T of K_n.

    Isolated vertices of U count as components.  n is len(t)+1 because t
    spans; u must be a nonempty subset of [n].
    """
    n = len(t) + 1
    if not u:
        raise ValueError("u must be nonempty")
    if any(v < 1 or v > n for v in u):
        raise ValueError(f"u {u} not inside [1..{n}]")
    uf = _UnionFind(u)
    inside = set(u)
    count = len(u)
    for a, b in t:
        if a in inside and b in inside and uf.union(a, b):
            count -= 1
    return count


def cut_edge_count(u: VertexSet, m: EdgeSet) -> int:
    """Number of edges of m with exactly one endpoint in u."""
    inside = set(u)
    return sum(1 for a, b in m if (a in inside) != (b in inside))


def enumerate_odd_sets(n: int) -> list[VertexSet]:
    """All odd-cardinality subsets of [n], lexicographic.

    Singletons are kept even though their odd-cut slack is identically zero;
    callers may filter.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    out = [s for k in range(1, n + 1, 2) for s in combinations(range(1, n + 1), k)]
    return sorted(out)


def enumerate_proper_subsets(n: int) -> list[VertexSet]:
    """All nonempty subsets of [n], lexicographic.

    The full set [n] is included: its rank-inequality row is the tight
    (identically zero) one, and keeping it makes the row index set uniform.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    out = [s for k in range(1, n + 1) for s in combinations(range(1, n + 1), k)]
    return sorted(out)
