"""Set disjointness and its constructive reductions to the support problems
of the perfect-matching and spanning-tree slack matrices.

Both reductions are communication-free: the perfect-matching one maps (A, B)
over ground set [n] to an odd set and a perfect matching of K_ell with
ell <= 3n+8 such that the odd-cut slack vanishes exactly when A and B are
disjoint; the spanning-tree one maps to a subset and spanning tree of
K_{2n+1} such that the induced subgraph is connected exactly when A and B
are disjoint.
"""

from __future__ import annotations

from dataclasses import dataclass

from .combinatorics import (
    EdgeSet,
    VertexSet,
    canonical_edge,
    cut_edge_count,
    induced_component_count,
    vertex_set,
)


@dataclass(frozen=True)
class DisjointnessInstance:
    n: int
    a: VertexSet
    b: VertexSet

    def __post_init__(self):
        object.__setattr__(self, "a", vertex_set(self.a))
        object.__setattr__(self, "b", vertex_set(self.b))
        for v in (*self.a, *self.b):
            if not 1 <= v <= self.n:
                raise ValueError(f"element {v} outside [1..{self.n}]")


def disj(inst: DisjointnessInstance) -> int:
    """1 when the two sets are disjoint, else 0."""
    return 1 if not set(inst.a) & set(inst.b) else 0


@dataclass(frozen=True)
class PMReductionOutput:
    ell: int
    odd_set: VertexSet
    matching: EdgeSet
    dummies_added: int

    def slack(self) -> int:
        return cut_edge_count(self.odd_set, self.matching) - 1


@dataclass(frozen=True)
class STReductionOutput:
    ell: int
    subset: VertexSet
    tree: EdgeSet

    def slack(self) -> int:
        return induced_component_count(self.tree, self.subset) - 1


def _pair_consecutive(vertices: list[int]) -> list[tuple[int, int]]:
    if len(vertices) % 2 != 0:
        raise AssertionError("parity padding failed")
    ordered = sorted(vertices)
    return [canonical_edge(ordered[i], ordered[i + 1]) for i in range(0, len(ordered), 2)]


def reduce_to_pm(inst: DisjointnessInstance) -> PMReductionOutput:
    """Perfect-matching support instance equivalent to the disjointness one.

    The ground set is padded with at most two dummies (never added to A) so
    that both B and its complement have even size; with k the padded size and
    ell = 3k+2, vertex i+k hangs off either i (i not in B) or i+2k (i in B),
    leftover first- and third-block vertices are paired consecutively, and
    one anchor edge {3k+1, 3k+2} is appended.  The odd set is A in the first
    block, A shifted into the second block, plus the anchor 3k+1.

    The anchor edge always crosses.  For i in A and B, the edge {i+k, i+2k}
    crosses as well, so the slack is positive; for disjoint A and B every
    {i, i+k} with i in A lies inside the odd set and the slack is zero.
    """
    b = set(inst.b)
    k = inst.n
    dummies = 0
    if len(b) % 2 == 1:
        k += 1
        b.add(k)
        dummies += 1
    if (k - len(b)) % 2 == 1:
        k += 1
        dummies += 1
    ell = 3 * k + 2
    odd = vertex_set([*inst.a, *(i + k for i in inst.a), 3 * k + 1])
    edges = [canonical_edge(i, i + k) for i in range(1, k + 1) if i not in b]
    edges += [canonical_edge(i + k, i + 2 * k) for i in b]
    edges.append((3 * k + 1, 3 * k + 2))
    edges += _pair_consecutive([i for i in range(1, k + 1) if i in b])
    edges += _pair_consecutive([i + 2 * k for i in range(1, k + 1) if i not in b])
    return PMReductionOutput(ell, odd, tuple(sorted(edges)), dummies)


def reduce_to_st(inst: DisjointnessInstance) -> STReductionOutput:
    """Spanning-tree support instance equivalent to the disjointness one.

    On 2n+1 vertices, every i in [n] hangs off the hub 2n+1; vertex n+i
    hangs off i when i is in B and off the hub otherwise.  The subset is
    {n+i : i in A} plus the hub: it induces a star exactly when no element
    of A was rerouted through B's side.
    """
    n = inst.n
    hub = 2 * n + 1
    edges = [canonical_edge(i, hub) for i in range(1, n + 1)]
    b = set(inst.b)
    for i in range(1, n + 1):
        edges.append(canonical_edge(n + i, i if i in b else hub))
    subset = vertex_set([*(n + i for i in inst.a), hub])
    return STReductionOutput(hub, subset, tuple(sorted(edges)))


def verify_reduction(family: str, n: int):
    """Exhaustively check, over all 4^n pairs (A, B), that disjointness holds
    exactly when the reduced slack is zero.

    Slack values come straight from the cut/component primitives, not from a
    full matrix build.  Returns (True, None) or (False, (A, B)).
    """
    limits = {"pm": 5, "st": 6}
    if family not in limits:
        raise ValueError("family must be 'pm' or 'st'")
    if n > limits[family]:
        raise ValueError(f"exhaustive verification capped at n={limits[family]} for {family}")
    universe = list(range(1, n + 1))
    subsets = [[v for v in universe if mask >> (v - 1) & 1] for mask in range(1 << n)]
    for a in subsets:
        for b in subsets:
            inst = DisjointnessInstance(n, tuple(a), tuple(b))
            out = reduce_to_pm(inst) if family == "pm" else reduce_to_st(inst)
            if (disj(inst) == 1) != (out.slack() == 0):
                return False, (tuple(a), tuple(b))
    return True, None
