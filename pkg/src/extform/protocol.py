"""Randomized communication protocol trees with exact rational semantics.

A protocol tree is a rooted binary tree.  Each internal node belongs to one
side ("X" = row player, "Y" = column player) and carries a complete
transition table mapping that side's inputs to the probability of descending
to the LEFT child; the right child gets the complementary probability.
Deterministic nodes are the special case of {0,1}-valued tables.  Leaves
carry nonnegative rational values.

A tree computes a matrix in expectation when, for every input pair, the
expected leaf value equals the matrix entry exactly.  All evaluation here is
exact Fraction arithmetic; sampling exists only as a statistical smoke test.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .slack import LabeledMatrix


@dataclass(frozen=True)
class Leaf:
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))


@dataclass
class Internal:
    kind: str  # "X" or "Y"
    transition: dict[str, Fraction]  # input label -> probability of LEFT
    left: "Node"
    right: "Node"


Node = Leaf | Internal


@dataclass
class ProtocolTree:
    root: Node
    x_domain: tuple[str, ...]
    y_domain: tuple[str, ...]

    def __post_init__(self):
        self.x_domain = tuple(self.x_domain)
        self.y_domain = tuple(self.y_domain)


@dataclass(frozen=True)
class ExecutionSemantics:
    """Exact outcome distribution of one input pair.

    leaf_distribution lists (path, leaf value, probability) for every leaf
    reached with positive probability, where path is a string over {L,R}.
    """

    expectation: Fraction
    nonzero_probability: Fraction
    leaf_distribution: tuple[tuple[str, Fraction, Fraction], ...]


def evaluate(t: ProtocolTree, x: str, y: str) -> ExecutionSemantics:
    """Exact leaf distribution, expectation and positive-value probability."""
    if x not in t.x_domain:
        raise ValueError(f"unknown row label {x!r}")
    if y not in t.y_domain:
        raise ValueError(f"unknown column label {y!r}")
    dist: list[tuple[str, Fraction, Fraction]] = []

    def walk(node: Node, prob: Fraction, path: str):
        if isinstance(node, Leaf):
            dist.append((path, node.value, prob))
            return
        p = node.transition[x if node.kind == "X" else y]
        if p > 0:
            walk(node.left, prob * p, path + "L")
        if p < 1:
            walk(node.right, prob * (1 - p), path + "R")

    walk(t.root, Fraction(1), "")
    expectation = sum((v * p for _, v, p in dist), Fraction(0))
    nonzero = sum((p for _, v, p in dist if v > 0), Fraction(0))
    return ExecutionSemantics(expectation, nonzero, tuple(dist))


def computes_in_expectation(t: ProtocolTree, m: LabeledMatrix):
    """Check expectation == matrix entry on every pair, exactly.

    Returns (True, None) or (False, (x, y, expected, actual)) for the first
    failing pair in the matrix's label order.
    """
    if set(t.x_domain) != set(m.row_labels) or set(t.y_domain) != set(m.col_labels):
        raise ValueError("protocol domains do not match matrix labels")
    for i, x in enumerate(m.row_labels):
        for j, y in enumerate(m.col_labels):
            got = evaluate(t, x, y).expectation
            if got != m.entries[i][j]:
                return False, (x, y, m.entries[i][j], got)
    return True, None


def complexity(t: ProtocolTree) -> int:
    """Height of the tree in edges; a bare leaf has complexity 0."""

    def height(node: Node) -> int:
        if isinstance(node, Leaf):
            return 0
        return 1 + max(height(node.left), height(node.right))

    return height(t.root)


def validate(t: ProtocolTree) -> list[str]:
    """All invariant violations, each tagged with the offending node's path."""
    problems: list[str] = []
    domains = {"X": set(t.x_domain), "Y": set(t.y_domain)}
    seen: set[int] = set()

    def walk(node: Node, path: str):
        where = path or "root"
        if id(node) in seen:
            problems.append(f"{where}: node object reused; not a tree")
            return
        seen.add(id(node))
        if isinstance(node, Leaf):
            if node.value < 0:
                problems.append(f"{where}: negative leaf value {node.value}")
            return
        if node.kind not in ("X", "Y"):
            problems.append(f"{where}: unknown node kind {node.kind!r}")
            return
        if set(node.transition) != domains[node.kind]:
            problems.append(f"{where}: transition table does not cover the {node.kind} domain")
        for label, p in node.transition.items():
            if not (0 <= p <= 1):
                problems.append(f"{where}: transition {label}={p} outside [0,1]")
        walk(node.left, path + "L")
        walk(node.right, path + "R")

    walk(t.root, "")
    return problems


def is_deterministic(t: ProtocolTree) -> bool:
    def walk(node: Node) -> bool:
        if isinstance(node, Leaf):
            return True
        return (
            all(p in (0, 1) for p in node.transition.values())
            and walk(node.left)
            and walk(node.right)
        )

    return walk(t.root)


def leaf_rectangles(t: ProtocolTree) -> list[tuple[str, tuple[str, ...], tuple[str, ...], Fraction]]:
    """Input rectangles of a deterministic tree, one per reached leaf.

    Each entry is (path, rows, cols, value); the rectangles partition the
    full input space.  Raises on randomized trees, where leaves do not induce
    rectangles.
    """
    if not is_deterministic(t):
        raise ValueError("leaf rectangles are only defined for deterministic trees")
    reached: dict[tuple[str, str], str] = {}
    groups: dict[str, tuple[set, set, Fraction]] = {}
    for x in t.x_domain:
        for y in t.y_domain:
            ((path, value, _),) = evaluate(t, x, y).leaf_distribution
            reached[(x, y)] = path
            rows, cols, _ = groups.setdefault(path, (set(), set(), value))
            rows.add(x)
            cols.add(y)
    out = []
    for path in sorted(groups):
        rows, cols, value = groups[path]
        r = tuple(l for l in t.x_domain if l in rows)
        c = tuple(l for l in t.y_domain if l in cols)
        for x in r:
            for y in c:
                if reached[(x, y)] != path:
                    raise AssertionError(f"leaf {path} input set is not a rectangle")
        out.append((path, r, c, value))
    return out


# ---------------------------------------------------------------------------
# construction helpers
# ---------------------------------------------------------------------------


def selection_tree(
    kind: str,
    domain: Sequence[str],
    weights: Callable[[str], Sequence[Fraction]],
    children: Sequence[Node],
) -> Node:
    """Balanced binary subtree that lands on children[i] with probability
    weights(z)[i] for an input z of the given side.

    The weight vector of every input must sum to exactly 1.  With one-hot
    weights the subtree is a deterministic announcement of i; with uniform
    weights it is a private random choice.  Its height is ceil(lg s) for s
    slots, and inputs giving an unreachable range get probability-1 (left)
    transitions so the tables stay valid.
    """
    s = len(children)
    if s == 0:
        raise ValueError("need at least one slot")
    prefix: dict[str, list[Fraction]] = {}
    for z in domain:
        w = list(weights(z))
        if len(w) != s:
            raise ValueError(f"weight vector for {z!r} has wrong length")
        total = sum(w)
        if total != 1:
            raise ValueError(f"weights for {z!r} sum to {total}, not 1")
        acc = [Fraction(0)]
        for wi in w:
            if wi < 0:
                raise ValueError(f"negative weight for {z!r}")
            acc.append(acc[-1] + wi)
        prefix[z] = acc

    def build(lo: int, hi: int) -> Node:
        if hi - lo == 1:
            return children[lo]
        h = (hi - lo - 1).bit_length()
        mid = lo + (1 << (h - 1))
        table = {}
        for z in domain:
            acc = prefix[z]
            total = acc[hi] - acc[lo]
            left = acc[mid] - acc[lo]
            table[z] = left / total if total else Fraction(1)
        return Internal(kind, table, build(lo, mid), build(mid, hi))

    return build(0, s)


def one_hot(index: int, size: int) -> list[Fraction]:
    w = [Fraction(0)] * size
    w[index] = Fraction(1)
    return w


def uniform_over(indices: Sequence[int], size: int) -> list[Fraction]:
    w = [Fraction(0)] * size
    share = Fraction(1, len(indices))
    for i in indices:
        w[i] = share
    return w


def scaled_output_node(
    kind: str,
    domain: Sequence[str],
    value_fn: Callable[[str], Fraction],
    max_value: Fraction,
) -> Internal:
    """Final node emitting value_fn(z) in expectation: the left leaf carries
    max_value and the transition is value_fn(z)/max_value.

    With values in {0, max_value} the node is deterministic.  A zero
    max_value yields a node over two zero leaves (any transition is correct);
    the node is still emitted so tree heights stay uniform.
    """
    max_value = Fraction(max_value)
    if max_value == 0:
        table = {z: Fraction(1) for z in domain}
        return Internal(kind, table, Leaf(Fraction(0)), Leaf(Fraction(0)))
    table = {}
    for z in domain:
        v = Fraction(value_fn(z))
        if not (0 <= v <= max_value):
            raise ValueError(f"value {v} for {z!r} outside [0, {max_value}]")
        table[z] = v / max_value
    return Internal(kind, table, Leaf(max_value), Leaf(Fraction(0)))


# ---------------------------------------------------------------------------
# support amplification
# ---------------------------------------------------------------------------


def amplify_support(t: ProtocolTree, repetitions: int) -> ProtocolTree:
    """Materialized support amplifier: run t the given number of times in
    sequence (a fresh copy re-rooted at every leaf of the previous stage) and
    output 1 exactly when some stage hit a positive leaf, else 0.

    Per input, the positive-output probability is 1 - (1-q)^k where q is the
    single-run positive probability.  The tree grows like (leaves)^k; for
    larger products use amplified_nonzero_probability, which composes the
    semantics without materializing.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")

    def build(node: Node, seen_positive: bool, remaining: int) -> Node:
        if isinstance(node, Leaf):
            hit = seen_positive or node.value > 0
            if remaining == 1:
                return Leaf(Fraction(1 if hit else 0))
            return build(t.root, hit, remaining - 1)
        return Internal(
            node.kind,
            dict(node.transition),
            build(node.left, seen_positive, remaining),
            build(node.right, seen_positive, remaining),
        )

    return ProtocolTree(build(t.root, False, repetitions), t.x_domain, t.y_domain)


def amplified_nonzero_probability(t: ProtocolTree, repetitions: int, x: str, y: str) -> Fraction:
    """Positive-output probability of the amplified protocol, computed from
    the single-run semantics instead of the product tree."""
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    q = evaluate(t, x, y).nonzero_probability
    return 1 - (1 - q) ** repetitions


# ---------------------------------------------------------------------------
# sampling (statistical smoke testing only)
# ---------------------------------------------------------------------------


def sample_value(t: ProtocolTree, x: str, y: str, rng: random.Random) -> Fraction:
    """One random execution; exact semantics live in evaluate()."""
    node = t.root
    while isinstance(node, Internal):
        p = node.transition[x if node.kind == "X" else y]
        node = node.left if rng.random() < p else node.right
    return node.value


# ---------------------------------------------------------------------------
# text serialization
# ---------------------------------------------------------------------------


def _check_label(label: str):
    if " " in label or "=" in label or "," in label:
        raise ValueError(f"label {label!r} contains a reserved character")


def format_protocol(t: ProtocolTree) -> str:
    """One node per line, two-space indentation per depth, left child first.

    Internal lines are "X a=1/2 b=0 ..." with the transition in domain
    order; leaf lines are "leaf value".  Two domain header lines make the
    round trip self-contained.
    """
    for label in (*t.x_domain, *t.y_domain):
        _check_label(label)
    lines = [
        "xdomain " + " ".join(t.x_domain),
        "ydomain " + " ".join(t.y_domain),
    ]
    domains = {"X": t.x_domain, "Y": t.y_domain}

    def emit(node: Node, depth: int):
        pad = "  " * depth
        if isinstance(node, Leaf):
            lines.append(f"{pad}leaf {node.value}")
            return
        table = " ".join(f"{z}={node.transition[z]}" for z in domains[node.kind])
        lines.append(f"{pad}{node.kind} {table}")
        emit(node.left, depth + 1)
        emit(node.right, depth + 1)

    emit(t.root, 0)
    return "\n".join(lines) + "\n"


def parse_protocol(text: str) -> ProtocolTree:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 3 or not lines[0].startswith("xdomain") or not lines[1].startswith("ydomain"):
        raise ValueError("missing domain header lines")
    x_domain = tuple(lines[0].split()[1:])
    y_domain = tuple(lines[1].split()[1:])
    body = lines[2:]
    pos = 0

    def parse_node(depth: int) -> Node:
        nonlocal pos
        line = body[pos]
        indent = len(line) - len(line.lstrip(" "))
        if indent != 2 * depth:
            raise ValueError(f"bad indentation at line {pos + 3}")
        pos += 1
        parts = line.split()
        if parts[0] == "leaf":
            return Leaf(Fraction(parts[1]))
        kind = parts[0]
        table = {}
        for item in parts[1:]:
            label, _, prob = item.rpartition("=")
            table[label] = Fraction(prob)
        left = parse_node(depth + 1)
        right = parse_node(depth + 1)
        return Internal(kind, table, left, right)

    root = parse_node(0)
    if pos != len(body):
        raise ValueError("trailing lines after the root subtree")
    return ProtocolTree(root, x_domain, y_domain)
