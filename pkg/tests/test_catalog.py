import math
import random
from fractions import Fraction
from itertools import combinations

import pytest

from extform.catalog import (
    CLAWFREE_HEIGHT_SLACK,
    HINT_EDGE_HEIGHT_SLACK,
    SPANNING_TREE_HEIGHT_SLACK,
    CoverFamily,
    HintedInput,
    clawfree_stable_set_protocol,
    find_claw,
    greedy_matching_cover,
    hint_edge_protocol,
    hinted_inputs,
    is_compatible,
    perfect_matching_protocol,
    spanning_tree_protocol,
)
from extform.combinatorics import (
    Graph,
    cut_edge_count,
    enumerate_objects,
    enumerate_proper_subsets,
    induced_component_count,
)
from extform.protocol import (
    complexity,
    computes_in_expectation,
    evaluate,
    is_deterministic,
    leaf_rectangles,
    validate,
)
from extform.slack import RowLabel, slack_matrix, tree_label


def lg_ceil(n: int) -> int:
    return (n - 1).bit_length()


# ---------------------------------------------------------------------------
# greedy cover
# ---------------------------------------------------------------------------


def test_cover_n4_matches_exhaustive_minimum():
    fam = greedy_matching_cover(4)
    assert len(fam.subsets) == 2
    matchings = enumerate_objects("perfect_matching", Graph.complete(4))
    candidates = list(combinations(range(1, 5), 2))
    # each 2-subset is compatible with exactly 2 of the 3 matchings
    for x in candidates:
        assert sum(1 for m in matchings if is_compatible(x, m)) == 2
    # no single subset covers everything, so 2 is the exhaustive minimum
    assert not any(
        all(is_compatible(x, m) for m in matchings) for x in candidates
    )


def test_cover_n6_covers_every_matching():
    fam = greedy_matching_cover(6)
    matchings = enumerate_objects("perfect_matching", Graph.complete(6))
    assert len(matchings) == 15
    for m in matchings:
        assert any(is_compatible(x, m) for x in fam.subsets)


def test_each_matching_compatible_with_2_to_the_half_n():
    for n in (4, 6):
        matchings = enumerate_objects("perfect_matching", Graph.complete(n))
        candidates = list(combinations(range(1, n + 1), n // 2))
        for m in matchings:
            assert sum(1 for x in candidates if is_compatible(x, m)) == 2 ** (n // 2)


def test_cover_size_within_logarithmic_bound():
    # greedy set cover guarantee (1 + ln universe) times the fractional
    # optimum; the log term gets a 1% float guard band
    for n in (4, 6, 8):
        fam = greedy_matching_cover(n)
        universe = len(enumerate_objects("perfect_matching", Graph.complete(n)))
        bound = (1 + 1.01 * math.log(universe)) * 2 ** (n / 2) / math.sqrt(n)
        assert len(fam.subsets) <= bound


def test_cover_family_validation():
    with pytest.raises(ValueError):
        CoverFamily(5, ((1, 2),))
    with pytest.raises(ValueError):
        CoverFamily(4, ((1,),))
    with pytest.raises(ValueError):
        CoverFamily(4, ((1, 2), (1, 2)))
    with pytest.raises(ValueError):
        greedy_matching_cover(7)


# ---------------------------------------------------------------------------
# spanning tree protocol
# ---------------------------------------------------------------------------


def test_spanning_tree_protocol_exhaustive_small():
    for n in (2, 3, 4):
        t = spanning_tree_protocol(n)
        assert validate(t) == []
        m = slack_matrix("spanning_tree", Graph.complete(n))
        ok, witness = computes_in_expectation(t, m)
        assert ok, witness
        assert complexity(t) <= 3 * lg_ceil(n) + SPANNING_TREE_HEIGHT_SLACK


def test_spanning_tree_connected_subset_gives_zero():
    t = spanning_tree_protocol(4)
    assert evaluate(t, "U:1-2", "T:12.13.14").expectation == 0


def test_spanning_tree_choice_of_announced_vertex_is_free():
    t_min = spanning_tree_protocol(3, pick="min")
    t_max = spanning_tree_protocol(3, pick="max")
    for x in t_min.x_domain:
        for y in t_min.y_domain:
            assert evaluate(t_min, x, y).expectation == evaluate(t_max, x, y).expectation


def test_spanning_tree_spot_check_k8_on_sampled_domain():
    # restricted column domain keeps the tables desk-sized at n = 8
    n = 8
    rng = random.Random(7)

    def tree_from_sequence(seq):
        # standard decode of a labeled-tree sequence over [n]
        degree = {v: 1 for v in range(1, n + 1)}
        for v in seq:
            degree[v] += 1
        edges = []
        for v in seq:
            leaf = min(u for u in range(1, n + 1) if degree[u] == 1)
            edges.append((min(leaf, v), max(leaf, v)))
            degree[leaf] -= 1
            degree[v] -= 1
        last = [u for u in range(1, n + 1) if degree[u] == 1]
        edges.append((min(last), max(last)))
        return tuple(sorted(edges))

    trees = sorted({tree_from_sequence([rng.randrange(1, n + 1) for _ in range(n - 2)]) for _ in range(25)})
    t = spanning_tree_protocol(n, trees=trees)
    subsets = enumerate_proper_subsets(n)
    sampled = rng.sample(subsets, 40)
    for u in sampled:
        x = RowLabel("subset_rank", u).text
        for tr in rng.sample(trees, 6):
            expected = induced_component_count(tr, u) - 1
            assert evaluate(t, x, tree_label(tr)).expectation == expected


# ---------------------------------------------------------------------------
# perfect matching protocol
# ---------------------------------------------------------------------------


def test_perfect_matching_protocol_exhaustive_n4():
    t = perfect_matching_protocol(4, greedy_matching_cover(4))
    assert validate(t) == []
    m = slack_matrix("perfect_matching", Graph.complete(4))
    ok, witness = computes_in_expectation(t, m)
    assert ok, witness


def test_perfect_matching_protocol_rejects_bad_cover():
    with pytest.raises(ValueError):
        perfect_matching_protocol(4, CoverFamily(4, ((1, 2),)))
    with pytest.raises(ValueError):
        perfect_matching_protocol(6, greedy_matching_cover(4))


def test_perfect_matching_singleton_rows_are_zero():
    t = perfect_matching_protocol(4, greedy_matching_cover(4))
    for y in t.y_domain:
        for v in range(1, 5):
            assert evaluate(t, f"U:{v}", y).expectation == 0


# ---------------------------------------------------------------------------
# claw-free stable set protocol
# ---------------------------------------------------------------------------


def test_clawfree_rejects_a_claw():
    star = Graph.from_edges(4, [(1, 2), (1, 3), (1, 4)])
    assert find_claw(star) == (1, (2, 3, 4))
    with pytest.raises(ValueError):
        clawfree_stable_set_protocol(star)


def test_clawfree_protocol_on_paths_and_k4():
    for g in (Graph.path(4), Graph.path(6), Graph.complete(4)):
        t = clawfree_stable_set_protocol(g)
        assert validate(t) == []
        assert is_deterministic(t)
        m = slack_matrix("stable_set", g)
        ok, witness = computes_in_expectation(t, m)
        assert ok, witness
        rects = leaf_rectangles(t)
        covered = sum(len(r) * len(c) for _, r, c, _ in rects)
        assert covered == len(t.x_domain) * len(t.y_domain)
        assert complexity(t) <= 3 * lg_ceil(g.n) + CLAWFREE_HEIGHT_SLACK


def test_clawfree_k3_slack_zero_iff_stable_set_nonempty():
    t = clawfree_stable_set_protocol(Graph.complete(3))
    full_clique = "K:1-2-3"
    assert evaluate(t, full_clique, "S:").expectation == 1
    for s in ("S:1", "S:2", "S:3"):
        assert evaluate(t, full_clique, s).expectation == 0


# ---------------------------------------------------------------------------
# hint-edge protocol
# ---------------------------------------------------------------------------


def consistent_triples(n):
    t = hint_edge_protocol(n)
    for h in hinted_inputs(n):
        for x in t.x_domain:
            u = set(RowLabel.parse(x, "perfect_matching").payload)
            if (h.hint_edge[0] in u) != (h.hint_edge[1] in u):
                yield t, x, h, u


def test_hint_edge_protocol_exhaustive_n4():
    count = 0
    for t, x, h, u in consistent_triples(4):
        expected = cut_edge_count(tuple(sorted(u)), h.matching) - 1
        assert evaluate(t, x, h.label).expectation == expected
        count += 1
    assert count > 0


def test_hint_edge_single_crossing_gives_zero():
    t = hint_edge_protocol(6)
    h = HintedInput(((1, 2), (3, 4), (5, 6)), (1, 2))
    assert evaluate(t, "U:1", h.label).expectation == 0


def test_hint_edge_height_and_validation():
    for n in (4, 6):
        t = hint_edge_protocol(n)
        assert validate(t) == []
        assert complexity(t) <= 2 * lg_ceil(n) + HINT_EDGE_HEIGHT_SLACK
    with pytest.raises(ValueError):
        hint_edge_protocol(5)
    with pytest.raises(ValueError):
        HintedInput(((1, 2), (3, 4)), (1, 3))
