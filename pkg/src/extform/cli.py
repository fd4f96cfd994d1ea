"""Batch command line interface.

Verbs: slack, protocol, convert, cover, extend, reduce, verify.  Exit codes:
0 success, 1 verification failure (counterexample printed), 2 usage error.
All output is deterministic; sampling happens only under `verify --simulate`
and is driven by the explicit --seed flag.
"""

from __future__ import annotations

import argparse
import math
import random
import sys
from fractions import Fraction

from . import catalog, convert, extension, protocol, reductions
from .combinatorics import Graph
from .slack import LabeledMatrix, RowLabel, slack_matrix, support_matrix

FAMILY_NAMES = {
    "spanning-tree": "spanning_tree",
    "perfect-matching": "perfect_matching",
    "stable-set": "stable_set",
}

PROTOCOL_NAMES = ("spanning-tree", "perfect-matching", "clawfree", "hint-edge")


def _make_graph(kind: str, n: int) -> Graph:
    if kind == "complete":
        return Graph.complete(n)
    if kind == "path":
        return Graph.path(n)
    if kind == "cycle":
        return Graph.cycle(n)
    raise ValueError(f"unknown graph kind {kind!r}")


def _write(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_set(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(p) for p in text.split(","))


def _catalog_protocol(name: str, n: int, graph_kind: str):
    """(protocol tree, matrix it computes) for a named construction."""
    if name == "spanning-tree":
        t = catalog.spanning_tree_protocol(n)
        m = slack_matrix("spanning_tree", Graph.complete(n))
    elif name == "perfect-matching":
        t = catalog.perfect_matching_protocol(n, catalog.greedy_matching_cover(n))
        m = slack_matrix("perfect_matching", Graph.complete(n))
    elif name == "clawfree":
        g = _make_graph(graph_kind, n)
        t = catalog.clawfree_stable_set_protocol(g)
        m = slack_matrix("stable_set", g)
    elif name == "hint-edge":
        t = catalog.hint_edge_protocol(n)
        m = None  # exact only on hint-consistent pairs; handled by the caller
    else:
        raise ValueError(f"unknown protocol {name!r}")
    return t, m


def cmd_slack(args) -> int:
    g = _make_graph(args.graph, args.n)
    m = slack_matrix(FAMILY_NAMES[args.family], g, args.include_trivial)
    if args.support:
        m = support_matrix(m)
    _write(m.to_csv(), args.out)
    return 0


def cmd_protocol(args) -> int:
    t, _ = _catalog_protocol(args.name, args.n, args.graph)
    _write(protocol.format_protocol(t), args.out)
    return 0


def cmd_convert(args) -> int:
    if args.to == "factorization":
        if not args.protocol or not args.left_out or not args.right_out:
            raise ValueError("--to factorization needs --protocol, --left-out, --right-out")
        with open(args.protocol, encoding="utf-8") as fh:
            t = protocol.parse_protocol(fh.read())
        f = convert.protocol_to_factorization(t)
        _write(f.left.to_csv(), args.left_out)
        _write(f.right.to_csv(), args.right_out)
        print(f"rank {f.rank} factorization written")
        return 0
    if not args.left or not args.right:
        raise ValueError("--to protocol needs --left and --right CSV files")
    with open(args.left, encoding="utf-8") as fh:
        left = LabeledMatrix.from_csv(fh.read())
    with open(args.right, encoding="utf-8") as fh:
        right = LabeledMatrix.from_csv(fh.read())
    t = convert.factorization_to_protocol(convert.Factorization(left, right))
    _write(protocol.format_protocol(t), args.out)
    return 0


def cmd_cover(args) -> int:
    fam = catalog.greedy_matching_cover(args.n)
    text = "\n".join("-".join(str(v) for v in s) for s in fam.subsets) + "\n"
    _write(text, args.out)
    return 0


def cmd_extend(args) -> int:
    if args.family == "hint-edge":
        raise ValueError("hint-edge has no polytope; choose a slack family")
    g = _make_graph(args.graph, args.n)
    family = FAMILY_NAMES[args.family]
    name = {"spanning_tree": "spanning-tree", "perfect_matching": "perfect-matching",
            "stable_set": "clawfree"}[family]
    t, _ = _catalog_protocol(name, args.n, args.graph)
    f = convert.protocol_to_factorization(t)
    p = extension.polytope_description(family, g)
    q = extension.build_extension(p, f)
    ok, why = extension.verify_projection(q, p, f)
    if not ok:
        print(f"FAIL: {why}")
        return 1
    _write(extension.format_extension(q), args.out)
    return 0


def cmd_reduce(args) -> int:
    inst = reductions.DisjointnessInstance(args.n, _parse_set(args.A), _parse_set(args.B))
    if args.target == "pm":
        out = reductions.reduce_to_pm(inst)
        print(f"ell = {out.ell}")
        print("U = {" + ",".join(str(v) for v in out.odd_set) + "}")
        print("M = " + " ".join(f"{{{a},{b}}}" for a, b in out.matching))
    else:
        out = reductions.reduce_to_st(inst)
        print(f"ell = {out.ell}")
        print("U = {" + ",".join(str(v) for v in out.subset) + "}")
        print("T = " + " ".join(f"{{{a},{b}}}" for a, b in out.tree))
    print(f"slack = {out.slack()}")
    print(f"DISJ = {reductions.disj(inst)}")
    return 0


def _simulate(t, m, samples: int, seed: int) -> tuple[bool, float]:
    rng = random.Random(seed)
    worst = 0.0
    for x in m.row_labels:
        for y in m.col_labels:
            sem = protocol.evaluate(t, x, y)
            mean_exact = sem.expectation
            second = sum(p * v * v for _, v, p in sem.leaf_distribution)
            var = second - mean_exact * mean_exact
            if var == 0:
                continue
            total = Fraction(0)
            for _ in range(samples):
                total += protocol.sample_value(t, x, y, rng)
            dev = abs(float(total) / samples - float(mean_exact))
            z = dev / math.sqrt(float(var) / samples)
            worst = max(worst, z)
    return worst <= 5.0, worst


def cmd_verify(args) -> int:
    if args.factorization:
        left_path, right_path = args.factorization
        with open(left_path, encoding="utf-8") as fh:
            left = LabeledMatrix.from_csv(fh.read())
        with open(right_path, encoding="utf-8") as fh:
            right = LabeledMatrix.from_csv(fh.read())
        with open(args.matrix, encoding="utf-8") as fh:
            m = LabeledMatrix.from_csv(fh.read())
        f = convert.Factorization(left, right)
        prod = f.product()
        for i, x in enumerate(m.row_labels):
            for j, y in enumerate(m.col_labels):
                if prod.entries[i][j] != m.entries[i][j]:
                    print(f"FAIL at ({x}, {y}): product {prod.entries[i][j]} != {m.entries[i][j]}")
                    return 1
        print(f"OK: {m.n_rows * m.n_cols}/{m.n_rows * m.n_cols} entries exact")
        return 0

    if args.reduction:
        ok, pair = reductions.verify_reduction(args.reduction, args.n)
        if not ok:
            print(f"FAIL at A={pair[0]} B={pair[1]}")
            return 1
        print(f"OK: {4 ** args.n}/{4 ** args.n} pairs exact")
        return 0

    if not args.protocol:
        raise ValueError("verify needs --protocol, --factorization or --reduction")
    t, m = _catalog_protocol(args.protocol, args.n, args.graph)
    if args.protocol == "hint-edge":
        total = 0
        for h in catalog.hinted_inputs(args.n):
            for x in t.x_domain:
                u = RowLabel.parse(x, "perfect_matching").payload
                inside = set(u)
                if (h.hint_edge[0] in inside) == (h.hint_edge[1] in inside):
                    continue
                total += 1
                expected = Fraction(
                    sum(1 for a, b in h.matching if (a in inside) != (b in inside)) - 1
                )
                got = protocol.evaluate(t, x, h.label).expectation
                if got != expected:
                    print(f"FAIL at ({x}, {h.label}): expected {expected}, got {got}")
                    return 1
        print(f"OK: {total}/{total} consistent triples exact")
        return 0
    ok, witness = protocol.computes_in_expectation(t, m)
    if not ok:
        x, y, expected, got = witness
        print(f"FAIL at ({x}, {y}): expected {expected}, got {got}")
        return 1
    pairs = m.n_rows * m.n_cols
    print(f"OK: {pairs}/{pairs} pairs exact")
    if args.simulate:
        ok, worst = _simulate(t, m, args.simulate, args.seed)
        print(f"SMOKE: max z-score {worst:.2f} over {args.simulate} samples/pair")
        if not ok:
            return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="extform")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("slack", help="print a slack matrix as CSV")
    p.add_argument("--family", required=True, choices=sorted(FAMILY_NAMES))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--graph", default="complete", choices=("complete", "path", "cycle"))
    p.add_argument("--include-trivial", action="store_true")
    p.add_argument("--support", action="store_true", help="print the 0/1 support instead")
    p.add_argument("--out")
    p.set_defaults(func=cmd_slack)

    p = sub.add_parser("protocol", help="print a catalog protocol tree")
    p.add_argument("--name", required=True, choices=PROTOCOL_NAMES)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--graph", default="complete", choices=("complete", "path", "cycle"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_protocol)

    p = sub.add_parser("convert", help="protocol <-> factorization")
    p.add_argument("--to", required=True, choices=("factorization", "protocol"))
    p.add_argument("--protocol", help="protocol text file (for --to factorization)")
    p.add_argument("--left-out")
    p.add_argument("--right-out")
    p.add_argument("--left", help="left factor CSV (for --to protocol)")
    p.add_argument("--right", help="right factor CSV")
    p.add_argument("--out")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("cover", help="greedy matching cover subsets")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("extend", help="build and verify an extension system")
    p.add_argument("--family", required=True, choices=sorted(FAMILY_NAMES))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--graph", default="complete", choices=("complete", "path", "cycle"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("reduce", help="disjointness reduction instance")
    p.add_argument("--target", required=True, choices=("pm", "st"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--A", default="", help="comma-separated elements")
    p.add_argument("--B", default="", help="comma-separated elements")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify", help="exact verification with exit code 1 on failure")
    p.add_argument("--protocol", choices=PROTOCOL_NAMES)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--graph", default="complete", choices=("complete", "path", "cycle"))
    p.add_argument("--factorization", nargs=2, metavar=("A.csv", "B.csv"))
    p.add_argument("--matrix", help="expected product CSV (with --factorization)")
    p.add_argument("--reduction", choices=("pm", "st"))
    p.add_argument("--simulate", type=int, default=0, metavar="N",
                   help="Monte-Carlo smoke test with N samples per pair")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
