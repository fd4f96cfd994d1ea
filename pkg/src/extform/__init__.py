"""Exact slack matrices, protocol trees computing matrices in expectation,
nonnegative factorizations, extension systems, and disjointness reductions.

Everything is exact rational arithmetic at desk scale; see the individual
modules for the constructions.
"""

from .combinatorics import (
    Graph,
    cut_edge_count,
    enumerate_objects,
    enumerate_odd_sets,
    enumerate_proper_subsets,
    induced_component_count,
)
from .slack import (
    LabeledMatrix,
    RowLabel,
    rational_rank,
    slack_matrix,
    split_rows,
    support_matrix,
    vstack,
)
from .protocol import (
    ExecutionSemantics,
    Internal,
    Leaf,
    ProtocolTree,
    amplified_nonzero_probability,
    amplify_support,
    complexity,
    computes_in_expectation,
    evaluate,
    format_protocol,
    leaf_rectangles,
    parse_protocol,
    validate,
)
from .convert import (
    Factorization,
    RankOneTerm,
    combine_row_partition,
    factorization_to_protocol,
    leaf_traversal_terms,
    nonnegativity_rows_protocol,
    protocol_to_factorization,
    rectangle_cover_lower_bound,
    verify_factorization,
)
from .catalog import (
    CoverFamily,
    HintedInput,
    clawfree_stable_set_protocol,
    greedy_matching_cover,
    hint_edge_protocol,
    perfect_matching_protocol,
    spanning_tree_protocol,
)
from .extension import (
    ExtensionSystem,
    PolytopeDescription,
    build_extension,
    check_bounded,
    polytope_description,
    strip_zero_columns,
    verify_projection,
)
from .reductions import (
    DisjointnessInstance,
    disj,
    reduce_to_pm,
    reduce_to_st,
    verify_reduction,
)

__all__ = [name for name in dir() if not name.startswith("_")]
