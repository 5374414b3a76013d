"""Minimum uncovering branchings of binary matrices."""

from .bounds import BoundsReport, alpha_w_bound, beta_linear, full_bounds_report, ww_bound
from .branching import Branching, UncoveredReport, uncovered_pairs, verify_branching
from .matrix import (
    BinaryMatrix,
    ContainmentDigraph,
    EmptyPosetError,
    MatrixParseError,
    build_containment_digraph,
    conflict_pairs,
    parse_matrix,
    principal_subgraph,
    serialize_matrix,
)
from .poset import max_weight_antichain, max_weight_maximum_antichain, min_chain_partition, width
from .solver import SolveResult, WidthGuardError, solve, solve_many_maximal, top_reduction

__all__ = [
    "BinaryMatrix",
    "BoundsReport",
    "Branching",
    "ContainmentDigraph",
    "EmptyPosetError",
    "MatrixParseError",
    "SolveResult",
    "UncoveredReport",
    "WidthGuardError",
    "alpha_w_bound",
    "beta_linear",
    "build_containment_digraph",
    "conflict_pairs",
    "full_bounds_report",
    "max_weight_antichain",
    "max_weight_maximum_antichain",
    "min_chain_partition",
    "parse_matrix",
    "principal_subgraph",
    "serialize_matrix",
    "solve",
    "solve_many_maximal",
    "top_reduction",
    "uncovered_pairs",
    "verify_branching",
    "width",
    "ww_bound",
]
