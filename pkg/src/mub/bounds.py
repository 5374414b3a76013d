"""Polynomial lower and upper bounds on the uncovering number.

``alpha_w <= ww <= beta <= beta_linear`` holds for every matrix; the report
re-checks it before it is handed out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .branching import Branching, uncovered_pairs
from .matrix import (
    BinaryMatrix,
    ContainmentDigraph,
    build_containment_digraph,
    columns_conflict,
    principal_subgraph,
    rows_of,
)
from .oracle import CHROMATIC_GUARD, OracleGuardError, brute_chromatic
from .poset import Antichain, BipartiteGraph, max_weight_antichain, max_weight_bipartite_matching, width


class InvariantError(RuntimeError):
    """An internal consistency check failed; this is a bug, not bad input."""


def as_digraph(obj: BinaryMatrix | ContainmentDigraph) -> ContainmentDigraph:
    return obj if isinstance(obj, ContainmentDigraph) else build_containment_digraph(obj)


def ww_bound(obj) -> tuple[int, list[int]]:
    """Sum over rows of the width of the principal sub-digraph of that row."""
    dag = as_digraph(obj)
    per_row = [width(principal_subgraph(dag, r)) for r in range(dag.m)]
    return sum(per_row), per_row


def alpha_w_bound(obj) -> Antichain:
    dag = as_digraph(obj)
    return max_weight_antichain(dag, dag.weights())


def beta_linear(obj) -> tuple[int, Branching]:
    """Best linear branching via a maximum-weight tail assignment.

    A linear branching is a set of arcs with in- and out-degree at most one,
    and its cost is the weight of its chain tops, i.e. the total weight minus
    the weight of the tails.  Maximising tail weight is a weighted bipartite
    matching with edge ``(u, v)`` of weight ``|u|`` for each arc.
    """
    dag = as_digraph(obj)
    arcs = tuple(dag.arcs())
    graph = BipartiteGraph(
        left=tuple(range(len(dag))),
        right=tuple(range(len(dag))),
        edges=arcs,
        weights=tuple(dag.weight(u) for u, _ in arcs),
    )
    matching, tail_weight = max_weight_bipartite_matching(graph)
    return sum(dag.weights()) - tail_weight, Branching(matching)


@dataclass(frozen=True)
class ConflictGraph:
    row: int
    columns: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]


def conflict_graph(matrix: BinaryMatrix, r: int) -> ConflictGraph:
    """Columns with a 1 in row ``r``; edges join conflicting columns.

    Edges are given as positions into ``columns``.
    """
    cols = tuple(j for j in range(matrix.n) if matrix.entries[r][j])
    supports = [matrix.column_support(j) for j in cols]
    edges = tuple(
        (a, b) for a, b in combinations(range(len(cols)), 2) if columns_conflict(supports[a], supports[b])
    )
    return ConflictGraph(r, cols, edges)


def chromatic_equals_width_check(matrix: BinaryMatrix, r: int) -> tuple[int, int]:
    """(chromatic number of the row's conflict graph, width of its principal
    sub-digraph).  Test-only; refuses graphs above the colouring guard."""
    graph = conflict_graph(matrix, r)
    if len(graph.columns) > CHROMATIC_GUARD:
        raise OracleGuardError(f"conflict graph has {len(graph.columns)} vertices, guard is {CHROMATIC_GUARD}")
    chi = brute_chromatic(len(graph.columns), graph.edges)
    return chi, width(principal_subgraph(build_containment_digraph(matrix), r))


@dataclass
class BoundsReport:
    alpha_w: int
    alpha_witness: tuple[int, ...]
    ww: int
    ww_per_row: list[int]
    beta_linear: int
    beta_linear_witness: Branching
    beta_exact: int | None = None
    beta_exact_witness: Branching | None = None
    notes: dict = field(default_factory=dict)

    def check(self) -> None:
        upper = self.beta_linear if self.beta_exact is None else self.beta_exact
        if not (self.alpha_w <= self.ww <= upper <= self.beta_linear):
            raise InvariantError(
                f"bound chain violated: alpha_w={self.alpha_w} ww={self.ww} "
                f"beta={self.beta_exact} beta_linear={self.beta_linear}"
            )

    def to_json(self, digraph: ContainmentDigraph) -> dict:
        def vertex_rows(v):
            return [digraph.row_labels[i] for i in rows_of(digraph.supports[v])]

        out = {
            "alpha_w": self.alpha_w,
            "ww": self.ww,
            "ww_per_row": list(self.ww_per_row),
            "beta_linear": self.beta_linear,
        }
        if self.beta_exact is not None:
            out["beta_exact"] = self.beta_exact
        witnesses = {
            "alpha_w": [vertex_rows(v) for v in self.alpha_witness],
            "beta_linear": [[u, v] for u, v in self.beta_linear_witness.arcs],
        }
        if self.beta_exact_witness is not None:
            witnesses["beta_exact"] = [[u, v] for u, v in self.beta_exact_witness.arcs]
        out["witnesses"] = witnesses
        return out


def full_bounds_report(obj) -> BoundsReport:
    dag = as_digraph(obj)
    alpha = alpha_w_bound(dag)
    ww, per_row = ww_bound(dag)
    lin, lin_witness = beta_linear(dag)
    if uncovered_pairs(dag, lin_witness).total != lin:
        raise InvariantError("linear witness does not realise the reported beta_linear")
    report = BoundsReport(alpha.weight, alpha.vertices, ww, per_row, lin, lin_witness)
    report.check()
    return report
