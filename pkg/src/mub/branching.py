"""Branchings of a containment digraph and their uncovered pairs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .matrix import ContainmentDigraph, rows_of


class BranchingError(ValueError):
    pass


@dataclass(frozen=True)
class Branching:
    """Arc subset with out-degree at most one per vertex; arcs kept sorted."""

    arcs: tuple[tuple[int, int], ...]

    def __init__(self, arcs: Iterable[tuple[int, int]] = ()):
        object.__setattr__(self, "arcs", tuple(sorted((int(u), int(v)) for u, v in arcs)))

    def __len__(self) -> int:
        return len(self.arcs)

    def __iter__(self):
        return iter(self.arcs)

    def in_neighbors(self, v: int) -> list[int]:
        return [a for a, b in self.arcs if b == v]

    def in_degree(self, v: int) -> int:
        return sum(1 for _, b in self.arcs if b == v)

    def out_degree(self, v: int) -> int:
        return sum(1 for a, _ in self.arcs if a == v)

    def leaves(self, n: int) -> list[int]:
        heads = {b for _, b in self.arcs}
        return [v for v in range(n) if v not in heads]

    def maximal_elements(self, n: int) -> list[int]:
        tails = {a for a, _ in self.arcs}
        return [v for v in range(n) if v not in tails]

    def is_linear(self) -> bool:
        heads = [b for _, b in self.arcs]
        return len(heads) == len(set(heads))

    def relabel(self, mapping) -> Branching:
        return Branching((mapping[u], mapping[v]) for u, v in self.arcs)

    def to_json(self, digraph: ContainmentDigraph) -> dict:
        return {
            "vertices": [
                {
                    "id": v,
                    "rows": [digraph.row_labels[i] for i in rows_of(digraph.supports[v])],
                    "multiplicity": digraph.multiplicity[v],
                }
                for v in range(len(digraph))
            ],
            "arcs": [[u, v] for u, v in self.arcs],
        }


@dataclass(frozen=True)
class UncoveredReport:
    pairs: frozenset[tuple[int, int]]
    per_vertex: tuple[int, ...]
    total: int


def uncovered_pairs(digraph: ContainmentDigraph, branching: Branching | Iterable[tuple[int, int]]) -> UncoveredReport:
    """U(B): rows of each vertex missing from the union of its B-in-neighbours."""
    arcs = branching.arcs if isinstance(branching, Branching) else tuple(branching)
    for u, v in arcs:
        if not (0 <= u < len(digraph) and 0 <= v < len(digraph)) or not digraph.is_arc(u, v):
            raise BranchingError(f"arc ({u}, {v}) not in containment digraph")
    covered = [0] * len(digraph)
    for u, v in arcs:
        covered[v] |= digraph.supports[u]
    pairs = set()
    per_vertex = []
    for v, bits in enumerate(digraph.supports):
        free = bits & ~covered[v]
        per_vertex.append(free.bit_count())
        pairs.update((r, v) for r in rows_of(free))
    return UncoveredReport(frozenset(pairs), tuple(per_vertex), sum(per_vertex))


def chain_branching(chains: Iterable[list[int]]) -> Branching:
    """Linear branching linking consecutive members of each chain."""
    return Branching((c[i], c[i + 1]) for c in chains for i in range(len(c) - 1))


def chain_top_weight(digraph: ContainmentDigraph, branching: Branching) -> int:
    """Weight of the maximal elements of a branching."""
    return sum(digraph.weight(v) for v in branching.maximal_elements(len(digraph)))


def verify_branching(digraph: ContainmentDigraph, arcs: Iterable[tuple[int, int]], maximal: bool = False) -> list[str]:
    """Diagnostics for an arbitrary arc list; empty when it is a valid branching."""
    problems = []
    seen_tail: dict[int, int] = {}
    seen = set()
    n = len(digraph)
    for u, v in arcs:
        if (u, v) in seen:
            problems.append(f"duplicate arc ({u}, {v})")
            continue
        seen.add((u, v))
        if not (0 <= u < n and 0 <= v < n):
            problems.append(f"arc ({u}, {v}) references an unknown vertex")
            continue
        if not digraph.is_arc(u, v):
            problems.append(
                f"arc not in containment digraph: {digraph.label(u)} -> {digraph.label(v)}"
            )
        if u in seen_tail:
            problems.append(f"out-degree violation at {digraph.label(u)}")
        seen_tail.setdefault(u, v)
    if maximal:
        for v in range(n):
            if digraph.succ[v] and v not in seen_tail:
                problems.append(f"not maximal: {digraph.label(v)} has no outgoing arc")
    return problems
