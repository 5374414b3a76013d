"""Exact uncovering number for containment digraphs of bounded width.

Outline of :func:`solve`:

1. If the number of sinks equals the width, any minimum chain partition
   gives an optimal (linear) branching whose cost is the total sink weight.
2. Otherwise pick a maximum antichain ``N`` of maximum total ``|v|`` weight
   and keep only ``N`` and the vertices above it (the *top* digraph); the
   part below ``N`` always costs exactly ``sum(|v| for v in N)``.
3. On the top digraph, guess the vertices of in-degree >= 2 together with
   their in-neighbours (sets of independent in-stars) and complete each
   guess with a perfect matching.  The cheapest completed branching is
   optimal.
4. Extend it below ``N`` with a chain partition whose tops are ``N``.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations, islice
from typing import Iterator

from .bounds import as_digraph
from .branching import Branching, UncoveredReport, chain_branching, uncovered_pairs
from .matrix import ContainmentDigraph
from .poset import BipartiteGraph, hopcroft_karp, max_weight_maximum_antichain, min_chain_partition, width

logger = logging.getLogger(__name__)

DEFAULT_MAX_WIDTH = 5
CHUNK = 256

FAST_PATH_MANY_MAXIMAL = "many-maximal"
FAST_PATH_FLAT_TOP = "antichain-top"


class WidthGuardError(RuntimeError):
    def __init__(self, width: int, limit: int):
        self.width = width
        self.limit = limit
        super().__init__(
            f"width {width} exceeds the limit {limit}; the exact search grows like "
            f"n^(k(k+1)), raise --max-width to run it anyway"
        )


@dataclass(frozen=True)
class InStar:
    center: int
    sources: tuple[int, ...]

    def check(self, dag: ContainmentDigraph) -> None:
        if len(self.sources) < 2:
            raise ValueError("an in-star needs at least two sources")
        if len(set(self.sources)) != len(self.sources) or self.center in self.sources:
            raise ValueError("in-star vertices must be pairwise distinct")
        for x in self.sources:
            if not dag.is_arc(x, self.center):
                raise ValueError(f"({x}, {self.center}) is not an arc")


@dataclass(frozen=True)
class InStarSet:
    stars: tuple[InStar, ...] = ()

    @property
    def centers(self) -> frozenset[int]:
        return frozenset(s.center for s in self.stars)

    @property
    def sources(self) -> frozenset[int]:
        return frozenset(x for s in self.stars for x in s.sources)

    def arcs(self) -> list[tuple[int, int]]:
        return [(x, s.center) for s in self.stars for x in s.sources]

    def sizes(self) -> list[int]:
        return [len(s.sources) for s in self.stars]

    def check(self, dag: ContainmentDigraph) -> None:
        for s in self.stars:
            s.check(dag)
        for a, b in combinations(self.stars, 2):
            if a.center == b.center or set(a.sources) & set(b.sources):
                raise ValueError(f"in-stars at {a.center} and {b.center} are not independent")


def instar_set_of(branching: Branching) -> InStarSet:
    """In-stars formed by the vertices of in-degree >= 2 of a branching."""
    into: dict[int, list[int]] = {}
    for u, v in branching.arcs:
        into.setdefault(v, []).append(u)
    return InStarSet(tuple(InStar(c, tuple(xs)) for c, xs in sorted(into.items()) if len(xs) >= 2))


def balance_holds(top: ContainmentDigraph, stars: InStarSet, top_width: int | None = None) -> bool:
    """width == #sinks - #stars + sum of star sizes."""
    k = width(top) if top_width is None else top_width
    return k == len(top.sinks()) - len(stars.stars) + sum(stars.sizes())


@dataclass(frozen=True)
class TopReduction:
    antichain: tuple[int, ...]
    v_minus: tuple[int, ...]
    v_plus: tuple[int, ...]
    top: ContainmentDigraph


def top_reduction(dag: ContainmentDigraph) -> TopReduction:
    chosen = max_weight_maximum_antichain(dag, dag.weights()).vertices
    members = set(chosen)
    below = tuple(v for v in range(len(dag)) if v not in members and members.intersection(dag.succ[v]))
    above = tuple(v for v in range(len(dag)) if v not in members and members.intersection(dag.pred[v]))
    assert len(chosen) + len(below) + len(above) == len(dag), "antichain is not maximal"
    top = dag.induced(chosen + above)
    return TopReduction(chosen, below, above, top)


def enumerate_instar_sets(top: ContainmentDigraph, prune: bool = True, top_width: int | None = None) -> Iterator[InStarSet]:
    """Stream sets of pairwise independent in-stars of ``top``.

    At most ``width`` stars, each with between 2 and ``width`` sources.
    With ``prune`` only sets satisfying ``sum(p_i - 1) == width - #sinks``
    are produced; a guess that violates it can have no linear completion.
    Order: centres ascending, then source sets by size and lexicographically.
    """
    k = width(top) if top_width is None else top_width
    centers = [c for c in range(len(top)) if len(top.pred[c]) >= 2]
    stars: list[InStar] = []
    used: set[int] = set()

    def rec(first: int, remaining: int | None) -> Iterator[InStarSet]:
        if remaining is None or remaining == 0:
            yield InStarSet(tuple(stars))
            if remaining == 0:
                return
        if len(stars) == k:
            return
        for idx in range(first, len(centers)):
            c = centers[idx]
            free = [x for x in top.pred[c] if x not in used]
            hi = min(k, len(free))
            if remaining is not None:
                hi = min(hi, remaining + 1)
            for p in range(2, hi + 1):
                for combo in combinations(free, p):
                    stars.append(InStar(c, combo))
                    used.update(combo)
                    yield from rec(idx + 1, None if remaining is None else remaining - (p - 1))
                    used.difference_update(combo)
                    stars.pop()

    yield from rec(0, k - len(top.sinks()) if prune else None)


def completion_graph(top: ContainmentDigraph, stars: InStarSet) -> BipartiteGraph:
    """Out-side: vertices that still need an out-arc; in-side: vertices that
    still need an in-arc; edges are the arcs between them."""
    xs, cs = stars.sources, stars.centers
    sinks, sources = set(top.sinks()), set(top.sources())
    out_side = tuple(v for v in range(len(top)) if v not in xs and v not in sinks)
    in_side = tuple(v for v in range(len(top)) if v not in cs and v not in sources)
    in_set = set(in_side)
    edges = tuple((u, v) for u in out_side for v in top.succ[u] if v in in_set)
    return BipartiteGraph(out_side, in_side, edges)


def linear_completion(top: ContainmentDigraph, stars: InStarSet) -> tuple[tuple[int, int], ...] | None:
    """Arcs completing ``stars`` to a maximal branching whose in-degree >= 2
    vertices are exactly the centres, or ``None`` if there are none."""
    graph = completion_graph(top, stars)
    if len(graph.left) != len(graph.right):
        return None
    match = hopcroft_karp(graph.adjacency())
    if len(match) != len(graph.left):
        return None
    return tuple(sorted(match.items()))


def _uncovered_total(top: ContainmentDigraph, arcs) -> int:
    covered = [0] * len(top)
    for u, v in arcs:
        covered[v] |= top.supports[u]
    return sum((bits & ~cov).bit_count() for bits, cov in zip(top.supports, covered))


def _evaluate_chunk(top: ContainmentDigraph, start: int, guesses: list[InStarSet]):
    best = None
    completable = 0
    for offset, stars in enumerate(guesses):
        completion = linear_completion(top, stars)
        if completion is None:
            continue
        completable += 1
        arcs = tuple(stars.arcs()) + completion
        cost = _uncovered_total(top, arcs)
        if best is None or cost < best[0]:
            best = (cost, start + offset, arcs)
    return best, completable, len(guesses)


def _chunks(stream: Iterator[InStarSet]):
    start = 0
    while True:
        chunk = list(islice(stream, CHUNK))
        if not chunk:
            return
        yield start, chunk
        start += len(chunk)


@dataclass(frozen=True)
class TopSolution:
    opt: int
    branching: Branching
    guesses: int
    completable: int


def solve_top(top: ContainmentDigraph, prune: bool = True, threads: int = 1) -> TopSolution:
    """Optimal branching of a top digraph whose sources form its unique
    maximum antichain.  The result has exactly those sources as leaves."""
    if top.num_arcs() == 0:
        return TopSolution(sum(top.weights()), Branching(), 0, 0)
    k = width(top)
    stream = enumerate_instar_sets(top, prune=prune, top_width=k)
    results = []
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_evaluate_chunk, top, s, c) for s, c in _chunks(stream)]
            results = [f.result() for f in futures]
    else:
        results = [_evaluate_chunk(top, s, c) for s, c in _chunks(stream)]
    best = None
    completable = guesses = 0
    for found, comp, count in results:
        completable += comp
        guesses += count
        if found is not None and (best is None or found[:2] < best[:2]):
            best = found
    if best is None:
        raise RuntimeError("no in-star guess admits a linear completion; top digraph precondition violated")
    return TopSolution(best[0], Branching(best[2]), guesses, completable)


def solve_many_maximal(obj) -> tuple[int, Branching] | None:
    """Closed form when the sinks form a maximum antichain, else ``None``."""
    dag = as_digraph(obj)
    chains = min_chain_partition(dag)
    sinks = dag.sinks()
    if len(sinks) != len(chains):
        return None
    return sum(dag.weight(v) for v in sinks), chain_branching(chains)


@dataclass(frozen=True)
class SolveResult:
    beta: int
    branching: Branching
    uncovered: UncoveredReport
    digraph: ContainmentDigraph
    width: int
    fast_path: str | None
    reduction: TopReduction | None = None
    top_branching: Branching | None = None
    guesses: int = 0
    completable: int = 0


def resolve_max_width(max_width: int | None) -> int:
    if max_width is not None:
        return max_width
    env = os.environ.get("MUB_MAX_WIDTH")
    return int(env) if env else DEFAULT_MAX_WIDTH


def solve(obj, max_width: int | None = None, threads: int = 1, prune: bool = True) -> SolveResult:
    """Exact uncovering number with an optimal branching of the whole digraph.

    Raises :class:`WidthGuardError` when the width exceeds ``max_width`` and
    the closed-form case does not apply.
    """
    dag = as_digraph(obj)
    k = width(dag)
    fast = solve_many_maximal(dag)
    if fast is not None:
        beta, branching = fast
        report = uncovered_pairs(dag, branching)
        assert report.total == beta
        return SolveResult(beta, branching, report, dag, k, FAST_PATH_MANY_MAXIMAL)

    limit = resolve_max_width(max_width)
    if k > limit:
        raise WidthGuardError(k, limit)

    red = top_reduction(dag)
    top_sol = solve_top(red.top, prune=prune, threads=threads)
    logger.debug("evaluated %d guesses, %d completable", top_sol.guesses, top_sol.completable)

    lower = dag.induced(red.v_minus + red.antichain)
    chains = min_chain_partition(lower)
    tops = {lower.origin[c[-1]] for c in chains}
    assert len(chains) == len(red.antichain) and tops == set(red.antichain), "chain tops must be the antichain"

    branching = Branching(
        top_sol.branching.relabel(red.top.origin).arcs + chain_branching(chains).relabel(lower.origin).arcs
    )
    report = uncovered_pairs(dag, branching)
    assert report.total == top_sol.opt, "extended branching changed the uncovered count"
    return SolveResult(
        beta=top_sol.opt,
        branching=branching,
        uncovered=report,
        digraph=dag,
        width=k,
        fast_path=FAST_PATH_FLAT_TOP if red.top.num_arcs() == 0 else None,
        reduction=red,
        top_branching=top_sol.branching,
        guesses=top_sol.guesses,
        completable=top_sol.completable,
    )
