"""Exhaustive ground truth used by the tests and by ``mub solve --oracle``.

Nothing here shares code with the solver: uncovered pairs are counted row by
row straight from their definition, and every search is plain enumeration.
Each routine has a hard size guard and raises :class:`OracleGuardError`
instead of approximating.
"""

from __future__ import annotations

import math
from itertools import combinations, product
from typing import NamedTuple, Sequence

BETA_GUARD = 10**7
ANTICHAIN_GUARD = 20
CHROMATIC_GUARD = 12
LINEAR_GUARD = 8


class OracleGuardError(RuntimeError):
    pass


def count_uncovered(dag, arcs) -> int:
    """|U(B)| by checking every (row, vertex) pair."""
    into: dict[int, list[int]] = {}
    for u, v in arcs:
        into.setdefault(v, []).append(u)
    total = 0
    for v, bits in enumerate(dag.supports):
        for r in range(dag.m):
            if bits >> r & 1 and not any(dag.supports[u] >> r & 1 for u in into.get(v, ())):
                total += 1
    return total


def _out_choices(dag, with_none: bool):
    choices = []
    for v in range(len(dag)):
        outs = [(v, u) for u in dag.succ[v]]
        if with_none or not outs:
            outs = [None] + outs
        choices.append(outs)
    return choices


def _enumerate(dag, with_none: bool, guard: int):
    choices = _out_choices(dag, with_none)
    size = math.prod(len(c) for c in choices)
    if size > guard:
        raise OracleGuardError(f"{size} branchings to enumerate exceeds the guard {guard}")
    for pick in product(*choices):
        yield tuple(a for a in pick if a is not None)


def brute_beta(dag) -> tuple[int, list[tuple[tuple[int, int], ...]]]:
    """Minimum |U(B)| over all maximal branchings, with every minimiser.

    Every non-sink picks one out-neighbour independently; adding an arc never
    uncovers a row, so maximal branchings suffice.
    """
    best = None
    winners: list[tuple[tuple[int, int], ...]] = []
    for arcs in _enumerate(dag, with_none=False, guard=BETA_GUARD):
        cost = count_uncovered(dag, arcs)
        if best is None or cost < best:
            best, winners = cost, [arcs]
        elif cost == best:
            winners.append(arcs)
    return best, winners


def brute_beta_all(dag) -> int:
    """Minimum |U(B)| over every branching, maximal or not."""
    return min(count_uncovered(dag, arcs) for arcs in _enumerate(dag, with_none=True, guard=BETA_GUARD))


def maximal_branchings(dag):
    yield from _enumerate(dag, with_none=False, guard=BETA_GUARD)


class AntichainOptima(NamedTuple):
    max_weight: int
    max_size: int
    heaviest_maximum: tuple[int, ...]
    heaviest_maximum_weight: int


def all_antichains(dag):
    n = len(dag)
    if n > ANTICHAIN_GUARD:
        raise OracleGuardError(f"{n} vertices exceeds the antichain guard {ANTICHAIN_GUARD}")
    comparable = [[False] * n for _ in range(n)]
    for u in range(n):
        for v in dag.succ[u]:
            comparable[u][v] = comparable[v][u] = True
    for size in range(n + 1):
        for subset in combinations(range(n), size):
            if all(not comparable[a][b] for a, b in combinations(subset, 2)):
                yield subset


def brute_antichains(dag, weights: Sequence[int]) -> AntichainOptima:
    max_weight = 0
    max_size = 0
    heaviest: tuple[int, ...] = ()
    heaviest_w = 0
    for subset in all_antichains(dag):
        w = sum(weights[v] for v in subset)
        max_weight = max(max_weight, w)
        if len(subset) > max_size or (len(subset) == max_size and w > heaviest_w):
            max_size, heaviest, heaviest_w = len(subset), subset, w
    return AntichainOptima(max_weight, max_size, heaviest, heaviest_w)


def brute_chromatic(n: int, edges: Sequence[tuple[int, int]]) -> int:
    """Chromatic number by trying k = 1, 2, ... with backtracking."""
    if n > CHROMATIC_GUARD:
        raise OracleGuardError(f"{n} vertices exceeds the colouring guard {CHROMATIC_GUARD}")
    if n == 0:
        return 0
    nbrs = [set() for _ in range(n)]
    for a, b in edges:
        nbrs[a].add(b)
        nbrs[b].add(a)

    def colourable(k: int) -> bool:
        colour = [-1] * n

        def place(v: int) -> bool:
            if v == n:
                return True
            used = {colour[u] for u in nbrs[v]}
            # symmetry: never open more than one new colour at a time
            limit = min(k, max(colour[:v], default=-1) + 2)
            for c in range(limit):
                if c not in used:
                    colour[v] = c
                    if place(v + 1):
                        return True
            colour[v] = -1
            return False

        return place(0)

    k = 1
    while not colourable(k):
        k += 1
    return k


def linear_branchings(dag):
    """Every arc set with in- and out-degree at most one."""
    n = len(dag)
    if n > LINEAR_GUARD:
        raise OracleGuardError(f"{n} vertices exceeds the linear-branching guard {LINEAR_GUARD}")
    taken = [False] * n
    chosen: list[tuple[int, int]] = []

    def rec(v: int):
        if v == n:
            yield tuple(chosen)
            return
        yield from rec(v + 1)
        for u in dag.succ[v]:
            if not taken[u]:
                taken[u] = True
                chosen.append((v, u))
                yield from rec(v + 1)
                chosen.pop()
                taken[u] = False

    yield from rec(0)


def brute_beta_linear(dag) -> int:
    return min(count_uncovered(dag, arcs) for arcs in linear_branchings(dag))
