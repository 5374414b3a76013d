"""Poset kernels over transitively closed DAGs.

The functions here only need ``len(D)``, ``D.succ`` and ``D.pred``, so they
work on any :class:`~mub.matrix.ContainmentDigraph` (including induced
sub-digraphs).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Mapping, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

INF = 1 << 62


@dataclass(frozen=True)
class BipartiteGraph:
    left: tuple[Hashable, ...]
    right: tuple[Hashable, ...]
    edges: tuple[tuple[Hashable, Hashable], ...]
    weights: tuple[int, ...] | None = None

    def __post_init__(self):
        lset, rset = set(self.left), set(self.right)
        if len(set(self.edges)) != len(self.edges):
            raise ValueError("parallel edges")
        for a, b in self.edges:
            if a not in lset or b not in rset:
                raise ValueError(f"edge {(a, b)} does not join left to right")
        if self.weights is not None:
            if len(self.weights) != len(self.edges):
                raise ValueError("one weight per edge required")
            if any(w < 0 for w in self.weights):
                raise ValueError("weights must be nonnegative")

    def adjacency(self) -> dict[Hashable, list[Hashable]]:
        adj: dict[Hashable, list[Hashable]] = {u: [] for u in self.left}
        for a, b in self.edges:
            adj[a].append(b)
        return adj


@dataclass(frozen=True)
class Antichain:
    vertices: tuple[int, ...]
    weight: int


def hopcroft_karp(adj: Mapping[Hashable, Sequence[Hashable]]) -> dict[Hashable, Hashable]:
    """Maximum-cardinality matching; ``adj`` maps each left vertex to its right
    neighbours.  Returns left -> right.  Deterministic given the iteration
    order of ``adj`` and of its lists."""
    match_l: dict[Hashable, Hashable] = {}
    match_r: dict[Hashable, Hashable] = {}
    left = list(adj)
    dist: dict[Hashable, int] = {}

    def bfs() -> bool:
        queue = deque()
        for u in left:
            if u in match_l:
                dist[u] = INF
            else:
                dist[u] = 0
                queue.append(u)
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_r.get(v)
                if w is None:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def dfs(root) -> bool:
        stack = [(root, iter(adj[root]))]
        via: list[Hashable] = []
        while stack:
            u, it = stack[-1]
            for v in it:
                w = match_r.get(v)
                if w is None:
                    via.append(v)
                    for (x, _), y in zip(stack, via):
                        match_l[x] = y
                        match_r[y] = x
                    return True
                if dist[w] == dist[u] + 1:
                    via.append(v)
                    stack.append((w, iter(adj[w])))
                    break
            else:
                dist[u] = INF
                stack.pop()
                if via:
                    via.pop()
        return False

    while bfs():
        for u in left:
            if u not in match_l:
                dfs(u)
    return match_l


def max_bipartite_matching(graph: BipartiteGraph) -> list[tuple[Hashable, Hashable]]:
    return list(hopcroft_karp(graph.adjacency()).items())


def max_weight_bipartite_matching(graph: BipartiteGraph) -> tuple[list[tuple[Hashable, Hashable]], int]:
    """Matching (not necessarily perfect) of maximum total weight."""
    if not graph.edges:
        return [], 0
    weights = graph.weights if graph.weights is not None else (1,) * len(graph.edges)
    li = {u: i for i, u in enumerate(graph.left)}
    ri = {v: j for j, v in enumerate(graph.right)}
    w = np.zeros((len(graph.left), len(graph.right)), dtype=np.int64)
    is_edge = np.zeros_like(w, dtype=bool)
    for (a, b), x in zip(graph.edges, weights):
        w[li[a], ri[b]] = x
        is_edge[li[a], ri[b]] = True
    rows, cols = linear_sum_assignment(w, maximize=True)
    matching = [
        (graph.left[i], graph.right[j])
        for i, j in zip(rows.tolist(), cols.tolist())
        if is_edge[i, j] and w[i, j] > 0
    ]
    return matching, int(sum(w[li[a], ri[b]] for a, b in matching))


def min_chain_partition(dag) -> list[list[int]]:
    """Minimum chain partition of a transitively closed DAG.

    Left and right copies of every vertex, an edge for every arc; matched
    pairs link consecutive chain members.  Chains are listed bottom-up and
    ordered by their first vertex.
    """
    n = len(dag)
    adj = {u: list(dag.succ[u]) for u in range(n)}
    nxt = hopcroft_karp(adj)
    has_pred = set(nxt.values())
    chains = []
    for start in range(n):
        if start in has_pred:
            continue
        chain = [start]
        while chain[-1] in nxt:
            chain.append(nxt[chain[-1]])
        chains.append(chain)
    return chains


def width(dag) -> int:
    return len(min_chain_partition(dag))


def is_antichain(dag, vertices) -> bool:
    vs = set(vertices)
    return not any(v in vs for u in vs for v in dag.succ[u])


@dataclass
class _FlowNet:
    n: int
    to: list[int] = field(default_factory=list)
    cap: list[int] = field(default_factory=list)
    adj: list[list[int]] = field(init=False)

    def __post_init__(self):
        self.adj = [[] for _ in range(self.n)]

    def add(self, a: int, b: int, cap_ab: int, cap_ba: int) -> None:
        self.adj[a].append(len(self.to))
        self.to.append(b)
        self.cap.append(cap_ab)
        self.adj[b].append(len(self.to))
        self.to.append(a)
        self.cap.append(cap_ba)

    def max_flow(self, s: int, t: int) -> int:
        total = 0
        while True:
            parent = [-1] * self.n
            parent[s] = -2
            queue = deque([s])
            while queue and parent[t] == -1:
                x = queue.popleft()
                for e in self.adj[x]:
                    y = self.to[e]
                    if self.cap[e] > 0 and parent[y] == -1:
                        parent[y] = e
                        queue.append(y)
            if parent[t] == -1:
                return total
            push = INF
            y = t
            while y != s:
                e = parent[y]
                push = min(push, self.cap[e])
                y = self.to[e ^ 1]
            y = t
            while y != s:
                e = parent[y]
                self.cap[e] -= push
                self.cap[e ^ 1] += push
                y = self.to[e ^ 1]
            total += push

    def reachable(self, s: int) -> set[int]:
        seen = {s}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for e in self.adj[x]:
                y = self.to[e]
                if self.cap[e] > 0 and y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen


def max_weight_antichain(dag, weights: Sequence[int]) -> Antichain:
    """Maximum-weight antichain via minimum flow with vertex demands.

    Each vertex ``v`` becomes an arc ``v_in -> v_out`` that must carry at
    least ``weights[v]``; the source feeds minimal vertices, maximal vertices
    drain to the sink and every DAG arc ``(v, u)`` becomes ``v_out -> u_in``.
    A feasible flow is built path by path, then reduced by a maximum flow
    pushed from sink back to source.  The antichain is the set of split arcs
    crossing the final cut, whose total demand equals the minimum flow.
    """
    n = len(dag)
    if len(weights) != n:
        raise ValueError("one weight per vertex required")
    if any(w < 0 for w in weights):
        raise ValueError("weights must be nonnegative")
    s, t = 2 * n, 2 * n + 1

    def vin(v):
        return 2 * v

    def vout(v):
        return 2 * v + 1

    # initial feasible flow: for each v route weights[v] via a minimal vertex
    # below it and a maximal vertex above it
    flow_split = [0] * n
    flow_arc: dict[tuple[int, int], int] = {}
    flow_src = [0] * n
    flow_snk = [0] * n
    for v in range(n):
        if not weights[v]:
            continue
        x = weights[v]
        lo = next((u for u in dag.pred[v] if not dag.pred[u]), v)
        hi = next((u for u in dag.succ[v] if not dag.succ[u]), v)
        flow_src[lo] += x
        flow_snk[hi] += x
        flow_split[v] += x
        if lo != v:
            flow_split[lo] += x
            flow_arc[lo, v] = flow_arc.get((lo, v), 0) + x
        if hi != v:
            flow_split[hi] += x
            flow_arc[v, hi] = flow_arc.get((v, hi), 0) + x
    initial = sum(flow_src)

    # residual network for decreasing the flow: forward arcs may grow without
    # bound, reverse arcs may shrink down to the lower bound
    net = _FlowNet(2 * n + 2)
    for v in range(n):
        net.add(vin(v), vout(v), INF, flow_split[v] - weights[v])
        if not dag.pred[v]:
            net.add(s, vin(v), INF, flow_src[v])
        if not dag.succ[v]:
            net.add(vout(v), t, INF, flow_snk[v])
        for u in dag.succ[v]:
            net.add(vout(v), vin(u), INF, flow_arc.get((v, u), 0))
    reduced = net.max_flow(t, s)
    minimum = initial - reduced

    near_sink = net.reachable(t)
    chosen = tuple(v for v in range(n) if vin(v) not in near_sink and vout(v) in near_sink)
    weight = sum(weights[v] for v in chosen)
    assert weight == minimum, "cut weight differs from minimum flow value"
    assert is_antichain(dag, chosen)
    return Antichain(chosen, weight)


def max_weight_maximum_antichain(dag, weights: Sequence[int]) -> Antichain:
    """Heaviest antichain among those of maximum cardinality.

    Every weight is shifted by ``Q = 1 + sum(weights)``, which makes any
    larger antichain outweigh any smaller one.
    """
    q = 1 + sum(weights)
    found = max_weight_antichain(dag, [q + w for w in weights])
    return Antichain(found.vertices, sum(weights[v] for v in found.vertices))
