import random

from mub.matrix import BinaryMatrix, ContainmentDigraph, EmptyPosetError, build_containment_digraph, parse_matrix

E1 = parse_matrix("101\n011\n001\n")
E3 = parse_matrix("111\n011\n001\n")
ID2 = parse_matrix("10\n01\n")
CONFLICT = parse_matrix("1 1\n1 0\n0 1\n")


def random_matrix(rng: random.Random, m: int, n: int, density: float) -> BinaryMatrix:
    return BinaryMatrix(tuple(tuple(int(rng.random() < density) for _ in range(n)) for _ in range(m)))


def random_instances(count, seed=0, max_m=6, max_n=7, densities=(0.3, 0.5, 0.7), min_m=1, min_n=1):
    """Seeded (matrix, digraph) pairs; all-zero matrices are skipped."""
    rng = random.Random(seed)
    made = 0
    while made < count:
        m, n = rng.randint(min_m, max_m), rng.randint(min_n, max_n)
        matrix = random_matrix(rng, m, n, densities[made % len(densities)])
        try:
            dag = build_containment_digraph(matrix)
        except EmptyPosetError:
            continue
        made += 1
        yield matrix, dag


def random_poset(rng: random.Random, k: int, p: float) -> ContainmentDigraph:
    """Random strict poset on k elements, realised as containment of down-sets."""
    below = [1 << v for v in range(k)]
    for v in range(k):
        for u in range(v):
            if rng.random() < p:
                below[v] |= below[u]
    return ContainmentDigraph.from_supports(below, m=k)
