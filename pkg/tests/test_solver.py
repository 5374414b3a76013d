import random

import pytest

from helpers import E1, E3, ID2, random_instances, random_poset
from mub.bounds import full_bounds_report
from mub.branching import Branching, BranchingError, chain_top_weight, uncovered_pairs, verify_branching
from mub.matrix import ContainmentDigraph, build_containment_digraph, parse_matrix
from mub.oracle import brute_beta, maximal_branchings
from mub.poset import width
from mub.solver import (
    FAST_PATH_MANY_MAXIMAL,
    InStar,
    InStarSet,
    WidthGuardError,
    balance_holds,
    enumerate_instar_sets,
    instar_set_of,
    linear_completion,
    solve,
    solve_many_maximal,
    solve_top,
    top_reduction,
)


def identity(n):
    return parse_matrix("\n".join("".join("1" if i == j else "0" for j in range(n)) for i in range(n)))


# two minimal pairs, each under its own centre, both centres under one sink
FIG_B = ContainmentDigraph.from_supports([0b0001, 0b0010, 0b0011, 0b0100, 0b1000, 0b1100, 0b1111])


def test_uncovered_pairs_examples():
    e1 = build_containment_digraph(E1)
    report = uncovered_pairs(e1, Branching([(0, 2), (1, 2)]))
    assert report.pairs == {(0, 0), (1, 1), (2, 2)}
    assert report.total == 3 and report.per_vertex == (1, 1, 1)
    for matrix in (E1, E3, ID2):
        d = build_containment_digraph(matrix)
        assert uncovered_pairs(d, Branching()).total == sum(d.weights())
    e3 = build_containment_digraph(E3)
    assert uncovered_pairs(e3, Branching([(0, 1), (1, 2)])).per_vertex == (1, 1, 1)


def test_uncovered_rejects_foreign_arcs():
    e1 = build_containment_digraph(E1)
    with pytest.raises(BranchingError):
        uncovered_pairs(e1, [(0, 1)])


def test_many_maximal_examples():
    assert solve_many_maximal(ID2) == (2, Branching())
    beta, branching = solve_many_maximal(E3)
    assert beta == 3 and branching == Branching([(0, 1), (1, 2)])
    assert solve_many_maximal(E1) is None


def test_top_reduction_examples():
    e1 = build_containment_digraph(E1)
    red = top_reduction(e1)
    assert (red.antichain, red.v_minus, red.v_plus) == ((0, 1), (), (2,))
    assert red.top.supports == e1.supports
    e3 = build_containment_digraph(E3)
    red = top_reduction(e3)
    assert (red.antichain, red.v_minus, red.v_plus) == ((2,), (0, 1), ())
    assert len(red.top) == 1
    flat = build_containment_digraph(identity(3))
    red = top_reduction(flat)
    assert (red.antichain, red.v_minus, red.v_plus) == ((0, 1, 2), (), ())


def test_enumeration_examples():
    e1 = build_containment_digraph(E1)
    assert list(enumerate_instar_sets(e1)) == [InStarSet((InStar(2, (0, 1)),))]
    single = ContainmentDigraph.from_supports([0b1])
    assert list(enumerate_instar_sets(single)) == [InStarSet()]
    flat = build_containment_digraph(identity(3))
    assert list(enumerate_instar_sets(flat)) == [InStarSet()]


def test_enumeration_respects_limits():
    rng = random.Random(3)
    for _ in range(30):
        dag = random_poset(rng, rng.randint(2, 8), 0.4)
        red = top_reduction(dag)
        k = width(red.top)
        for stars in enumerate_instar_sets(red.top, prune=False):
            stars.check(red.top)
            assert len(stars.stars) <= k
            assert all(2 <= p <= k for p in stars.sizes())


def test_completion_examples():
    e1 = build_containment_digraph(E1)
    assert linear_completion(e1, InStarSet((InStar(2, (0, 1)),))) == ()
    figure_b = InStarSet((InStar(4, (0, 1)), InStar(5, (2, 3))))
    figure_b.check(FIG_B)
    assert linear_completion(FIG_B, figure_b) is None
    e3 = build_containment_digraph(E3)
    assert linear_completion(e3, InStarSet()) == ((0, 1), (1, 2))


def test_completion_is_maximal_branching_with_star_centres_only():
    rng = random.Random(11)
    checked = 0
    for _ in range(40):
        top = top_reduction(random_poset(rng, rng.randint(3, 8), 0.35)).top
        for stars in enumerate_instar_sets(top):
            done = linear_completion(top, stars)
            if done is None:
                continue
            checked += 1
            branching = Branching(stars.arcs() + list(done))
            assert verify_branching(top, branching.arcs, maximal=True) == []
            heavy = {v for v in range(len(top)) if branching.in_degree(v) >= 2}
            assert heavy <= stars.centers
            assert set(branching.leaves(len(top))) == set(top.sources())
    assert checked > 20


def test_instar_validation():
    e1 = build_containment_digraph(E1)
    with pytest.raises(ValueError):
        InStar(2, (0,)).check(e1)
    with pytest.raises(ValueError):
        InStar(0, (1, 2)).check(e1)
    dup = InStarSet((InStar(2, (0, 1)), InStar(2, (0, 1))))
    with pytest.raises(ValueError, match="independent"):
        dup.check(e1)


@pytest.mark.parametrize("n", [1, 2, 4])
def test_solve_identity(n):
    result = solve(identity(n))
    assert result.beta == n and result.branching == Branching()
    assert result.fast_path == FAST_PATH_MANY_MAXIMAL


def test_solve_e1_and_e3():
    result = solve(E1)
    assert result.beta == 3 and result.branching == Branching([(0, 2), (1, 2)])
    assert result.fast_path is None
    assert solve(E3).beta == 3


def test_verify_branching_examples():
    e1 = build_containment_digraph(E1)
    assert verify_branching(e1, [(0, 2), (1, 2)]) == []
    chain = build_containment_digraph(parse_matrix("111\n011\n001\n"))
    assert verify_branching(chain, [(0, 1), (0, 2)]) == ["out-degree violation at {r1}"]
    assert verify_branching(e1, [(0, 1)]) == ["arc not in containment digraph: {r1} -> {r2}"]
    assert verify_branching(e1, [(0, 2)], maximal=True) == ["not maximal: {r2} has no outgoing arc"]


def test_width_guard(monkeypatch):
    wide = parse_matrix("\n".join("".join("1" if j in (i, 9) else "0" for j in range(10)) for i in range(9)))
    with pytest.raises(WidthGuardError) as info:
        solve(wide)
    assert info.value.width == 9
    monkeypatch.setenv("MUB_MAX_WIDTH", "9")
    assert solve(wide).beta == 9  # one in-star of all nine singletons covers the top


@pytest.mark.parametrize("seed", range(40))
def test_structure_of_returned_branching(seed):
    for _, dag in random_instances(4, seed=2000 + seed):
        result = solve(dag, max_width=7)
        assert result.beta == brute_beta(dag)[0]
        assert verify_branching(dag, result.branching.arcs) == []
        if result.reduction is None:
            assert result.beta == chain_top_weight(dag, result.branching) == full_bounds_report(dag).beta_linear
            continue
        red = result.reduction
        below, above = set(red.v_minus), set(red.v_plus)
        lower = below | set(red.antichain)
        # no crossing arcs, and the part at or below the antichain is linear
        assert not any(u in below and v in above for u, v in result.branching.arcs)
        lower_arcs = Branching(a for a in result.branching.arcs if a[0] in lower and a[1] in lower)
        assert lower_arcs.is_linear()
        # leaves of the top part are exactly the antichain
        leaves = result.top_branching.leaves(len(red.top))
        assert {red.top.origin[v] for v in leaves} == set(red.antichain)
        assert {red.top.origin[v] for v in red.top.sources()} == set(red.antichain)
        # accounting: top optimum plus nothing extra below
        top_total = uncovered_pairs(red.top, result.top_branching).total
        assert top_total == result.beta == result.uncovered.total
        lower_cost = sum(result.uncovered.per_vertex[v] for v in lower)
        assert lower_cost == sum(dag.weight(v) for v in red.antichain)


@pytest.mark.parametrize("seed", range(25))
def test_balance_identity_on_oracle_branchings(seed):
    rng = random.Random(seed)
    checked = 0
    while checked == 0:
        top = top_reduction(random_poset(rng, rng.randint(3, 7), 0.35)).top
        k = width(top)
        mins = set(top.sources())
        for arcs in maximal_branchings(top):
            b = Branching(arcs)
            if set(b.leaves(len(top))) != mins:
                continue
            assert balance_holds(top, instar_set_of(b), k)
            checked += 1


@pytest.mark.parametrize("seed", range(25))
def test_pruning_keeps_optimum(seed):
    rng = random.Random(300 + seed)
    top = top_reduction(random_poset(rng, rng.randint(2, 8), 0.35)).top
    pruned = solve_top(top, prune=True)
    full = solve_top(top, prune=False)
    assert pruned.opt == full.opt
    assert pruned.guesses <= full.guesses


def test_threads_give_identical_result():
    rng = random.Random(7)
    for _ in range(3):
        dag = random_poset(rng, 9, 0.3)
        assert solve(dag, max_width=9, threads=2) == solve(dag, max_width=9, threads=1)
