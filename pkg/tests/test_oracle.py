import itertools

import pytest

from torus_ec.coloring import PartialEdgeColoring, is_proper_dict
from torus_ec.errors import BudgetExceeded, ImproperPrecoloring
from torus_ec.matching import build_distance2_counterexample
from torus_ec.oracle import (count_estimate, enumerate_matchings, enumerate_precolorings,
                             is_distance_matching, iter_matchings, iter_precolorings,
                             sample_precolorings, solve, solve_dict)
from torus_ec.torus import EdgeId, build_torus


def naive_precolorings(G, t, k):
    out = set()
    for size in range(k + 1):
        for S in itertools.combinations(range(G.n_edges), size):
            for cs in itertools.product(range(1, t + 1), repeat=size):
                col = dict(zip(S, cs))
                if is_proper_dict(G, col):
                    out.add(tuple(sorted(col.items())))
    return out


def test_solve_examples():
    G = build_torus(4, 2)
    v = solve(G, PartialEdgeColoring(G, 4), 4)
    assert v.extendable and is_proper_dict(G, v.witness.colors) and v.witness.is_complete()
    C6 = build_torus(6, 1)
    with pytest.raises(ImproperPrecoloring):
        solve(C6, {0: 1, 1: 1}, 2)
    cx = build_distance2_counterexample(build_torus(6, 2))
    assert not solve(build_torus(6, 2), cx.precoloring(), 4).extendable


def test_node_limit():
    G = build_torus(6, 2)
    cx = build_distance2_counterexample(G)
    pre = cx.precoloring()
    with pytest.raises(BudgetExceeded):
        solve_dict(G, pre, range(1, 5), node_limit=0)


def test_enumeration_counts():
    assert sum(1 for _ in iter_precolorings(build_torus(4, 1), 2, 1)) == 9
    assert sum(1 for _ in iter_precolorings(build_torus(4, 2), 4, 1)) == 129


@pytest.mark.parametrize("r,d,t,k", [(4, 2, 4, 2), (5, 1, 3, 3), (4, 1, 2, 4)])
def test_enumeration_matches_naive(r, d, t, k):
    G = build_torus(r, d)
    got = [tuple(sorted(c.items())) for c in iter_precolorings(G, t, k)]
    assert len(got) == len(set(got))
    assert set(got) == naive_precolorings(G, t, k)


def test_enumeration_c4_2_three_edges_count():
    # independent count: choose 3 edges, multiply by the proper color choices
    G = build_torus(4, 2)
    total = 0
    for size in range(4):
        for S in itertools.combinations(range(G.n_edges), size):
            adj = [[S[i] in G.neighbours(S[j]) for j in range(size)] for i in range(size)]
            for cs in itertools.product(range(4), repeat=size):
                total += all(not adj[i][j] or cs[i] != cs[j]
                             for i in range(size) for j in range(i + 1, size))
    assert sum(1 for _ in iter_precolorings(G, 4, 3)) == total


def test_budget_and_sampling():
    G = build_torus(6, 2)
    with pytest.raises(BudgetExceeded):
        next(iter_precolorings(G, 4, 3, cap=10))
    assert count_estimate(G, 4, 1) == 1 + 72 * 4
    a = list(sample_precolorings(G, 4, 3, 50, seed=7))
    b = list(sample_precolorings(G, 4, 3, 50, seed=7))
    assert a == b and all(is_proper_dict(G, x) for x in a)
    assert all(len(p) == 3 for p in enumerate_precolorings(G, 4, 3, "sample", seed=1, n=20, exact=True))


def test_matching_enumeration():
    C8 = build_torus(8, 1)
    assert list(iter_matchings(C8, 4, [2])) == []
    G = build_torus(8, 2)
    pairs = list(iter_matchings(G, 4, [2]))
    brute = [p for p in itertools.combinations(range(G.n_edges), 2)
             if is_distance_matching(G, [G.edge_id(x) for x in p], 4)]
    assert pairs == brute and pairs
    G4 = build_torus(4, 2)
    singles = list(enumerate_matchings(G4, 0, [1]))
    assert len(singles) == G4.n_edges


def test_is_distance_matching():
    G = build_torus(4, 2)
    a, b = EdgeId((0, 0), 1), EdgeId((0, 0), 2)
    assert not is_distance_matching(G, [a, b], 1)
    assert is_distance_matching(G, [a], 7)
    assert not is_distance_matching(G, [a, EdgeId((0, 1), 1)], 2)


def _all_proper_colorings(G, t):
    for cs in itertools.product(range(1, t + 1), repeat=G.n_edges):
        col = dict(enumerate(cs))
        if is_proper_dict(G, col):
            yield col


@pytest.mark.parametrize("r", [4, 5, 6])
@pytest.mark.parametrize("t", [2, 3])
def test_oracle_agrees_with_enumeration_on_cycles(r, t):
    G = build_torus(r, 1)
    full = list(_all_proper_colorings(G, t))
    for pre in iter_precolorings(G, t, r):
        want = any(all(c[e] == x for e, x in pre.items()) for c in full)
        col, _ = solve_dict(G, pre, range(1, t + 1))
        assert (col is not None) == want
