import pytest

from torus_ec.coloring import PartialEdgeColoring, is_proper_dict
from torus_ec.errors import (ConstructionNotFound, HypothesisNotMet, NeighborhoodDisturbed,
                             NotDistance4Matching, OddCycleLength)
from torus_ec.matching import (base_coloring, base_coloring_dict, build_distance2_counterexample,
                               extend_distance4_matching, extend_matching_dict, fix_edge,
                               neighbourhood, swap_certificate)
from torus_ec.oracle import is_distance_matching_int, sample_matchings, solve_dict
from torus_ec.torus import build_torus, edge_distance_int, squares_int


@pytest.mark.parametrize("r,d", [(4, 2), (6, 2), (4, 3)])
def test_base_coloring_bicolors_every_square(r, d):
    G = build_torus(r, d)
    col = base_coloring_dict(G)
    assert is_proper_dict(G, col) and set(col.values()) == set(range(1, 2 * d + 1))
    for e in range(G.n_edges):
        for q in squares_int(G, e):
            assert col[q[0]] == col[q[2]] and col[q[1]] == col[q[3]]


def test_base_coloring_layout():
    G = build_torus(6, 1)
    assert [base_coloring(G)[e] for e in range(6)] == [1, 2, 1, 2, 1, 2]
    G = build_torus(6, 3)
    col = base_coloring_dict(G)
    assert {col[e] for e in range(G.n_edges) if G.dim_of(e) == 3} == {5, 6}


def test_neighbourhood_matches_distance():
    G = build_torus(6, 2)
    for e in (0, 17, 50):
        assert neighbourhood(G, e) == {f for f in range(G.n_edges) if edge_distance_int(G, e, f) <= 1}


def test_fix_cases():
    G = build_torus(6, 2)
    base = base_coloring_dict(G)
    e = G.edge(((0, 0), 1))
    assert base[e] == 1
    col, swaps, case = fix_edge(G, base, e, 1)
    assert case == "i" and swaps == [] and col == base
    col, swaps, case = fix_edge(G, base, e, 3)
    assert case == "ii" and len(swaps) == 1 and col[e] == 3 and is_proper_dict(G, col)
    col, swaps, case = fix_edge(G, base, e, 2)
    assert case == "iii" and len(swaps) == 3 and col[e] == 2 and is_proper_dict(G, col)
    changed = {f for f in base if base[f] != col[f]}
    assert changed <= neighbourhood(G, e)


def test_fix_on_partial_coloring_object():
    G = build_torus(4, 2)
    f = base_coloring(G)
    out, swaps, case = fix_edge(G, f, ((1, 0), 1), 1)
    assert isinstance(out, PartialEdgeColoring) and out[G.edge(((1, 0), 1))] == 1
    # on C_4 the dimension-1 layer is itself a bicolored 4-cycle
    assert case == "ii" and G.edge(((1, 0), 1)) in swaps[0]


def test_neighbourhood_disturbed():
    G = build_torus(6, 2)
    base = base_coloring_dict(G)
    e = G.edge(((0, 0), 1))
    touched = {G.edge(((1, 0), 1))}
    with pytest.raises(NeighborhoodDisturbed):
        fix_edge(G, base, e, 2, touched)
    col = dict(base)
    col[G.edge(((5, 0), 1))] = 4    # break the pattern around e
    with pytest.raises(NeighborhoodDisturbed):
        fix_edge(G, col, e, 2)


def test_rejects_close_edges_and_odd_r():
    G = build_torus(8, 2)
    with pytest.raises(NotDistance4Matching):
        extend_distance4_matching(G, {((0, 0), 1): 2, ((3, 0), 1): 2})
    with pytest.raises(OddCycleLength):
        extend_distance4_matching(build_torus(5, 2), {})


def test_output_is_base_outside_touched_edges():
    G = build_torus(8, 2)
    base = base_coloring_dict(G)
    for M in sample_matchings(G, 4, [2, 3], 50, seed=3):
        pre = {e: 1 + (e % 4) for e in M}
        col, steps = extend_matching_dict(G, pre)
        assert is_proper_dict(G, col) and all(col[e] == c for e, c in pre.items())
        touched = {x for s in steps for q in s.swaps for x in q}
        assert all(col[f] == base[f] for f in base if f not in touched)
        for s in steps:
            assert {x for q in s.swaps for x in q} <= neighbourhood(G, s.edge)


def test_result_object_and_trace():
    G = build_torus(8, 2)
    res = extend_distance4_matching(G, {((0, 0), 1): 2, ((4, 5), 2): 1})
    assert res.method == "constructive" and res.coloring.is_complete()
    js = res.trace_json()
    assert [s["case"] for s in js] == ["iii", "ii"]
    assert js[0]["edge"] == {"base": [0, 0], "dim": 1}


def test_single_cycle_counterexample():
    # on C_10 two edges at distance 4 with colors of opposite phase do not extend
    G = build_torus(10, 1)
    pre = {0: 1, 5: 1}
    assert is_distance_matching_int(G, list(pre), 4)
    with pytest.raises(HypothesisNotMet):
        extend_distance4_matching(G, pre)
    assert solve_dict(G, pre, (1, 2))[0] is None


def test_swap_certificate():
    G = build_torus(6, 2)
    pre = {G.edge(((0, 0), 1)): 2, G.edge(((3, 0), 1)): 1}
    col = swap_certificate(G, pre)
    assert col is not None and is_proper_dict(G, col) and all(col[e] == c for e, c in pre.items())
    assert swap_certificate(build_torus(10, 1), {0: 1, 5: 1}) is None


def test_distance2_configuration():
    G = build_torus(6, 2)
    ce = build_distance2_counterexample(G)
    assert len(ce.matching) == 4
    assert is_distance_matching_int(G, ce.matching, 2)
    assert not is_distance_matching_int(G, ce.matching, 3)
    assert all(ce.vertex not in G.ends[e] for e in ce.matching)
    assert not ce.extendable
    assert ce.precoloring() == {e: 1 for e in ce.matching}
    with pytest.raises(ConstructionNotFound):
        build_distance2_counterexample(build_torus(4, 2))
