import collections

import pytest

from torus_ec.coloring import PartialEdgeColoring, is_proper_dict
from torus_ec.errors import (ClaimViolated, HypothesisNotMet, ImproperPrecoloring,
                             InvalidParameters, PreconditionViolated, UnsupportedGirth)
from torus_ec.extend_common import OddCase, verify
from torus_ec.extend_odd import (dispatch_case_odd, extend_odd, extend_odd_dict,
                                 find_safe_adjacent_edge, lemma_odd_empty_dimension,
                                 lemma_odd_one_not_free, lemma_odd_two_free, lemma_odd_two_shared)
from torus_ec.oracle import iter_precolorings, sample_precolorings, solve_dict
from torus_ec.torus import Dimension, EdgeId, Plane, build_torus


def phi_of(G, pairs):
    return PartialEdgeColoring(G, 2 * G.d + 1, {G.edge(e): c for e, c in pairs})


def check(G, res, phi):
    verify(G, res.coloring.colors, phi.colors, range(1, 2 * G.d + 2))
    assert res.method == "constructive"


def test_odd_cycle_every_two_edge_precoloring_extends():
    G = build_torus(5, 1)
    for pre in iter_precolorings(G, 3, 2):
        res = extend_odd(G, dict(pre))
        verify(G, res.coloring.colors, pre, (1, 2, 3))


def test_empty_c5_2():
    G = build_torus(5, 2)
    res = extend_odd(G, {})
    assert res.coloring.is_complete() and is_proper_dict(G, res.coloring.colors)


def test_input_errors():
    with pytest.raises(UnsupportedGirth):
        extend_odd(build_torus(3, 2), {})
    with pytest.raises(InvalidParameters):
        extend_odd(build_torus(4, 2), {})
    G = build_torus(5, 2)
    with pytest.raises(ImproperPrecoloring):
        extend_odd(G, phi_of(G, [(((0, 0), 1), 1), (((1, 0), 1), 1)]))
    with pytest.raises(PreconditionViolated):
        extend_odd(G, phi_of(G, [(((a, 0), 2), a + 1) for a in range(5)]))


def test_dispatch_examples():
    G = build_torus(5, 2)
    phi = phi_of(G, [(((0, 0), 2), 1), (((1, 2), 2), 2), (((2, 0), 2), 3), (((3, 3), 2), 4)])
    D, tag = dispatch_case_odd(G, phi)
    assert D == Dimension(1) and tag.kind == OddCase.EmptyDimension
    phi = phi_of(G, [(((0, 0), 1), 1), (((2, 2), 1), 2), (((0, 3), 2), 1), (((3, 0), 2), 3)])
    _, tag = dispatch_case_odd(G, phi)
    assert tag.kind == OddCase.TwoEdgesShared


def test_lemma_entry_points():
    G = build_torus(5, 2)
    phi = phi_of(G, [(((0, 0), 2), 1), (((0, 2), 2), 2)])
    check(G, lemma_odd_empty_dimension(G, phi, Dimension(1)), phi)
    with pytest.raises(HypothesisNotMet):
        lemma_odd_empty_dimension(G, phi, 2)
    phi = phi_of(G, [(((0, 0), 1), 1), (((3, 3), 2), 2)])
    check(G, lemma_odd_two_free(G, phi, 1), phi)
    with pytest.raises(HypothesisNotMet):
        lemma_odd_one_not_free(G, phi, 1)
    phi = phi_of(G, [(((0, 0), 1), 1), (((3, 3), 2), 1)])
    check(G, lemma_odd_one_not_free(G, phi, 1), phi)
    phi = phi_of(G, [(((0, 0), 1), 1), (((2, 2), 1), 2), (((0, 3), 2), 1), (((3, 0), 2), 3)])
    check(G, lemma_odd_two_shared(G, phi, 1), phi)
    with pytest.raises(HypothesisNotMet):
        lemma_odd_two_shared(G, phi_of(G, []), 1)


def _tag_runs(r, d, n, seed, exact=False, k=None):
    G = build_torus(r, d)
    t = 2 * d + 1
    out = collections.defaultdict(list)
    for pre in sample_precolorings(G, t, 2 * d if k is None else k, n, seed, exact):
        col, trace, fell = extend_odd_dict(G, pre)
        verify(G, col, pre, range(1, t + 1))
        assert not fell
        top = [s for s in trace if s.depth == 0]
        if top:
            assert len(top) == 1
            out[str(top[0].tag)].append(top[0])
    return out


def test_branches_on_c5_2():
    tags = _tag_runs(5, 2, 3000, 2)
    want = {"EmptyDimension/2/(i)", "EmptyDimension/2/(ii)", "EmptyDimension/2/(iii)",
            "EmptyDimension/3", "TwoFree/1.1", "TwoFree/1.2", "TwoFree/1.3", "TwoFree/2",
            "OneEdgeNotFree/1/pin", "OneEdgeNotFree/1/swap", "OneEdgeNotFree/2/apart",
            "OneEdgeNotFree/2/one-end", "OneEdgeNotFree/2/between", "OneEdgeNotFree/3/plant",
            "OneEdgeNotFree/3/saturated", "TwoEdgesShared/1", "TwoEdgesShared/2.2.1",
            "TwoEdgesShared/2.2.3"}
    assert want <= set(tags)
    assert all(s.swaps >= 1 for s in tags["OneEdgeNotFree/1/swap"])
    assert any(s.route == "pre-paint" for s in tags["OneEdgeNotFree/3/saturated"])


def test_three_plane_subcases_on_c5_3():
    tags = _tag_runs(5, 3, 1500, 4, exact=True)
    assert any(t.startswith("TwoEdgesShared/3.") for t in tags)


def test_one_plane_empty_dimension_c5_2():
    G = build_torus(5, 2)
    phi = phi_of(G, [(((0, 0), 2), 1), (((0, 2), 2), 2), (((0, 3), 2), 3)])
    res = extend_odd(G, phi)
    check(G, res, phi)
    assert res.tag.kind == OddCase.EmptyDimension


def test_many_planes_c7_2():
    G = build_torus(7, 2)
    phi = phi_of(G, [(((0, 0), 2), 1), (((2, 3), 2), 2), (((4, 5), 2), 3), (((6, 1), 2), 4)])
    res = extend_odd(G, phi)
    check(G, res, phi)
    assert str(res.tag) == "EmptyDimension/3"


def test_sampled_c5_2_oracle_cross_check():
    G = build_torus(5, 2)
    for pre in sample_precolorings(G, 5, 4, 300, seed=9, exact=True):
        res = extend_odd(G, pre)
        check(G, res, PartialEdgeColoring(G, 5, pre))
        assert solve_dict(G, pre, range(1, 6))[0] is not None


def test_safe_adjacent_edge_clause_i():
    G = build_torus(5, 3)
    got = find_safe_adjacent_edge(G, PartialEdgeColoring(G, 7), (0, 0, 0), (0, 2, 0),
                                  Plane(1, 0), Plane(1, 1), 1, 2)
    assert got[0] == "i" and G.vertex((0, 0, 0)) in G.ends[G.edge(got[1])]


def test_safe_adjacent_edge_clause_ii_bypass_and_violation():
    G = build_torus(5, 2)
    Q1, Q2 = Plane(1, 0), Plane(1, 1)
    blocked = phi_of(G, [(((0, 0), 2), 3), (((0, 4), 2), 4)])
    got = find_safe_adjacent_edge(G, blocked, (0, 0), (0, 2), Q1, Q2, 1, 2)
    assert got[0] == "ii" and G.vertex((0, 2)) in G.ends[G.edge(got[1])]
    both = phi_of(G, [(((0, 4), 2), 3), (((0, 1), 2), 3)])
    assert find_safe_adjacent_edge(G, both, (0, 0), (0, 1), Q1, Q2, 1, 2) == ("bypass", None)
    linked = phi_of(G, [(((0, 4), 2), 3), (((0, 1), 2), 3), (((0, 0), 2), 4)])
    with pytest.raises(ClaimViolated):
        find_safe_adjacent_edge(G, linked, (0, 0), (0, 1), Q1, Q2, 1, 2)
