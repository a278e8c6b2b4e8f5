import collections

import pytest

from torus_ec.coloring import PartialEdgeColoring, is_proper_dict
from torus_ec.errors import (HypothesisNotMet, ImproperPrecoloring, InvalidParameters,
                             PreconditionViolated)
from torus_ec.extend_common import EvenCase, verify
from torus_ec.extend_even import (dispatch_case, extend_even, extend_even_dict,
                                  lemma_empty_dimension, lemma_no_free_dimension,
                                  lemma_two_free_colors)
from torus_ec.oracle import sample_precolorings, solve_dict
from torus_ec.torus import Dimension, EdgeId, build_torus


def phi_of(G, pairs):
    return PartialEdgeColoring(G, 2 * G.d, {G.edge(e): c for e, c in pairs})


def check(G, res, phi):
    col = res.coloring.colors
    verify(G, col, phi.colors, range(1, 2 * G.d + 1))
    assert res.method == "constructive"


def test_cycle_base_case():
    G = build_torus(6, 1)
    phi = phi_of(G, [(((2,), 1), 2)])
    res = extend_even(G, phi)
    check(G, res, phi)
    assert [res.coloring[e] for e in range(6)] == [2, 1, 2, 1, 2, 1]


def test_empty_precoloring():
    G = build_torus(4, 2)
    res = extend_even(G, PartialEdgeColoring(G, 4))
    assert res.coloring.is_complete() and is_proper_dict(G, res.coloring.colors)


def test_input_errors():
    G = build_torus(6, 2)
    with pytest.raises(ImproperPrecoloring):
        extend_even(G, phi_of(G, [(((0, 0), 1), 1), (((1, 0), 1), 1)]))
    with pytest.raises(PreconditionViolated):
        extend_even(G, phi_of(G, [(((0, 0), 1), 1), (((2, 0), 1), 2), (((4, 0), 1), 3),
                                  (((0, 3), 1), 4)]))
    with pytest.raises(InvalidParameters):
        extend_even(build_torus(5, 2), {})


def test_dispatch_examples():
    G = build_torus(6, 3)
    phi = phi_of(G, [(((0, 0, 0), 2), 1), (((3, 3, 3), 2), 2)])
    D, tag = dispatch_case(G, phi)
    assert D in (Dimension(1), Dimension(3)) and tag.kind == EvenCase.EmptyDimension
    phi = phi_of(G, [(((0, 0, 0), 1), 1), (((3, 3, 3), 2), 2), (((1, 4, 2), 3), 3)])
    _, tag = dispatch_case(G, phi)
    assert tag.kind == EvenCase.TwoFreeColors


def test_one_plane_two_planes_many_planes():
    G = build_torus(6, 2)
    one = phi_of(G, [(((0, 0), 2), 1), (((0, 2), 2), 2), (((0, 4), 2), 3)])
    res = extend_even(G, one)
    check(G, res, one)
    assert str(res.tag) == "EmptyDimension/one-plane"
    two = phi_of(G, [(((0, 0), 2), 1), (((2, 3), 2), 2)])
    res = extend_even(G, two)
    check(G, res, two)
    assert str(res.tag) == "EmptyDimension/two-planes"
    G8 = build_torus(8, 2)
    many = phi_of(G8, [(((0, 0), 2), 1), (((2, 3), 2), 2), (((4, 5), 2), 3)])
    res = extend_even(G8, many)
    check(G8, res, many)
    assert str(res.tag) == "EmptyDimension/many-planes"


def test_lemma_entry_points():
    G = build_torus(6, 2)
    phi = phi_of(G, [(((0, 0), 2), 1), (((0, 2), 2), 2)])
    check(G, lemma_empty_dimension(G, phi, Dimension(1)), phi)
    with pytest.raises(HypothesisNotMet):
        lemma_empty_dimension(G, phi, Dimension(2))
    with pytest.raises(HypothesisNotMet):
        lemma_two_free_colors(G, phi, Dimension(1))
    with pytest.raises(HypothesisNotMet):
        lemma_no_free_dimension(G, phi, 2)
    phi = phi_of(G, [(((0, 0), 1), 1), (((3, 3), 2), 1)])
    check(G, lemma_no_free_dimension(G, phi, 1), phi)
    phi = phi_of(G, [(((0, 0), 1), 1), (((3, 3), 2), 2)])
    check(G, lemma_two_free_colors(G, phi, 1), phi)


def _tag_runs(r, d, n, seed):
    G = build_torus(r, d)
    t = 2 * d
    out = collections.defaultdict(list)
    for pre in sample_precolorings(G, t, 2 * d - 1, n, seed):
        col, trace, fell = extend_even_dict(G, pre)
        verify(G, col, pre, range(1, t + 1))
        assert not fell
        top = [s for s in trace if s.depth == 0]
        assert len(top) == 1
        out[str(top[0].tag)].append(top[0])
    return out


def test_branches_on_c6_2():
    tags = _tag_runs(6, 2, 3000, 2)
    want = {"EmptyDimension/one-plane", "EmptyDimension/two-planes", "EmptyDimension/many-planes",
            "TwoFreeColors/two-colorable", "TwoFreeColors/single-edge-one-plane",
            "TwoFreeColors/path-even", "TwoFreeColors/path-odd",
            "NoFreeDimension/1/no-conflict", "NoFreeDimension/1/incident", "NoFreeDimension/1/swap",
            "NoFreeDimension/2/apart", "NoFreeDimension/2/one-end", "NoFreeDimension/2/between"}
    assert want <= set(tags)
    assert all(s.swaps == 1 for s in tags["NoFreeDimension/1/swap"])


def test_case_three_on_c4_3():
    tags = _tag_runs(4, 3, 800, 2)
    steps = tags["NoFreeDimension/3/plant"]
    assert steps and all(s.swaps >= 1 for s in steps)


def test_sampled_c6_2_oracle_cross_check():
    G = build_torus(6, 2)
    for pre in sample_precolorings(G, 4, 3, 300, seed=5, exact=True):
        res = extend_even(G, pre)
        check(G, res, PartialEdgeColoring(G, 4, pre))
        col, _ = solve_dict(G, pre, range(1, 5))
        assert col is not None


def test_allowed_palette():
    G = build_torus(4, 2)
    phi = PartialEdgeColoring(G, 9, {0: 7})
    res = extend_even(G, phi, allowed=[2, 3, 7, 9])
    assert set(res.coloring.colors.values()) <= {2, 3, 7, 9} and res.coloring[0] == 7
