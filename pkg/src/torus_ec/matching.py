"""Extending a precolored distance-4 matching of C_{2k}^d, and the
distance-2 configuration showing that some separation is needed.

The construction starts from a fixed proper 2d-edge coloring in which
dimension j uses the colors 2j-1 and 2j and corresponding edges agree, so
every 4-cycle is bicolored.  Each precolored edge is then fixed by at most
three 4-cycle swaps, all of them inside the edges at distance <= 1 from it.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .coloring import PartialEdgeColoring, is_proper_dict, swap_square
from .errors import (ColorOutOfRange, ConstructionNotFound, HypothesisNotMet,
                     NeighborhoodDisturbed, NotDistance4Matching, OddCycleLength)
from .extend_common import ExtensionResult
from .oracle import is_distance_matching_int, solve_dict
from .torus import TorusInstance, edge_distance_int, squares_int


def _need_even(G: TorusInstance):
    if G.r % 2:
        raise OddCycleLength(f"C_{G.r}^{G.d} has odd cycle length")


def base_color(G: TorusInstance, e: int, offsets=None) -> int:
    j = G.dim_of(e)
    x = G.coord(G.base_of(e), j) + (offsets[j - 1] if offsets else 0)
    return 2 * j - 1 if x % 2 == 0 else 2 * j


@lru_cache(maxsize=64)
def _base(G: TorusInstance, offsets) -> tuple:
    return tuple(base_color(G, e, offsets) for e in range(G.n_edges))


def base_coloring_dict(G: TorusInstance, offsets: tuple | None = None) -> dict:
    """offsets[j-1] = 1 flips the two colors of dimension j."""
    _need_even(G)
    return dict(enumerate(_base(G, tuple(offsets) if offsets else None)))


def base_coloring(G: TorusInstance) -> PartialEdgeColoring:
    """Edge {v, v+e_j} gets 2j-1 if coordinate j of v is even, else 2j."""
    return PartialEdgeColoring(G, 2 * G.d, base_coloring_dict(G))


def neighbourhood(G: TorusInstance, e: int) -> set:
    """Edges at distance <= 1 from e, e included."""
    near = set(G.ends[e])
    for v in G.ends[e]:
        for f in G.inc[v]:
            near.update(G.ends[f])
    return {f for x in near for f in G.inc[x]}


def _bicolored_with(col, q, c) -> bool:
    a, b = col[q[0]], col[q[1]]
    return a != b and col[q[2]] == a and col[q[3]] == b and c in (a, b)


def _fix(G: TorusInstance, col: dict, e: int, target: int):
    """Fix e in place; returns (case, swaps) with swaps a list of 4-cycles."""
    if col[e] == target:
        return "i", []
    for q in squares_int(G, e):
        if _bicolored_with(col, q, target):
            swap_square(G, col, q)
            return "ii", [q]
    # both same-dimension neighbours of e carry target
    j = G.dim_of(e)
    u, w = G.ends[e]
    e1 = G.edge_from(u, j, -1)
    e2 = G.edge_from(w, j, 1)
    if col[e1] != target or col[e2] != target:
        raise NeighborhoodDisturbed("coloring around the edge is not the base pattern")
    for i in range(1, G.d + 1):
        if i == j or target in (2 * i - 1, 2 * i):
            continue
        for s in (1, -1):
            # squares through e1 and e2 in direction s of dimension i; afterwards
            # the dimension-i edges at u and w both carry target
            q1 = (e1, G.edge_from(G.ends[e1][0], i, s), G.translate_edge(e1, i, s),
                  G.edge_from(u, i, s))
            q2 = (e2, G.edge_from(w, i, s), G.translate_edge(e2, i, s),
                  G.edge_from(G.ends[e2][1], i, s))
            if set(q1) & set(q2):
                continue
            trial = dict((x, col[x]) for x in q1 + q2 + (e, G.translate_edge(e, i, s)))
            if not (swap_square(G, trial, q1) and swap_square(G, trial, q2)):
                continue
            q = (e, G.edge_from(u, i, s), G.translate_edge(e, i, s), G.edge_from(w, i, s))
            if not _bicolored_with(trial, q, target):
                continue
            swap_square(G, col, q1)
            swap_square(G, col, q2)
            swap_square(G, col, q)
            return "iii", [q1, q2, q]
    raise HypothesisNotMet(f"no pair of disjoint 4-cycles to free color {target} at the edge "
                           f"(C_{G.r}^{G.d} has no second dimension)")


@dataclass
class FixStep:
    edge: int
    target: int
    case: str
    swaps: list = field(default_factory=list)
    G: TorusInstance | None = None

    def to_json(self):
        ids = lambda e: {"base": list(self.G.coords(self.G.base_of(e))), "dim": self.G.dim_of(e)}
        return {"edge": ids(self.edge), "color": self.target, "case": self.case,
                "swaps": [[ids(x) for x in q] for q in self.swaps]}


def fix_edge(G: TorusInstance, f, e, target: int, touched: set | None = None):
    """Give edge e the color target by 4-cycle swaps near e.

    f is a PartialEdgeColoring or dict holding a complete coloring; a new
    coloring of the same kind is returned with the swap log (list of
    4-cycles, each a tuple of int edges).  touched, if given, is the set of
    edges changed by earlier fixes and is updated.
    """
    ei = e if isinstance(e, int) else G.edge(e)
    col = dict(f.colors if isinstance(f, PartialEdgeColoring) else f)
    if not 1 <= target <= 2 * G.d:
        raise ColorOutOfRange(f"color {target} outside [1, {2 * G.d}]")
    if touched is not None and touched & neighbourhood(G, ei):
        raise NeighborhoodDisturbed("an earlier fix changed an edge at distance <= 1")
    case, swaps = _fix(G, col, ei, target)
    changed = {x for q in swaps for x in q}
    if touched is not None:
        touched |= changed
    out = PartialEdgeColoring(G, f.t, col) if isinstance(f, PartialEdgeColoring) else col
    return out, swaps, case


def extend_matching_dict(G: TorusInstance, pre: dict):
    """(coloring, steps) for a precolored distance-4 matching given as a dict."""
    _need_even(G)
    for c in pre.values():
        if not 1 <= c <= 2 * G.d:
            raise ColorOutOfRange(f"color {c} outside [1, {2 * G.d}]")
    if not is_distance_matching_int(G, list(pre), 4):
        raise NotDistance4Matching("precolored edges do not form a distance-4 matching")
    col = base_coloring_dict(G)
    touched: set = set()
    steps = []
    for e in sorted(pre):
        col, swaps, case = fix_edge(G, col, e, pre[e], touched)
        steps.append(FixStep(e, pre[e], case, swaps, G))
    return col, steps


def extend_distance4_matching(G: TorusInstance, phi) -> ExtensionResult:
    pre = phi.colors if isinstance(phi, PartialEdgeColoring) else {G.edge(e) if not isinstance(e, int) else e: c
                                                                    for e, c in dict(phi).items()}
    col, steps = extend_matching_dict(G, pre)
    if not is_proper_dict(G, col) or any(col[e] != c for e, c in pre.items()):
        raise AssertionError("matching extension produced a bad coloring")
    return ExtensionResult(PartialEdgeColoring(G, 2 * G.d, col), steps, "constructive")


def swap_certificate(G: TorusInstance, pre: dict):
    """Try the swap construction on any precolored matching (no distance
    check), over every choice of base phases.  Returns a verified extension
    or None; None says nothing about extendability."""
    for offsets in itertools.product((0, 1), repeat=G.d):
        col = base_coloring_dict(G, offsets)
        try:
            for e in sorted(pre):
                _fix(G, col, e, pre[e])
        except (HypothesisNotMet, NeighborhoodDisturbed):
            continue
        if all(col[e] == c for e, c in pre.items()) and is_proper_dict(G, col):
            return col
    return None


# -- the distance-2 configuration -------------------------------------------------

@dataclass
class Distance2Counterexample:
    matching: list      # int edges, all colored `color`
    vertex: int
    color: int
    extendable: bool
    nodes: int

    def precoloring(self) -> dict:
        return {e: self.color for e in self.matching}


def build_distance2_counterexample(G: TorusInstance, v: int = 0, color: int = 1,
                                   node_limit=None) -> Distance2Counterexample:
    """Precolor, with one color, a distance-2 matching that has an edge at
    every neighbour of v but none at v.  Every edge at v is then adjacent to
    that color, while v needs all 2d colors.
    """
    _need_even(G)
    spokes = list(G.inc[v])
    opts = []
    for s in spokes:
        x = G.other_end(s, v)
        opts.append([f for f in G.inc[x] if v not in G.ends[f]])

    chosen: list = []

    def rec(k):
        if k == len(opts):
            return True
        for f in opts[k]:
            if f in chosen:
                continue
            if all(G.ends[f][0] not in G.ends[g] and G.ends[f][1] not in G.ends[g]
                   and edge_distance_int(G, f, g) >= 2 for g in chosen):
                chosen.append(f)
                if rec(k + 1):
                    return True
                chosen.pop()
        return False

    if not rec(0):
        raise ConstructionNotFound(f"no distance-2 matching around a vertex of C_{G.r}^{G.d}")
    M = sorted(chosen)
    pre = {e: color for e in M}
    col, nodes = solve_dict(G, pre, range(1, 2 * G.d + 1), node_limit)
    return Distance2Counterexample(M, v, color, col is not None, nodes)


__all__ = [
    "base_coloring", "base_coloring_dict", "fix_edge", "extend_distance4_matching",
    "extend_matching_dict", "build_distance2_counterexample", "Distance2Counterexample",
    "neighbourhood", "FixStep",
]
