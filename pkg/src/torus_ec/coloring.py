"""Partial proper edge colorings of a torus and the operations the extension
proofs are built from: missing colors, Kempe components and swaps, copying
between planes, color permutation and stripping.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import (BoundaryConflict, ColorOutOfRange, ConflictWithExisting,
                     OverlappingDomains, ParseError, StaleComponent,
                     StartNotInColors)
from .torus import EdgeId, Plane, TorusInstance

DEBUG = bool(os.environ.get("TORUS_EC_DEBUG"))


class PartialEdgeColoring:
    """A mapping edge -> color in [1, t] on a fixed torus.

    Keys are stored as int edge indices; EdgeId keys are accepted and
    converted.  Uncolored edges are simply absent.
    """

    __slots__ = ("G", "t", "colors")

    def __init__(self, G: TorusInstance, t: int, colors: Mapping | None = None):
        self.G = G
        self.t = t
        self.colors: dict = {}
        if colors:
            for e, c in colors.items():
                self.colors[self._key(e)] = c
        for c in self.colors.values():
            if not isinstance(c, int) or not 1 <= c <= t:
                raise ColorOutOfRange(f"color {c} outside [1, {t}]")
        if DEBUG and not is_proper_dict(G, self.colors):
            raise ValueError("improper coloring constructed in debug mode")

    def _key(self, e) -> int:
        if isinstance(e, int):
            if not 0 <= e < self.G.n_edges:
                raise KeyError(e)
            return e
        return self.G.edge(e)

    def __getitem__(self, e):
        return self.colors[self._key(e)]

    def get(self, e, default=None):
        return self.colors.get(self._key(e), default)

    def __contains__(self, e):
        return self._key(e) in self.colors

    def __len__(self):
        return len(self.colors)

    def __iter__(self):
        return iter(sorted(self.colors))

    def __eq__(self, other):
        return (isinstance(other, PartialEdgeColoring) and self.G is other.G
                and self.t == other.t and self.colors == other.colors)

    def items(self):
        return sorted(self.colors.items())

    def edge_items(self):
        return [(self.G.edge_id(e), c) for e, c in self.items()]

    def copy(self) -> "PartialEdgeColoring":
        return PartialEdgeColoring(self.G, self.t, dict(self.colors))

    def is_complete(self) -> bool:
        return len(self.colors) == self.G.n_edges

    def __repr__(self):
        return f"PartialEdgeColoring(C_{self.G.r}^{self.G.d}, t={self.t}, {len(self.colors)} edges)"


# -- dict level helpers used by the algorithms ---------------------------------

def seen_colors(G: TorusInstance, col: Mapping, v: int) -> set:
    return {col[e] for e in G.inc[v] if e in col}


def is_proper_dict(G: TorusInstance, col: Mapping) -> bool:
    for v in range(G.n_vertices):
        cs = [col[e] for e in G.inc[v] if e in col]
        if len(cs) != len(set(cs)):
            return False
    return True


def clashes(G: TorusInstance, col: Mapping, e: int, c: int) -> bool:
    """True if giving e the color c clashes with a neighbour in col."""
    a, b = G.ends[e]
    for f in G.inc[a]:
        if f != e and col.get(f) == c:
            return True
    for f in G.inc[b]:
        if f != e and col.get(f) == c:
            return True
    return False


# -- public operations -----------------------------------------------------------

def is_proper(G: TorusInstance, phi: PartialEdgeColoring) -> bool:
    for c in phi.colors.values():
        if not 1 <= c <= phi.t:
            raise ColorOutOfRange(f"color {c} outside [1, {phi.t}]")
    return is_proper_dict(G, phi.colors)


def missing_colors(G: TorusInstance, phi: PartialEdgeColoring, v) -> set:
    vi = v if isinstance(v, int) else G.vertex(v)
    return set(range(1, phi.t + 1)) - seen_colors(G, phi.colors, vi)


@dataclass(frozen=True)
class KempeComponent:
    a: int
    b: int
    edges: tuple      # int edge indices in walk order
    kind: str         # "path" or "cycle"
    snapshot: tuple   # (edge, color) pairs at construction time

    def edge_ids(self, G: TorusInstance) -> list:
        return [G.edge_id(e) for e in self.edges]


def _step(G, col, v, came_from, a, b):
    """The edge at v colored a or b other than came_from, or None."""
    for f in G.inc[v]:
        if f != came_from and col.get(f) in (a, b):
            return f
    return None


def _walk(G, col, v, e, a, b, seen):
    out = []
    while True:
        v = G.other_end(e, v)
        f = _step(G, col, v, e, a, b)
        if f is None or f in seen:
            return out, f is not None
        seen.add(f)
        out.append(f)
        e = f


def kempe_component_dict(G: TorusInstance, col: Mapping, start, a: int, b: int, start_is_vertex=False):
    if start_is_vertex:
        v = start
        first = [f for f in G.inc[v] if col.get(f) in (a, b)]
        if not first:
            return (), "path"
        e = first[0]
        u = v
    else:
        e = start
        if col.get(e) not in (a, b):
            raise StartNotInColors(f"edge has color {col.get(e)}, not {a} or {b}")
        u = G.ends[e][0]
    seen = {e}
    fwd, closed = _walk(G, col, u, e, a, b, seen)
    if closed:
        return (e,) + tuple(fwd), "cycle"
    w = G.other_end(e, u)
    back, _ = _walk(G, col, w, e, a, b, seen)
    return tuple(reversed(back)) + (e,) + tuple(fwd), "path"


def kempe_component(G: TorusInstance, phi: PartialEdgeColoring, start, a: int, b: int) -> KempeComponent:
    """Maximal (a, b)-colored path or cycle through start (an edge or vertex)."""
    if a == b:
        raise ValueError("need two distinct colors")
    col = phi.colors
    if isinstance(start, EdgeId) or isinstance(start, int):
        s = phi._key(start)
        edges, kind = kempe_component_dict(G, col, s, a, b)
    else:
        edges, kind = kempe_component_dict(G, col, G.vertex(start), a, b, start_is_vertex=True)
    return KempeComponent(a, b, edges, kind, tuple((e, col[e]) for e in edges))


def swap(G: TorusInstance, phi: PartialEdgeColoring, comp: KempeComponent) -> PartialEdgeColoring:
    """Exchange colors a and b on a Kempe component; returns a new coloring."""
    for e, c in comp.snapshot:
        if phi.colors.get(e) != c:
            raise StaleComponent("coloring changed since the component was computed")
    if comp.edges:
        again, _ = kempe_component_dict(G, phi.colors, comp.edges[0], comp.a, comp.b)
        if set(again) != set(comp.edges):
            raise StaleComponent("component is no longer maximal")
    out = dict(phi.colors)
    for e in comp.edges:
        out[e] = comp.b if out[e] == comp.a else comp.a
    return PartialEdgeColoring(G, phi.t, out)


def swap_square(G: TorusInstance, col: dict, q) -> bool:
    """Swap the two colors on a bicolored 4-cycle q in place.

    Returns False (and leaves col alone) if q is not bicolored.  A bicolored
    4-cycle is always a whole Kempe component, so the result stays proper.
    """
    e, e1, e3, e2 = q
    a, b = col.get(e), col.get(e1)
    if a is None or b is None or a == b or col.get(e3) != a or col.get(e2) != b:
        return False
    col[e] = col[e3] = b
    col[e1] = col[e2] = a
    return True


def copy_correspondingly(G: TorusInstance, phi: PartialEdgeColoring, src: Plane, dst: Plane) -> PartialEdgeColoring:
    """Color the edges of plane dst like the corresponding edges of src."""
    if src.j != dst.j:
        raise ValueError("planes must belong to the same dimension")
    j = src.j
    delta = (dst.level - src.level) * G.pw[j]
    out = dict(phi.colors)
    for e in G.plane_edges(j, src.level):
        c = phi.colors.get(e)
        if c is None:
            continue
        f = e + delta
        if f in phi.colors and phi.colors[f] != c:
            raise ConflictWithExisting(f"{G.edge_id(f)} already has color {phi.colors[f]}")
        if clashes(G, out, f, c):
            raise ConflictWithExisting(f"copying color {c} onto {G.edge_id(f)} clashes")
        out[f] = c
    return PartialEdgeColoring(G, phi.t, out)


def permute_colors(phi: PartialEdgeColoring, pi: Mapping, scope: Iterable) -> PartialEdgeColoring:
    """Relabel colors on the edges of scope by the permutation pi."""
    G = phi.G
    if sorted(pi.keys()) != sorted(pi.values()):
        raise ValueError("pi is not a permutation")
    sc = {phi._key(e) for e in scope}
    out = dict(phi.colors)
    for e in sc:
        if e in out:
            out[e] = pi.get(out[e], out[e])
    for e in sc:
        if e in out:
            a, b = G.ends[e]
            for f in G.inc[a] + G.inc[b]:
                if f != e and f not in sc and out.get(f) == out[e]:
                    raise BoundaryConflict(f"{G.edge_id(e)} clashes with {G.edge_id(f)}")
    res = PartialEdgeColoring(G, phi.t, out)
    return res


def no_conflicts(G: TorusInstance, f1: PartialEdgeColoring, f2: PartialEdgeColoring) -> bool:
    """True iff the union of two colorings with disjoint domains is proper."""
    if set(f1.colors) & set(f2.colors):
        raise OverlappingDomains("colorings share an edge")
    for e, c in f2.colors.items():
        if clashes(G, f1.colors, e, c):
            return False
    return True


def strip_colors(phi: PartialEdgeColoring, colors) -> tuple:
    """Uncolor every edge carrying one of colors; returns (coloring, removed)."""
    cs = set(colors)
    kept = {e: c for e, c in phi.colors.items() if c not in cs}
    removed = {e: c for e, c in phi.colors.items() if c in cs}
    return PartialEdgeColoring(phi.G, phi.t, kept), removed


def restore(phi: PartialEdgeColoring, removed: Mapping) -> PartialEdgeColoring:
    out = dict(phi.colors)
    out.update(removed)
    return PartialEdgeColoring(phi.G, phi.t, out)


# -- JSON ----------------------------------------------------------------------

def coloring_to_json(phi: PartialEdgeColoring) -> list:
    G = phi.G
    return [{"edge": {"base": list(G.coords(G.base_of(e))), "dim": G.dim_of(e)}, "color": c}
            for e, c in phi.items()]


def coloring_from_json(G: TorusInstance, t: int, data) -> PartialEdgeColoring:
    if not isinstance(data, list):
        raise ParseError("coloring must be a JSON list")
    col = {}
    for item in data:
        if not isinstance(item, dict) or set(item) != {"edge", "color"}:
            raise ParseError(f"bad coloring entry {item!r}")
        ed = item["edge"]
        if not isinstance(ed, dict) or set(ed) != {"base", "dim"}:
            raise ParseError(f"bad edge {ed!r}")
        base, dim, c = ed["base"], ed["dim"], item["color"]
        if (not isinstance(base, list) or not all(type(x) is int for x in base)
                or type(dim) is not int or type(c) is not int):
            raise ParseError(f"bad edge {ed!r}")
        try:
            e = G.edge((tuple(base), dim))
        except Exception as exc:
            raise ParseError(str(exc)) from exc
        if e in col:
            raise ParseError(f"edge {ed!r} listed twice")
        col[e] = c
    return PartialEdgeColoring(G, t, col)


def dumps(phi: PartialEdgeColoring) -> str:
    return json.dumps(coloring_to_json(phi))


def from_edge_ids(G: TorusInstance, t: int, pairs) -> PartialEdgeColoring:
    """Build a coloring from (EdgeId-like, color) pairs."""
    return PartialEdgeColoring(G, t, {G.edge(e): c for e, c in pairs})


__all__ = [
    "PartialEdgeColoring", "KempeComponent", "is_proper", "missing_colors",
    "kempe_component", "swap", "copy_correspondingly", "permute_colors",
    "no_conflicts", "strip_colors", "restore", "coloring_to_json",
    "coloring_from_json",
]
