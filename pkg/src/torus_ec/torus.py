"""The d-dimensional r-torus C_r^d and its decomposition into dimensions,
layers and planes.

Vertices are d-tuples of residues mod r.  Internally a vertex is the integer
sum(coords[i] * r**i) and the edge {v, v + e_j} is the integer (j-1)*r**d + v,
so every algorithm in the package can work with plain ints and dicts.
Dimension indices are 1-based everywhere, matching EdgeId.dim.
"""
from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple, Sequence

from .errors import (DegenerateDimension, InvalidParameters, NotAdjacentPlanes,
                     NotInPlane, SameEdge)

VertexId = tuple  # d-tuple of ints in [0, r-1]


class EdgeId(NamedTuple):
    """The edge {base, base + e_dim}."""
    base: tuple
    dim: int


class Dimension(NamedTuple):
    j: int


class Layer(NamedTuple):
    j: int
    fixed: tuple  # values of every coordinate except j, in order


class Plane(NamedTuple):
    j: int
    level: int


class TorusInstance:
    """C_r^d with cached vertex/edge tables.

    Instances are immutable after construction; build them through
    build_torus so that equal parameters share one object.
    """

    def __init__(self, r: int, d: int):
        if not isinstance(r, int) or not isinstance(d, int) or r < 3 or d < 1:
            raise InvalidParameters(f"need r >= 3 and d >= 1, got r={r}, d={d}")
        self.r = r
        self.d = d
        self.n_vertices = n = r ** d
        self.n_edges = d * n
        self.is_even = r % 2 == 0
        self.parity = "even" if self.is_even else "odd"
        self.chromatic_index = 2 * d if self.is_even else 2 * d + 1
        # pw[j] = r**(j-1), 1-based so pw[j] is the stride of coordinate j
        self.pw = [0] + [r ** i for i in range(d)]

        coords = []
        for v in range(n):
            c = []
            x = v
            for _ in range(d):
                c.append(x % r)
                x //= r
            coords.append(tuple(c))
        self._coords = coords

        ends = []
        for j in range(1, d + 1):
            for v in range(n):
                ends.append((v, self.shift(v, j, 1)))
        self.ends = ends

        inc = []
        for v in range(n):
            row = []
            for j in range(1, d + 1):
                row.append((j - 1) * n + v)
                row.append((j - 1) * n + self.shift(v, j, -1))
            inc.append(tuple(row))
        self.inc = inc
        self._plane_cache: dict = {}

    def __repr__(self):
        return f"TorusInstance(r={self.r}, d={self.d})"

    def __reduce__(self):
        return (build_torus, (self.r, self.d))

    # -- vertices and edges ------------------------------------------------
    def coord(self, v: int, j: int) -> int:
        return (v // self.pw[j]) % self.r

    def shift(self, v: int, j: int, delta: int) -> int:
        p = self.pw[j]
        c = (v // p) % self.r
        return v + (((c + delta) % self.r) - c) * p

    def vertex(self, coords: Sequence[int]) -> int:
        if len(coords) != self.d:
            raise InvalidParameters(f"vertex {tuple(coords)} has wrong length for d={self.d}")
        v = 0
        for i, x in enumerate(coords):
            if not 0 <= x < self.r:
                raise InvalidParameters(f"coordinate {x} out of range for r={self.r}")
            v += x * self.pw[i + 1]
        return v

    def coords(self, v: int) -> tuple:
        return self._coords[v]

    def edge(self, eid) -> int:
        base, dim = eid
        if not 1 <= dim <= self.d:
            raise InvalidParameters(f"dimension {dim} out of range for d={self.d}")
        return (dim - 1) * self.n_vertices + self.vertex(base)

    def edge_id(self, e: int) -> EdgeId:
        return EdgeId(self._coords[e % self.n_vertices], e // self.n_vertices + 1)

    def dim_of(self, e: int) -> int:
        return e // self.n_vertices + 1

    def base_of(self, e: int) -> int:
        return e % self.n_vertices

    def edge_from(self, v: int, j: int, sign: int) -> int:
        """The dimension-j edge at v that leads to v + sign*e_j."""
        if sign > 0:
            return (j - 1) * self.n_vertices + v
        return (j - 1) * self.n_vertices + self.shift(v, j, -1)

    def other_end(self, e: int, v: int) -> int:
        a, b = self.ends[e]
        return b if a == v else a

    def neighbours(self, e: int) -> list:
        """Edges sharing an endpoint with e."""
        a, b = self.ends[e]
        return [f for f in self.inc[a] + self.inc[b] if f != e]

    def translate_edge(self, e: int, j: int, delta: int) -> int:
        return (e // self.n_vertices) * self.n_vertices + self.shift(e % self.n_vertices, j, delta)

    # -- planes ------------------------------------------------------------
    def _plane_tables(self, j: int):
        """(sub instance, vertex map, edge map, projection) for planes of dimension j.

        The maps send sub-instance vertices/edges to the level-0 plane; add
        level * pw[j] to reach plane (j, level).
        """
        tab = self._plane_cache.get(j)
        if tab is not None:
            return tab
        if self.d == 1:
            raise DegenerateDimension("planes of a single cycle are single vertices")
        H = build_torus(self.r, self.d - 1)
        n, nh = self.n_vertices, H.n_vertices
        vmap = []
        for h in range(nh):
            c = H.coords(h)
            vmap.append(self.vertex(c[:j - 1] + (0,) + c[j - 1:]))
        emap = []
        for i2 in range(1, self.d):
            i = i2 if i2 < j else i2 + 1
            for h in range(nh):
                emap.append((i - 1) * n + vmap[h])
        proj = [-1] * self.n_edges
        p = self.pw[j]
        for he, ge in enumerate(emap):
            for a in range(self.r):
                proj[ge + a * p] = he
        tab = (H, vmap, emap, proj)
        self._plane_cache[j] = tab
        return tab

    def sub(self) -> "TorusInstance":
        return build_torus(self.r, self.d - 1)

    def plane_edges(self, j: int, a: int) -> list:
        _, _, emap, _ = self._plane_tables(j)
        off = a * self.pw[j]
        return [e + off for e in emap]

    def plane_vertices(self, j: int, a: int) -> list:
        _, vmap, _, _ = self._plane_tables(j)
        off = a * self.pw[j]
        return [v + off for v in vmap]

    def gap_edges(self, j: int, a: int) -> list:
        """Dimension-j edges joining plane (j, a) to plane (j, a+1).

        Position t of the list lies in the same layer for every a.
        """
        _, vmap, _, _ = self._plane_tables(j)
        off = (j - 1) * self.n_vertices + a * self.pw[j]
        return [v + off for v in vmap]

    def layer_edges(self, j: int, t: int) -> list:
        """Edges of layer number t of dimension j, in level order."""
        _, vmap, _, _ = self._plane_tables(j) if self.d > 1 else (None, [0], None, None)
        v0 = vmap[t]
        base = (j - 1) * self.n_vertices + v0
        p = self.pw[j]
        return [base + a * p for a in range(self.r)]

    def n_layers(self) -> int:
        return self.n_vertices // self.r


@lru_cache(maxsize=None)
def build_torus(r: int, d: int) -> TorusInstance:
    """Return the (shared, immutable) instance C_r^d."""
    return TorusInstance(r, d)


# -- public handle-based API -------------------------------------------------

def dimensions(G: TorusInstance) -> list:
    return [Dimension(j) for j in range(1, G.d + 1)]


def _dim_index(G, j) -> int:
    j = j.j if isinstance(j, Dimension) else j
    if not 1 <= j <= G.d:
        raise InvalidParameters(f"no dimension {j} in C_{G.r}^{G.d}")
    return j


def dimension_edges(G: TorusInstance, j) -> list:
    j = _dim_index(G, j)
    return [G.edge_id(e) for e in range((j - 1) * G.n_vertices, j * G.n_vertices)]


def planes(G: TorusInstance, j) -> list:
    j = _dim_index(G, j)
    return [Plane(j, a) for a in range(G.r)]


def layers(G: TorusInstance, j) -> list:
    j = _dim_index(G, j)
    out = []
    for v in range(G.n_vertices):
        if G.coord(v, j) == 0:
            c = G.coords(v)
            out.append(Layer(j, c[:j - 1] + c[j:]))
    return out


def layer_cycle(G: TorusInstance, layer: Layer) -> list:
    """Edges of a layer in cyclic order, starting at level 0."""
    j = layer.j
    c = tuple(layer.fixed)
    out = []
    for a in range(G.r):
        out.append(EdgeId(c[:j - 1] + (a,) + c[j - 1:], j))
    return out


def plane_edge_ids(G: TorusInstance, p: Plane) -> list:
    return [G.edge_id(e) for e in G.plane_edges(p.j, p.level)]


class PlaneEmbedding:
    """Isomorphism from C_r^{d-1} onto one plane of C_r^d."""

    def __init__(self, G: TorusInstance, p: Plane):
        self.G = G
        self.plane = p
        H, vmap, emap, proj = G._plane_tables(p.j)
        self.H = H
        off = p.level * G.pw[p.j]
        self._vmap = [v + off for v in vmap]
        self._emap = [e + off for e in emap]
        self._proj = proj

    def vertex(self, x):
        return self.G.coords(self._vmap[self.H.vertex(x)])

    def edge(self, eid) -> EdgeId:
        return self.G.edge_id(self._emap[self.H.edge(eid)])

    def project_vertex(self, x):
        c = tuple(x)
        j = self.plane.j
        if c[j - 1] != self.plane.level:
            raise NotInPlane(f"{c} is not in plane {self.plane}")
        return c[:j - 1] + c[j:]

    def project_edge(self, eid) -> EdgeId:
        e = self.G.edge(eid)
        j = self.plane.j
        if self.G.dim_of(e) == j or self.G.coord(self.G.base_of(e), j) != self.plane.level:
            raise NotInPlane(f"{tuple(eid)} is not in plane {self.plane}")
        return self.H.edge_id(self._proj[e])


def plane_subinstance(G: TorusInstance, p: Plane):
    """Return (C_r^{d-1}, embedding into plane p)."""
    if G.d == 1:
        raise DegenerateDimension("d = 1 has no proper plane sub-instance")
    _dim_index(G, p.j)
    if not 0 <= p.level < G.r:
        raise InvalidParameters(f"plane level {p.level} out of range")
    emb = PlaneEmbedding(G, p)
    return emb.H, emb


def corresponding(G: TorusInstance, x, src: Plane, dst: Plane):
    """Translate a vertex or edge of plane src to the adjacent plane dst."""
    if src.j != dst.j or (dst.level - src.level) % G.r not in (1, G.r - 1):
        raise NotAdjacentPlanes(f"{src} and {dst} are not adjacent")
    j = src.j
    delta = 1 if (dst.level - src.level) % G.r == 1 else -1
    if isinstance(x, EdgeId) or (len(x) == 2 and isinstance(x[0], tuple)):
        e = G.edge(x)
        if G.dim_of(e) == j or G.coord(G.base_of(e), j) != src.level:
            raise NotInPlane(f"{tuple(x)} is not in plane {src}")
        return G.edge_id(G.translate_edge(e, j, delta))
    v = G.vertex(x)
    if G.coord(v, j) != src.level:
        raise NotInPlane(f"{tuple(x)} is not in plane {src}")
    return G.coords(G.shift(v, j, delta))


def vertex_distance(G: TorusInstance, u: int, v: int) -> int:
    r = G.r
    s = 0
    for x, y in zip(G._coords[u], G._coords[v]):
        t = abs(x - y)
        s += min(t, r - t)
    return s


def edge_distance_int(G: TorusInstance, e: int, f: int) -> int:
    a, b = G.ends[e]
    c, d = G.ends[f]
    return min(vertex_distance(G, a, c), vertex_distance(G, a, d),
               vertex_distance(G, b, c), vertex_distance(G, b, d))


def edge_distance(G: TorusInstance, e, f) -> int:
    """Length of a shortest path between an end of e and an end of f."""
    ei, fi = G.edge(e), G.edge(f)
    if ei == fi:
        raise SameEdge(f"{tuple(e)} given twice")
    return edge_distance_int(G, ei, fi)


def squares_int(G: TorusInstance, e: int) -> list:
    """4-cycles through edge e as (e, e1, e3, e2) int tuples.

    e1 is at the base end u of e, e2 at the far end w, e3 is opposite e.
    """
    n = G.n_vertices
    j = e // n + 1
    u, w = G.ends[e]
    out = []
    for i in range(1, G.d + 1):
        if i == j:
            continue
        for s in (1, -1):
            e1 = G.edge_from(u, i, s)
            e2 = G.edge_from(w, i, s)
            e3 = G.translate_edge(e, i, s)
            out.append((e, e1, e3, e2))
    if G.r == 4:
        e1 = G.edge_from(u, j, -1)
        e2 = G.edge_from(w, j, 1)
        e3 = G.translate_edge(e, j, 2)
        out.append((e, e1, e3, e2))
    return out


def four_cycles_through(G: TorusInstance, e) -> list:
    return [tuple(G.edge_id(x) for x in q) for q in squares_int(G, G.edge(e))]


def square_of(G: TorusInstance, e: int, e1: int):
    """The 4-cycle containing the two adjacent edges e and e1 of different
    dimensions, as (e, e1, e3, e2) with e3 opposite e."""
    for q in squares_int(G, e):
        if q[1] == e1 or q[3] == e1:
            if q[1] == e1:
                return q
            return (e, q[3], q[2], q[1])
    raise InvalidParameters("edges do not span a square")


def graph_json(G: TorusInstance) -> dict:
    return {"r": G.r, "d": G.d,
            "edges": [{"base": list(G.coords(G.base_of(e))), "dim": G.dim_of(e)}
                      for e in range(G.n_edges)]}


def to_dot(G: TorusInstance, colors: dict | None = None) -> str:
    """DOT text for G; colors maps int edge -> color and becomes edge labels."""
    name = lambda v: '"' + ",".join(map(str, G.coords(v))) + '"'
    lines = [f"graph C{G.r}_{G.d} {{"]
    for v in range(G.n_vertices):
        lines.append(f"  {name(v)};")
    for e in range(G.n_edges):
        a, b = G.ends[e]
        attr = ""
        if colors and e in colors:
            attr = f' [label="{colors[e]}"]'
        lines.append(f"  {name(a)} -- {name(b)}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"
