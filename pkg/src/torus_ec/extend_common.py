"""Machinery shared by the even and odd extension algorithms.

All internal work happens on plain dicts int edge -> color.  A recursive
"plane call" projects the precolored edges of one plane onto the smaller
torus C_r^{d-1}, extends there and embeds the result back.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .coloring import PartialEdgeColoring, is_proper_dict, swap_square
from .errors import (AllListsIdentical, ColorOutOfRange, ImproperPrecoloring,
                     TheoremViolation)
from .listcolor import color_cycle_from_lists, color_even_cycle, color_odd_cycle
from .oracle import solve_dict
from .torus import TorusInstance, square_of


class ProofGap(Exception):
    """A constructive step did not apply; the caller falls back to the oracle."""


class EvenCase(str, Enum):
    EmptyDimension = "EmptyDimension"
    TwoFreeColors = "TwoFreeColors"
    NoFreeDimension = "NoFreeDimension"


class OddCase(str, Enum):
    EmptyDimension = "EmptyDimension"
    TwoFree = "TwoFree"
    OneEdgeNotFree = "OneEdgeNotFree"
    TwoEdgesShared = "TwoEdgesShared"


@dataclass
class CaseTag:
    kind: Enum
    path: str = ""

    def __str__(self):
        return f"{self.kind.value}/{self.path}" if self.path else self.kind.value

    def to_json(self):
        return {"case": self.kind.value, "path": self.path}


@dataclass
class TraceStep:
    depth: int
    r: int
    d: int
    dim: int
    tag: CaseTag
    swaps: int = 0
    plane_calls: int = 0
    fallback: str = ""
    route: str = ""
    claim: str = ""

    def to_json(self):
        out = {"depth": self.depth, "instance": [self.r, self.d], "dim": self.dim,
               "swaps": self.swaps, "plane_calls": self.plane_calls}
        out.update(self.tag.to_json())
        if self.route:
            out["route"] = self.route
        if self.claim:
            out["claim"] = self.claim
        if self.fallback:
            out["fallback"] = self.fallback
        return out


@dataclass
class ExtensionResult:
    coloring: PartialEdgeColoring
    trace: list = field(default_factory=list)
    method: str = "constructive"   # or "oracle_fallback"

    @property
    def tag(self):
        """Case tag of the top-level dispatch (None for d = 1)."""
        for s in self.trace:
            if getattr(s, "depth", None) == 0:
                return s.tag
        return None

    def trace_json(self):
        return [s.to_json() for s in self.trace]


class Run:
    """Bookkeeping for one extension call: trace and recursion hooks."""

    def __init__(self, extend, plane_limit):
        self.extend = extend            # (run, H, pre, pal, depth) -> dict
        self.plane_limit = plane_limit  # d of the sub-instance -> max precolored or None
        self.trace: list = []
        self.fallback = False
        self.step: TraceStep | None = None

    def begin(self, G, depth, dim, tag):
        st = TraceStep(depth, G.r, G.d, dim, tag)
        self.trace.append(st)
        return st


# -- small helpers ---------------------------------------------------------------

def check_input(G: TorusInstance, pre: dict, pal) -> None:
    pals = set(pal)
    for c in pre.values():
        if c not in pals:
            raise ColorOutOfRange(f"color {c} not among the allowed colors {sorted(pals)}")
    if not is_proper_dict(G, pre):
        raise ImproperPrecoloring("precoloring is not proper")


def verify(G: TorusInstance, col: dict, pre: dict, pal) -> None:
    """Raise ProofGap unless col is a complete proper extension of pre over pal."""
    if len(col) != G.n_edges:
        raise ProofGap("coloring incomplete")
    pals = set(pal)
    for e, c in pre.items():
        if col.get(e) != c:
            raise ProofGap("coloring disagrees with the precoloring")
    for c in col.values():
        if c not in pals:
            raise ProofGap("color outside the palette")
    inc = G.inc
    for v in range(G.n_vertices):
        cs = [col[e] for e in inc[v]]
        if len(set(cs)) != len(cs):
            raise ProofGap("coloring is not proper")


def oracle_extend(G: TorusInstance, pre: dict, pal) -> dict:
    col, _ = solve_dict(G, pre, pal)
    if col is None:
        raise TheoremViolation(
            f"precoloring of C_{G.r}^{G.d} with {len(pre)} edges has no extension over {sorted(pal)}")
    return col


def by_dim(G: TorusInstance, pre: dict) -> list:
    """out[j] = {edge: color} for the precolored edges of dimension j (1-based)."""
    out = [dict() for _ in range(G.d + 1)]
    n = G.n_vertices
    for e, c in pre.items():
        out[e // n + 1][e] = c
    return out


def by_level(G: TorusInstance, j: int, part: dict) -> dict:
    """Group edges (not of dimension j) by the level of their plane."""
    out: dict = {}
    p, r, n = G.pw[j], G.r, G.n_vertices
    for e, c in part.items():
        out.setdefault(((e % n) // p) % r, {})[e] = c
    return out


def level_of(G: TorusInstance, j: int, e: int) -> int:
    return ((e % G.n_vertices) // G.pw[j]) % G.r


def minus(pal, *cs) -> tuple:
    drop = set(cs)
    return tuple(c for c in pal if c not in drop)


def shifted(f: dict, delta: int) -> dict:
    return {e + delta: c for e, c in f.items()}


def plane_seen(G: TorusInstance, col: dict, v: int, j: int) -> set:
    """Colors at v on edges outside dimension j."""
    row = G.inc[v]
    skip = 2 * (j - 1)
    return {col[e] for k, e in enumerate(row) if k != skip and k != skip + 1 and e in col}


def seen(G: TorusInstance, col: dict, v: int) -> set:
    return {col[e] for e in G.inc[v] if e in col}


class Frame:
    """Cyclic numbering Q_1, ..., Q_r of the planes of dimension j.

    Q_m sits at level anchor + s*(m-1); gap m is the set of dimension-j
    edges between Q_m and Q_{m+1}.
    """

    def __init__(self, G: TorusInstance, j: int, anchor: int, s: int = 1):
        self.G, self.j, self.anchor, self.s = G, j, anchor % G.r, s

    def level(self, m: int) -> int:
        return (self.anchor + self.s * (m - 1)) % self.G.r

    def index(self, level: int) -> int:
        return ((level - self.anchor) * self.s) % self.G.r + 1

    def gap_level(self, m: int) -> int:
        return self.level(m) if self.s == 1 else self.level(m + 1)

    def gap(self, m: int) -> list:
        return self.G.gap_edges(self.j, self.gap_level(m))

    def gap_index_of_edge(self, e: int) -> int:
        """Gap number m of a dimension-j edge."""
        lv = level_of(self.G, self.j, e)
        return self.index(lv) if self.s == 1 else (self.index(lv) - 2) % self.G.r + 1


# -- recursion ---------------------------------------------------------------------

def extend_plane(run: Run, G: TorusInstance, j: int, level: int, pre_plane: dict, pal,
                 depth: int) -> dict:
    """Extend a precoloring of plane (j, level) recursively over palette pal."""
    H, _, emap, proj = G._plane_tables(j)
    lim = run.plane_limit(H.d)
    if lim is not None and len(pre_plane) > lim:
        raise ProofGap(f"plane call with {len(pre_plane)} precolored edges")
    pals = set(pal)
    for c in pre_plane.values():
        if c not in pals:
            raise ProofGap("plane precoloring uses a reserved color")
    sub = {proj[e]: c for e, c in pre_plane.items()}
    if run.step is not None:
        run.step.plane_calls += 1
    full = run.extend(run, H, sub, tuple(pal), depth + 1)
    off = level * G.pw[j]
    return {emap[h] + off: c for h, c in full.items()}


def copy_plane(G: TorusInstance, j: int, f: dict, src: int, dst: int) -> dict:
    return shifted(f, (dst - src) * G.pw[j])


def fill_planes_uniform(run, G, j, frame: Frame, gapcol: dict, planes_pre: dict, pal,
                        depth, shared=None) -> dict:
    """Color every gap m with gapcol[m] and every plane Q_m over pal minus
    the colors of its two gaps.

    planes_pre maps a level to the precolored edges of that plane.  Planes
    with no precolored edges and the same palette share one recursive call.
    """
    r = G.r
    col: dict = {}
    cache = {} if shared is None else shared
    for m in range(1, r + 1):
        lv = frame.level(m)
        prev = gapcol[(m - 2) % r + 1]
        nxt = gapcol[m]
        if prev == nxt:
            raise ProofGap("two gaps at one plane share a color")
        p = minus(pal, prev, nxt)
        pp = planes_pre.get(lv)
        if pp:
            col.update(extend_plane(run, G, j, lv, pp, p, depth))
        else:
            key = p
            if key not in cache:
                cache[key] = (lv, extend_plane(run, G, j, lv, {}, p, depth))
            src, f = cache[key]
            col.update(copy_plane(G, j, f, src, lv))
        for e in frame.gap(m):
            col[e] = nxt
    return col


def layer_lists(G: TorusInstance, col: dict, j: int, t: int, pal):
    """(edges, lists, pinned) for layer t of dimension j given plane colors."""
    edges = G.layer_edges(j, t)
    pals = set(pal)
    lists = {}
    pinned = False
    for e in edges:
        u, w = G.ends[e]
        avail = pals - plane_seen(G, col, u, j) - plane_seen(G, col, w, j)
        if e in col:
            pinned = True
            lists[e] = {col[e]} & avail
        else:
            lists[e] = avail
    return edges, lists, pinned


def finish_dimension(G: TorusInstance, col: dict, j: int, pal, pins: dict | None = None) -> None:
    """Color every uncolored dimension-j edge from the colors missing at its
    ends, layer by layer.  Edges of dimension j already in col (or in pins)
    keep their colors.
    """
    if pins:
        col.update(pins)
    for t in range(G.n_layers()):
        edges, lists, pinned = layer_lists(G, col, j, t, pal)
        if all(e in col for e in edges):
            continue
        res = None
        if not pinned and all(len(s) >= 2 for s in lists.values()):
            try:
                res = color_even_cycle(edges, lists) if G.r % 2 == 0 else color_odd_cycle(edges, lists)
            except AllListsIdentical:
                raise ProofGap("identical 2-lists on an odd layer") from None
        else:
            res = color_cycle_from_lists(edges, lists)
        if res is None:
            raise ProofGap("layer has no list coloring")
        col.update(res)


def plant_ok(G: TorusInstance, col: dict, e: int, c: int) -> bool:
    """e uncolored and not adjacent to an edge of color c in col."""
    if e in col:
        return False
    a, b = G.ends[e]
    for f in G.inc[a]:
        if col.get(f) == c:
            return False
    for f in G.inc[b]:
        if col.get(f) == c:
            return False
    return True


def do_swap(run: Run, G: TorusInstance, col: dict, e: int, e1: int) -> None:
    q = square_of(G, e, e1)
    if not swap_square(G, col, q):
        raise ProofGap("4-cycle is not bicolored")
    if run.step is not None:
        run.step.swaps += 1


def run_lemma(run: Run, G: TorusInstance, pre: dict, pal, depth: int, dim: int, tag: CaseTag,
              fn) -> dict:
    """Run one lemma with trace bookkeeping and verified oracle fallback."""
    outer = run.step
    st = run.begin(G, depth, dim, tag)
    run.step = st
    try:
        col = fn()
        verify(G, col, pre, pal)
    except ProofGap as gap:
        st.fallback = str(gap)
        run.fallback = True
        col = oracle_extend(G, pre, pal)
    finally:
        run.step = outer
    return col
