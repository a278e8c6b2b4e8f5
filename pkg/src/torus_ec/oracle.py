"""Complete backtracking extendability solver plus precoloring and matching
enumerators.

The solver treats every uncolored edge as a variable whose domain is a
bitmask over the palette.  It branches on the edge with the fewest
admissible colors, tries colors from smallest to largest and, after each
assignment, checks that no neighbouring edge lost its last color and that
at the endpoints the uncolored edges can still receive distinct colors.
"""
from __future__ import annotations

import itertools
import os
import random
import sys
from dataclasses import dataclass
from math import comb
from typing import Iterable, Iterator, Sequence

from .coloring import PartialEdgeColoring, is_proper_dict
from .errors import BudgetExceeded, ColorOutOfRange, ImproperPrecoloring
from .torus import TorusInstance, edge_distance_int

DEFAULT_CAP = 10 ** 8


def enumeration_cap() -> int:
    raw = os.environ.get("TORUS_EC_BUDGET")
    if raw:
        try:
            return int(float(raw))
        except ValueError:
            pass
    return DEFAULT_CAP


@dataclass
class Verdict:
    extendable: bool
    witness: PartialEdgeColoring | None
    nodes_explored: int


class _Search:
    def __init__(self, G: TorusInstance, pre: dict, palette: Sequence[int], node_limit=None):
        self.G = G
        self.palette = sorted(palette)
        self.bit = {c: 1 << i for i, c in enumerate(self.palette)}
        self.full = (1 << len(self.palette)) - 1
        self.node_limit = node_limit
        self.nodes = 0
        self.vused = [0] * G.n_vertices
        self.assign = [0] * G.n_edges   # bitmask of the chosen color, 0 = uncolored
        for e, c in pre.items():
            b = self.bit[c]
            u, w = G.ends[e]
            self.assign[e] = b
            self.vused[u] |= b
            self.vused[w] |= b
        self.free = [e for e in range(G.n_edges) if e not in pre]

    def dom(self, e):
        u, w = self.G.ends[e]
        return self.full & ~(self.vused[u] | self.vused[w])

    def vertex_ok(self, v):
        # uncolored edges at v need pairwise distinct colors: their domains
        # must jointly cover at least as many colors as there are edges
        k = 0
        union = 0
        assign = self.assign
        ends = self.G.ends
        used = self.vused
        for f in self.G.inc[v]:
            if not assign[f]:
                a, b = ends[f]
                dm = self.full & ~(used[a] | used[b])
                if not dm:
                    return False
                union |= dm
                k += 1
        return k <= union.bit_count()

    def run(self) -> bool:
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            raise BudgetExceeded(f"solver exceeded {self.node_limit} nodes")
        best = -1
        best_dom = 0
        best_n = 99
        assign = self.assign
        ends = self.G.ends
        used = self.vused
        full = self.full
        for e in self.free:
            if assign[e]:
                continue
            a, b = ends[e]
            dm = full & ~(used[a] | used[b])
            k = dm.bit_count()
            if k < best_n:
                if k == 0:
                    return False
                best, best_dom, best_n = e, dm, k
                if k == 1:
                    break
        if best < 0:
            return True
        e = best
        u, w = ends[e]
        G = self.G
        dm = best_dom
        while dm:
            b = dm & -dm
            dm ^= b
            assign[e] = b
            used[u] |= b
            used[w] |= b
            ok = True
            for x in (u, w):
                if not self.vertex_ok(x):
                    ok = False
                    break
            if ok:
                for f in G.inc[u] + G.inc[w]:
                    if not assign[f]:
                        y = G.other_end(f, u) if u in ends[f] else G.other_end(f, w)
                        if not self.vertex_ok(y):
                            ok = False
                            break
            if ok and self.run():
                return True
            assign[e] = 0
            used[u] ^= b
            used[w] ^= b
        return False

    def coloring(self) -> dict:
        inv = {b: c for c, b in self.bit.items()}
        return {e: inv[b] for e, b in enumerate(self.assign)}


def solve_dict(G: TorusInstance, pre: dict, palette: Sequence[int], node_limit=None):
    """Return (full coloring dict or None, nodes explored)."""
    pal = set(palette)
    for c in pre.values():
        if c not in pal:
            raise ColorOutOfRange(f"color {c} not in palette")
    if not is_proper_dict(G, pre):
        raise ImproperPrecoloring("precoloring is not proper")
    s = _Search(G, pre, palette, node_limit)
    old = sys.getrecursionlimit()
    need = G.n_edges + 200
    if old < need:
        sys.setrecursionlimit(need)
    try:
        ok = s.run()
    finally:
        if old < need:
            sys.setrecursionlimit(old)
    return (s.coloring() if ok else None), s.nodes


def solve(G: TorusInstance, phi, t: int, node_limit=None) -> Verdict:
    """Decide whether phi extends to a proper t-edge coloring of G."""
    pre = phi.colors if isinstance(phi, PartialEdgeColoring) else dict(phi)
    for c in pre.values():
        if not 1 <= c <= t:
            raise ColorOutOfRange(f"color {c} outside [1, {t}]")
    col, nodes = solve_dict(G, pre, range(1, t + 1), node_limit)
    if col is None:
        return Verdict(False, None, nodes)
    return Verdict(True, PartialEdgeColoring(G, t, col), nodes)


# -- precoloring enumeration ---------------------------------------------------

def count_estimate(G: TorusInstance, t: int, max_edges: int, exact: bool = False) -> int:
    ks = [max_edges] if exact else range(max_edges + 1)
    return sum(comb(G.n_edges, k) * t ** k for k in ks)


def _proper_rec(G, t, k, start, col):
    if k == 0:
        yield col
        return
    m = G.n_edges
    for e in range(start, m - k + 1):
        a, b = G.ends[e]
        bad = {col[f] for f in G.inc[a] + G.inc[b] if f in col}
        for c in range(1, t + 1):
            if c in bad:
                continue
            col[e] = c
            yield from _proper_rec(G, t, k - 1, e + 1, col)
            del col[e]


def iter_precolorings(G: TorusInstance, t: int, max_edges: int, exact: bool = False,
                      cap: int | None = None) -> Iterator[dict]:
    """Every proper precoloring with <= max_edges edges (or exactly, if exact).

    Yields the same dict object mutated in place; copy it to keep it.
    Order: by size, then edges lexicographically, then colors.
    """
    cap = enumeration_cap() if cap is None else cap
    est = count_estimate(G, t, max_edges, exact)
    if est > cap:
        raise BudgetExceeded(f"about {est} instances exceed the cap {cap}")
    ks = [max_edges] if exact else range(max_edges + 1)
    for k in ks:
        yield from _proper_rec(G, t, k, 0, {})


def sample_precolorings(G: TorusInstance, t: int, max_edges: int, n: int, seed: int,
                        exact: bool = False) -> Iterator[dict]:
    """n proper precolorings drawn uniformly (by rejection) from a seeded RNG."""
    rng = random.Random(seed)
    m = G.n_edges
    ks = [max_edges] if exact else list(range(max_edges + 1))
    weights = [comb(m, k) * t ** k for k in ks]
    produced = 0
    while produced < n:
        k = rng.choices(ks, weights)[0]
        edges = rng.sample(range(m), k)
        col = {e: rng.randint(1, t) for e in edges}
        if is_proper_dict_local(G, col):
            produced += 1
            yield col


def is_proper_dict_local(G, col) -> bool:
    for e, c in col.items():
        a, b = G.ends[e]
        for f in G.inc[a] + G.inc[b]:
            if f != e and col.get(f) == c:
                return False
    return True


def enumerate_precolorings(G: TorusInstance, t: int, max_edges: int, mode="exhaustive",
                           seed: int = 0, n: int = 0, exact: bool = False):
    """Stream of PartialEdgeColoring; mode is "exhaustive" or "sample"."""
    if max_edges < 0:
        raise ValueError("max_edges must be >= 0")
    if mode == "exhaustive":
        src = iter_precolorings(G, t, max_edges, exact)
    elif mode == "sample":
        src = sample_precolorings(G, t, max_edges, n, seed, exact)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    for col in src:
        yield PartialEdgeColoring(G, t, dict(col))


# -- matchings -------------------------------------------------------------------

@dataclass(frozen=True)
class MatchingSpec:
    edges: frozenset   # of EdgeId
    min_distance: int


def _compatible(G, e, f, t):
    a, b = G.ends[e]
    if a in G.ends[f] or b in G.ends[f]:
        return False
    return edge_distance_int(G, e, f) >= t


def is_distance_matching_int(G: TorusInstance, M: Sequence[int], t: int) -> bool:
    M = list(M)
    if len(set(M)) != len(M):
        return False
    for x, y in itertools.combinations(M, 2):
        if not _compatible(G, x, y, t):
            return False
    return True


def is_distance_matching(G: TorusInstance, M: Iterable, t: int) -> bool:
    return is_distance_matching_int(G, [G.edge(e) for e in M], t)


def compatibility_lists(G: TorusInstance, t: int) -> list:
    """later[e] = edges f > e that may share a distance-t matching with e."""
    m = G.n_edges
    return [[f for f in range(e + 1, m) if _compatible(G, e, f, t)] for e in range(m)]


def iter_matchings(G: TorusInstance, t: int, sizes: Sequence[int]) -> Iterator[tuple]:
    """All distance-t matchings whose size is in sizes, as sorted int tuples."""
    later = compatibility_lists(G, t)
    later_sets = [set(x) for x in later]
    sizes = set(sizes)
    top = max(sizes) if sizes else 0

    def rec(chosen, cand):
        if len(chosen) in sizes:
            yield tuple(chosen)
        if len(chosen) == top:
            return
        for i, e in enumerate(cand):
            nxt = [f for f in cand[i + 1:] if f in later_sets[e]]
            chosen.append(e)
            yield from rec(chosen, nxt)
            chosen.pop()

    yield from rec([], list(range(G.n_edges)))


def sample_matchings(G: TorusInstance, t: int, sizes: Sequence[int], n: int, seed: int,
                     max_tries: int = 1000) -> Iterator[tuple]:
    """Random greedy distance-t matchings with sizes drawn from sizes."""
    rng = random.Random(seed)
    sizes = sorted(sizes)
    m = G.n_edges
    for _ in range(n):
        for _ in range(max_tries):
            k = rng.choice(sizes)
            order = list(range(m))
            rng.shuffle(order)
            chosen = []
            for e in order:
                if len(chosen) == k:
                    break
                if all(_compatible(G, e, f, t) for f in chosen):
                    chosen.append(e)
            if len(chosen) == k:
                yield tuple(sorted(chosen))
                break
        else:
            return


def enumerate_matchings(G: TorusInstance, t_distance: int, size_range, mode="exhaustive",
                        seed: int = 0, n: int = 0):
    """Stream of MatchingSpec for distance-t matchings with sizes in size_range."""
    if t_distance < 0:
        raise ValueError("distance must be >= 0")
    if mode == "exhaustive":
        src = iter_matchings(G, t_distance, list(size_range))
    elif mode == "sample":
        src = sample_matchings(G, t_distance, list(size_range), n, seed)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    for M in src:
        yield MatchingSpec(frozenset(G.edge_id(e) for e in M), t_distance)
