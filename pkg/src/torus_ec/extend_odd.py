"""Extension of a proper precoloring of at most 2d edges of C_{2k+1}^d
(k >= 2) to a proper (2d+1)-edge coloring.

The case tree mirrors the even algorithm: pick a dimension D_1, color the
planes of D_1 recursively with 2d-1 colors each, and color D_1 so that the
two fit together.  Four top-level cases are distinguished (empty dimension,
two private colors, one shared edge, two edges per dimension).

Most constructions share one shape, implemented by the gap engine below:
every gap between consecutive planes gets a single color, the planes avoid
the colors of their two gaps, and an odd number of gaps is handled either by
a third color or by a seam, a gap between two identically colored planes
whose edges take the one color missing at their ends.
"""
from __future__ import annotations

import itertools

from .coloring import PartialEdgeColoring, is_proper_dict
from .errors import (ClaimViolated, HypothesisNotMet, InvalidParameters,
                     PreconditionViolated, UnsupportedGirth)
from .extend_common import (CaseTag, ExtensionResult, OddCase, ProofGap, Run, by_dim,
                            by_level, check_input, copy_plane, do_swap, extend_plane,
                            fill_planes_uniform, finish_dimension, Frame, level_of, minus,
                            plant_ok, plane_seen, run_lemma, seen, verify)
from .listcolor import color_cycle_from_lists, color_path_from_lists
from .torus import Dimension, Plane, TorusInstance, square_of

FILL_BUDGET = 120
PER_CHOICE = 6


def _plane_limit(dsub: int):
    # any precoloring of an odd cycle extends with three colors
    return None if dsub == 1 else 2 * dsub


def _base_cycle(G: TorusInstance, pre: dict, pal) -> dict:
    """d = 1: greedy around the odd cycle.  With three colors every edge
    has at most two colored neighbours, so greedy never gets stuck."""
    r = G.r
    col = dict(pre)
    start = (min(pre) + 1) % r if pre else 0
    for i in range(r):
        e = (start + i) % r
        if e in col:
            continue
        bad = {col.get((e - 1) % r), col.get((e + 1) % r)}
        col[e] = next(c for c in sorted(pal) if c not in bad)
    return col


def _extend(run: Run, G: TorusInstance, pre: dict, pal, depth: int) -> dict:
    if G.d == 1:
        col = _base_cycle(G, pre, pal)
        verify(G, col, pre, pal)
        return col
    j, tag = _dispatch(G, pre)
    fn = _LEMMAS[tag.kind]
    return run_lemma(run, G, pre, pal, depth, j, tag, lambda: fn(run, G, pre, pal, j, tag, depth))


# -- dispatch ------------------------------------------------------------------------

def _dispatch(G: TorusInstance, pre: dict):
    dims = by_dim(G, pre)
    d = G.d
    for j in range(1, d + 1):
        if not dims[j]:
            return j, CaseTag(OddCase.EmptyDimension)
    for j in range(1, d + 1):
        if len(dims[j]) <= 2:
            other = {c for i in range(1, d + 1) if i != j for c in dims[i].values()}
            if not set(dims[j].values()) & other:
                return j, CaseTag(OddCase.TwoFree)
    for j in range(1, d + 1):
        if len(dims[j]) == 1:
            return j, CaseTag(OddCase.OneEdgeNotFree)
    for j in range(1, d + 1):
        if len(dims[j]) == 2:
            return j, CaseTag(OddCase.TwoEdgesShared)
    raise HypothesisNotMet("no case applies; more than 2d precolored edges?")


def dispatch_case_odd(G: TorusInstance, phi: PartialEdgeColoring):
    """Choose D_1 and the case that applies to phi."""
    j, tag = _dispatch(G, phi.colors if isinstance(phi, PartialEdgeColoring) else phi)
    return Dimension(j), tag


def _route(run, text):
    if run.step is not None:
        run.step.route = text


# -- the gap engine -------------------------------------------------------------------------

class _Gaps:
    """Colorings of D_1 in which whole gaps share a color.

    planes: level -> precolored plane edges; forced: D_1 edges that keep
    their color; post: D_1 edges recolored afterwards, either directly
    ("recolor") or through a swap on a 4-cycle with two planted edges.
    """

    def __init__(self, run, G, j, pal, depth):
        self.run, self.G, self.j, self.pal, self.depth = run, G, j, tuple(pal), depth
        self.fills = 0
        self.cache: dict = {}

    # plans ---------------------------------------------------------------------
    def lists(self, planes, forced, restrict=None):
        G, r = self.G, self.G.r
        pc = {lv: set(p.values()) for lv, p in planes.items()}
        fc: dict = {}
        for x, c in forced.items():
            fc.setdefault(level_of(G, self.j, x), set()).add(c)
        L = {}
        for a in range(r):
            s = set(self.pal) - pc.get(a, set()) - pc.get((a + 1) % r, set())
            if restrict is not None and a in restrict:
                s &= set(restrict[a])
            if a in fc:
                s = s & fc[a] if len(fc[a]) == 1 else set()
            L[a] = s
        return L, pc, fc

    def uniform_plans(self, planes, forced, restrict=None):
        L, _, _ = self.lists(planes, forced, restrict)
        g = color_cycle_from_lists(list(range(self.G.r)), L)
        if g is not None:
            yield ("uniform", None, None, g)

    def seam_plans(self, planes, forced, restrict=None):
        r = self.G.r
        L, pc, fc = self.lists(planes, forced, restrict)
        for s in range(r):
            s1 = (s + 1) % r
            if self.merged(planes, s) is None:
                continue
            path = [(s + i) % r for i in range(1, r)]
            free = sorted(set(self.pal) - pc.get(s, set()) - pc.get(s1, set()))
            for A, B in itertools.combinations(free, 2):
                L2 = dict(L)
                L2[path[0]] = L[path[0]] & {A, B}
                L2[path[-1]] = L[path[-1]] & {A, B}
                g = color_path_from_lists(path, L2)
                if g is not None:
                    yield ("seam", s, (A, B), g)
                    break

    def alternating_plans(self, planes, forced, seams=None, pairs=None):
        """Seam at gap s, every other gap alternates A/B with its own phase
        in each layer."""
        G, r, j = self.G, self.G.r, self.j
        used = {c for p in planes.values() for c in p.values()}
        free = [c for c in self.pal if c not in used]
        cand = pairs if pairs is not None else list(itertools.combinations(free, 2))
        for s in (range(r) if seams is None else seams):
            if self.merged(planes, s) is None:
                continue
            for A, B in cand:
                if A in used or B in used:
                    continue
                phase = {}
                ok = True
                for x, c in forced.items():
                    a = level_of(G, j, x)
                    if a == s:
                        continue
                    if c not in (A, B):
                        ok = False
                        break
                    t = self.layer_of(x)
                    p = (a - s - 1) % r
                    ph = (p + (0 if c == A else 1)) % 2
                    if phase.setdefault(t, ph) != ph:
                        ok = False
                        break
                if ok:
                    yield ("alternate", s, (A, B), phase)

    def layer_of(self, x):
        G, j = self.G, self.j
        v = x % G.n_vertices
        p = G.pw[j]
        return (v % p) + (v // (p * G.r)) * p

    def merged(self, planes, s):
        """Union of the precolorings of planes s and s+1, moved to level s."""
        G, r = self.G, self.G.r
        s1 = (s + 1) % r
        out = dict(planes.get(s, {}))
        for e, c in copy_plane(G, self.j, planes.get(s1, {}), s1, s).items():
            if out.get(e, c) != c:
                return None
            out[e] = c
        if not is_proper_dict(G, out):
            return None
        return out

    # realisation -------------------------------------------------------------------
    def plane(self, lv, pp, p):
        G, j = self.G, self.j
        if pp:
            return extend_plane(self.run, G, j, lv, pp, p, self.depth)
        if p not in self.cache:
            self.cache[p] = (lv, extend_plane(self.run, G, j, lv, {}, p, self.depth))
        src, f = self.cache[p]
        return copy_plane(G, j, f, src, lv)

    def realise(self, plan, planes, forced):
        kind, s, pair, g = plan
        G, j, r, pal = self.G, self.j, self.G.r, self.pal
        col: dict = {}
        if kind == "uniform":
            for lv in range(r):
                col.update(self.plane(lv, planes.get(lv), minus(pal, g[(lv - 1) % r], g[lv])))
            for a in range(r):
                for x in G.gap_edges(j, a):
                    col[x] = g[a]
            return col
        A, B = pair
        s1 = (s + 1) % r
        m = self.merged(planes, s)
        f = self.plane(s, m, (minus(pal, A, B)))
        col.update(f)
        col.update(copy_plane(G, j, f, s, s1))
        for lv in range(r):
            if lv in (s, s1):
                continue
            if kind == "seam":
                p = minus(pal, g[(lv - 1) % r], g[lv])
            else:
                p = minus(pal, A, B)
            col.update(self.plane(lv, planes.get(lv), p))
        if kind == "seam":
            for a in range(r):
                if a != s:
                    for x in G.gap_edges(j, a):
                        col[x] = g[a]
        else:
            gaps = [G.gap_edges(j, a) for a in range(r)]
            for t in range(G.n_layers()):
                ph = g.get(t, 0)
                for i in range(1, r):
                    a = (s + i) % r
                    col[gaps[a][t]] = A if (i - 1 + ph) % 2 == 0 else B
        keep = set(pal) - {A, B}
        for x in G.gap_edges(j, s):
            u, w = G.ends[x]
            miss = keep - seen(G, col, u) - seen(G, col, w)
            if len(miss) != 1:
                raise ProofGap("seam edge without a unique missing color")
            c = miss.pop()
            if x in forced and forced[x] != c:
                raise ProofGap("seam color disagrees with a precolored edge")
            col[x] = c
        return col

    def attempt(self, plan, planes, forced, post, pre):
        """Realise a plan, apply the post steps and verify; None on failure."""
        if self.fills >= FILL_BUDGET:
            raise ProofGap("gap engine budget exhausted")
        self.fills += 1
        run = self.run
        mark, fb = len(run.trace), run.fallback
        try:
            col = self.realise(plan, planes, forced)
            for item in post:
                if item[0] == "recolor":
                    _, x, c = item
                    _recolor(self.G, col, x, c, self.pal, frozen=pre)
                else:
                    _, x, c, a = item
                    do_swap(run, self.G, col, x, a)
            verify(self.G, col, pre, self.pal)
            return col
        except ProofGap:
            del run.trace[mark:]
            run.fallback = fb
            return None

    # release options ------------------------------------------------------------------
    def plant_options(self, cur, x, c, taken):
        """Edges a (at the low end of x) and b (its copy at the high end) that
        may carry c so that the square x, a, e3, b can later be swapped."""
        G, j = self.G, self.j
        u, _ = G.ends[x]
        out = []
        for a in G.inc[u]:
            if G.dim_of(a) == j:
                continue
            b = G.translate_edge(a, j, 1)
            q = square_of(G, x, a)
            e3 = q[2]
            if e3 in cur or a in cur or b in cur or taken & set(q):
                continue
            if not plant_ok(G, cur, a, c) or not plant_ok(G, cur, b, c):
                continue
            out.append((a, b, q))
        return out

    def search(self, pre, modes=("uniform", "seam", "alternate"), restrict=None,
               release=None, max_release=2):
        """Try release sets of growing size; returns (col, route) or raises ProofGap."""
        G, j = self.G, self.j
        d1 = {x: c for x, c in pre.items() if G.dim_of(x) == j}
        rest = {x: c for x, c in pre.items() if x not in d1}
        base = by_level(G, j, rest)
        order = sorted(d1) if release is None else list(release)
        sets = [()]
        for k in range(1, min(max_release, len(order)) + 1):
            sets += list(itertools.combinations(order, k))
        for rel in sets:
            for choice in self._choices(pre, d1, rel):
                planes = {lv: dict(p) for lv, p in base.items()}
                post = []
                for x, opt in zip(rel, choice):
                    if opt is None:
                        post.append(("recolor", x, d1[x]))
                    else:
                        a, b, _ = opt
                        planes.setdefault(level_of(G, j, a), {})[a] = d1[x]
                        planes.setdefault(level_of(G, j, b), {})[b] = d1[x]
                        post.append(("plant", x, d1[x], a))
                forced = {x: c for x, c in d1.items() if x not in rel}
                tries = 0
                for mode in modes:
                    if mode == "uniform":
                        plans = self.uniform_plans(planes, forced, restrict)
                    elif mode == "seam":
                        plans = self.seam_plans(planes, forced, restrict)
                    else:
                        plans = self.alternating_plans(planes, forced)
                    for plan in plans:
                        if tries >= PER_CHOICE:
                            break
                        tries += 1
                        col = self.attempt(plan, planes, forced, post, pre)
                        if col is not None:
                            tail = "".join("+" + p[0] for p in post)
                            return col, plan[0] + tail
        raise ProofGap("gap engine found no construction")

    def _choices(self, pre, d1, rel):
        cur = {x: c for x, c in pre.items() if x not in rel}
        opts = []
        for x in rel:
            opts.append([None] + self.plant_options(cur, x, d1[x], set()))
        for combo in itertools.product(*opts):
            # planted pairs must be compatible with each other
            chk = dict(cur)
            taken: set = set()
            ok = True
            for x, opt in zip(rel, combo):
                if opt is None:
                    continue
                a, b, q = opt
                c = d1[x]
                if taken & set(q) or not plant_ok(self.G, chk, a, c) or \
                        not plant_ok(self.G, chk, b, c):
                    ok = False
                    break
                chk[a] = chk[b] = c
                taken |= set(q)
            if ok:
                yield combo


def _recolor(G, col, x, c, pal, frozen=()):
    """Give the D_1 edge x the color c.  Same-dimension neighbours that
    carry c are moved to another free color; any other clash is a failure."""
    j = G.dim_of(x)
    col[x] = c
    for v in G.ends[x]:
        for y in G.inc[v]:
            if y == x or col.get(y) != c:
                continue
            if G.dim_of(y) != j or y in frozen:
                raise ProofGap("released edge cannot be recolored")
            a, b = G.ends[y]
            free = sorted(set(pal) - seen(G, col, a) - seen(G, col, b))
            if not free:
                raise ProofGap("no color left for a neighbour of the released edge")
            col[y] = free[0]


def _copy_all(run, G, j, pre, pal, depth, strip_first=()):
    """Color every plane like one plane f, then list color the layers of D_1.

    f extends the union of all plane precolorings (projected onto one
    plane) over the palette minus two colors X, Y; edges precolored X or Y
    are put back afterwards.
    """
    d1 = {x: c for x, c in pre.items() if G.dim_of(x) == j}
    rest = {x: c for x, c in pre.items() if x not in d1}
    union: dict = {}
    for x, c in rest.items():
        y = copy_plane(G, j, {x: c}, level_of(G, j, x), 0)
        (k, v), = y.items()
        if union.get(k, v) != v:
            raise ProofGap("planes disagree on corresponding edges")
        union[k] = v
    if not is_proper_dict(G, union):
        raise ProofGap("projected precoloring is not proper")
    counts = {c: 0 for c in pal}
    for c in union.values():
        counts[c] += 1
    want = set(strip_first) | set(d1.values())
    pairs = sorted(itertools.combinations(pal, 2),
                   key=lambda p: (-len(want & set(p)), -(counts[p[0]] + counts[p[1]]), p))
    lim = _plane_limit(G.d - 1)
    tried = 0
    for X, Y in pairs:
        kept = {x: c for x, c in union.items() if c not in (X, Y)}
        if lim is not None and len(kept) > lim:
            continue
        tried += 1
        if tried > 6:
            break
        mark, fb = len(run.trace), run.fallback
        try:
            f = extend_plane(run, G, j, 0, kept, minus(pal, X, Y), depth)
            f.update(union)
            col = {}
            for lv in range(G.r):
                col.update(copy_plane(G, j, f, 0, lv))
            finish_dimension(G, col, j, pal, pins=d1)
            verify(G, col, pre, pal)
            return col
        except ProofGap:
            del run.trace[mark:]
            run.fallback = fb
    raise ProofGap("no common plane coloring works")


def _planes_then_lists(run, G, j, pre, pal, depth):
    """Color every plane over the palette minus two colors X, Y that no
    precolored plane edge uses, then list color the layers of D_1.  Empty
    planes copy the nearest precolored plane below them, so most layer
    edges see only 2d-2 colors."""
    d1 = {x: c for x, c in pre.items() if G.dim_of(x) == j}
    rest = {x: c for x, c in pre.items() if x not in d1}
    planes = by_level(G, j, rest)
    busy = set(rest.values())
    want = set(d1.values())
    pairs = sorted((p for p in itertools.combinations(pal, 2) if not busy & set(p)),
                   key=lambda p: (-len(want & set(p)), p))
    r = G.r
    for X, Y in pairs[:6]:
        mark, fb = len(run.trace), run.fallback
        try:
            p = minus(pal, X, Y)
            f = {lv: extend_plane(run, G, j, lv, pp, p, depth) for lv, pp in planes.items()}
            col = {}
            src = None
            start = min(planes) if planes else 0
            for i in range(r):
                lv = (start + i) % r
                if lv in f:
                    src = lv
                    col.update(f[lv])
                elif src is None:
                    f[lv] = extend_plane(run, G, j, lv, {}, p, depth)
                    src = lv
                    col.update(f[lv])
                else:
                    col.update(copy_plane(G, j, f[src], src, lv))
            finish_dimension(G, col, j, pal, pins=d1)
            verify(G, col, pre, pal)
            return col
        except ProofGap:
            del run.trace[mark:]
            run.fallback = fb
    raise ProofGap("no plane palette admits a list coloring of D_1")


def _generic(run, G, j, pre, pal, depth, first_copy=False, restrict=None):
    """Copy-all construction, the gap engine and independent planes plus
    list coloring of D_1."""
    eng = _Gaps(run, G, j, pal, depth)
    steps = ["copy", "gaps"] if first_copy else ["gaps", "copy"]
    if restrict is None:
        steps.append("lists")
    for st in steps:
        try:
            if st == "copy":
                col = _copy_all(run, G, j, pre, pal, depth)
                _route(run, "copy-all")
                return col
            if st == "lists":
                col = _planes_then_lists(run, G, j, pre, pal, depth)
                _route(run, "planes+lists")
                return col
            if restrict is not None:
                col, how = eng.search(pre, modes=("uniform",), restrict=restrict, max_release=0)
                _route(run, how + "/restricted")
                return col
            col, how = eng.search(pre)
            _route(run, how)
            return col
        except ProofGap:
            continue
    raise ProofGap("no construction found")


# -- lemma: D_1 has no precolored edge ----------------------------------------------------

def _empty_dimension(run, G, pre, pal, j, tag, depth):
    planes = by_level(G, j, pre)
    used = sorted(set(pre.values()))
    r, d = G.r, G.d
    if len(planes) <= 1:
        tag.path = "1"
        a = next(iter(planes)) if planes else 0
        pp = planes.get(a, {})
        c1, c2 = (used + [c for c in pal if c not in used])[:2]
        f = extend_plane(run, G, j, a, {e: c for e, c in pp.items() if c not in (c1, c2)},
                         minus(pal, c1, c2), depth)
        f.update(pp)
        col = {}
        for b in range(r):
            col.update(copy_plane(G, j, f, a, b))
        finish_dimension(G, col, j, pal)
        return col

    if len(planes) == 2:
        (l1, p1), (li, pi) = sorted(planes.items(), key=lambda kv: (-len(kv[1]), kv[0]))
        if len(p1) == 2 * d - 1:
            tag.path = "2/(i)"
            (ei, c1), = pi.items()
            c2 = min(p1.values())
            cx = min(c for c in pal if c != c2 and c not in set(p1.values()))
            f = extend_plane(run, G, j, l1, {e: c for e, c in p1.items() if c != c2},
                             minus(pal, c2, cx), depth)
            f.update(p1)
            e1 = copy_plane(G, j, {ei: c1}, li, l1)
            (e1,) = e1
            c3 = f[e1]
            fi = f if c3 == c1 else {e: (c3 if c == c1 else c1 if c == c3 else c)
                                     for e, c in f.items()}
            col = dict(f)
            for b in range(r):
                if b != l1:
                    col.update(copy_plane(G, j, fi, l1, b))
            finish_dimension(G, col, j, pal)
            return col
        if len(used) <= 2 * d - 1:
            tag.path = "2/(ii)"
            p = tuple(sorted((used + [c for c in pal if c not in used])[:2 * d - 1]))
            f1 = extend_plane(run, G, j, l1, p1, p, depth)
            fi = extend_plane(run, G, j, li, pi, p, depth)
            col = dict(f1)
            for b in range(r):
                if b != l1:
                    col.update(copy_plane(G, j, fi, li, b))
            finish_dimension(G, col, j, pal)
            return col
        tag.path = "2/(iii)"
        alpha, beta = min(p1.values()), min(pi.values())
        gamma = next(c for c in pal if c not in set(used))
        s = 1 if (li - l1) % r != 1 else -1
        fr = Frame(G, j, l1, s)
        f1 = extend_plane(run, G, j, l1, p1, minus(pal, beta, gamma), depth)
        fi = extend_plane(run, G, j, li, pi, minus(pal, alpha, gamma), depth)
        col = dict(f1)
        col.update(fi)
        f2 = {e: (beta if c == alpha else c) for e, c in f1.items()}
        col.update(copy_plane(G, j, f2, l1, fr.level(2)))
        for m in range(3, r + 1):
            lv = fr.level(m)
            if lv != li:
                col.update(copy_plane(G, j, fi, li, lv))
        keep = set(minus(pal, alpha, gamma))
        for x in fr.gap(1):
            u, w = G.ends[x]
            miss = sorted(keep - seen(G, col, u) - seen(G, col, w))
            if not miss:
                raise ProofGap("no missing color between Q_1 and Q_2")
            col[x] = miss[0]
        for m in range(2, r + 1):
            for x in fr.gap(m):
                col[x] = alpha if m % 2 == 0 else gamma
        return col

    tag.path = "3"
    gapcol = _path_gap_colors(G, planes, pal, set())
    fr = Frame(G, j, 0, 1)
    return fill_planes_uniform(run, G, j, fr, {a + 1: c for a, c in gapcol.items()},
                               planes, pal, depth)


def _path_gap_colors(G, planes, pal, forbid_first):
    """One color per gap: the gaps between consecutive precolored planes form
    paths, each alternating two colors absent from its two end planes.  The
    path closing the cycle runs between two planes with few colors."""
    r, d = G.r, G.d
    lv = sorted(planes)
    s = len(lv)
    cols = {a: set(planes[a].values()) for a in lv}
    start = None
    for i in range(s):
        a, b = lv[i], lv[(i + 1) % s]
        if len(cols[a] | cols[b]) <= 2 * d - 2:
            start = (i + 1) % s
            break
    if start is None:
        raise ProofGap("no pair of consecutive planes with few colors")
    order = lv[start:] + lv[:start]     # order[-1] -> order[0] closes the cycle
    g = {}
    prev = None
    first = None
    for i in range(s):
        a, b = order[i], order[(i + 1) % s]
        length = (b - a) % r
        avail = [c for c in pal if c not in cols[a] | cols[b]]
        if i == s - 1:
            avail = [c for c in avail if c != first]
        opts = [c for c in avail if c != prev]
        if not opts:
            raise ProofGap("no color for a path")
        x = opts[0]
        rest = [c for c in avail if c != x]
        if length > 1 and not rest:
            raise ProofGap("only one color for a path")
        y = rest[0] if rest else None
        for t in range(length):
            g[(a + t) % r] = x if t % 2 == 0 else y
        last = g[(a + length - 1) % r]
        if i == s - 1 and last == first:
            raise ProofGap("closing path meets the first path")
        if first is None:
            first = x
        prev = last
    return g


def lemma_odd_empty_dimension(G: TorusInstance, phi: PartialEdgeColoring, D1) -> ExtensionResult:
    return _lemma_entry(G, phi, D1, OddCase.EmptyDimension)


# -- lemma: at most two D_1 edges with private colors -------------------------------------------

def _two_free(run, G, pre, pal, j, tag, depth):
    dims = by_dim(G, pre)
    d1 = dims[j]
    rest = {e: c for e, c in pre.items() if e not in d1}
    planes = by_level(G, j, rest)
    r = G.r
    used = set(pre.values())
    colors = sorted(set(d1.values()))
    if len(colors) == 1:
        c1 = colors[0]
        if len(planes) <= 1:
            tag.path = "1.1"
            a = next(iter(planes)) if planes else 0
            pp = planes.get(a, {})
            c2 = min(pp.values()) if pp else min(c for c in pal if c not in used)
            f = extend_plane(run, G, j, a, {e: c for e, c in pp.items() if c != c2},
                             minus(pal, c1, c2), depth)
            f.update(pp)
            col = {}
            for b in range(r):
                col.update(copy_plane(G, j, f, a, b))
            finish_dimension(G, col, j, pal, pins=d1)
            return col
        if len(planes) == 2:
            tag.path = "1.2"
            c2 = min(c for c in pal if c not in used)
            gap_has = {level_of(G, j, x) for x in d1}
            seams = [s for s in range(r) if s not in gap_has
                     and not (s in planes and (s + 1) % r in planes)]
            eng = _Gaps(run, G, j, pal, depth)
            for plan in eng.alternating_plans(planes, d1, seams=seams, pairs=[(c1, c2)]):
                col = eng.attempt(plan, planes, d1, [], pre)
                if col is not None:
                    _route(run, "alternate")
                    return col
            return _generic(run, G, j, pre, pal, depth)
        tag.path = "1.3"
        return _generic(run, G, j, pre, pal, depth)
    c1, c2 = colors
    c3 = min(c for c in pal if c not in used)
    tag.path = "2"
    try:
        return _generic(run, G, j, pre, pal, depth,
                        restrict={a: (c1, c2, c3) for a in range(r)})
    except ProofGap:
        return _generic(run, G, j, pre, pal, depth)


def lemma_odd_two_free(G: TorusInstance, phi: PartialEdgeColoring, D1) -> ExtensionResult:
    return _lemma_entry(G, phi, D1, OddCase.TwoFree)


# -- lemma: one D_1 edge with a shared color -----------------------------------------------------

def _one_not_free(run, G, pre, pal, j, tag, depth):
    dims = by_dim(G, pre)
    (e, c1), = dims[j].items()
    rest = {x: c for x, c in pre.items() if x != e}
    planes = by_level(G, j, rest)
    used = set(pre.values())
    free = [c for c in pal if c not in used]
    if len(free) < 2:
        raise ProofGap("fewer than two unused colors")
    c2, c3 = free[0], free[1]
    r, d = G.r, G.d
    ge = level_of(G, j, e)
    u, w = G.ends[e]
    q2 = (ge + 1) % r

    if len(planes) <= 1:
        a = next(iter(planes)) if planes else ge
        pp = planes.get(a, {})
        f = extend_plane(run, G, j, a, {x: c for x, c in pp.items() if c != c1},
                         minus(pal, c1, c2), depth)
        f.update(pp)
        col = {}
        for b in range(r):
            col.update(copy_plane(G, j, f, a, b))
        if a in (ge, q2) or c1 not in plane_seen(G, col, u, j):
            tag.path = "1/pin"
            finish_dimension(G, col, j, pal, pins={e: c1})
            return col
        tag.path = "1/swap"
        e1 = next(x for x in G.inc[u] if G.dim_of(x) != j and col.get(x) == c1)
        _, _, e3, _ = square_of(G, e, e1)
        finish_dimension(G, col, j, pal, pins={e: c2, e3: c2})
        do_swap(run, G, col, e, e1)
        return col

    if len(planes) == 2:
        lvls = sorted(planes)
        touching = [lv for lv in lvls if lv in (ge, q2)]
        if not touching:
            tag.path = "2/apart"
            near = {lv for p in lvls for lv in ((p - 1) % r, p)}
            restrict = {a: ((c2, c3) if a in near else (c1, c2, c3)) for a in range(r)}
            return _generic(run, G, j, pre, pal, depth, restrict=restrict)
        if len(touching) == 1:
            tag.path = "2/one-end"
            return _one_end(run, G, pre, pal, j, depth, e, c1, c2, c3, planes, touching[0])
        tag.path = "2/between"
        return _between(run, G, pal, j, depth, e, c1, c2, planes)

    tag.path = "3"
    cnt = len(planes.get(ge, {})) + len(planes.get(q2, {}))
    near = {x: c for x, c in rest.items() if c == c1}
    e1 = None
    for x in G.inc[u]:
        if G.dim_of(x) == j:
            continue
        y = G.translate_edge(x, j, 1)
        if x in rest or y in rest or square_of(G, e, x)[2] in pre:
            continue
        if not plant_ok(G, near, x, c1) or not plant_ok(G, near, y, c1):
            continue
        e1 = x
        break
    if e1 is not None:
        tag.path = "3/plant"
        eng = _Gaps(run, G, j, pal, depth)
        pl = {lv: dict(p) for lv, p in planes.items()}
        e2 = G.translate_edge(e1, j, 1)
        pl.setdefault(ge, {})[e1] = c1
        pl.setdefault(q2, {})[e2] = c1
        for plan in itertools.chain(eng.uniform_plans(pl, {}), eng.seam_plans(pl, {})):
            col = eng.attempt(plan, pl, {}, [("plant", e, c1, e1)], pre)
            if col is not None:
                _route(run, plan[0] + "+plant")
                return col
        return _generic(run, G, j, pre, pal, depth)
    if cnt != 2 * d - 2:
        raise ProofGap("no plant pair although Q_1 and Q_2 are not saturated")
    tag.path = "3/saturated"
    return _saturated(run, G, pre, pal, j, depth, e, c1, c2, c3, planes)


def _one_end(run, G, pre, pal, j, depth, e, c1, c2, c3, planes, q1):
    """e joins the precolored plane Q_1 to an empty plane Q_2."""
    r = G.r
    ge = level_of(G, j, e)
    s = 1 if q1 == ge else -1
    qi = next(lv for lv in planes if lv != q1)
    fr = Frame(G, j, q1, s)
    p = minus(pal, c2, c3)
    f1 = extend_plane(run, G, j, q1, planes[q1], p, depth)
    fi = extend_plane(run, G, j, qi, planes[qi], p, depth)
    col = dict(f1)
    col.update(fi)
    # Q_2 copies Q_1; so does a second empty neighbour, and the gap between
    # the two copies is the seam
    if fr.level(r) != qi:
        seam, cp = r, (2, r)
    else:
        seam, cp = 2, (2, 3)
    for m in cp:
        col.update(copy_plane(G, j, f1, q1, fr.level(m)))
    f0 = None
    for m in range(2, r + 1):
        lv = fr.level(m)
        if m in cp or lv == qi:
            continue
        if f0 is None:
            f0, src = extend_plane(run, G, j, lv, {}, p, depth), lv
        col.update(copy_plane(G, j, f0, src, lv))
    # the gaps other than the seam form a path of even length; alternate
    # c2, c3 along it with gap 1 colored c2
    order = [(seam + i - 1) % r + 1 for i in range(1, r)]
    off = order.index(1) % 2
    for i, m in enumerate(order):
        c = c2 if (i - off) % 2 == 0 else c3
        for x in fr.gap(m):
            col[x] = c
    keep = set(p)
    for x in fr.gap(seam):
        a_, b_ = G.ends[x]
        miss = sorted(keep - seen(G, col, a_) - seen(G, col, b_))
        if len(miss) != 1:
            raise ProofGap("seam without a unique missing color")
        col[x] = miss[0]
    x0 = G.ends[e][0] if q1 == ge else G.ends[e][1]
    e1 = next((y for y in G.inc[x0] if G.dim_of(y) != j and col.get(y) == c1), None)
    if e1 is None:
        _recolor(G, col, e, c1, pal)
        _route(run, "recolor")
    else:
        do_swap(run, G, col, e, e1)
        _route(run, "swap")
    return col


def _between(run, G, pal, j, depth, e, c1, c2, planes):
    """e joins the two precolored planes."""
    r = G.r
    q1 = level_of(G, j, e)
    fr = Frame(G, j, q1, 1)
    p = minus(pal, c1, c2)
    f = {}
    for m in (1, 2):
        lv = fr.level(m)
        pp = planes[lv]
        g = extend_plane(run, G, j, lv, {x: c for x, c in pp.items() if c != c1}, p, depth)
        g.update(pp)
        f[m] = g
    col = dict(f[1])
    col.update(f[2])
    for m in range(3, r):
        col.update(copy_plane(G, j, f[2], fr.level(2), fr.level(m)))
    col.update(copy_plane(G, j, f[1], fr.level(1), fr.level(r)))
    g1 = fr.gap(1)
    for x in g1:
        col[x] = c1 if x == e else c2
    pals = set(pal)
    paths = [fr.gap(m) for m in range(2, r - 1)]
    for t, x in enumerate(fr.gap(2)):
        a_, _ = G.ends[x]
        miss = sorted(pals - seen(G, col, a_))
        if len(miss) < 2:
            raise ProofGap("fewer than two free colors on a path")
        cx, cy = miss[0], miss[1]
        for i, gp in enumerate(paths):
            col[gp[t]] = cx if i % 2 == 0 else cy
    for t, x in enumerate(fr.gap(r - 1)):
        col[x] = col[g1[t]]
    for x in fr.gap(r):
        a_, b_ = G.ends[x]
        miss = sorted(pals - seen(G, col, a_) - seen(G, col, b_))
        if not miss:
            raise ProofGap("no missing color between Q_2k+1 and Q_1")
        col[x] = miss[0]
    _route(run, "paths")
    return col


def _saturated(run, G, pre, pal, j, depth, e, c1, c2, c3, planes):
    """Q_1 and Q_2 hold 2d-2 precolored edges and block every plant pair."""
    r = G.r
    ge = level_of(G, j, e)
    q2 = (ge + 1) % r
    u, w = G.ends[e]
    cur = dict(pre)
    paint = [c for c in pal if c not in (c1, c2, c3)]
    for v in (u, w):
        for x in G.inc[v]:
            if G.dim_of(x) == j or x in cur:
                continue
            if not plant_ok(G, {k: c for k, c in pre.items() if c == c1 and k != e}, x, c1):
                continue
            a_, b_ = G.ends[x]
            bad = seen(G, cur, a_) | seen(G, cur, b_)
            c = next((c for c in paint if c not in bad), None)
            if c is None:
                raise ProofGap("no color to pre-paint a neighbour of e")
            cur[x] = c
    p = minus(pal, c2, c3)
    pl = by_level(G, j, {x: c for x, c in cur.items() if G.dim_of(x) != j})
    col = {}
    for lv in (ge, q2):
        col.update(extend_plane(run, G, j, lv, pl.get(lv, {}), p, depth))
    third = [lv for lv in planes if lv not in (ge, q2)]
    if len(third) != 1:
        raise ProofGap("expected exactly one further precolored plane")
    q = third[0]
    if (q + 1) % r not in (ge, q2):
        s = q
    elif (q - 1) % r not in (ge, q2):
        s = (q - 1) % r
    else:
        raise ProofGap("no empty neighbour for the third plane")
    fq = extend_plane(run, G, j, q, planes[q], p, depth)
    for lv in range(r):
        if lv not in (ge, q2):
            col.update(copy_plane(G, j, fq, q, lv))
    for x in G.gap_edges(j, ge):
        col[x] = c1 if x == e else c2
    # gaps after ge up to the seam start with c3; gaps before ge end with c3
    i = 0
    a = (ge + 1) % r
    while a != s:
        c = c3 if i % 2 == 0 else c2
        for x in G.gap_edges(j, a):
            col[x] = c
        a = (a + 1) % r
        i += 1
    i = 0
    a = (ge - 1) % r
    while a != s:
        c = c3 if i % 2 == 0 else c2
        for x in G.gap_edges(j, a):
            col[x] = c
        a = (a - 1) % r
        i += 1
    keep = set(p)
    for x in G.gap_edges(j, s):
        a_, b_ = G.ends[x]
        miss = sorted(keep - seen(G, col, a_) - seen(G, col, b_))
        if len(miss) != 1:
            raise ProofGap("seam without a unique missing color")
        col[x] = miss[0]
    _route(run, "pre-paint")
    return col


def lemma_odd_one_not_free(G: TorusInstance, phi: PartialEdgeColoring, D1) -> ExtensionResult:
    return _lemma_entry(G, phi, D1, OddCase.OneEdgeNotFree)


# -- lemma: two D_1 edges, a color shared -----------------------------------------------------------

def _subcase(G, j, d1, planes):
    """Label of the proof branch: planes case, color case, plane sharing."""
    r = G.r
    (x1, c1), (x2, c2) = sorted(d1.items())
    n = len(planes)
    if n <= 1:
        return "1"
    top = "2" if n == 2 else "3"
    same = "1" if c1 == c2 else "2"
    a1, a2 = level_of(G, j, x1), level_of(G, j, x2)
    s1, s2 = {a1, (a1 + 1) % r}, {a2, (a2 + 1) % r}
    common = len(s1 & s2)
    if top == "2" and same == "1":
        if common == 2:
            return "2.1/shared-pair"
        if common == 1:
            q1 = (s1 & s2).pop()
            o1, o2 = (s1 - {q1}).pop(), (s2 - {q1}).pop()
            has = set(planes)
            if has <= {q1, o1} or has <= {q1, o2}:
                return "2.1.1/pair"
            if q1 in has and not has & {o1, o2}:
                return "2.1.1/(a)"
            if q1 not in has and len(has & {o1, o2}) == 1:
                return "2.1.1/(b)"
            return "2.1.1/(c)"
        return "2.1.2"
    k = {2: "1", 1: "2", 0: "3"}[common]
    label = f"{top}.{same}.{k}"
    if label == "2.2.2":
        q1 = (s1 & s2).pop()
        o1, o2 = (s1 - {q1}).pop(), (s2 - {q1}).pop()
        has = set(planes)
        if has <= {q1, o1} or has <= {q1, o2}:
            label += "/(a)"
        elif q1 in has:
            label += "/(b)"
        elif has <= {o1, o2} and len(has) == 2:
            label += "/(d)"
        else:
            label += "/(c)"
    return label


def _two_shared(run, G, pre, pal, j, tag, depth):
    dims = by_dim(G, pre)
    d1 = dims[j]
    if len(d1) != 2:
        raise ProofGap("D_1 must carry exactly two precolored edges")
    rest = {x: c for x, c in pre.items() if x not in d1}
    planes = by_level(G, j, rest)
    tag.path = _subcase(G, j, d1, planes)
    if tag.path == "2.2.1" and G.d >= 3 and len(planes) <= 2:
        _claim_check(run, G, pre, j, d1, planes)
    try:
        return _generic(run, G, j, pre, pal, depth, first_copy=(tag.path == "1"))
    except ProofGap:
        pass
    # the lemma holds for every dimension carrying two precolored edges, so
    # another choice of D_1 is equally valid
    for i in range(1, G.d + 1):
        if i != j and len(dims[i]) == 2:
            try:
                col = _generic(run, G, i, pre, pal, depth)
            except ProofGap:
                continue
            _route(run, f"{run.step.route} via D_1 = {i}" if run.step else "")
            return col
    raise ProofGap("no construction for any choice of D_1")


def _claim_check(run, G, pre, j, d1, planes):
    (x1, c1), (x2, c2) = sorted(d1.items())
    a = level_of(G, j, x1)
    if set(planes) - {a, (a + 1) % G.r}:
        return
    phi = PartialEdgeColoring(G, max(max(pre.values()), 2 * G.d + 1), pre)
    got = find_safe_adjacent_edge(G, phi, G.coords(G.ends[x1][0]), G.coords(G.ends[x2][0]),
                                  Plane(j, a), Plane(j, (a + 1) % G.r), c1, c2)
    if run.step is not None:
        run.step.claim = got[0]


def find_safe_adjacent_edge(G: TorusInstance, phi, u1, u2, Q1: Plane, Q2: Plane, c1: int, c2: int):
    """Return ("i", edge) or ("ii", edge) per the two-clause claim, or
    ("bypass", None) for d = 2 when u_1 and u_2 are joined by an uncolored edge.

    (i): an edge of Q_1 at u_1 avoiding u_2 such that it and its copy in Q_2
    are uncolored and touch no other edge colored c_1.  (ii) is the same at
    u_2 with c_2.
    """
    pre = phi.colors if isinstance(phi, PartialEdgeColoring) else dict(phi)
    vu1 = u1 if isinstance(u1, int) else G.vertex(u1)
    vu2 = u2 if isinstance(u2, int) else G.vertex(u2)
    j = Q1.j
    delta = (Q2.level - Q1.level) % G.r

    def ok(v, other, c):
        for a in G.inc[v]:
            if G.dim_of(a) == j or other in G.ends[a]:
                continue
            b = G.translate_edge(a, j, delta)
            if a in pre or b in pre:
                continue
            bad = False
            for x in (a, b):
                p, q = G.ends[x]
                for f in G.inc[p] + G.inc[q]:
                    if f != x and pre.get(f) == c and G.dim_of(f) != j:
                        bad = True
            if not bad:
                return a
        return None

    a = ok(vu1, vu2, c1)
    if a is not None:
        return ("i", G.edge_id(a))
    b = ok(vu2, vu1, c2)
    if b is not None:
        return ("ii", G.edge_id(b))
    if G.d == 2:
        link = [x for x in G.inc[vu1] if vu2 in G.ends[x] and G.dim_of(x) != j]
        if link and link[0] not in pre:
            return ("bypass", None)
    raise ClaimViolated("neither clause of the safe-edge claim holds")


def lemma_odd_two_shared(G: TorusInstance, phi: PartialEdgeColoring, D1) -> ExtensionResult:
    return _lemma_entry(G, phi, D1, OddCase.TwoEdgesShared)


_LEMMAS = {
    OddCase.EmptyDimension: _empty_dimension,
    OddCase.TwoFree: _two_free,
    OddCase.OneEdgeNotFree: _one_not_free,
    OddCase.TwoEdgesShared: _two_shared,
}


def _hypothesis(G, pre, j, kind) -> bool:
    dims = by_dim(G, pre)
    other = {c for i in range(1, G.d + 1) if i != j for c in dims[i].values()}
    own = set(dims[j].values())
    if kind == OddCase.EmptyDimension:
        return not dims[j]
    if kind == OddCase.TwoFree:
        return 0 < len(dims[j]) <= 2 and not own & other
    if kind == OddCase.OneEdgeNotFree:
        return len(dims[j]) == 1 and bool(own & other)
    return len(dims[j]) == 2 and bool(own & other)


# -- public entry points ----------------------------------------------------------------------------

def _prepare(G: TorusInstance, phi, allowed):
    if G.is_even:
        raise InvalidParameters("extend_odd needs an odd cycle length")
    if G.r == 3:
        raise UnsupportedGirth("C_3 is not covered: the theorem needs cycle length >= 5")
    pal = tuple(sorted(allowed)) if allowed is not None else tuple(range(1, 2 * G.d + 2))
    if len(pal) != 2 * G.d + 1:
        raise InvalidParameters(f"need exactly {2 * G.d + 1} allowed colors")
    pre = dict(phi.colors if isinstance(phi, PartialEdgeColoring) else phi)
    check_input(G, pre, pal)
    if len(pre) > 2 * G.d:
        raise PreconditionViolated(f"{len(pre)} precolored edges, at most {2 * G.d} allowed")
    return pre, pal


def _result(G, run, col, pal):
    t = max(max(pal), 2 * G.d + 1)
    return ExtensionResult(PartialEdgeColoring(G, t, col), run.trace,
                           "oracle_fallback" if run.fallback else "constructive")


def _lemma_entry(G, phi, D1, kind, allowed=None):
    pre, pal = _prepare(G, phi, allowed)
    j = D1.j if isinstance(D1, Dimension) else int(D1)
    if G.d < 2 or not _hypothesis(G, pre, j, kind):
        raise HypothesisNotMet(f"{kind.value} does not apply to dimension {j}")
    run = Run(_extend, _plane_limit)
    tag = CaseTag(kind)
    col = run_lemma(run, G, pre, pal, 0, j, tag,
                    lambda: _LEMMAS[kind](run, G, pre, pal, j, tag, 0))
    return _result(G, run, col, pal)


def extend_odd(G: TorusInstance, phi, allowed=None) -> ExtensionResult:
    """Extend a proper precoloring of <= 2d edges of C_{2k+1}^d to 2d+1 colors."""
    pre, pal = _prepare(G, phi, allowed)
    run = Run(_extend, _plane_limit)
    col = _extend(run, G, pre, pal, 0)
    return _result(G, run, col, pal)


def extend_odd_dict(G: TorusInstance, pre: dict, pal=None):
    """Fast path for campaigns: returns (coloring dict, trace, fallback flag)."""
    pal = tuple(range(1, 2 * G.d + 2)) if pal is None else tuple(pal)
    run = Run(_extend, _plane_limit)
    col = _extend(run, G, pre, pal, 0)
    return col, run.trace, run.fallback
