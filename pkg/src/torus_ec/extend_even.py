"""Extension of a proper precoloring of at most 2d-1 edges of C_{2k}^d to a
proper 2d-edge coloring.

The algorithm recurses on the planes of a chosen dimension D_1 and splits
into three cases: D_1 has no precolored edge (lemma_empty_dimension), D_1
has at most two precolored edges whose colors are used nowhere else
(lemma_two_free_colors), or neither (lemma_no_free_dimension).  The
dimension D_1 is then finished by list coloring its layers or by a fixed
color per gap, sometimes followed by a swap on a bicolored 4-cycle.
"""
from __future__ import annotations

from .coloring import PartialEdgeColoring
from .errors import HypothesisNotMet, InvalidParameters, PreconditionViolated
from .extend_common import (CaseTag, EvenCase, ExtensionResult, Frame, ProofGap, Run,
                            by_dim, by_level, check_input, copy_plane, do_swap,
                            extend_plane, fill_planes_uniform, finish_dimension,
                            level_of, minus, plane_seen, run_lemma, seen, verify)
from .torus import Dimension, TorusInstance


def _plane_limit(dsub: int) -> int:
    return 2 * dsub - 1


def _base_cycle(G: TorusInstance, pre: dict, pal) -> dict:
    """d = 1: alternate two colors around the even cycle, matching <= 1 pin."""
    a, b = sorted(pal)[:2]
    if len(pre) > 1:
        raise ProofGap("more than one precolored edge on a cycle")
    if pre:
        (e0, c0), = pre.items()
        other = b if c0 == a else a
        if c0 not in (a, b):
            raise ProofGap("precolored color outside the palette")
        return {e: (c0 if (e - e0) % 2 == 0 else other) for e in range(G.r)}
    return {e: (a if e % 2 == 0 else b) for e in range(G.r)}


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
    for j in range(1, G.d + 1):
        if not dims[j]:
            return j, CaseTag(EvenCase.EmptyDimension)
    for j in range(1, G.d + 1):
        if len(dims[j]) <= 2:
            own = set(dims[j].values())
            other = {c for i in range(1, G.d + 1) if i != j for c in dims[i].values()}
            if not own & other:
                return j, CaseTag(EvenCase.TwoFreeColors)
    for j in range(1, G.d + 1):
        if len(dims[j]) == 1:
            return j, CaseTag(EvenCase.NoFreeDimension)
    raise HypothesisNotMet("no dimension with exactly one precolored edge")


def dispatch_case(G: TorusInstance, phi: PartialEdgeColoring):
    """Choose D_1 and the case that applies to phi."""
    j, tag = _dispatch(G, phi.colors)
    return Dimension(j), tag


# -- lemma: some dimension has no precolored edge -----------------------------------------

def _empty_dimension(run, G, pre, pal, j, tag, depth):
    planes = by_level(G, j, pre)
    used = sorted(set(pre.values()))
    r = G.r
    if len(planes) <= 1:
        tag.path = "one-plane"
        a = next(iter(planes)) if planes else 0
        pp = planes.get(a, {})
        # two colors used by the precoloring (pad with unused ones)
        c1, c2 = (used + [c for c in pal if c not in used])[:2]
        sub = {e: c for e, c in pp.items() if c not in (c1, c2)}
        f = extend_plane(run, G, j, a, sub, minus(pal, c1, c2), depth)
        f.update(pp)
        col = {}
        for b in range(r):
            col.update(copy_plane(G, j, f, a, b))
        finish_dimension(G, col, j, pal)
        return col

    unused = [c for c in pal if c not in set(used)]
    c1 = unused[0]
    if len(planes) == 2:
        tag.path = "two-planes"
        (l1, p1), (li, pi) = sorted(planes.items(), key=lambda kv: (-len(kv[1]), kv[0]))
        c2 = min(p1.values())
        p = minus(pal, c1, c2)
        f1 = extend_plane(run, G, j, l1, {e: c for e, c in p1.items() if c != c2}, p, depth)
        f1.update({e: c for e, c in p1.items() if c == c2})
        fi = extend_plane(run, G, j, li, {e: c for e, c in pi.items() if c != c2}, p, depth)
        fi.update({e: c for e, c in pi.items() if c == c2})
        # number the planes so that Q_2 is not the other precolored plane
        s = 1 if (li - l1) % r != 1 else -1
        fr = Frame(G, j, l1, s)
        col = dict(f1)
        col.update(fi)
        col.update(copy_plane(G, j, f1, l1, fr.level(2)))
        for m in range(3, r + 1):
            lv = fr.level(m)
            if lv != li:
                col.update(copy_plane(G, j, fi, li, lv))
        for m in range(1, r + 1):
            if m % 2 == 1:
                for e in fr.gap(m):
                    u, w = G.ends[e]
                    miss = [c for c in pal if c != c1 and c not in seen(G, col, u)
                            and c not in seen(G, col, w)]
                    if not miss:
                        raise ProofGap("no missing color on a paired gap")
                    col[e] = miss[0]
            else:
                for e in fr.gap(m):
                    col[e] = c1
        return col

    tag.path = "many-planes"
    fr = Frame(G, j, min(planes), 1)
    gapcol = {}
    for t in range(1, r // 2 + 1):
        pair_used = set(planes.get(fr.level(2 * t - 1), {}).values()) | set(
            planes.get(fr.level(2 * t), {}).values())
        ct = [c for c in pal if c != c1 and c not in pair_used]
        gapcol[2 * t - 1] = ct[0]
        gapcol[2 * t] = c1
    return fill_planes_uniform(run, G, j, fr, gapcol, planes, pal, depth)


def lemma_empty_dimension(G: TorusInstance, phi: PartialEdgeColoring, D1) -> ExtensionResult:
    return _lemma_entry(G, phi, D1, EvenCase.EmptyDimension)


# -- lemma: at most two precolored edges in D_1, with private colors ----------------------

def _two_free_colors(run, G, pre, pal, j, tag, depth):
    dims = by_dim(G, pre)
    d1 = dims[j]
    rest = {e: c for e, c in pre.items() if e not in d1}
    planes = by_level(G, j, rest)
    r = G.r
    rest_colors = set(rest.values())

    if len(d1) == 1 and len(planes) == 1:
        tag.path = "single-edge-one-plane"
        (e, c1), = d1.items()
        (a, pp), = planes.items()
        c2 = min(pp.values())
        f = extend_plane(run, G, j, a, {x: c for x, c in pp.items() if c != c2},
                         minus(pal, c1, c2), depth)
        f.update({x: c for x, c in pp.items() if c == c2})
        col = {}
        for b in range(r):
            col.update(copy_plane(G, j, f, a, b))
        finish_dimension(G, col, j, pal, pins={e: c1})
        return col

    d1_colors = sorted(set(d1.values()))
    c1 = d1_colors[0]
    if len(d1_colors) == 2:
        c2 = d1_colors[1]
    else:
        c2 = min(c for c in pal if c != c1 and c not in rest_colors)

    # try to color D_1 with c1, c2 alone, layer by layer
    two = _two_color_dimension(G, j, d1, c1, c2)
    if two is not None:
        tag.path = "two-colorable"
        col = {}
        p = minus(pal, c1, c2)
        for lv in range(r):
            col.update(extend_plane(run, G, j, lv, planes.get(lv, {}), p, depth))
        col.update(two)
        return col

    c3 = min(c for c in pal if c not in set(pre.values()) and c not in (c1, c2))
    ea = min(e for e, c in d1.items() if c == c1)
    eb = next(e for e in d1 if e != ea)
    fr = Frame(G, j, level_of(G, j, ea) + 1, 1)
    i = fr.gap_index_of_edge(eb)
    gapcol = {r: c1, i: d1[eb]}
    if d1[eb] == c2:
        if i % 2:
            raise ProofGap("parity of the blocking path is inconsistent")
        tag.path = "path-even"
        for m in range(1, i):
            gapcol[m] = c3 if m % 2 == 1 else c2
        for m in range(i + 1, r):
            gapcol[m] = c3 if (m - i - 1) % 2 == 0 else c1
    else:
        if i % 2 == 0 or i > r - 3:
            raise ProofGap("parity of the blocking path is inconsistent")
        tag.path = "path-odd"
        for m in range(1, i):
            gapcol[m] = c3 if m % 2 == 1 else c2
        for m in range(i + 1, r):
            gapcol[m] = c2 if (m - i - 1) % 2 == 0 else c3
    return fill_planes_uniform(run, G, j, fr, gapcol, planes, pal, depth)


def _two_color_dimension(G, j, d1, c1, c2):
    """Proper coloring of dimension j with {c1, c2} agreeing with d1, or None."""
    r = G.r
    by_layer = {}
    _, vmap, _, proj = G._plane_tables(j)
    n = G.n_vertices
    for e, c in d1.items():
        v = e % n
        t = proj_vertex(G, j, v)
        by_layer.setdefault(t, []).append((level_of(G, j, e), c))
    out = {}
    for t in range(G.n_layers()):
        edges = G.layer_edges(j, t)
        pins = by_layer.get(t, [])
        if pins:
            q0, x = pins[0]
        else:
            q0, x = 0, c1
        y = c2 if x == c1 else c1
        for q, c in pins[1:]:
            want = x if (q - q0) % 2 == 0 else y
            if want != c:
                return None
        for q in range(r):
            out[edges[q]] = x if (q - q0) % 2 == 0 else y
    return out


def proj_vertex(G: TorusInstance, j: int, v: int) -> int:
    """Index of the layer of dimension j through vertex v."""
    p = G.pw[j]
    return (v % p) + (v // (p * G.r)) * p


def lemma_two_free_colors(G: TorusInstance, phi: PartialEdgeColoring, D1) -> ExtensionResult:
    return _lemma_entry(G, phi, D1, EvenCase.TwoFreeColors)


# -- lemma: every dimension shares colors or carries >= 3 edges ------------------------------

def _no_free_dimension(run, G, pre, pal, j, tag, depth):
    dims = by_dim(G, pre)
    if len(dims[j]) != 1:
        raise ProofGap("D_1 must carry exactly one precolored edge")
    (e, c1), = dims[j].items()
    rest = {x: c for x, c in pre.items() if x != e}
    planes = by_level(G, j, rest)
    used = set(pre.values())
    free = [c for c in pal if c not in used and c != c1]
    if len(free) < 2:
        raise ProofGap("fewer than two unused colors")
    c2, c3 = free[0], free[1]
    r = G.r
    ge = level_of(G, j, e)           # e joins planes ge and ge+1
    u, w = G.ends[e]                 # u in plane ge, w in plane ge+1

    if len(planes) <= 1:
        a = next(iter(planes)) if planes else ge
        pp = planes.get(a, {})
        f = extend_plane(run, G, j, a, {x: c for x, c in pp.items() if c != c1},
                         minus(pal, c1, c2), depth)
        f.update({x: c for x, c in pp.items() if c == c1})
        col = {}
        for b in range(r):
            col.update(copy_plane(G, j, f, a, b))
        if a in (ge, (ge + 1) % r) or c1 not in plane_seen(G, col, u, j):
            tag.path = "1/incident" if a in (ge, (ge + 1) % r) else "1/no-conflict"
            finish_dimension(G, col, j, pal, pins={e: c1})
            return col
        tag.path = "1/swap"
        e1 = next(x for x in G.inc[u] if G.dim_of(x) != j and col.get(x) == c1)
        _, _, e3, e2 = _square(G, e, e1)
        finish_dimension(G, col, j, pal, pins={e: c2, e3: c2})
        do_swap(run, G, col, e, e1)
        return col

    if len(planes) == 2:
        lvls = sorted(planes)
        incident = [lv for lv in lvls if lv in (ge, (ge + 1) % r)]
        if not incident:
            tag.path = "2/apart"
            p = minus(pal, c2, c3)
            col = {}
            for lv in lvls:
                col.update(extend_plane(run, G, j, lv, planes[lv], p, depth))
            f0 = extend_plane(run, G, j, ge, {}, p, depth)
            for lv in range(r):
                if lv not in planes:
                    col.update(copy_plane(G, j, f0, ge, lv))
            fr = Frame(G, j, lvls[0], 1)
            _alternate(G, j, fr, col, c2, c3)
            e1 = next(x for x in G.inc[u] if G.dim_of(x) != j and col.get(x) == c1)
            do_swap(run, G, col, e, e1)
            return col
        if len(incident) == 1:
            tag.path = "2/one-end"
            q1 = incident[0]
            qi = next(lv for lv in lvls if lv != q1)
            s = 1 if q1 == ge else -1
            fr = Frame(G, j, q1, s)
            p = minus(pal, c2, c3)
            f1 = extend_plane(run, G, j, q1, planes[q1], p, depth)
            fi = extend_plane(run, G, j, qi, planes[qi], p, depth)
            col = dict(fi)
            for lv in range(r):
                if lv != qi:
                    col.update(copy_plane(G, j, f1, q1, lv))
            _alternate(G, j, fr, col, c2, c3)
            x = u if q1 == ge else w
            e1 = next(y for y in G.inc[x] if G.dim_of(y) != j and col.get(y) == c1)
            do_swap(run, G, col, e, e1)
            return col
        tag.path = "2/between"
        q1, q2 = ge, (ge + 1) % r
        fr = Frame(G, j, q1, 1)
        p = minus(pal, c1, c3)
        f1 = extend_plane(run, G, j, q1, {x: c for x, c in planes[q1].items() if c != c1}, p, depth)
        f1.update({x: c for x, c in planes[q1].items() if c == c1})
        f2 = extend_plane(run, G, j, q2, {x: c for x, c in planes[q2].items() if c != c1}, p, depth)
        f2.update({x: c for x, c in planes[q2].items() if c == c1})
        col = dict(f1)
        col.update(f2)
        for m in range(3, r):
            col.update(copy_plane(G, j, f2, q2, fr.level(m)))
        col.update(copy_plane(G, j, f1, q1, fr.level(r)))
        g1, g2 = fr.gap(1), fr.gap(2)
        for x in g1:
            col[x] = c1 if x == e else c3
        pal_set = set(pal)
        for t, x in enumerate(g2):
            a_, b_ = G.ends[x]
            miss = sorted(pal_set - seen(G, col, a_) - seen(G, col, b_))
            if not miss:
                raise ProofGap("no missing color between Q_2 and Q_3")
            col[x] = miss[0]
        for m in range(3, r):
            src = g1 if m % 2 == 1 else g2
            for t, x in enumerate(fr.gap(m)):
                col[x] = col[src[t]]
        for x in fr.gap(r):
            a_, b_ = G.ends[x]
            miss = sorted(pal_set - seen(G, col, a_) - seen(G, col, b_))
            if not miss:
                raise ProofGap("no missing color between Q_2k and Q_1")
            col[x] = miss[0]
        return col

    tag.path = "3/plant"
    q1, q2 = ge, (ge + 1) % r
    near = {x: c for x, c in rest.items() if c == c1}
    e1 = None
    for x in G.inc[u]:
        if G.dim_of(x) == j:
            continue
        y = G.translate_edge(x, j, 1)
        if x in rest or y in rest:
            continue
        if _touches_color(G, near, x, c1) or _touches_color(G, near, y, c1):
            continue
        e1 = x
        break
    if e1 is None:
        raise ProofGap("no edge pair to plant the color on")
    e2 = G.translate_edge(e1, j, 1)
    planes2 = by_level(G, j, rest)
    planes2.setdefault(q1, {})[e1] = c1
    planes2.setdefault(q2, {})[e2] = c1
    fr = Frame(G, j, q1, 1)
    gapcol = {m: (c2 if m % 2 == 1 else c3) for m in range(1, r + 1)}
    col = fill_planes_uniform(run, G, j, fr, gapcol, planes2, pal, depth)
    do_swap(run, G, col, e, e1)
    return col


def _touches_color(G, col, x, c) -> bool:
    a, b = G.ends[x]
    for f in G.inc[a] + G.inc[b]:
        if f != x and col.get(f) == c:
            return True
    return False


def _square(G, e, e1):
    from .torus import square_of
    return square_of(G, e, e1)


def _alternate(G, j, fr: Frame, col, a, b):
    for m in range(1, G.r + 1):
        c = a if m % 2 == 1 else b
        for x in fr.gap(m):
            col[x] = c


def lemma_no_free_dimension(G: TorusInstance, phi: PartialEdgeColoring, D1) -> ExtensionResult:
    return _lemma_entry(G, phi, D1, EvenCase.NoFreeDimension)


_LEMMAS = {
    EvenCase.EmptyDimension: _empty_dimension,
    EvenCase.TwoFreeColors: _two_free_colors,
    EvenCase.NoFreeDimension: _no_free_dimension,
}


def _hypothesis(G, pre, j, kind) -> bool:
    dims = by_dim(G, pre)
    if kind == EvenCase.EmptyDimension:
        return not dims[j]
    if kind == EvenCase.TwoFreeColors:
        other = {c for i in range(1, G.d + 1) if i != j for c in dims[i].values()}
        return 0 < len(dims[j]) <= 2 and not set(dims[j].values()) & other
    return len(dims[j]) == 1


# -- public entry points ---------------------------------------------------------------------

def _prepare(G: TorusInstance, phi, allowed):
    if not G.is_even:
        raise InvalidParameters("extend_even needs an even cycle length")
    pal = tuple(sorted(allowed)) if allowed is not None else tuple(range(1, 2 * G.d + 1))
    if len(pal) != 2 * G.d:
        raise InvalidParameters(f"need exactly {2 * G.d} allowed colors")
    pre = dict(phi.colors if isinstance(phi, PartialEdgeColoring) else phi)
    check_input(G, pre, pal)
    if len(pre) > 2 * G.d - 1:
        raise PreconditionViolated(f"{len(pre)} precolored edges, at most {2 * G.d - 1} allowed")
    return pre, pal


def _result(G, run, col, pal):
    t = max(max(pal), 2 * G.d)
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


def extend_even(G: TorusInstance, phi, allowed=None) -> ExtensionResult:
    """Extend a proper precoloring of <= 2d-1 edges of C_{2k}^d to 2d colors."""
    pre, pal = _prepare(G, phi, allowed)
    run = Run(_extend, _plane_limit)
    col = _extend(run, G, pre, pal, 0)
    return _result(G, run, col, pal)


def extend_even_dict(G: TorusInstance, pre: dict, pal=None):
    """Fast path for campaigns: returns (coloring dict, trace, fallback flag)."""
    pal = tuple(range(1, 2 * G.d + 1)) if pal is None else tuple(pal)
    run = Run(_extend, _plane_limit)
    col = _extend(run, G, pre, pal, 0)
    return col, run.trace, run.fallback
