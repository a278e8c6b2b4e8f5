"""List edge coloring of cycles and paths.

Edges are given as a sequence of arbitrary hashable labels in cyclic (or
path) order; lists map each label to an iterable of admissible colors.
Every function returns a dict label -> color.  Ties are always broken by
the smallest admissible color.
"""
from __future__ import annotations

from typing import Hashable, Mapping, Sequence

from .errors import AllListsIdentical, PreconditionViolated


def _prepare(C, L, min_size, what):
    C = list(C)
    if not C:
        raise PreconditionViolated(f"{what}: empty edge sequence")
    if len(set(C)) != len(C):
        raise PreconditionViolated(f"{what}: repeated edge label")
    lists = []
    for e in C:
        s = set(L[e])
        if len(s) < min_size:
            raise PreconditionViolated(f"{what}: list of {e!r} has fewer than {min_size} colors")
        lists.append(s)
    return C, lists


def _greedy_from(C, lists, k, c):
    """Color position k with c, then go around greedily; None if stuck."""
    n = len(C)
    out = [None] * n
    out[k] = c
    prev = c
    for step in range(1, n):
        i = (k + step) % n
        forbid = {prev}
        if step == n - 1:
            forbid.add(c)
        opts = sorted(lists[i] - forbid)
        if not opts:
            return None
        out[i] = prev = opts[0]
    return out


def _cycle_with_distinct_lists(C, lists):
    n = len(C)
    for i in range(n):
        j = (i + 1) % n
        extra = lists[j] - lists[i]
        if extra:
            # e_j gets a color e_i cannot use, so e_i (colored last) only has
            # to avoid its other neighbour.
            return _greedy_from(C, lists, j, min(extra))
    return None


def color_even_cycle(C: Sequence[Hashable], L: Mapping) -> dict:
    """Every even cycle is 2-edge-choosable."""
    C, lists = _prepare(C, L, 2, "color_even_cycle")
    if len(C) % 2:
        raise PreconditionViolated("color_even_cycle: cycle length is odd")
    if all(s == lists[0] for s in lists):
        a, b = sorted(lists[0])[:2]
        return {e: (a if i % 2 == 0 else b) for i, e in enumerate(C)}
    out = _cycle_with_distinct_lists(C, lists)
    return dict(zip(C, out))


def color_odd_cycle(C: Sequence[Hashable], L: Mapping) -> dict:
    """Odd cycle with lists of size >= 2, colorable unless the lists are all
    the same 2-set."""
    C, lists = _prepare(C, L, 2, "color_odd_cycle")
    if len(C) % 2 == 0:
        raise PreconditionViolated("color_odd_cycle: cycle length is even")
    if all(s == lists[0] for s in lists):
        if len(lists[0]) == 2:
            raise AllListsIdentical("all lists equal the same two colors")
        a, b, c = sorted(lists[0])[:3]
        out = [a if i % 2 == 0 else b for i in range(len(C))]
        out[-1] = c
        return dict(zip(C, out))
    out = _cycle_with_distinct_lists(C, lists)
    return dict(zip(C, out))


def color_path(P: Sequence[Hashable], L: Mapping) -> dict:
    """Greedy list coloring of a path whose lists after the first have >= 2 colors."""
    P = list(P)
    if not P:
        return {}
    first = set(L[P[0]])
    if not first:
        raise PreconditionViolated("color_path: first list is empty")
    _, rest = _prepare(P[1:], L, 2, "color_path") if len(P) > 1 else (None, [])
    out = {P[0]: min(first)}
    prev = out[P[0]]
    for e, s in zip(P[1:], rest):
        prev = min(s - {prev})
        out[e] = prev
    return out


def color_cycle_from_lists(C: Sequence[Hashable], L: Mapping):
    """Exact list coloring of a cycle (any lists, singletons allowed).

    Dynamic program over the cycle; returns the lexicographically smallest
    coloring in cycle order, or None if no proper list coloring exists.
    """
    C = list(C)
    n = len(C)
    lists = [sorted(set(L[e])) for e in C]
    if any(not s for s in lists):
        return None
    if n == 1:
        return None
    for x in lists[0]:
        # ok[i] = colors usable at position i with a valid continuation
        ok = [None] * n
        last = [c for c in lists[n - 1] if c != x]
        ok[n - 1] = set(last)
        for i in range(n - 2, 0, -1):
            nxt = ok[i + 1]
            ok[i] = {c for c in lists[i] if nxt - {c}}
        if n > 1 and not (ok[1] - {x}):
            continue
        out = [x]
        prev = x
        for i in range(1, n):
            prev = min(ok[i] - {prev})
            out.append(prev)
        return dict(zip(C, out))
    return None


def color_path_from_lists(P: Sequence[Hashable], L: Mapping):
    """Exact list coloring of a path; None if impossible."""
    P = list(P)
    n = len(P)
    if n == 0:
        return {}
    lists = [set(L[e]) for e in P]
    ok = [None] * n
    ok[n - 1] = set(lists[n - 1])
    for i in range(n - 2, -1, -1):
        nxt = ok[i + 1]
        ok[i] = {c for c in lists[i] if nxt - {c}}
    if not ok[0]:
        return None
    out = {}
    prev = None
    for i in range(n):
        prev = min(ok[i] - {prev})
        out[P[i]] = prev
    return out
