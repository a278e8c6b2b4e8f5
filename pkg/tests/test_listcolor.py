import itertools

import pytest

from torus_ec.errors import AllListsIdentical, PreconditionViolated
from torus_ec.listcolor import (color_cycle_from_lists, color_even_cycle, color_odd_cycle,
                                color_path, color_path_from_lists)


def proper_cycle(C, L, out):
    n = len(C)
    return (all(out[e] in L[e] for e in C)
            and all(out[C[i]] != out[C[(i + 1) % n]] for i in range(n)))


def brute_cycle(C, L):
    return any(all(x[i] != x[(i + 1) % len(C)] for i in range(len(C)))
               for x in itertools.product(*[sorted(L[e]) for e in C]))


def test_even_cycle_examples():
    C = list("abcd")
    out = color_even_cycle(C, {e: {1, 2} for e in C})
    assert [out[e] for e in C] == [1, 2, 1, 2]
    L = dict(zip(C, [{1, 2}, {2, 3}, {3, 4}, {4, 1}]))
    assert proper_cycle(C, L, color_even_cycle(C, L))
    C6 = list(range(6))
    L6 = dict(zip(C6, [{1, 2}, {1, 2}, {1, 3}, {1, 3}, {2, 3}, {2, 3}]))
    assert brute_cycle(C6, L6) and proper_cycle(C6, L6, color_even_cycle(C6, L6))
    with pytest.raises(PreconditionViolated):
        color_even_cycle(list("abc"), {e: {1, 2} for e in "abc"})
    with pytest.raises(PreconditionViolated):
        color_even_cycle(C, {"a": {1}, "b": {1, 2}, "c": {1, 2}, "d": {1, 2}})


def test_odd_cycle_examples():
    C = list(range(5))
    with pytest.raises(AllListsIdentical):
        color_odd_cycle(C, {e: {1, 2} for e in C})
    L = {e: {1, 2} for e in C}
    L[4] = {1, 3}
    assert proper_cycle(C, L, color_odd_cycle(C, L))
    C3 = list("xyz")
    L3 = dict(zip(C3, [{1, 2}, {2, 3}, {1, 3}]))
    out = color_odd_cycle(C3, L3)
    assert [out[e] for e in C3] in ([1, 2, 3], [2, 3, 1])
    L3b = {e: {1, 2, 3} for e in C3}
    assert proper_cycle(C3, L3b, color_odd_cycle(C3, L3b))


def test_paths():
    assert color_path(["e"], {"e": {5}}) == {"e": 5}
    assert list(color_path("abc", {"a": {1}, "b": {1, 2}, "c": {1, 2}}).values()) == [1, 2, 1]
    L = {"a": {2}, "b": {1, 2}, "c": {1, 2}, "d": {1, 2}}
    assert list(color_path("abcd", L).values()) == [2, 1, 2, 1]
    assert color_path_from_lists("ab", {"a": {1}, "b": {1}}) is None
    assert color_path_from_lists("ab", {"a": {1, 2}, "b": {1}}) == {"a": 2, "b": 1}


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_dp_cycle_matches_brute_force(n):
    C = list(range(n))
    opts = [{1}, {2}, {1, 2}, {1, 3}, {2, 3}, {1, 2, 3}]
    for ls in itertools.product(opts, repeat=n):
        L = dict(zip(C, ls))
        out = color_cycle_from_lists(C, L)
        assert (out is not None) == brute_cycle(C, L)
        if out is not None:
            assert proper_cycle(C, L, out)
