"""Verification campaigns, sharpness searches and the distance-3 hunt.

A campaign streams precolorings (or precolored matchings), runs the
constructive extension on each, re-validates the output and tallies the
outcome.  Work is cut into fixed chunks so the merged report does not
depend on how many worker processes ran it.
"""
from __future__ import annotations

import itertools
import random
import time
from collections import Counter
from dataclasses import dataclass, field
from multiprocessing import Pool

from .coloring import is_proper_dict
from .errors import BudgetExceeded, InvalidParameters, TorusError
from .extend_common import ProofGap, verify
from .extend_even import extend_even_dict
from .extend_odd import extend_odd_dict
from .matching import extend_matching_dict, neighbourhood, swap_certificate
from .oracle import (compatibility_lists, enumeration_cap, is_proper_dict_local,
                     iter_matchings, iter_precolorings, sample_matchings,
                     sample_precolorings, solve_dict)
from .torus import TorusInstance, build_torus, edge_distance_int

CHUNK = 2000
THEOREMS = ("even", "odd", "matching4")


@dataclass
class CampaignReport:
    r: int
    d: int
    theorem: str
    mode: str
    seed: int
    tested: int = 0
    extended_constructive: int = 0
    extended_fallback: int = 0
    failures: int = 0
    oracle_checked: int = 0
    tags: Counter = field(default_factory=Counter)
    fallbacks: Counter = field(default_factory=Counter)
    failure_examples: list = field(default_factory=list)
    wall_time: float = 0.0

    def merge(self, part: "CampaignReport"):
        self.tested += part.tested
        self.extended_constructive += part.extended_constructive
        self.extended_fallback += part.extended_fallback
        self.failures += part.failures
        self.oracle_checked += part.oracle_checked
        self.tags.update(part.tags)
        self.fallbacks.update(part.fallbacks)
        self.failure_examples.extend(part.failure_examples)

    def consistent(self) -> bool:
        return self.tested == self.extended_constructive + self.extended_fallback + self.failures

    def to_json(self):
        return {
            "instance": {"r": self.r, "d": self.d, "theorem": self.theorem},
            "mode": self.mode, "seed": self.seed,
            "counts": {"tested": self.tested,
                       "extended_constructive": self.extended_constructive,
                       "extended_fallback": self.extended_fallback,
                       "failures": self.failures,
                       "oracle_checked": self.oracle_checked},
            "tags": dict(sorted(self.tags.items())),
            "fallbacks": dict(sorted(self.fallbacks.items())),
            "failure_examples": self.failure_examples[:10],
            "wall_time": round(self.wall_time, 3),
        }

    def summary(self) -> str:
        return (f"{self.theorem} C_{self.r}^{self.d} {self.mode}: tested {self.tested}, "
                f"constructive {self.extended_constructive}, fallback {self.extended_fallback}, "
                f"failures {self.failures} ({self.wall_time:.1f}s)")


def check_family(theorem: str, r: int, d: int):
    if theorem not in THEOREMS:
        raise InvalidParameters(f"unknown theorem {theorem!r}")
    if theorem in ("even", "matching4") and (r % 2 or r < 4):
        raise InvalidParameters(f"{theorem} needs an even r >= 4")
    if theorem == "odd" and (r % 2 == 0 or r < 5):
        raise InvalidParameters("odd needs an odd r >= 5")
    if d < 1:
        raise InvalidParameters("d must be >= 1")


def palette_size(theorem: str, d: int) -> int:
    return 2 * d + 1 if theorem == "odd" else 2 * d


def edge_budget(theorem: str, d: int) -> int:
    return {"even": 2 * d - 1, "odd": 2 * d}[theorem]


# -- workers ------------------------------------------------------------------------

def _run_one(G, theorem, pre, pal):
    """(tag, fallback reasons) for one instance; raises on a bad result."""
    if theorem == "matching4":
        col, steps = extend_matching_dict(G, pre)
        if not is_proper_dict(G, col) or any(col[e] != c for e, c in pre.items()):
            raise ProofGap("matching extension is not a proper extension")
        used: set = set()
        for s in steps:
            mine = {x for q in s.swaps for x in q}
            if used & mine or not mine <= neighbourhood(G, s.edge):
                raise ProofGap("swap neighbourhoods overlap")
            used |= mine
        return ",".join(sorted({s.case for s in steps})) or "empty", []
    fn = extend_even_dict if theorem == "even" else extend_odd_dict
    col, trace, _ = fn(G, pre, pal)
    verify(G, col, pre, pal)
    top = [s for s in trace if s.depth == 0]
    tag = str(top[0].tag) if top else "d=1"
    reasons = [f"{s.r},{s.d}:{s.tag}" for s in trace if s.fallback]
    return tag, reasons


def _work(args):
    theorem, r, d, mode, seed, chunk, oracle_check = args
    G = build_torus(r, d)
    pal = tuple(range(1, palette_size(theorem, d) + 1))
    rep = CampaignReport(r, d, theorem, mode, seed)
    for pre in chunk:
        rep.tested += 1
        try:
            tag, reasons = _run_one(G, theorem, pre, pal)
        except (TorusError, ProofGap) as exc:
            rep.failures += 1
            rep.failure_examples.append({"precolored": sorted(pre.items()), "error": repr(exc)})
            continue
        rep.tags[tag] += 1
        if reasons:
            rep.extended_fallback += 1
            rep.fallbacks.update(reasons)
        else:
            rep.extended_constructive += 1
        if oracle_check:
            col, _ = solve_dict(G, pre, pal)
            rep.oracle_checked += 1
            if col is None:
                # the constructive result above is a valid extension, so this
                # would be a solver bug
                rep.failures += 1
                rep.extended_constructive -= not reasons
                rep.extended_fallback -= bool(reasons)
                rep.failure_examples.append({"precolored": sorted(pre.items()),
                                             "error": "oracle disagrees"})
    return rep


# -- instance streams -----------------------------------------------------------------

def precoloring_stream(G, theorem, mode, samples, seed, max_edges=None, exact=False, cap=None):
    t = palette_size(theorem, G.d)
    k = edge_budget(theorem, G.d) if max_edges is None else max_edges
    if mode == "exhaustive":
        for pre in iter_precolorings(G, t, k, exact, cap):
            yield dict(pre)
    elif mode == "sample":
        yield from sample_precolorings(G, t, k, samples, seed, exact)
    else:
        raise InvalidParameters(f"unknown mode {mode!r}")


def matching_stream(G, mode, samples, seed, cap=None, t_distance=4, palette=None):
    """Precolored distance-t matchings: every matching with every coloring
    (exhaustive), or seeded random matchings with random colors (sample)."""
    t = 2 * G.d if palette is None else palette
    if mode == "exhaustive":
        cap = enumeration_cap() if cap is None else cap
        total = 0
        Ms = list(iter_matchings(G, t_distance, range(0, G.n_edges + 1)))
        for M in Ms:
            total += t ** len(M)
            if total > cap:
                raise BudgetExceeded(f"more than {cap} precolored matchings")
        for M in Ms:
            for cs in itertools.product(range(1, t + 1), repeat=len(M)):
                yield dict(zip(M, cs))
    elif mode == "sample":
        rng = random.Random(seed)
        top = max_matching_size(G, t_distance, seed)
        for M in sample_matchings(G, t_distance, range(1, top + 1), samples, seed):
            yield {e: rng.randint(1, t) for e in M}
    else:
        raise InvalidParameters(f"unknown mode {mode!r}")


def max_matching_size(G: TorusInstance, t_distance: int, seed: int = 0, tries: int = 200) -> int:
    """Largest distance-t matching found by seeded random greedy passes."""
    rng = random.Random(seed)
    ok = [set(x) for x in compatibility_lists(G, t_distance)]
    best = 0
    order = list(range(G.n_edges))
    for _ in range(tries):
        rng.shuffle(order)
        chosen: list = []
        for e in order:
            if all(e in ok[f] or f in ok[e] for f in chosen):
                chosen.append(e)
        best = max(best, len(chosen))
    return best


def _chunks(stream, size):
    it = iter(stream)
    while True:
        block = list(itertools.islice(it, size))
        if not block:
            return
        yield block


def run_campaign(theorem: str, r: int, d: int, mode: str = "sample", samples: int = 1000,
                 seed: int = 0, budget: int | None = None, jobs: int = 1, max_edges=None,
                 exact: bool = False, oracle_check: bool = False) -> CampaignReport:
    check_family(theorem, r, d)
    G = build_torus(r, d)
    if theorem == "matching4":
        stream = matching_stream(G, mode, samples, seed, budget)
    else:
        stream = precoloring_stream(G, theorem, mode, samples, seed, max_edges, exact, budget)
    report = CampaignReport(r, d, theorem, mode, seed)
    start = time.perf_counter()
    tasks = ((theorem, r, d, mode, seed, c, oracle_check) for c in _chunks(stream, CHUNK))
    if jobs > 1:
        with Pool(jobs) as pool:
            for part in pool.imap(_work, tasks):
                report.merge(part)
    else:
        for t in tasks:
            report.merge(_work(t))
    report.wall_time = time.perf_counter() - start
    return report


# -- sharpness ------------------------------------------------------------------------

def _color_patterns(k: int, t: int):
    """Color sequences of length k over [1, t] up to renaming colors: each
    new color is the smallest unused one."""
    def rec(prefix, top):
        if len(prefix) == k:
            yield tuple(prefix)
            return
        for c in range(1, min(top + 1, t) + 1):
            prefix.append(c)
            yield from rec(prefix, max(top, c))
            prefix.pop()
    yield from rec([], 0)


def sharpness_search(G: TorusInstance, budget: int | None = None, ref_edge: int = 0):
    """Look for a non-extendable proper precoloring of chi'(G) edges with
    chi'(G) colors.  Edge sets are tried in order of distance from ref_edge
    (ref_edge itself last), colorings up to renaming of colors.  Returns a dict report.
    """
    t = G.chromatic_index
    k = t
    budget = enumeration_cap() if budget is None else budget
    order = sorted(range(G.n_edges),
                   key=lambda e: (G.n_edges if e == ref_edge else edge_distance_int(G, ref_edge, e), e))
    checked = 0
    for S in itertools.combinations(order, k):
        for cs in _color_patterns(k, t):
            pre = dict(zip(S, cs))
            if not is_proper_dict_local(G, pre):
                continue
            checked += 1
            if checked > budget:
                return {"found": False, "exhausted": False, "checked": checked - 1}
            col, nodes = solve_dict(G, pre, range(1, t + 1))
            if col is None:
                return {"found": True, "precolored": sorted(pre.items()), "palette": t,
                        "nodes": nodes, "checked": checked}
    return {"found": False, "exhausted": True, "checked": checked}


# -- distance-3 conjecture ------------------------------------------------------------

def hunt_distance3(G: TorusInstance, samples: int, seed: int, palette: int | None = None,
                   node_limit: int | None = 10 ** 6, cross_check: bool = False) -> dict:
    """Sample precolored distance-3 matchings and decide whether each extends.

    Half the samples put one color on every edge, the rest use uniform
    random colors.  An instance counts as extendable once the swap
    construction produces a verified extension; otherwise the oracle
    decides, and instances it cannot settle within node_limit are counted
    as undecided.  With cross_check the oracle also runs on instances the
    swap construction settled, and any disagreement is reported.
    """
    t = 2 * G.d if palette is None else palette
    out = {"instance": {"r": G.r, "d": G.d}, "palette": t, "samples": samples, "seed": seed}
    if t < 2 * G.d:
        out.update(status="vacuous-false", tested=0, counterexamples=[],
                   note=f"a {2 * G.d}-regular graph has no proper {t}-edge coloring")
        return out
    top = max_matching_size(G, 3, seed)
    if top < 2:
        out.update(status="vacuous", tested=0, counterexamples=[])
        return out
    rng = random.Random(seed)
    counts = Counter()
    nodes = 0
    bad = []
    for i, M in enumerate(sample_matchings(G, 3, range(2, top + 1), samples, seed)):
        if i % 2 == 0:
            c = rng.randint(1, t)
            pre = {e: c for e in M}
        else:
            pre = {e: rng.randint(1, t) for e in M}
        counts["tested"] += 1
        certified = t == 2 * G.d and swap_certificate(G, pre) is not None
        if certified:
            counts["by_swaps"] += 1
            if not cross_check:
                continue
        try:
            col, n = solve_dict(G, pre, range(1, t + 1), node_limit)
        except BudgetExceeded:
            counts["undecided"] += not certified
            continue
        nodes += n
        if certified:
            counts["oracle_agrees"] += col is not None
            counts["oracle_disagrees"] += col is None
            continue
        if col is not None:
            counts["by_oracle"] += 1
            continue
        bad.append({"r": G.r, "d": G.d, "min_distance": 3,
                    "precolored": [{"edge": {"base": list(G.coords(G.base_of(e))), "dim": G.dim_of(e)},
                                    "color": pre[e]} for e in sorted(pre)],
                    "verdict": "not extendable", "nodes": n})
    status = "counterexample" if bad else ("incomplete" if counts["undecided"] else "clean")
    out.update(status=status, tested=counts["tested"], max_size=top,
               extended_by_swaps=counts["by_swaps"], extended_by_oracle=counts["by_oracle"],
               undecided=counts["undecided"], oracle_nodes=nodes, counterexamples=bad)
    if cross_check:
        out.update(oracle_agrees=counts["oracle_agrees"],
                   oracle_disagrees=counts["oracle_disagrees"])
        if counts["oracle_disagrees"]:
            out["status"] = "inconsistent"
    return out
