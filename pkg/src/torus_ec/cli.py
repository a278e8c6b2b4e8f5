"""Command line interface: torus-ec {extend,verify,sharpness,hunt-distance3,export-dot}.

JSON goes to standard output (or --out), a one-line summary to standard
error.  Exit codes: 0 success, 1 improper precoloring, 2 not extendable,
3 unreadable input, 4 anything else that stops the command (hypotheses not
met, budget exceeded, campaign failures).
"""
from __future__ import annotations

import argparse
import json
import sys

from .campaign import THEOREMS, hunt_distance3, run_campaign, sharpness_search
from .coloring import coloring_from_json, coloring_to_json, is_proper_dict, PartialEdgeColoring
from .errors import (BudgetExceeded, ColorOutOfRange, ImproperPrecoloring, InvalidParameters,
                     ParseError, TorusError)
from .extend_even import extend_even
from .extend_odd import extend_odd
from .matching import extend_distance4_matching
from .oracle import enumeration_cap, is_distance_matching_int, solve_dict
from .torus import build_torus, to_dot

EXIT_IMPROPER, EXIT_NOT_EXTENDABLE, EXIT_PARSE, EXIT_OTHER = 1, 2, 3, 4

INSTANCE_KEYS = {"r", "d", "precolored", "min_distance"}


def load_instance(text: str):
    """Parse instance JSON; returns (G, precoloring dict, min_distance or None)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError("instance must be a JSON object")
    extra = set(data) - INSTANCE_KEYS
    if extra:
        raise ParseError(f"unknown fields {sorted(extra)}")
    for k in ("r", "d", "precolored"):
        if k not in data:
            raise ParseError(f"missing field {k!r}")
    r, d = data["r"], data["d"]
    if type(r) is not int or type(d) is not int:
        raise ParseError("r and d must be integers")
    md = data.get("min_distance")
    if md is not None and type(md) is not int:
        raise ParseError("min_distance must be an integer")
    try:
        G = build_torus(r, d)
    except InvalidParameters as exc:
        raise ParseError(str(exc)) from exc
    # colors are range-checked later, against the palette of the chosen method
    phi = coloring_from_json(G, 10 ** 9, data["precolored"])
    return G, dict(phi.colors), md


def instance_json(G, pre: dict, min_distance=None) -> dict:
    out = {"r": G.r, "d": G.d,
           "precolored": coloring_to_json(PartialEdgeColoring(G, max(pre.values(), default=1), pre))}
    if min_distance is not None:
        out["min_distance"] = min_distance
    return out


def _emit(obj, out_path=None):
    text = json.dumps(obj, indent=2)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _note(msg):
    print(msg, file=sys.stderr)


def _constructive_engine(G, pre, md):
    """Name of the constructive method that covers this instance, or None."""
    if G.is_even and md is not None and md >= 4 and is_distance_matching_int(G, list(pre), 4):
        return "matching4"
    if G.is_even and G.r >= 4 and len(pre) <= 2 * G.d - 1:
        return "even"
    if not G.is_even and G.r >= 5 and len(pre) <= 2 * G.d:
        return "odd"
    return None


def cmd_extend(args) -> int:
    with open(args.instance, encoding="utf-8") as fh:
        G, pre, md = load_instance(fh.read())
    t = G.chromatic_index
    for c in pre.values():
        if not 1 <= c <= t:
            raise ColorOutOfRange(f"color {c} outside [1, {t}]")
    if not is_proper_dict(G, pre):
        raise ImproperPrecoloring("precoloring is not proper")
    engine = None if args.method == "oracle" else _constructive_engine(G, pre, md)
    if args.method == "constructive" and engine is None:
        _note("no constructive method covers this instance; use --method oracle or auto")
        return EXIT_OTHER
    out = {"instance": {"r": G.r, "d": G.d}, "palette": t, "engine": engine or "oracle"}
    if engine is None:
        col, nodes = solve_dict(G, pre, range(1, t + 1), args.node_limit)
        if col is None:
            out.update(extendable=False, method="oracle", certificate={"nodes_explored": nodes})
            _emit(out, args.out)
            _note(f"not extendable with {t} colors (oracle, {nodes} nodes)")
            return EXIT_NOT_EXTENDABLE
        out.update(extendable=True, method="oracle", oracle_nodes=nodes,
                   coloring=coloring_to_json(PartialEdgeColoring(G, t, col)))
    else:
        fn = {"even": extend_even, "odd": extend_odd, "matching4": extend_distance4_matching}[engine]
        res = fn(G, pre)
        out.update(extendable=True, method=res.method, coloring=coloring_to_json(res.coloring),
                   trace=res.trace_json())
    _emit(out, args.out)
    _note(f"extended C_{G.r}^{G.d} with {len(pre)} precolored edges ({out['method']})")
    return 0


def cmd_verify(args) -> int:
    rep = run_campaign(args.theorem, args.r, args.d, args.mode, args.samples, args.seed,
                       args.budget, args.jobs, args.max_edges, args.exact, args.oracle_check)
    _emit(rep.to_json(), args.out)
    _note(rep.summary())
    return 0 if rep.failures == 0 else EXIT_OTHER


def cmd_sharpness(args) -> int:
    G = build_torus(args.r, args.d)
    if G.parity != args.parity:
        raise InvalidParameters(f"r = {args.r} is not {args.parity}")
    res = sharpness_search(G, args.budget)
    out = {"instance": {"r": G.r, "d": G.d}, "parity": args.parity, "edges": G.chromatic_index}
    out.update({k: v for k, v in res.items() if k != "precolored"})
    if res["found"]:
        out["witness"] = instance_json(G, dict(res["precolored"]))
        _note(f"non-extendable precoloring of {G.chromatic_index} edges found "
              f"after {res['checked']} candidates")
    else:
        _note(("search space exhausted" if res["exhausted"] else "budget reached")
              + f" after {res['checked']} candidates, no witness")
    _emit(out, args.out)
    return 0


def cmd_hunt(args) -> int:
    G = build_torus(args.r, args.d)
    if not G.is_even:
        raise InvalidParameters("hunt-distance3 needs an even r")
    readings = {"2d": [2 * G.d], "4": [4], "both": [2 * G.d, 4]}[args.reading]
    reports = {}
    for t in dict.fromkeys(readings):
        key = "2d" if t == 2 * G.d else "4"
        if args.reading == "both" and G.d == 2:
            key = "2d=4"
        reports[key] = hunt_distance3(G, args.samples, args.seed, t, args.node_limit, args.cross_check)
    _emit(reports, args.out)
    for k, rep in reports.items():
        _note(f"palette reading {k}: {rep['status']}, {rep.get('tested', 0)} tested")
    return 0


def cmd_export_dot(args) -> int:
    colors = None
    if args.instance:
        with open(args.instance, encoding="utf-8") as fh:
            G, colors, _ = load_instance(fh.read())
    elif args.r is not None and args.d is not None:
        G = build_torus(args.r, args.d)
    else:
        raise ParseError("give an instance file or both --r and --d")
    if args.coloring:
        with open(args.coloring, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc}") from exc
        items = data.get("coloring") if isinstance(data, dict) else data
        colors = dict(coloring_from_json(G, 10 ** 9, items).colors)
    sys.stdout.write(to_dot(G, colors))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="torus-ec",
                                description="Precoloring extension for edge colorings of C_r^d.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("extend", help="extend one precolored instance")
    e.add_argument("instance", help="instance JSON file")
    e.add_argument("--method", choices=["auto", "constructive", "oracle"], default="auto")
    e.add_argument("--node-limit", type=int, default=None)
    e.add_argument("--out", help="write JSON here instead of stdout")
    e.set_defaults(func=cmd_extend)

    v = sub.add_parser("verify", help="run a theorem verification campaign")
    v.add_argument("--theorem", choices=THEOREMS, required=True)
    v.add_argument("--r", type=int, required=True)
    v.add_argument("--d", type=int, required=True)
    v.add_argument("--mode", choices=["exhaustive", "sample"], default="sample")
    v.add_argument("--samples", type=int, default=1000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--budget", type=int, default=None,
                   help="cap on enumerated instances (default TORUS_EC_BUDGET or 1e8)")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--max-edges", type=int, default=None,
                   help="precolored edges per instance (default: the theorem bound)")
    v.add_argument("--exact", action="store_true", help="exactly --max-edges edges")
    v.add_argument("--oracle-check", action="store_true",
                   help="also run the oracle on every instance")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sharpness", help="search for a non-extendable chi'-edge precoloring")
    s.add_argument("--parity", choices=["even", "odd"], required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--budget", type=int, default=None)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sharpness)

    h = sub.add_parser("hunt-distance3", help="sample precolored distance-3 matchings")
    h.add_argument("--r", type=int, required=True)
    h.add_argument("--d", type=int, required=True)
    h.add_argument("--samples", type=int, default=10000)
    h.add_argument("--seed", type=int, default=0)
    h.add_argument("--reading", choices=["2d", "4", "both"], default="both",
                   help="palette size: 2d colors, the literal 4, or both")
    h.add_argument("--node-limit", type=int, default=10 ** 6)
    h.add_argument("--cross-check", action="store_true",
                   help="run the oracle even when the swap construction succeeds")
    h.add_argument("--out")
    h.set_defaults(func=cmd_hunt)

    x = sub.add_parser("export-dot", help="write the torus (and a coloring) as DOT")
    x.add_argument("instance", nargs="?", help="instance JSON; its precolored edges become labels")
    x.add_argument("--r", type=int)
    x.add_argument("--d", type=int)
    x.add_argument("--coloring", help="JSON from extend (or a bare coloring list)")
    x.set_defaults(func=cmd_export_dot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "budget", "unset") is None:
        args.budget = enumeration_cap()
    try:
        return args.func(args)
    except (ImproperPrecoloring, ColorOutOfRange) as exc:
        _note(f"improper precoloring: {exc}")
        return EXIT_IMPROPER
    except (ParseError, OSError) as exc:
        _note(f"cannot read input: {exc}")
        return EXIT_PARSE
    except (BudgetExceeded, TorusError) as exc:
        _note(f"{type(exc).__name__}: {exc}")
        return EXIT_OTHER


if __name__ == "__main__":
    sys.exit(main())
