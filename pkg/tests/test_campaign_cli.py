import json
import pathlib

import pytest

from torus_ec.campaign import (_color_patterns, hunt_distance3, max_matching_size, run_campaign,
                               sharpness_search)
from torus_ec.cli import load_instance, main
from torus_ec.errors import InvalidParameters, ParseError
from torus_ec.oracle import solve_dict
from torus_ec.torus import build_torus

FIX = pathlib.Path(__file__).parent / "fixtures"


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def edge(base, dim, color):
    return {"edge": {"base": list(base), "dim": dim}, "color": color}


# -- campaigns ---------------------------------------------------------------------

def test_campaign_report_reproducible_and_consistent():
    a = run_campaign("even", 6, 2, "sample", 400, seed=3)
    b = run_campaign("even", 6, 2, "sample", 400, seed=3)
    assert a.consistent() and a.tested == 400 and a.failures == 0
    ja, jb = a.to_json(), b.to_json()
    ja.pop("wall_time"), jb.pop("wall_time")
    assert ja == jb
    assert sum(a.tags.values()) == 400


def test_campaign_chunking_does_not_change_counts(monkeypatch):
    import torus_ec.campaign as cm
    whole = run_campaign("odd", 5, 2, "sample", 300, seed=1).to_json()
    monkeypatch.setattr(cm, "CHUNK", 7)
    parts = run_campaign("odd", 5, 2, "sample", 300, seed=1).to_json()
    whole.pop("wall_time"), parts.pop("wall_time")
    assert whole == parts


def test_campaign_families():
    rep = run_campaign("matching4", 8, 2, "sample", 200, seed=0, oracle_check=True)
    assert rep.failures == 0 and rep.oracle_checked == 200
    rep = run_campaign("even", 4, 1, "exhaustive")
    assert rep.tested == 9 and rep.failures == 0
    with pytest.raises(InvalidParameters):
        run_campaign("even", 5, 2)
    with pytest.raises(InvalidParameters):
        run_campaign("odd", 6, 2)


def test_color_patterns_counts():
    # set partitions of k items into at most t blocks
    assert len(list(_color_patterns(4, 4))) == 15
    assert len(list(_color_patterns(5, 5))) == 52
    assert len(list(_color_patterns(4, 2))) == 8


def test_max_matching_size_small():
    assert max_matching_size(build_torus(6, 1), 3) == 1
    assert max_matching_size(build_torus(8, 1), 3) == 2


# -- sharpness -------------------------------------------------------------------------

@pytest.mark.parametrize("name,r,d", [("sharpness_c4_2.json", 4, 2), ("sharpness_c5_2.json", 5, 2)])
def test_sharpness_witness_regression(name, r, d):
    saved = json.loads((FIX / name).read_text())
    G, pre, _ = load_instance(json.dumps(saved["witness"]))
    assert (G.r, G.d) == (r, d) and len(pre) == G.chromatic_index
    assert solve_dict(G, pre, range(1, G.chromatic_index + 1))[0] is None
    res = sharpness_search(G)
    assert res["found"] and dict(res["precolored"]) == pre and res["checked"] == saved["checked"]


def test_sharpness_exhausts_on_c5():
    res = sharpness_search(build_torus(5, 1))
    assert res == {"found": False, "exhausted": True, "checked": 25}


# -- distance-3 hunt -------------------------------------------------------------------

def test_hunt_statuses():
    assert hunt_distance3(build_torus(6, 2), 10, 0, palette=3)["status"] == "vacuous-false"
    assert hunt_distance3(build_torus(6, 1), 10, 0)["status"] == "vacuous"
    rep = hunt_distance3(build_torus(6, 2), 300, 0, cross_check=True)
    assert rep["status"] == "clean" and rep["oracle_disagrees"] == 0
    assert rep == hunt_distance3(build_torus(6, 2), 300, 0, cross_check=True)


def test_hunt_single_cycle_counterexample():
    rep = hunt_distance3(build_torus(8, 1), 50, 0)
    assert rep["status"] == "counterexample"
    G, pre, md = load_instance(json.dumps({k: rep["counterexamples"][0][k]
                                           for k in ("r", "d", "precolored", "min_distance")}))
    assert md == 3 and solve_dict(G, pre, (1, 2))[0] is None


# -- CLI ---------------------------------------------------------------------------------

def test_load_instance_errors():
    with pytest.raises(ParseError):
        load_instance("{")
    with pytest.raises(ParseError):
        load_instance(json.dumps({"r": 4, "d": 2, "precolored": [], "extra": 1}))
    with pytest.raises(ParseError):
        load_instance(json.dumps({"r": 4, "d": 2}))
    with pytest.raises(ParseError):
        load_instance(json.dumps({"r": 2, "d": 2, "precolored": []}))


def test_extend_exit_codes(tmp_path, capsys):
    ok = write(tmp_path, "ok.json", {"r": 6, "d": 2, "precolored": [edge((0, 0), 1, 1), edge((3, 3), 2, 2)]})
    out = tmp_path / "res.json"
    assert main(["extend", ok, "--out", str(out)]) == 0
    res = json.loads(out.read_text())
    assert res["extendable"] and res["engine"] == "even" and len(res["coloring"]) == 72
    assert main(["extend", ok, "--method", "oracle"]) == 0
    bad = write(tmp_path, "bad.json", {"r": 6, "d": 2, "precolored": [edge((0, 0), 1, 1), edge((1, 0), 1, 1)]})
    assert main(["extend", bad]) == 1
    high = write(tmp_path, "high.json", {"r": 6, "d": 2, "precolored": [edge((0, 0), 1, 5)]})
    assert main(["extend", high]) == 1
    assert main(["extend", str(FIX / "distance2_c6_2.json")]) == 2
    assert main(["extend", str(FIX / "distance2_c6_2.json"), "--method", "constructive"]) == 4
    assert main(["extend", write(tmp_path, "x.json", "not json")]) == 3
    assert main(["extend", str(tmp_path / "missing.json")]) == 3


def test_extend_matching_engine(tmp_path, capsys):
    inst = write(tmp_path, "m.json", {"r": 8, "d": 2, "min_distance": 4,
                                      "precolored": [edge((0, 0), 1, 2), edge((4, 4), 2, 1)]})
    assert main(["extend", inst]) == 0
    res = json.loads(capsys.readouterr().out)
    assert res["engine"] == "matching4" and [s["case"] for s in res["trace"]] == ["iii", "ii"]


def test_verify_and_hunt_commands(tmp_path, capsys):
    out = tmp_path / "v.json"
    assert main(["verify", "--theorem", "odd", "--r", "5", "--d", "2", "--samples", "50",
                 "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["counts"]["tested"] == 50 and rep["counts"]["failures"] == 0
    assert main(["verify", "--theorem", "even", "--r", "6", "--d", "2", "--mode", "exhaustive",
                 "--budget", "100"]) == 4
    assert main(["hunt-distance3", "--r", "6", "--d", "2", "--samples", "20"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["2d=4"]["status"] == "clean"
    assert main(["hunt-distance3", "--r", "5", "--d", "2"]) == 4


def test_sharpness_and_dot_commands(tmp_path, capsys):
    assert main(["sharpness", "--parity", "even", "--r", "4", "--d", "2"]) == 0
    res = json.loads(capsys.readouterr().out)
    saved = json.loads((FIX / "sharpness_c4_2.json").read_text())
    assert res == saved
    assert main(["sharpness", "--parity", "odd", "--r", "4", "--d", "2"]) == 4
    assert main(["export-dot", "--r", "4", "--d", "1"]) == 0
    dot = capsys.readouterr().out
    assert dot.startswith("graph") and dot.count("--") == 4
    out = tmp_path / "res.json"
    ok = write(tmp_path, "ok.json", {"r": 4, "d": 1, "precolored": [edge((0,), 1, 1)]})
    assert main(["extend", ok, "--out", str(out)]) == 0
    assert main(["export-dot", "--r", "4", "--d", "1", "--coloring", str(out)]) == 0
    assert capsys.readouterr().out.count("label") >= 4
    assert main(["export-dot"]) == 3
