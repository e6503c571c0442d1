from __future__ import annotations

import csv
import io
import json

import pytest

from drcalc.cli import build_parser, run
from drcalc.cli.bench import bench_rows, speedup, to_csv
from drcalc.cli.cache import DiskCache
from drcalc.cli.config import Config
from drcalc.graphcore import banana, edge_tree, loop_graph


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    d = tmp_path / "cache"
    monkeypatch.setenv("DRCALC_CACHE_DIR", str(d))
    monkeypatch.delenv("DRCALC_JOBS", raising=False)
    return d


def _out(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


def test_invariant_both_methods(cache_dir, capsys):
    G = json.dumps(loop_graph(0).to_json())
    assert run(["invariant", "--graph", G, "--method", "both"]) == 0
    out = _out(capsys)
    assert out["agree"] is True
    assert out["value_text"] == "-1/12"
    assert set(out["methods"]) == {"oracle", "zagier-laurent"}


def test_invariant_top_and_all(cache_dir, capsys):
    G = json.dumps(banana(2).to_json())
    assert run(["invariant", "--graph", G, "--method", "all", "--top"]) == 0
    assert _out(capsys)["value_text"] == "-1/24*x0^4"


def test_cache_hit_equals_recompute(cache_dir, capsys, tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps(banana(3).to_json()))
    assert run(["invariant", "--graph", str(path)]) == 0
    first = _out(capsys)
    assert DiskCache(cache_dir).info()["entries"] == 1
    assert run(["invariant", "--graph", str(path)]) == 0
    second = _out(capsys)
    assert run(["invariant", "--graph", str(path), "--no-cache"]) == 0
    fresh = _out(capsys)
    assert first["value_text"] == second["value_text"] == fresh["value_text"]
    assert run(["cache", "clear"]) == 0
    assert DiskCache(cache_dir).info()["entries"] == 0


def test_graphs_census(cache_dir, capsys, tmp_path):
    out = tmp_path / "graphs.json"
    assert run(["graphs", "gen", "--g", "2", "--n", "0", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["count"] == 7 and len(data["graphs"]) == 7


def test_table_coeff_push_round_trip(cache_dir, capsys, tmp_path):
    t = tmp_path / "t.json"
    assert run(["table", "--g", "1", "--n", "1", "--codim", "1", "--out", str(t)]) == 0
    assert run(["coeff", "--table", str(t), "--monomial", "b^2", "--codim", "1"]) == 0
    entries = _out(capsys)["entries"]
    assert sorted(e["coefficient"] for e in entries) == ["-1/2", "1/2"]
    assert run(["coeff", "--table", str(t), "--monomial", "a1"]) == 2
    t2 = tmp_path / "t2.json"
    assert run(["table", "--g", "0", "--n", "4", "--codim", "1", "--out", str(t2)]) == 0
    assert run(["push", "--table", str(t2)]) == 0
    assert _out(capsys)["entries"] == []
    assert run(["push", "--table", str(t2), "--values", "b=0,a1=1,a2=-1,a3=2,a4=-2"]) == 0
    assert run(["push", "--table", str(t2), "--values", "b=0,a1"]) == 2


def test_verify_scalar_suite(cache_dir, capsys, tmp_path):
    rep = tmp_path / "rep.json"
    assert run(["verify", "--suite", "scalar", "--report", str(rep)]) == 0
    data = json.loads(rep.read_text())
    assert data["ok"] is True and data["reports"]
    assert all(line.startswith("PASS") for line in capsys.readouterr().out.splitlines())


@pytest.mark.parametrize("argv", [
    ["invariant", "--graph", "{not json"],
    ["invariant", "--graph", '{"schema": 1, "vertices": [], "edges": [{"tail": 0, "head": 1}]}'],
    ["graphs", "gen", "--g", "x", "--n", "0"],
    ["nonsense"],
    ["table", "--g", "1", "--n", "1", "--codim", "-1"],
])
def test_malformed_input_exits_2(cache_dir, capsys, argv):
    assert run(argv) == 2


def test_disconnected_graph_exits_2(cache_dir, capsys):
    G = {"schema": 1, "vertices": [{"genus": 1, "legs": []}, {"genus": 1, "legs": []}], "edges": []}
    assert run(["invariant", "--graph", json.dumps(G)]) == 2


def test_budget_exceeded_exits_1(cache_dir, capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"table_budget": 3}))
    assert run(["--config", str(cfg), "table", "--g", "2", "--n", "1", "--codim", "2"]) == 1


def test_help_exits_0(capsys):
    assert run(["--help"]) == 0
    assert build_parser().prog == "drcalc"


def test_config_precedence(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"jobs": 2, "cache_dir": "from-file", "scalar_order": 10}))
    cfg = Config.load(str(path), env={})
    assert (cfg.jobs, cfg.cache_dir, cfg.scalar_order) == (2, "from-file", 10)
    cfg = Config.load(str(path), env={"DRCALC_JOBS": "3", "DRCALC_CACHE_DIR": "from-env"})
    assert (cfg.jobs, cfg.cache_dir) == (3, "from-env")
    cfg = Config.load(str(path), env={"DRCALC_JOBS": "3"}, jobs=4, cache_dir=None)
    assert (cfg.jobs, cfg.cache_dir) == (4, "from-file")
    assert Config.load(None, env={}, strict=True).oracle_checks >= 6
    path.write_text(json.dumps({"bogus": 1}))
    with pytest.raises(ValueError):
        Config.load(str(path), env={})
    with pytest.raises(ValueError):
        Config.load(None, env={}, jobs=0)


def test_bench_rows_and_csv(cache_dir, capsys):
    rows = bench_rows([edge_tree((0, 0)), banana(2)], repeat=1)
    assert len(rows) == 6 and all(r["agrees"] for r in rows)
    text = to_csv(rows)
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert [r["method"] for r in parsed[:3]] == ["oracle", "zagier-laurent", "zagier-division"]
    assert speedup(rows, str(banana(2))) > 0
    assert run(["bench", "--set", "banana3"]) == 0
    assert capsys.readouterr().out.startswith("graph,vertices,edges,h1,method")
