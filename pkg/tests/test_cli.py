import io
import json
import subprocess
import sys
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apgraph.cli import main
from apgraph.exact import NumberSet, PairGraph, count_k_aps, sumset_along_graph
from apgraph.formats import InputError, parse_graph, parse_set, serialize_graph, serialize_set
from apgraph.harness import CompleteGraph, RandomGraph


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def fields(text):
    out = {}
    for line in text.splitlines():
        key, _, value = line.partition("=")
        out.setdefault(key, value)
    return out


def rows(text, table):
    return [line.split("=", 1)[1] for line in text.splitlines() if line.startswith(table + "=")]


@pytest.fixture
def setfile(tmp_path):
    def make(values, name="A.txt"):
        path = tmp_path / name
        path.write_text(serialize_set(NumberSet(values)))
        return path

    return make


def test_aps_example(setfile):
    code, out, _ = run("aps", "--set", setfile(range(5)), "--k", 3)
    assert code == 0
    f = fields(out)
    assert f["schema"] == "1" and f["command"] == "aps" and f["count"] == "4"
    assert rows(out, "ap")[0] == "0 1 2,1"


def test_pipeline3_example(setfile):
    code, out, _ = run("pipeline3", "--set", setfile(range(16)), "--graph", "complete", "--epsilon", "1/10")
    assert code == 0 and fields(out)["distinct"] == "56"


def test_pluennecke_example(setfile):
    a = setfile([0, 1], "a.txt")
    code, out, _ = run("pluennecke", "--a", a, "--b", a, "--k", 2, "--l", 1)
    f = fields(out)
    assert code == 0 and f["holds"] == "true" and f["lhs"] == "4" and f["rhs_bound"] == "27/4"


def test_pluennecke_battery():
    code, out, _ = run("pluennecke", "--battery", 20, "--seed", 3)
    f = fields(out)
    assert code == 0 and f["checks"] == "180" and f["all_hold"] == "true"


def test_sumset_and_diffset(setfile, tmp_path):
    g = tmp_path / "G.txt"
    g.write_text("n=3 loops=0\n0 1\n1 2\n")
    code, out, _ = run("sumset", "--set", setfile([0, 1, 2]), "--graph", g)
    assert code == 0 and rows(out, "element") == ["1", "3"]
    code, out, _ = run("diffset", "--set", setfile([0, 1, 2]), "--graph", "complete")
    assert rows(out, "element") == ["-2", "-1", "1", "2"]


def test_refine_writes_graph(setfile, tmp_path):
    out_graph = tmp_path / "Gp.txt"
    code, out, _ = run("refine", "--set", setfile(range(4)), "--graph", "complete", "--epsilon", "1/10",
                       "--alpha", "1/2", "--out-graph", out_graph)
    f = fields(out)
    assert code == 0 and f["edges_after"] == "5" and f["D_achieved"] == "1"
    assert parse_graph(out_graph.read_text()) == PairGraph.from_pairs(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)])


def test_triangles_both_arrangements(setfile):
    A = setfile([0, 1, 2])
    code, out, _ = run("triangles", "--set", A, "--graph", "complete_loops", "--lines-graph")
    f = fields(out)
    assert code == 0 and f["triangles"] == "4" and f["graph_triangles"] == "13"
    code, out, _ = run("triangles", "--set", A, "--graph", "complete_loops", "--arrangement", "sum")
    assert code == 0 and fields(out)["points"] == "9"


def test_pattern_kinds():
    code, out, _ = run("pattern", "--d", 3, "--kind", "normals")
    assert code == 0
    assert rows(out, "facet") == ["0 1 2,1 -1 -2", "0 1 3,0 0 1", "0 2 3,0 1 0", "1 2 3,1 2 1"]
    code, out, _ = run("pattern", "--d", 3, "--kind", "grid")
    assert fields(out)["size"] == "18"
    code, out, _ = run("pattern", "--d", 5, "--kind", "shift")
    assert code == 0 and fields(out)["facets_checked"] == "6"


def test_copies_and_pipelined(setfile):
    code, out, _ = run("copies", "--set", setfile([0, 1, 2]), "--d", 2, "--threshold", 1)
    f = fields(out)
    assert code == 0 and f["copies"] == "2" and f["popular_holders"] == "2"
    assert rows(out, "copy") == ["0 1,1", "1 1,1"]
    code, out, _ = run("pipelined", "--set", setfile(range(8)), "--d", 3, "--alpha", 0, "--beta", 0)
    assert code == 0 and fields(out)["distinct"] == str(count_k_aps(NumberSet(range(8)), 4)[0])


def test_cover_and_gate(setfile):
    A = setfile([0, 1, 2])
    code, out, _ = run("cover", "--set", A, "--v", "2,1")
    assert code == 0 and fields(out)["distinct_offsets"] == "7"
    code, out, _ = run("cover", "--set", setfile(range(32)), "--gate", "--delta-cap", 2, "--d", 3)
    assert fields(out)["decision"] == "ALLOWED"
    assert "1 2 1,125" in rows(out, "cover")


def test_scaling():
    code, out, _ = run("scaling", "--pattern", "0;1", "--sizes", "8,16,32")
    f = fields(out)
    assert code == 0 and f["ceiling"] == "2"
    assert [r.split(",")[2] for r in rows(out, "size")] == ["28", "120", "496"]


def test_gen_round_trip(tmp_path):
    set_path, graph_path = tmp_path / "A.txt", tmp_path / "G.txt"
    spec = json.dumps({"set": {"kind": "random_subset", "n": 15, "N": 60}, "graph": {"kind": "random", "p": "2/3"}})
    code, out, _ = run("gen", "--spec", spec, "--seed", 9, "--out-set", set_path, "--out-graph", graph_path)
    assert code == 0
    A = parse_set(set_path.read_text())
    G = parse_graph(graph_path.read_text())
    assert len(A) == 15 and fields(out)["sums"] == str(len(sumset_along_graph(A, G)))
    code, out2, _ = run("sumset", "--set", set_path, "--graph", graph_path)
    assert fields(out2)["size"] == fields(out)["sums"]
    code, again, _ = run("gen", "--spec", spec, "--seed", 9)
    assert again == out


def test_csv_output(setfile):
    code, out, _ = run("aps", "--set", setfile(range(4)), "--k", 3, "--csv")
    assert code == 0 and out.splitlines() == ["terms,difference", "0 1 2,1", "1 2 3,1"]
    code, out, _ = run("cover", "--set", setfile(range(4)), "--v", "1,1", "--csv")
    assert out.splitlines()[0] == "field,value" and "distinct_offsets,7" in out.splitlines()


def test_threads_do_not_change_output(setfile):
    A = setfile(range(0, 30, 2))
    for cmd in (["pipeline3", "--graph", "complete", "--epsilon", "1/10"], ["copies", "--d", 3], ["pipelined", "--d", 3]):
        outs = [run(cmd[0], "--set", A, *cmd[1:], "--threads", t)[1] for t in (1, 2)]
        assert outs[0] == outs[1]


def test_exit_codes(setfile, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("1\n2\n0.5\n")
    code, _, err = run("aps", "--set", bad)
    assert code == 1 and f"{bad}:3:" in err
    code, _, err = run("aps", "--set", tmp_path / "missing.txt")
    assert code == 1 and "missing.txt" in err
    assert run("aps")[0] == 2
    assert run("nonsense")[0] == 2
    assert run("pipeline3", "--set", setfile([0, 1]), "--graph", "complete", "--epsilon", "0.1")[0] == 2
    assert run("pipeline3", "--set", setfile([0, 1, 2]), "--graph", "complete", "--epsilon", "3/2")[0] == 1
    assert run("pipelined", "--set", setfile(range(40)), "--d", 4, "--max-cells", 1000)[0] == 1


def test_graph_file_errors():
    with pytest.raises(InputError, match=r"<graph>:2:"):
        parse_graph("n=2 loops=0\n1 0\n")
    with pytest.raises(InputError, match="loops=0"):
        parse_graph("n=2 loops=0\n1 1\n")
    with pytest.raises(InputError, match="out of range"):
        parse_graph("n=2 loops=1\n0 2\n")
    with pytest.raises(InputError):
        parse_set("4/6\n")
    with pytest.raises(InputError):
        parse_set("1/0\n")


def test_keyword_graphs_round_trip():
    for g in (CompleteGraph(False), CompleteGraph(True), RandomGraph(F(3, 7), 2**63)):
        assert parse_graph(serialize_graph(g)) == g


@settings(max_examples=60, deadline=None)
@given(st.sets(st.fractions(max_denominator=50).filter(lambda x: abs(x) < 10**6), max_size=20))
def test_set_file_round_trip(values):
    A = NumberSet(values)
    text = serialize_set(A)
    assert parse_set(text) == A and serialize_set(parse_set(text)) == text


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 8), st.booleans(), st.data())
def test_graph_file_round_trip(n, loops, data):
    pairs = [(i, j) for i in range(n) for j in range(i if loops else i + 1, n)]
    chosen = data.draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    G = PairGraph.from_pairs(n, chosen, allow_loops=loops)
    text = serialize_graph(G)
    assert parse_graph(text) == G and serialize_graph(parse_graph(text)) == text


def test_console_entry_point(setfile):
    proc = subprocess.run(
        [sys.executable, "-m", "apgraph.cli", "aps", "--set", str(setfile(range(5)))],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and "count=4" in proc.stdout
