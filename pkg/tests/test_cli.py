import json
import subprocess
import sys

import pytest

from clusterkit.cli import main
from clusterkit.exchange import loads_seed


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_count(capsys):
    assert run(capsys, "count", "F4")[:2] == (0, "105\n")
    assert run(capsys, "count", "E8")[1] == "25080\n"


def test_classify(capsys):
    assert run(capsys, "classify", "--matrix", "[[0,2],[-2,0]]")[1] == "InfiniteType\n"
    code, out, _ = run(capsys, "classify", "--matrix", "[[0,1,0],[-1,0,1],[0,-1,0]]", "--format", "json")
    assert code == 0 and json.loads(out)["type"] == "A3"


def test_mutate_twice_returns_the_seed(capsys, tmp_path):
    code, out, _ = run(capsys, "mutate", "--type", "B3", "--dirs", "2")
    assert code == 0
    f = tmp_path / "seed.json"
    f.write_text(out)
    code, back, _ = run(capsys, "mutate", "--seed", str(f), "--dirs", "2")
    code, orig, _ = run(capsys, "mutate", "--type", "B3", "--dirs", "2,2")
    assert loads_seed(back, require_full_rank=False) == loads_seed(orig, require_full_rank=False)
    assert json.loads(back)["variables"] == ["x1", "x2", "x3"]


def test_rank2_mutation(capsys):
    code, out, _ = run(capsys, "mutate", "--rank2", "1,1", "--dirs", "1,2")
    assert code == 0 and json.loads(out)["variables"][1] == "y2^-1 + y1^-1 + y1^-1*y2^-1"


def test_explore_formats(capsys):
    assert run(capsys, "explore", "--type", "A3")[1] == "seeds 14\nedges 21\ncomplete true\n"
    code, out, _ = run(capsys, "explore", "--rank2", "2,2", "--max-seeds", "20", "--format", "json")
    assert code == 0 and len(json.loads(out)["seeds"]) == 20
    assert run(capsys, "explore", "--type", "A2", "--format", "dot")[1].startswith("graph")


def test_polygon(capsys):
    assert run(capsys, "triangulate", "--catalan", "4")[1] == "triangulations 42\nflips 84\n"
    code, out, _ = run(capsys, "triangulate", "2; d1=[1,3]; d2=[1,4]", "--flip", "1", "--format", "json")
    assert code == 0 and json.loads(out)["triangulation"] == "2; d1=[2,4]; d2=[1,4]"


def test_dbc_and_tp(capsys):
    code, out, _ = run(capsys, "dbc", "1,2,1,2,1,-1,-2,-1", "--format", "json")
    d = json.loads(out)
    assert d["ex"] == [3, 4, 5, 6] and d["minors"][1] == "D_12,23"
    ident = "[[1,0,0],[0,1,0],[0,0,1]]"
    assert run(capsys, "tp-check", "--word", "1,2,1,2,1,-1,-2,-1", "--matrix", ident)[1] == "false\n"
    pascal = "[[1,1,1],[1,2,3],[1,3,6]]"
    assert run(capsys, "tp-check", "--word", "1,2,1,2,1,-1,-2,-1", "--matrix", pascal)[:2] == (0, "true\n")
    half = '[[2,0,0],[0,"1/2",0],[0,0,1]]'
    assert run(capsys, "tp-check", "--word", "1,2,1,2,1,-1,-2,-1", "--matrix", half)[1] == "false\n"


def test_polytope_and_clusters(capsys):
    out = run(capsys, "polytope", "A2")[1]
    assert out.startswith("H-representation") and "V-representation" in out
    assert len(run(capsys, "clusters", "B2")[1].splitlines()) == 6


@pytest.mark.parametrize("argv,code", [
    (["count", "H3"], 1),
    (["mutate", "--matrix", "[[0,1],[1,0]]", "--dirs", "1"], 1),
    (["dbc", "1,2,1,1"], 1),
    (["mutate", "--matrix", "[[0,1],[-1,0]", "--dirs", "1"], 2),
    (["mutate", "--type", "A2", "--dirs", "3"], 2),
    (["mutate", "--seed", "/nonexistent.json", "--dirs", "1"], 2),
    (["triangulate", "2; d1=[1,3"], 2),
    (["tp-check", "--word", "1,2,1", "--matrix", "[[1,0],[0,x]]"], 2),
])
def test_exit_codes(capsys, argv, code):
    got, out, err = run(capsys, *argv)
    assert got == code and err.startswith("error:")


def test_verify_subset(capsys):
    code, out, _ = run(capsys, "verify", "--criteria", "4,11")
    assert code == 0 and out.count("PASS") == 2


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "clusterkit", "count", "D4"], capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout == "50\n"
