import csv
import io
import json
import subprocess
import sys

import pytest

from orientdiam.cli import main
from orientdiam.graph import complete_graph, cycle_graph, min_degree, parse_graph, path_graph, serialize_graph
from orientdiam.orientation import check_diameter_two, parse_orientation


@pytest.fixture
def graph_file(tmp_path):
    def write(g, name="g.txt"):
        path = tmp_path / name
        path.write_text(serialize_graph(g))
        return str(path)

    return write


def run_json(capsys, argv):
    code = main(argv + ["--format", "json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_gen_gk(tmp_path, capsys):
    path = tmp_path / "g1.txt"
    assert main(["gen", "gk", "--k", "1", "-o", str(path)]) == 0
    text = path.read_text()
    assert "\n9 21\n" in text and text.startswith("# G_k extremal graph k=1")
    assert "n=9 m=21 min_degree=4" in capsys.readouterr().out


def test_gen_gk_to_stdout(capsys):
    assert main(["gen", "gk", "--k", "1"]) == 0
    captured = capsys.readouterr()
    assert parse_graph(captured.out).m == 21
    assert json.loads(captured.err)["n"] == 9


def test_gen_random(tmp_path, capsys):
    path = tmp_path / "r.txt"
    argv = ["gen", "random", "--n", "100", "--p", "0.82", "--min-degree", "67", "--seed", "7", "-o", str(path)]
    assert main(argv) == 0
    assert min_degree(parse_graph(path.read_text())) >= 67


@pytest.mark.parametrize("argv", [
    ["gen", "gk", "--k", "0"],
    ["gen", "gk", "--k", "5"],
    ["gen", "random", "--n", "10", "--p", "2", "--min-degree", "1"],
    ["gen", "gk"],
    ["frobnicate"],
    ["asymptotics", "--stride", "0"],
    ["asymptotics", "--k-min", "5", "--k-max", "2"],
    ["verify-gk", "--k", "2", "--mode", "brute"],
])
def test_usage_errors_exit_3(argv, capsys):
    assert main(argv) == 3


def test_gen_random_exhausted(capsys):
    argv = ["gen", "random", "--n", "10", "--p", "0.01", "--min-degree", "9", "--max-tries", "3"]
    assert main(argv) == 2


def test_stats(graph_file, capsys):
    code, rep = run_json(capsys, ["stats", graph_file(cycle_graph(4))])
    assert code == 0 and rep["mu"] == 10.25 and rep["hypothesis_met"] is False
    assert rep["tool"] == "orientdiam" and "version" in rep
    code, rep = run_json(capsys, ["stats", graph_file(complete_graph(40))])
    assert rep["mu"] == pytest.approx(1560 * 0.75**38, rel=1e-12)
    assert round(rep["mu"], 4) == 0.0279
    assert rep["threshold"] == pytest.approx(32.82, abs=0.01) and rep["hypothesis_met"] is True
    code, rep = run_json(capsys, ["stats", graph_file(complete_graph(2))])
    assert rep["mu"] == 2 and rep["underlying_diameter"] == 1


def test_stats_parse_failure(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("2 1\n0 0\n")
    assert main(["stats", str(bad)]) == 3
    assert main(["stats", str(tmp_path / "missing.txt")]) == 3


def test_orient_las_vegas_k40(graph_file, tmp_path, capsys):
    gpath = graph_file(complete_graph(40))
    opath = tmp_path / "o.txt"
    code, rep = run_json(capsys, ["orient", gpath, "--method", "las-vegas", "--seed", "1", "-o", str(opath)])
    assert code == 0 and rep["result"] == "found" and rep["seed"] == 1
    for key in ("n", "m", "min_degree", "threshold", "f_n", "mu", "mu_bound", "attempts", "result", "seed"):
        assert key in rep
    d = parse_orientation(opath.read_text(), complete_graph(40))
    assert check_diameter_two(d)


def test_orient_exact_g1(tmp_path, capsys):
    gpath = tmp_path / "g1.txt"
    main(["gen", "gk", "--k", "1", "-o", str(gpath)])
    capsys.readouterr()
    code, rep = run_json(capsys, ["orient", str(gpath), "--method", "exact"])
    assert code == 1 and rep["status"] == "none_exists"


def test_orient_exit_codes(graph_file, capsys):
    assert main(["orient", graph_file(path_graph(4)), "--method", "las-vegas"]) == 1
    assert main(["orient", graph_file(complete_graph(2)), "--max-attempts", "3"]) == 2
    assert main(["orient", graph_file(complete_graph(8)), "--method", "exact"]) == 2
    capsys.readouterr()
    code, rep = run_json(capsys, ["orient", graph_file(complete_graph(3)), "--method", "exact"])
    assert code == 0 and rep["orientation"].startswith("3 3\n")


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_check(tmp_path, graph_file, capsys):
    tri = graph_file(complete_graph(3), "tri.txt")
    code, rep = run_json(capsys, ["check", tri, _write(tmp_path, "o3.txt", "3 3\n0 1\n1 2\n2 0\n")])
    assert code == 0 and rep["diameter"] == 2 and rep["X"] == 3 and rep["strong"]
    c5 = graph_file(cycle_graph(5), "c5.txt")
    o5 = _write(tmp_path, "o5.txt", "5 5\n0 1\n1 2\n2 3\n3 4\n4 0\n")
    code, rep = run_json(capsys, ["check", c5, o5])
    assert code == 1 and rep["diameter"] == 4
    assert main(["check", tri, _write(tmp_path, "short.txt", "3 2\n0 1\n1 2\n")]) == 3
    p3 = graph_file(path_graph(3), "p3.txt")
    code, rep = run_json(capsys, ["check", p3, _write(tmp_path, "op.txt", "3 2\n0 1\n1 2\n")])
    assert code == 1 and rep["diameter"] == "inf" and not rep["strong"]


def test_check_text_output(tmp_path, graph_file, capsys):
    tri = graph_file(complete_graph(3))
    assert main(["check", tri, _write(tmp_path, "o.txt", "3 3\n0 1\n1 2\n2 0\n")]) == 0
    out = capsys.readouterr().out
    assert "diameter: 2" in out and "X: 3" in out


def test_verify_gk(capsys):
    code, rep = run_json(capsys, ["verify-gk", "--k", "1", "--mode", "brute"])
    assert code == 0 and rep["status"] == "none_exists"
    code, rep = run_json(capsys, ["verify-gk", "--k", "2", "--mode", "witness", "--trials", "1000", "--seed", "3"])
    assert code == 0 and rep["verified"] == rep["trials"] == 1000 and rep["seed"] == 3


def test_asymptotics_csv(capsys):
    assert main(["asymptotics", "--k-min", "1", "--k-max", "2"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert [r["k"] for r in rows] == ["1", "2"]
    assert rows[0]["stirling_ok"] == "True" and rows[0]["intermediate_ok"] == "False"
    assert rows[0]["gap_ok"] == "False"
    assert rows[1]["intermediate_ok"] == "True"


def test_json_is_reproducible(graph_file, capsys):
    gpath = graph_file(complete_graph(12))
    outputs = []
    for workers in ("1", "2", "1"):
        main(["orient", gpath, "--seed", "5", "--workers", workers, "--format", "json"])
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1] == outputs[2]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "orientdiam", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "orientdiam" in res.stdout
