import csv
import io
import json
import os

import pytest

from unifoliate.cli import main
from unifoliate.hypercore import dump_hypergraph, load_hypergraph
from unifoliate.construct import load_layered

from common import fstar, k4


@pytest.fixture
def fstar_file(tmp_path):
    path = tmp_path / "fstar.json"
    path.write_text(dump_hypergraph(fstar()))
    return str(path)


@pytest.fixture
def k4_file(tmp_path):
    path = tmp_path / "k4.json"
    path.write_text(dump_hypergraph(k4()))
    return str(path)


def run(argv):
    buf = io.StringIO()
    code = main(argv, out=buf)
    return code, buf.getvalue()


def test_classify_fstar(fstar_file):
    code, out = run(["classify", fstar_file])
    assert code == 0
    data = json.loads(out)
    assert data["class"] == "UnifoliateOnly"
    assert data["violation"]["x"] in ("a1", "a2", "a3")
    assert data["witness"]["parts"][0] == ["a1", "a2", "a3", "a4"]


def test_classify_k4(k4_file):
    code, out = run(["classify", k4_file])
    assert code == 0
    assert json.loads(out)["class"] == "NotUnifoliate"


def test_classify_single_edge(tmp_path):
    path = tmp_path / "one.json"
    path.write_text(json.dumps({"r": 3, "vertices": ["x", "y", "z"], "edges": [["x", "y", "z"]]}))
    code, out = run(["classify", str(path)])
    assert code == 0
    assert json.loads(out)["class"] == "StrongUnifoliate"


def test_classify_exit_codes(tmp_path, fstar_file):
    code, _ = run(["classify", str(tmp_path / "missing.json")])
    assert code == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    assert run(["classify", str(bad)])[0] == 2
    code, _ = run(["--budget", "3", "classify", fstar_file])
    assert code == 3


def test_construct_g_degrees_and_determinism(tmp_path, fstar_file):
    out_json = tmp_path / "g.json"
    degrees = tmp_path / "deg.csv"
    argv = [
        "--seed", "5", "construct", "g", "--r", "3", "--n", "30", "--mode", "relaxed",
        "--beta", "0.1", "--theta", "1.0", "--sparsen-p", "0.4",
        "--f-file", fstar_file, "--out", str(out_json), "--degrees-csv", str(degrees),
    ]
    code, report_text = run(argv)
    assert code == 0
    report = json.loads(report_text)
    assert report["flags"]["d_degree_exact"]
    with open(degrees) as fh:
        rows = list(csv.DictReader(fh))
    d_rows = [r for r in rows if r["layer"] == "D"]
    assert d_rows and all(r["degree"] == "100" for r in d_rows)
    first = out_json.read_text()
    code, _ = run(argv)
    assert code == 0
    assert out_json.read_text() == first
    G = load_layered(first)
    assert G.params["n"] == 30


def test_construct_g_sparsen_zero_flags_edgeless_a(tmp_path):
    out_json = tmp_path / "g0.json"
    code, report_text = run(
        [
            "construct", "g", "--n", "9", "--mode", "relaxed", "--beta", "0.1",
            "--theta", "1.0", "--sparsen-p", "0.0", "--sphere-points", "3",
            "--out", str(out_json),
        ]
    )
    assert code == 0
    report = json.loads(report_text)
    assert report["layers"]["A"]["min_degree"] == 0 or report["layers"]["A"]["size"] == 0
    G = load_layered(out_json.read_text())
    assert G.params["pipeline"]["post_sparsen_edges"] == 0


def test_construct_g_infeasible_strict(tmp_path):
    # nine forbidden edges push strict theta below float range
    import itertools

    vs = [f"v{i}" for i in range(6)]
    edges = list(itertools.combinations(vs, 3))[:9]
    f_file = tmp_path / "dense.json"
    f_file.write_text(json.dumps({"r": 3, "vertices": vs, "edges": [list(e) for e in edges]}))
    code, _ = run(
        ["construct", "g", "--n", "9", "--mode", "strict", "--f-file", str(f_file),
         "--sphere-points", "3"]
    )
    assert code == 4


def test_check_round_trip(fstar_file, tmp_path):
    code, out = run(["check", fstar_file])
    assert code == 0
    assert json.loads(out)["ok"]


def test_check_certificate(fstar_file, tmp_path):
    code, cls_text = run(["classify", fstar_file])
    cert = tmp_path / "cert.json"
    cert.write_text(cls_text)
    code, out = run(["check", fstar_file, "--certificate", str(cert)])
    assert code == 0
    data = json.loads(out)
    assert data["ok"]
    assert data["witness_unifoliate"]
    assert data["witness_strong"] is False


def test_lemma_near_or_far_csv():
    code, out = run(["--seed", "3", "lemma", "near-or-far", "--trials", "50"])
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][0] == "row"
    summary = rows[-1]
    assert summary[0] == "summary"
    assert float(summary[-1]) == 1.0


def test_lemma_cap_csv():
    code, out = run(["lemma", "cap", "--samples", "200000"])
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    est = float(rows[1][5])
    assert abs(est - 0.5) < 0.01


def test_lemma_theta_chain_csv():
    code, out = run(["lemma", "theta-chain", "--f", "3"])
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert all(r[7] == "1" for r in rows[1:-1])
    assert float(rows[-1][-1]) == 1.0
    # the summary records a budget below 1/10 for the default theta
    assert float(rows[-1][6]) < 0.1


def test_bundle_dim_cli(tmp_path):
    h = {
        "r": 3,
        "vertices": ["1", "2", "3", "4", "5", "6"],
        "edges": [["1", "2", "3"], ["1", "2", "4"], ["1", "2", "5"], ["1", "2", "6"],
                   ["3", "4", "5"]],
    }
    t = {"r": 3, "vertices": ["p", "q", "s"], "edges": [["p", "q", "s"]]}
    h_file = tmp_path / "h.json"
    t_file = tmp_path / "t.json"
    h_file.write_text(json.dumps(h))
    t_file.write_text(json.dumps(t))
    code, out = run(["bundle", "dim", "--h", str(h_file), "--t-file", str(t_file),
                      "--part-size", "1", "--t", "1"])
    assert code == 0
    data = json.loads(out)
    assert data["status"] in ("found", "none")
    code, out = run(["bundle", "dim", "--h", str(h_file), "--t-file", str(t_file),
                      "--part-size", "1", "--t", "0"])
    assert json.loads(out)["status"] == "found"


def test_color_or_embed_cli(tmp_path):
    g3 = {"r": 3, "vertices": ["a1", "a2", "a3", "b", "c"],
          "edges": [["a1", "a2", "a3"], ["a1", "b", "c"]]}
    verts = ["x1", "x2", "x3"] + [f"p{i}" for i in range(3)] + [f"q{i}" for i in range(3)]
    edges = [["x1", "x2", "x3"]]
    for x in ("x1", "x2", "x3"):
        for p in range(3):
            for q in range(3):
                edges.append(sorted([x, f"p{p}", f"q{q}"]))
    host = {"r": 3, "vertices": verts, "edges": edges}
    g_file = tmp_path / "g3.json"
    h_file = tmp_path / "host.json"
    w_file = tmp_path / "w.json"
    g_file.write_text(json.dumps(g3))
    h_file.write_text(json.dumps(host))
    w_file.write_text(json.dumps({"parts": [["a1", "a2", "a3"], ["b"], ["c"]]}))
    code, out = run(["color-or-embed", "--h", str(h_file), "--g", str(g_file),
                      "--witness", str(w_file)])
    assert code == 0
    data = json.loads(out)
    assert "embedding" in data
    # poor host: coloring payload with the bound fields
    poor = {"r": 3, "vertices": verts, "edges": edges[:2]}
    h_file.write_text(json.dumps(poor))
    code, out = run(["color-or-embed", "--h", str(h_file), "--g", str(g_file),
                      "--witness", str(w_file)])
    assert code == 0
    data = json.loads(out)
    assert "coloring" in data and data["colors"] >= 1


def test_report_cli(tmp_path):
    out_json = tmp_path / "g.json"
    code, _ = run(
        ["construct", "g", "--n", "9", "--mode", "relaxed", "--beta", "0.1",
         "--theta", "1.0", "--sphere-points", "3", "--out", str(out_json)]
    )
    assert code == 0
    code, out = run(["report", str(out_json)])
    assert code == 0
    rows = dict(
        (r[0], r[1]) for r in list(csv.reader(io.StringIO(out)))[1:]
    )
    assert rows["flags.d_degree_exact"] == "True"
    assert "transversal_degree" in rows


def test_budget_env_override(fstar_file, monkeypatch):
    monkeypatch.setenv("UNIFOLIATE_BUDGET", "3")
    code, _ = run(["classify", fstar_file])
    assert code == 3
    monkeypatch.setenv("UNIFOLIATE_BUDGET", "not-a-number")
    code, _ = run(["classify", fstar_file])
    assert code == 2
