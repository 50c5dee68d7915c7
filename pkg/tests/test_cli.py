import json
import subprocess
import sys

CLI = [sys.executable, "-m", "tautring4.cli"]


def run(*args, **kw):
    return subprocess.run(CLI + list(args), capture_output=True, text=True,
                          **kw)


def test_graphs_counts():
    r = run("graphs", "--genus", "2", "--codim", "1", "--format", "names")
    assert r.returncode == 0
    lines = [l for l in r.stdout.splitlines() if l.strip()]
    assert len(lines) == 2


def test_graphs_json_and_aut(tmp_path):
    r = run("graphs", "--genus", "3", "--codim", "2", "--format", "json")
    data = json.loads(r.stdout)
    assert len(data) == 5
    path = tmp_path / "g.json"
    path.write_text(json.dumps(data[0]))
    r2 = run("aut", str(path))
    assert r2.returncode == 0 and r2.stdout.strip().isdigit()


def test_determinism():
    a = run("basis", "--genus", "3", "--markings", "a,b")
    b = run("basis", "--genus", "3", "--markings", "a,b")
    assert a.stdout == b.stdout and a.returncode == 0


def test_reduce_exit_codes(tmp_path):
    rel = {"ambient": {"g": 2, "markings": []},
           "terms": [{"coeff": "60", "cls": "kappa2"},
                     {"coeff": "-1", "cls": "d_F"},
                     {"coeff": "-6", "cls": "d_H(0,{})"}]}
    p = tmp_path / "rel.json"
    p.write_text(json.dumps(rel))
    r = run("reduce", str(p))
    assert r.returncode == 0 and r.stdout.strip() == "0"
    nonzero = {"ambient": {"g": 2, "markings": []},
               "terms": [{"coeff": "1", "cls": "d_F"}]}
    p2 = tmp_path / "e.json"
    p2.write_text(json.dumps(nonzero))
    r2 = run("reduce", str(p2))
    assert r2.returncode == 2 and "d_F" in r2.stdout


def test_mul_and_normalize(tmp_path):
    dirr = {"ambient": {"g": 3, "markings": []},
            "terms": [{"coeff": "1", "cls": "d_irr"}]}
    p = tmp_path / "dirr.json"
    p.write_text(json.dumps(dirr))
    r = run("mul", str(p), str(p))
    data = json.loads(r.stdout)
    names = {t.get("name"): t["coeff"] for t in data["terms"]}
    assert names == {"d_F": "2", "d_E(1,{})": "2", "psi|d_irr": "-1"}
    r2 = run("normalize", str(p))
    assert json.loads(r2.stdout)["terms"][0]["name"] == "d_irr"


def test_pull_and_project(tmp_path):
    dirr = {"ambient": {"g": 3, "markings": []},
            "terms": [{"coeff": "1", "cls": "d_irr"}]}
    p = tmp_path / "dirr.json"
    p.write_text(json.dumps(dirr))
    r = run("pull", str(p), "--boundary", "irr")
    assert r.returncode == 0
    data = json.loads(r.stdout)
    assert data["factors"][0] == {"g": 2, "markings": ["q", "r"]}
    r2 = run("pull", str(p), "--forget", "x")
    assert json.loads(r2.stdout)["terms"][0]["name"] == "d_irr"
    kap2 = {"ambient": {"g": 7, "markings": []},
            "terms": [{"coeff": "1", "cls": "kappa2"}]}
    p3 = tmp_path / "k2.json"
    p3.write_text(json.dumps(kap2))
    r3 = run("project", str(p3), "--factor", "3:")
    assert r3.returncode == 0 and json.loads(r3.stdout) == []


def test_relations_listing():
    r = run("relations", "--genus", "2", "--markings", "")
    data = json.loads(r.stdout)
    assert len(data) == 1 and data[0]["provenance"] == "mumford"


def test_rank_report_inj0h2():
    r = run("rank-report", "--genus", "0", "--markings", "1,2,3,4,5",
            "--lemma", "inj0h2")
    assert r.returncode == 0 and "injective=True" in r.stdout
    r2 = run("rank-report", "--genus", "0", "--markings", "1,2,3,4,5",
             "--lemma", "inj0h2", "--pairs", "avoid-last")
    assert r2.returncode == 1


def test_error_exit():
    r = run("graphs", "--genus", "0", "--markings", "a", "--codim", "1")
    assert r.returncode == 1 and "error" in r.stderr
