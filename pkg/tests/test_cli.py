import csv
import io
import json

import pytest

from ssforms.cli import main


@pytest.fixture(autouse=True)
def _cache(tmp_path, monkeypatch):
    monkeypatch.setenv("SSFORMS_CACHE", str(tmp_path / "cache"))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_table_formats(capsys):
    code, out, _ = run(capsys, "table", "--p", "83", "--format", "json")
    assert code == 0 and len(json.loads(out)) == 12
    code, out, _ = run(capsys, "table", "--p", "83", "--format", "csv")
    assert code == 0 and len(list(csv.DictReader(io.StringIO(out)))) == 12
    code, out, _ = run(capsys, "table", "--p", "7")
    assert code == 0 and "(1,1,2)" in out


def test_table_rejects_composite(capsys):
    code, _, err = run(capsys, "table", "--p", "85")
    assert code == 1 and err.startswith("error:")


def test_graph_files(capsys, tmp_path):
    png = tmp_path / "g3.png"
    code, out, _ = run(capsys, "graph", "--p", "83", "--ell", "3", "--format", "dot", "--plot", str(png))
    assert code == 0 and out.startswith("digraph") and png.stat().st_size > 1000
    dot = tmp_path / "g2.dot"
    code, out, _ = run(capsys, "graph", "--p", "83", "--ell", "2", "--format", "dot", "--out", str(dot))
    assert code == 0 and out == "" and "dir=none" in dot.read_text()
    code, out, _ = run(capsys, "graph", "--p", "83", "--ell", "3")
    assert "[(3,1,7)^2]" in out


def test_hilbert(capsys):
    assert run(capsys, "hilbert", "-12", "--mod", "83")[1].strip() == "X + 33"
    assert run(capsys, "hilbert", "-23")[1].strip() == "X^3 + 3491750*X^2 - 5151296875*X + 12771880859375"
    code, out, _ = run(capsys, "hilbert", "-4", "--format", "json")
    assert json.loads(out) == {"D": -4, "coeffs": [-1728, 1]}
    assert run(capsys, "hilbert", "-5")[0] == 1


def test_csidh(capsys):
    code, out, _ = run(capsys, "csidh", "--key-a", "1,0,-1", "--key-b", "0,1,1")
    assert code == 0 and "<- match" in out and "recovered" in out
    code, out, _ = run(capsys, "csidh", "--trials", "3", "--seed", "4", "--format", "json")
    data = json.loads(out)
    assert code == 0 and len(data) == 3 and all(d["matched"] is not None for d in data)
    assert run(capsys, "csidh", "--ells", "3,13")[0] == 1
    assert run(capsys, "csidh", "--key-a", "1,0")[0] == 1


def test_verify(capsys, tmp_path):
    png = tmp_path / "v.png"
    code, out, _ = run(capsys, "verify", "--p", "83", "--suite", "counts", "--suite", "vertical", "--plot", str(png))
    assert code == 0 and out.count("PASS") == 2 and png.exists()
    code, out, _ = run(capsys, "verify", "--p-max", "60", "--suite", "compatibility", "--format", "json", "--jobs", "2")
    assert code == 0 and json.loads(out)[0]["passed"]
    assert run(capsys, "verify", "--p", "4")[0] == 1
    assert run(capsys, "verify", "--p", "83", "--suite", "bogus")[0] == 1


def test_usage_errors():
    with pytest.raises(SystemExit):
        main([])
    with pytest.raises(SystemExit):
        main(["graph", "--p", "83"])
