import io
import json
import subprocess
import sys

import pytest

from relroots import cli, relpoly
from relroots.errors import IntegrityError
from relroots.poly import Poly


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_poly_cycle5():
    code, out, _ = run("poly", "--family", "cycle:5")
    assert code == 0
    assert out.strip() == str(Poly.one_minus_q(4) * Poly([1, 4]))


def test_poly_forms():
    code, out, _ = run("poly", "--family", "cycle:5", "--form", "h")
    assert (code, out.strip()) == (0, "(1-q)^4 * (1 + 4*q)")
    code, out, _ = run("poly", "--family", "complete:4", "--form", "f", "--json")
    blob = json.loads(out)
    assert blob["coeffs"] == ["1", "6", "15", "16"]


def test_rational_pendant_cycle():
    code, out, _ = run("rational", "--family", "pendantcycle:3,7")
    assert (code, out.strip()) == (0, "{1, -1/3}")


def test_rational_json_schema():
    code, out, _ = run("rational", "--family", "cycle:5", "--json")
    blob = json.loads(out)
    assert code == 0
    assert blob["schema"] == "relroots.cli.rational/1"
    assert blob["rational_roots"] == ["-1/4", "1"]


def test_hvector():
    code, out, _ = run("hvector", "--family", "theta:1,2,2")
    assert code == 0
    assert out == "H = [1, 3, 4]\nF = [1, 5, 8]\n"


def test_roots_text_and_json():
    code, out, _ = run("roots", "--graph6", "Dhc")
    assert code == 0
    assert out.splitlines()[0] == "1  (multiplicity 4, exact)"
    assert "-0.25 + 0i" in out
    assert out.splitlines()[-1] == "rational: {1, -1/4}"
    code, out, _ = run("roots", "--sparse6", ":Ab", "--json")
    blob = json.loads(out)
    assert blob["schema"] == "relroots.cli.roots/1"
    assert blob["rational_roots"] == ["-1", "1"]


def test_edges_input_and_file_input(tmp_path):
    code, out, _ = run("poly", "--edges", '{"n":3,"edges":[[0,1],[1,2],[2,0]]}')
    assert (code, out.strip()) == (0, str(Poly.one_minus_q(2) * Poly([1, 2])))
    path = tmp_path / "g.s6"
    path.write_text(":Ab\n")
    code, out, _ = run("poly", "--input", str(path), "--format", "sparse6")
    assert (code, out.strip()) == (0, "1 - q^2")


def test_family_encodings():
    code, out, _ = run("family", "--family", "cycle:5", "--encode", "graph6")
    assert (code, out) == (0, "n=5 m=5 corank=1\nDhc\n")
    code, _, err = run("family", "--family", "bundle:2", "--encode", "graph6")
    assert code == 1 and "sparse6" in err
    code, out, _ = run("family", "--family", "bundle:2", "--encode", "sparse6", "--json")
    assert json.loads(out)["data"] == ":Ab"


def test_enumerate(tmp_path):
    code, out, _ = run("enumerate", "--order", "4", "--class", "2ec")
    assert code == 0 and len(out.splitlines()) == 3
    target = tmp_path / "g.g6"
    code, out, _ = run("enumerate", "--order", "5", "--output", str(target), "--json")
    assert json.loads(out)["count"] == 21
    assert len(target.read_text().splitlines()) == 21


def test_survey_and_scatter(tmp_path):
    code, out, _ = run("survey", "--order", "4", "--outdir", str(tmp_path))
    assert code == 0
    assert "min modulus: 0.33333333333333333333" in out
    assert (tmp_path / "census-4-connected.jsonl").exists()
    summary = json.loads((tmp_path / "summary-4-connected.json").read_text())
    assert summary["graph_count"] == 6
    code, out, _ = run("scatter", "--order", "4", "--output", str(tmp_path / "roots-4"), "--json")
    assert code == 0
    assert (tmp_path / "roots-4.csv").exists() and (tmp_path / "roots-4.svg").exists()


def test_mc():
    code, out, _ = run("mc", "--family", "cycle:4", "--q", "1/2", "--trials", "20000",
                       "--seed", "4", "--json")
    blob = json.loads(out)
    assert code == 0 and blob["exact"] == "5/16"
    assert abs(float(blob["z"])) <= 4


def test_verify_small_order():
    code, out, _ = run("verify", "--order", "5", "--expect-rationals", "1,-1/2,-1/3,-1/4")
    assert code == 0
    assert out.startswith("order 5, class connected: 21 graphs, 21 oracle checks, 0 failures")


def test_verify_wrong_expectation_fails():
    code, out, _ = run("verify", "--order", "4", "--expect-rationals", "1,-1/2")
    assert code == 1
    assert "FAIL rational roots" in out


@pytest.mark.slow
def test_verify_order8_two_edge_connected():
    code, out, _ = run("verify", "--order", "8", "--class", "2ec",
                       "--expect-rationals", "1,-1/2,-1/3,-1/4,-1/5,-1/7")
    assert code == 0, out


class TestExitCodes:
    @pytest.mark.parametrize("argv", [
        ("poly", "--family", "wheel:5"),
        ("poly",),
        ("poly", "--family", "cycle:3", "--graph6", "Bw"),
        ("poly", "--graph6", "B"),
        ("rational", "--family", "tree:1"),
        ("mc", "--family", "cycle:4", "--q", "3/2"),
        ("mc", "--family", "cycle:4", "--q", "x"),
        ("enumerate", "--order", "12"),
        ("enumerate", "--order", "4", "--class", "3c"),
        ("poly", "--input", "/nonexistent/graph.g6"),
    ])
    def test_domain_errors(self, argv):
        code, out, err = run(*argv)
        assert code == 1
        assert out == ""
        assert err.startswith("error:") and err.count("\n") == 1

    @pytest.mark.parametrize("argv", [("poly", "--family", "cycle:3", "--bogus"),
                                      ("frobnicate",), ("poly", "--fam", "cycle:3")])
    def test_usage_errors(self, argv):
        code, _, err = run(*argv)
        assert code == 1 and err.startswith("error:")

    def test_integrity_failure(self, monkeypatch):
        def broken(*a, **k):
            raise IntegrityError("remainder 1 after division")
        monkeypatch.setattr(relpoly, "h_vector", broken)
        code, _, err = run("hvector", "--family", "cycle:4")
        assert code == 2 and err.startswith("integrity failure:")


def test_byte_identical_output():
    argv = ("roots", "--family", "theta:2,2,3", "--json")
    assert run(*argv) == run(*argv)
    argv = ("mc", "--family", "cycle:4", "--q", "1/3", "--trials", "5000", "--seed", "11")
    assert run(*argv) == run(*argv)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "relroots", "rational", "--family", "cycle:5"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "{1, -1/4}\n"
