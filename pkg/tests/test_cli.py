import json

import pytest

from ctsrw.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    assert code == 0
    return json.loads(out)


def result(doc, prefix):
    return next(r for r in doc["results"] if r["name"].startswith(prefix))


@pytest.fixture
def triangle_file(tmp_path):
    p = tmp_path / "triangle.txt"
    p.write_text("# triangle\na b\nb c\nc a\n")
    return str(p)


@pytest.fixture
def star_file(tmp_path):
    p = tmp_path / "star.txt"
    p.write_text("hub x\nhub y\nhub z\n")
    return str(p)


def test_analyze_triangle_file(capsys, triangle_file):
    doc = run_json(capsys, "analyze", triangle_file)
    assert result(doc, "frequency f")["value"] == 2
    assert result(doc, "h(a,a)")["value"] == 1.5
    assert result(doc, "h(a,·)")["value"] == [1.5, 1, 1]
    assert doc["graph"]["bipartite"] is False
    for r in doc["results"]:
        assert r["method"] in {"spectral", "quadrature", "oracle", "monte-carlo", "formula", "exact"}


def test_analyze_square_flags_bipartite(capsys):
    doc = run_json(capsys, "analyze", "c4")
    assert result(doc, "frequency f")["value"] == 2
    assert doc["graph"]["bipartite"] is True
    assert any("bipartite" in n for n in doc["notes"])


def test_analyze_star_bounds(capsys, star_file):
    doc = run_json(capsys, "analyze", star_file)
    assert result(doc, "frequency f")["value"] == 1.5
    assert result(doc, "frequency bounds")["value"] == [1, 3]


def test_text_output_is_table(capsys):
    code, out, _ = run(capsys, "analyze", "k3")
    assert code == 0
    assert out.startswith("$ analyze k3")
    assert "frequency f = 2w/n" in out


def test_hitting_methods(capsys):
    doc = run_json(capsys, "hitting", "k3", "--from", "a", "--to", "b")
    assert result(doc, "h(a,b)")["value"] == pytest.approx(1.0, abs=1e-12)
    doc = run_json(capsys, "hitting", "c4", "--from", "1", "--to", "2", "--method", "quadrature")
    assert abs(result(doc, "h(1,2)")["value"] - 1.5) <= 1e-6
    doc = run_json(capsys, "hitting", "c4", "--from", "1", "--to", "3", "--method", "oracle")
    assert result(doc, "H(1,3)")["value"] == pytest.approx(4.0, abs=1e-12)


def test_hitting_mc(capsys):
    doc = run_json(capsys, "hitting", "c4", "--from", "1", "--to", "2", "--method", "mc", "--replicas", "20000")
    r = result(doc, "h(1,2)")
    assert r["method"] == "monte-carlo"
    assert abs(r["value"] - 1.5) <= 4 * r["stderr"]
    assert doc["meta"]["seed"] == 42 and doc["meta"]["replicas"] == 20000


def test_meeting_paper_values(capsys):
    doc = run_json(capsys, "meeting", "k3", "--target", "a", "--method", "tuple", "--exact")
    assert result(doc, "h(Id,c_a)")["exact"] == "31/6"
    assert result(doc, "H(Id,c_a)")["exact"] == "31"
    doc = run_json(capsys, "meeting", "c4", "--target", "1", "--method", "tuple", "--exact")
    assert result(doc, "h(Id,c_1)")["exact"] == "1336/35"
    H = result(doc, "H(Id,c_1)")
    assert H["exact"] == "10688/35" and round(H["value"], 3) == 305.371


def test_meeting_cross_method_c5(capsys):
    a = run_json(capsys, "meeting", "c5", "--target", "1", "--method", "tuple")
    b = run_json(capsys, "meeting", "c5", "--target", "1", "--method", "quadrature")
    assert abs(result(a, "h(Id,c_1)")["value"] - result(b, "h(Id,c_1)")["value"]) <= 1e-6


def test_meeting_exact_falls_back_with_note(capsys):
    doc = run_json(capsys, "meeting", "c5", "--target", "1", "--exact")
    assert "exact" not in result(doc, "h(Id,c_1)")
    assert doc["notes"]


def test_meeting_tuple_cap_message(capsys):
    code, _, err = run(capsys, "meeting", "c9", "--target", "1")
    assert code == 2
    assert "quadrature" in err


def test_meeting_weighted_rejected(capsys, tmp_path):
    p = tmp_path / "w.txt"
    p.write_text("a b 2\nb c 1\n")
    code, _, err = run(capsys, "meeting", str(p), "--target", "a")
    assert code == 2 and err


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "k3", "--replicas", "4000")
    assert code == 0
    assert "FAIL" not in out


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "no/such/file.txt"],
        ["hitting", "k3", "--from", "a", "--to", "zz"],
        ["meeting", "k3", "--target", "q"],
        ["analyze", "k3", "--replicas", "0"],
    ],
)
def test_input_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("ctsrw: error:")


def test_parse_error_names_file_and_line(capsys, tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("a b\nb b\n")
    code, _, err = run(capsys, "analyze", str(p))
    assert code == 2
    assert f"{p}:2:" in err


def test_json_is_byte_identical(capsys):
    argv = ("meeting", "k3", "--target", "a", "--method", "mc", "--replicas", "2000", "--json")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    _, c, _ = run(capsys, *argv, "--workers", "2")
    assert json.loads(c)["results"] == json.loads(a)["results"]
