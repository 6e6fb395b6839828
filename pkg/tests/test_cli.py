import json

from main import main

U22 = "field 2 1 0 1\n2 2\n1 0\n0 1\n"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def body_and_verdict(out):
    text, verdict = out.rstrip("\n").rsplit("\nVERDICT: ", 1)
    return json.loads(text), verdict


def gen(capsys, tmp_path, name, *params):
    path = str(tmp_path / f"{name}.mat")
    code, out, _ = run(capsys, "gen", name, *params, "-o", path)
    assert code == 0
    return path, out


def test_gen_writes_a_matrix_file(capsys, tmp_path):
    path, out = gen(capsys, tmp_path, "pg", "3", "2")
    body, verdict = body_and_verdict(out)
    assert verdict == "GENERATED"
    assert body["columns"] == 7 and body["output"] == path
    with open(path, encoding="utf-8") as fh:
        assert fh.readline() == "field 2 1 0 1\n"


def test_gen_inline(capsys):
    code, out, _ = run(capsys, "gen", "hat", "3", "2", "--apex")
    body, _ = body_and_verdict(out)
    assert code == 0
    assert body["columns"] == 13
    assert body["matrix"].startswith("ext 2 1 1 1\n3 13\n")


def test_decide_reads_roles(capsys, tmp_path):
    path, _ = gen(capsys, tmp_path, "obstruction", "2")
    code, out, _ = run(capsys, "decide", path)
    body, verdict = body_and_verdict(out)
    assert code == 0 and verdict == "BAD"
    assert body["certificate"]["z"] == ["x1", "x2", "x3"]
    assert body["obstructions"][0]["verified"]

    path, _ = gen(capsys, tmp_path, "bar", "3", "2")
    code, out, _ = run(capsys, "decide", path)
    assert code == 0 and body_and_verdict(out)[1] == "BAR"


def test_decide_with_explicit_pg_labels(capsys, tmp_path):
    path, _ = gen(capsys, tmp_path, "obstruction", "2")
    code, out, _ = run(capsys, "decide", path, "--pg", "p1..p7")
    assert code == 0 and body_and_verdict(out)[1] == "BAD"
    path, _ = gen(capsys, tmp_path, "hat", "3", "2")
    code, _, err = run(capsys, "decide", path, "--pg", "h1..h12")
    assert code == 2 and err.startswith("error:")
    path, _ = gen(capsys, tmp_path, "pg", "3", "2")
    code, _, err = run(capsys, "decide", path)
    assert code == 2
    assert err.startswith("error:")


def test_tangle_commands(capsys, tmp_path):
    path, _ = gen(capsys, tmp_path, "pg", "3", "2")
    code, out, _ = run(capsys, "tangle", "check", path, "-k", "3")
    assert code == 0 and body_and_verdict(out)[1] == "TANGLE"
    code, out, _ = run(capsys, "tangle", "rank", path, "-k", "3", "--set", "p1")
    assert code == 0 and body_and_verdict(out)[0]["rank"] == 1
    code, out, _ = run(capsys, "tangle", "sets", path, "-k", "3")
    assert len(body_and_verdict(out)[0]["sets"]) == 8


def test_failed_tangle_check_exits_one(capsys, tmp_path):
    path = tmp_path / "u22.mat"
    path.write_text(U22, encoding="utf-8")
    code, out, _ = run(capsys, "tangle", "check", str(path), "-k", "2")
    body, verdict = body_and_verdict(out)
    assert code == 1 and verdict == "NOT_TANGLE"
    assert body["axiom"] == "T1" and body["witness"] == [[]]


def test_connectivity_queries(capsys, tmp_path):
    path, _ = gen(capsys, tmp_path, "pg", "3", "2")
    code, out, _ = run(capsys, "connectivity", path, "--lambda", "p1..p3")
    assert code == 0 and body_and_verdict(out)[0]["lambda"] == 2
    code, out, _ = run(capsys, "connectivity", path, "--round")
    assert body_and_verdict(out)[1] == "ROUND"
    code, out, _ = run(capsys, "connectivity", path, "--kappa", "p1,p2", "p5")
    assert code == 0 and body_and_verdict(out)[1] == "KAPPA"


def test_class_bound_exits_three(capsys, tmp_path):
    path, _ = gen(capsys, tmp_path, "pg", "3", "2")
    code, _, err = run(capsys, "--max-classes", "1", "connectivity", path, "--kappa", "p1", "p2")
    assert code == 3
    assert err.startswith("error:")


def test_representable(capsys, tmp_path):
    path, _ = gen(capsys, tmp_path, "pg", "3", "2")
    code, out, _ = run(capsys, "representable", path, "--fields", "2,3")
    body, verdict = body_and_verdict(out)
    assert code == 0 and verdict == "NOT_REPRESENTABLE"
    assert body["representable"] == [2]
    assert list(body["witnesses"]) == ["2"]


def test_input_errors_exit_two(capsys, tmp_path):
    code, _, err = run(capsys, "decide", str(tmp_path / "missing.mat"))
    assert code == 2 and err.startswith("error:")
    bad = tmp_path / "bad.mat"
    bad.write_text("field 2 1 0 1\n1 2\n1 7\n", encoding="utf-8")
    code, _, err = run(capsys, "connectivity", str(bad), "--round")
    assert code == 2 and "line 3" in err
    path, _ = gen(capsys, tmp_path, "pg", "3", "2")
    code, _, _ = run(capsys, "algebra", "confine", path)
    assert code == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "gen", "cube", "3", "2")[0] == 2


def test_verify_suite_single_check(capsys):
    code, out, _ = run(capsys, "verify-suite", "--check", "2")
    body, verdict = body_and_verdict(out)
    assert code == 0 and verdict == "PASS"
    assert [c["number"] for c in body["checks"]] == [2]
