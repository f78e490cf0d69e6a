import json
import subprocess
import sys

import pytest

from bipref.cli import (
    EXIT_INCOHERENT, EXIT_IO, EXIT_NOT_ENTAILED, EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION,
    EXIT_RESOURCE, main,
)

from conftest import THEORIES


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, text, name="t.thy"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_check_asparagus(capsys):
    code, out, _ = run(capsys, "check", THEORIES / "asparagus.thy")
    assert code == EXIT_OK
    assert "coherent: yes" in out
    assert "O(f | a)  >  O(~f)" in out
    assert "D0 = {true => ~a}" in out and "D1 = {r => a}" in out


def test_check_incoherent(capsys, tmp_path):
    p = write(tmp_path, "default: a => b\ndefault: a => ~b\n")
    code, out, _ = run(capsys, "check", p, "--format", "json")
    assert code == EXIT_INCOHERENT
    data = json.loads(out)
    assert data["coherent"] is False
    assert data["incoherent_witness"] == ["a => b", "a => ~b"]


def test_check_empty_file(capsys, tmp_path):
    code, out, _ = run(capsys, "check", write(tmp_path, ""))
    assert code == EXIT_OK
    assert "coherent: yes" in out and "defeat: none" in out


def test_rank_lex_and_fdis(capsys):
    code, out, _ = run(capsys, "rank", THEORIES / "exception_normality.thy", "--format", "json")
    assert code == EXIT_OK
    worlds = json.loads(out)["worlds"]
    assert [(w["class"], w["label"], w["tuple"]) for w in worlds] == [
        (0, "-a -r", [0, 0]), (1, "a -r", [0, 1]), (1, "a r", [0, 1]), (2, "-a r", [1, 0])]
    code, out, _ = run(capsys, "rank", THEORIES / "exception_normality.thy", "--method", "fdis",
                       "--format", "json")
    classes = {w["label"]: w["class"] for w in json.loads(out)["worlds"]}
    assert classes["a r"] == classes["-a r"] == 1 and classes["-a -r"] == 0


def test_rank_asparagus_table(capsys):
    code, out, _ = run(capsys, "rank", THEORIES / "asparagus.thy")
    lines = out.strip().splitlines()
    assert code == EXIT_OK and len(lines) == 17
    assert lines[1].startswith("0")


def test_query_asparagus(capsys):
    code, out, _ = run(capsys, "query", THEORIES / "asparagus.thy")
    assert code == EXIT_NOT_ENTAILED
    lines = out.strip().splitlines()
    assert lines[0].startswith("O(n | a): yes")
    assert lines[1].startswith("O(~f | a): no")
    assert lines[2].startswith("O(~a): no  witness: a f n")
    assert lines[3] == "O(~f): yes  witness: -a -f n -r"


def test_query_json_is_stable_and_matches_text(capsys):
    args = ("query", THEORIES / "asparagus.thy", "--format", "json")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second
    data = json.loads(first)
    assert data["vocab"] == ["a", "f", "n", "r"]
    assert len(data["worlds"]) == 16
    assert set(data["worlds"][0]) == {"label", "tuple", "falsified", "violated"}
    _, text, _ = run(capsys, "query", THEORIES / "asparagus.thy")
    text_verdicts = [line.split(": ")[1].split()[0] for line in text.strip().splitlines()]
    assert text_verdicts == [q["verdict"] for q in data["queries"]]


def test_query_exit_codes(capsys, tmp_path):
    assert run(capsys, "query", THEORIES / "nonmono_weak.thy")[0] == EXIT_OK
    assert run(capsys, "query", THEORIES / "nonmono_strong.thy")[0] == EXIT_NOT_ENTAILED
    assert run(capsys, "query", write(tmp_path, "query: [] (p | ~p)"))[0] == EXIT_OK
    assert run(capsys, "query", write(tmp_path, "norm: O(x)"))[0] == EXIT_PRECONDITION
    assert run(capsys, "query", write(tmp_path, "norm: O(x) &"))[0] == EXIT_PARSE
    assert run(capsys, "query", tmp_path / "missing.thy")[0] == EXIT_IO
    assert run(capsys, "query", THEORIES / "incoherent.thy")[0] == EXIT_INCOHERENT


def test_query_all_models(capsys, tmp_path):
    code, out, _ = run(capsys, "query", write(tmp_path, "query: <>a"), "--mode", "all-models")
    assert code == EXIT_NOT_ENTAILED and "countermodel: {-a}" in out
    big = write(tmp_path, "norm: O(a | b & c & d & e)\nquery: O(a)")
    assert run(capsys, "query", big, "--mode", "all-models")[0] == EXIT_RESOURCE


def test_iol(capsys):
    code, out, _ = run(capsys, "iol", THEORIES / "asparagus_norms.thy", "--input", "a", "--head", "f")
    assert code == EXIT_OK
    assert "maxfamily for input a: {0, 1, 2}" in out
    assert "full meet: yes" in out
    assert "0: (true & ~a, ~f)" in out
    code, out, _ = run(capsys, "iol", THEORIES / "conflict.thy", "--input", "true", "--head", "x",
                       "--format", "json")
    data = json.loads(out)
    assert code == EXIT_NOT_ENTAILED
    assert data["maxfamily"] == [[0], [1]] and data["full_meet"] == "no"


def test_iol_inconsistent_input(capsys):
    code, _, err = run(capsys, "iol", THEORIES / "asparagus_norms.thy", "--input", "false", "--head", "f")
    assert code == EXIT_PRECONDITION and "inconsistent" in err


def test_crosscheck_random(capsys):
    code, out, _ = run(capsys, "crosscheck", "--random", 50, "--atoms", 3, "--rules", 3, "--seed", 7)
    assert code == EXIT_OK
    assert "Hansson vs full meet agreement: 50/50" in out
    assert "full meet implies exists-forall obligation: 50/50" in out
    _, again, _ = run(capsys, "crosscheck", "--random", 50, "--atoms", 3, "--rules", 3, "--seed", 7)
    assert out == again


def test_crosscheck_file(capsys):
    code, out, _ = run(capsys, "crosscheck", THEORIES / "conflict.thy", "--format", "json")
    data = json.loads(out)
    assert code == EXIT_OK and data["failures"] == []
    assert data["converse_gaps"]
    assert run(capsys, "crosscheck", THEORIES / "asparagus.thy")[0] == EXIT_PRECONDITION


def test_crosscheck_arguments(capsys):
    assert run(capsys, "crosscheck", "--random", 5)[0] == EXIT_PRECONDITION
    assert run(capsys, "crosscheck", "--random", 5, "--atoms", 9, "--seed", 1)[0] == EXIT_PRECONDITION
    with pytest.raises(SystemExit):
        main(["crosscheck"])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bipref", "check", str(THEORIES / "gentle_murder.thy")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "defeat: none" in proc.stdout
