import json
import subprocess
import sys
from pathlib import Path

import pytest

from treecut.cli import EXIT_ERROR, EXIT_LIMIT, EXIT_NO, EXIT_YES, main

DATA = Path(__file__).resolve().parent.parent / "data"
DISPLAY_ONLY = sorted(str(p) for p in (DATA / "profile_a").glob("*.nwk"))
WITH_AST = sorted(str(p) for p in (DATA / "profile_b").glob("*.nwk"))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compat_and_agree(capsys):
    assert run(capsys, "compat", *DISPLAY_ONLY)[:2] == (EXIT_YES, "YES\n")
    assert run(capsys, "agree", *DISPLAY_ONLY)[:2] == (EXIT_NO, "NO\n")
    assert run(capsys, "agree", *WITH_AST)[0] == EXIT_YES


@pytest.mark.parametrize("cmd", ["compat", "agree"])
def test_oracle_agrees(capsys, cmd):
    for files in (DISPLAY_ONLY, WITH_AST):
        assert run(capsys, cmd, *files)[1] == run(capsys, cmd, "--oracle", *files)[1]


def test_json_and_witness(capsys, tmp_path):
    wpath = tmp_path / "w.json"
    code, out, _ = run(capsys, "agree", "--json", "--witness", str(wpath), *WITH_AST)
    assert code == EXIT_YES
    data = json.loads(out)
    assert data["schema"] == 1 and data["answer"] == "YES"
    saved = json.loads(wpath.read_text())
    assert saved["cuts"] == [["1-2", "4-5"], ["1-2", "5-6"], ["2-3", "6-d"]]


def test_single_multitree_file(capsys, tmp_path):
    f = tmp_path / "p.nwk"
    f.write_text("".join(Path(p).read_text() for p in DISPLAY_ONLY))
    assert run(capsys, "compat", str(f))[0] == EXIT_YES


def test_supertree(capsys, tmp_path):
    out = tmp_path / "s.nwk"
    assert run(capsys, "supertree", "--mode", "agree", "-o", str(out), *WITH_AST)[0] == EXIT_YES
    assert out.read_text() == "(a,b,((c,(d,e)),f));\n"
    assert run(capsys, "supertree", "--mode", "agree", *DISPLAY_ONLY)[0] == EXIT_NO


def test_parse_error(capsys, tmp_path):
    bad = tmp_path / "bad.nwk"
    bad.write_text("(a,b,c);\n(a,(b,c)));\n")
    code, _, err = run(capsys, "compat", str(bad))
    assert code == EXIT_ERROR
    assert "bad.nwk" in err and "line 2" in err


def test_missing_file(capsys):
    assert run(capsys, "compat", "/nonexistent.nwk")[0] == EXIT_ERROR


def test_limits(capsys, monkeypatch):
    assert run(capsys, "compat", "--limit", "6", *DISPLAY_ONLY)[0] == EXIT_LIMIT
    assert run(capsys, "compat", "--limit", "3", *DISPLAY_ONLY)[0] == EXIT_ERROR
    monkeypatch.setenv("TREECUT_LIMIT", "6")
    assert run(capsys, "compat", *DISPLAY_ONLY)[0] == EXIT_LIMIT


def test_oracle_limit(capsys, tmp_path):
    f = tmp_path / "big.nwk"
    f.write_text("(a,b,(c,(d,(e,(f,(g,h))))));\n")
    assert run(capsys, "compat", "--oracle", str(f))[0] == EXIT_LIMIT


def test_witness_with_oracle_is_an_error(capsys, tmp_path):
    assert run(capsys, "compat", "--oracle", "--witness", str(tmp_path / "w"), *WITH_AST)[0] == EXIT_ERROR


def test_dot_is_byte_stable(capsys):
    first = run(capsys, "dot", "--elig", *WITH_AST)[1]
    second = run(capsys, "dot", "--elig", *WITH_AST)[1]
    assert first == second
    assert first.count("graph ") == 2


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest", "--count", "10")
    assert code == EXIT_YES and "FAIL" not in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "treecut", "compat", *DISPLAY_ONLY], capture_output=True, text=True
    )
    assert proc.returncode == 0 and proc.stdout == "YES\n"
