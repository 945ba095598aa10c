import io
import json
import subprocess
import sys

import pytest

from clusterfrieze.cli import run
from clusterfrieze.laurent import parse_laurent
from clusterfrieze.quiver import Quiver, initial_seed, mutation_closure

D4_TEXT = "D4: 1>3 2>3 3>4"


def test_vars_lists_sixteen_laurent_polynomials():
    code, out, err = run(["vars", "-q", D4_TEXT])
    assert code == 0 and err == ""
    lines = out.split()
    assert len(out.splitlines()) == 16
    assert "(u1*u2 + u4)/u3" in out.splitlines()
    parsed = {parse_laurent(line, 4) for line in out.splitlines()}
    assert parsed == mutation_closure(initial_seed(Quiver(4, ((1, 3), (2, 3), (3, 4))))) and lines


def test_vars_all_ones():
    code, out, _ = run(["vars", "-q", D4_TEXT, "--eval", "all=1"])
    assert code == 0
    assert sorted(int(x) for x in out.split()) == [1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3, 4, 4, 5, 6, 11]


def test_vars_in_user_labels():
    # same D4 with the joint called 1: the output must use the caller's names
    code, out, _ = run(["vars", "-q", "D4: 3>1 4>1 1>2"])
    assert code == 0
    assert "(u1 + 1)/u3" in out.splitlines()


def test_normalize_fork_gives_the_same_set():
    for text in (D4_TEXT, "D4: 3>1 2>3 3>4", "D5: 3>1 3>2 4>3 4>5"):
        _, plain, _ = run(["vars", "-q", text])
        _, normal, _ = run(["vars", "-q", text, "--normalize-fork"])
        assert set(plain.splitlines()) == set(normal.splitlines())


def test_type_a_and_rank_one():
    code, out, _ = run(["vars", "-q", "A1:"])
    assert code == 0 and set(out.split()) == {"u1", "2/u1"}
    code, out, _ = run(["vars", "-q", "A3: 1>2 2>3"])
    assert code == 0 and len(out.splitlines()) == 9


def test_triangulation_input():
    code, out, _ = run(["vars", "-q", "6: 1-3 1-4 1-5"])
    assert code == 0 and len(out.splitlines()) == 9


def test_json_output_is_versioned_and_deterministic():
    first = run(["vars", "-q", D4_TEXT, "--format", "json"])
    second = run(["vars", "-q", D4_TEXT, "--format", "json"])
    assert first == second
    doc = json.loads(first[1])
    assert doc["schema"] == 1 and doc["command"] == "vars" and doc["count"] == 16


def test_frieze_command():
    code, out, _ = run(["frieze", "-q", "D5: 1>3 2>3 3>4 4>5", "--format", "json"])
    doc = json.loads(out)
    assert code == 0 and doc["columns"][1][0] == "(u3 + 1)/u1"
    code, out, _ = run(["frieze", "-q", "D5: 1>3 2>3 3>4 4>5", "--modelled", "--format", "json"])
    doc = json.loads(out)
    assert code == 0 and doc["columns"][1][0] == "(u3^2 + 2*u3 + 1)/(u1*u2)"


def test_boundary_point():
    code, out, _ = run(["boundary", "-q", D4_TEXT, "--point", "6,1"])
    assert code == 0
    assert out.strip() == "(6,1) mixed: u4 y u3 y u1*u2 => (u1*u2 + u4)/u3"
    code, out, _ = run(["boundary", "-q", D4_TEXT, "--point", "6,1", "--format", "json"])
    doc = json.loads(out)
    assert doc["F"]["word"] == "y u4 y u3 y u1*u2 x 1 x u1*u2 x u3 x u4 x"
    assert doc["points"][0]["case"] == "mixed"


def test_check_passes_on_d4():
    code, out, _ = run(["check", "-q", D4_TEXT, "--samples", "20"])
    assert code == 0 and "FAIL" not in out and out.strip().endswith("all checks passed")


def test_check_flags_a_corrupted_frieze(tmp_path):
    _, out, _ = run(["frieze", "-q", "A3: 1>2 2>3", "--format", "json"])
    doc = json.loads(out)
    good = tmp_path / "good.json"
    good.write_text(json.dumps(doc))
    code, report, _ = run(["check", "--frieze-file", str(good)])
    assert code == 0, report
    doc["columns"][2][1] = "(u1*u2 + u1 + u3 + 1)/(u2*u3)"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, report, _ = run(["check", "--frieze-file", str(bad)])
    assert code == 1 and "FAIL" in report


@pytest.mark.parametrize("argv, expected", [
    (["vars", "-q", "D4: 1>2 2>3 3>4 4>1"], 1),      # not a tree
    (["vars", "-q", "D6: 1>2 2>3 3>4 4>5 3>6"], 1),   # an E6 tree
    (["vars", "-q", "E6: 1>2 2>3 3>4 4>5 3>6"], 2),   # unknown type letter
    (["vars", "-q", "D4 1>3"], 2),                    # bad syntax
    (["vars", "-q", "D4: 1>3 2>3 3>9"], 2),
    (["vars"], 2),                                    # no quiver
    (["vars", "-q", "A9: 1>2 2>3 3>4 4>5 5>6 6>7 7>8 8>9"], 3),
    (["boundary", "-q", D4_TEXT, "--point", "0,0"], 1),
    (["boundary", "-q", "A3: 1>2 2>3"], 1),
    (["frieze", "-q", "D4: 3>1 2>3 3>4", "--modelled"], 1),
    (["vars", "-q", "D4: 1>3 2>3 3>4", "--eval", "u1=0"], 2),
])
def test_exit_codes(argv, expected):
    code, out, err = run(argv)
    assert code == expected, (out, err)
    assert err


def test_stdin_and_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "clusterfrieze", "vars", "--file", "-"],
                          input=D4_TEXT, capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and len(proc.stdout.splitlines()) == 16


def test_file_input(tmp_path):
    path = tmp_path / "q.json"
    path.write_text(json.dumps({"type": "D", "rank": 4, "arrows": [[1, 3], [2, 3], [3, 4]]}))
    assert run(["vars", "--file", str(path)])[1] == run(["vars", "-q", D4_TEXT])[1]


def test_main_returns_exit_code(monkeypatch, capsys):
    from clusterfrieze.cli import main
    assert main(["vars", "-q", "A2: 1>2"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 5
    monkeypatch.setattr(sys, "stdin", io.StringIO("nonsense"))
    assert main(["vars", "--file", "-"]) == 2
