import io
import re
import subprocess
import sys

import pytest

from sudocube.cli import run
from sudocube.core import CubeGrid
from sudocube.enumeration import all_base_grids
from sudocube.isomap import Format, serialize

REPORT = re.compile(r"^[a-z_]+=[^\n]*$")
GRID_LINE = re.compile(r"^(#sudo(cube|kurve) n=\d|[.1-9]+)$")


def call(*argv, stdin=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def grammar_ok(text):
    for line in text.split("\n")[:-1]:
        if line and not (REPORT.match(line) or GRID_LINE.match(line)):
            return False
    return text.endswith("\n")


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8", newline="")
    return str(p)


def test_count():
    assert call("count", "--size", "3") == (0, "base=40 total=14515200\n", "")
    assert call("count", "--size", "2")[1] == "base=1 total=24\n"
    assert call("count", "--size", "4")[0] == 1


def test_orbits():
    assert call("orbits", "--size", "3")[1] == "classes=2 sizes=4,36\n"
    assert call("orbits", "--size", "3", "--jobs", "4")[1] == "classes=2 sizes=4,36\n"


def test_placements():
    assert call("placements", "--size", "2")[1] == "4\n"
    assert call("placements", "--size", "4")[1] == "576\n"


def test_classify_and_shapes():
    assert call("classify")[1] == "case1=16 case2=12 case3=12\n"
    assert call("shapes")[1] == "diagonal=4 scalene_corner=24 equilateral=8\n"


def test_classify_input(tmp_path):
    path = write(tmp_path, "g.txt", serialize(all_base_grids(3)[0]))
    code, out, _ = call("classify", "--input", path)
    assert code == 0
    assert out == "symmetry_class=0 class_size=4 case=1 uniform_partition=true diagonal_planes=3,3,3\n"
    assert call("shapes", "--input", path)[1] == "diagonal=1 scalene_corner=6 equilateral=2\n"


def test_sudo_cases_report():
    code, out, _ = call("sudo-cases")
    assert code == 0 and out.startswith("count=10 case1=4 case2=3 case3=3\n")
    assert out.count("uniform_partition=true") == 1
    assert grammar_ok(out)


def test_enumerate_kurve():
    code, out, _ = call("enumerate", "--size", "2", "--format", "kurve")
    assert code == 0 and out.startswith("count=1\n\n#sudokurve n=2\n")


def test_generate_golden():
    code, out, _ = call("generate", "--seed", "0")
    assert code == 0
    assert out == (
        "seed=0 size=3 requested_clues=8 clues=8 minimal=true\n"
        "#sudocube n=3\n7.3\n...\n.81\n\n2..\n...\n...\n\n9.5\n...\n..6\n"
    )
    assert call("generate", "--seed", "0")[1] == out
    assert call("generate", "--seed", "1")[1] != out
    assert call("generate", "--clues", "7")[0] == 1


def test_solve_exit_codes(tmp_path, monkeypatch):
    code, puzzle, _ = call("generate", "--seed", "2")
    grid_text = puzzle.split("\n", 1)[1]
    code, out, _ = call("solve", "--input", "-", stdin=grid_text, monkeypatch=monkeypatch)
    assert code == 0 and out.startswith("status=unique ")
    empty = write(tmp_path, "e.txt", "#sudocube n=2\n..\n..\n\n..\n..\n")
    code, out, _ = call("solve", "--input", empty)
    assert code == 3 and out.startswith("status=multiple") and "count=24" in out
    dup = write(tmp_path, "d.txt", "#sudocube n=2\n11\n..\n\n..\n..\n")
    assert call("solve", "--input", dup)[0] == 2


def test_check(tmp_path):
    full = write(tmp_path, "f.txt", serialize(all_base_grids(3)[3]))
    code, out, _ = call("check", "--input", full)
    assert code == 0 and out.startswith("valid=true clues=27 solutions=1")
    empty = write(tmp_path, "e.txt", serialize(CubeGrid.empty(3)))
    code, out, _ = call("check", "--input", empty, "--cap", "2")
    assert (code, out) == (3, "valid=true clues=0 solutions=2\n")
    bad = write(tmp_path, "b.txt", "#sudocube n=2\n11\n..\n\n..\n..\n")
    assert call("check", "--input", bad)[0] == 2


@pytest.mark.parametrize("argv", [
    ["nonsense"],
    ["count", "--size", "x"],
    ["orbits", "--jobs", "0"],
    ["check", "--cap", "0", "--input", "-"],
    ["solve"],
    ["convert", "--input", "/nonexistent/file"],
])
def test_input_errors(argv):
    code, out, err = call(*argv)
    assert code == 1 and out == "" and err.startswith("error:")


def test_parse_error_exit(tmp_path):
    path = write(tmp_path, "bad.txt", "#sudocube n=2\n12\n35\n\n..\n..\n")
    code, _, err = call("convert", "--input", path)
    assert code == 1 and "line 3" in err


def test_convert_round_trip(tmp_path):
    g = all_base_grids(3)[17]
    src = write(tmp_path, "c.txt", serialize(g))
    code, kurve, _ = call("convert", "--input", src, "--to", "kurve")
    assert code == 0 and kurve == serialize(g, Format.KURVE)
    mid = write(tmp_path, "k.txt", kurve)
    code, cube, _ = call("convert", "--input", mid, "--format", "cube")
    assert cube == serialize(g)


def test_output_file(tmp_path):
    target = tmp_path / "out.txt"
    code, out, _ = call("count", "--output", str(target))
    assert code == 0 and out == ""
    assert target.read_bytes() == b"base=40 total=14515200\n"


def test_minclues_grammar():
    code, out, _ = call("minclues")
    assert code == 0 and out.startswith("lower_bound=8\n")
    assert out.count("found=true clues=8 solutions=1") == 2
    assert grammar_ok(out)
    assert call("minclues", "--size", "2")[1].startswith("lower_bound=3\n")


def test_verify_paper():
    code, out, _ = call("verify-paper")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 14 and lines[-1] == "checks=13 failed=0"
    assert all(REPORT.match(line) and "result=pass" in line for line in lines[:-1])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sudocube.cli", "count"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "base=40 total=14515200\n"
