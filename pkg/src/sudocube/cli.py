"""Command-line interface.

Reports are ``key=value`` lines, optionally followed by grids in the text
format of :mod:`sudocube.isomap`.  Exit codes: 0 success, 1 bad input or
flags, 2 no solution, 3 several solutions, 4 failed internal check.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter

from . import isomap
from .clues import (
    InfeasibleSize,
    clue_grid,
    exhaustive_subset_check,
    find_minimal_puzzle,
    generate_puzzle,
    is_minimal,
    min_clue_lower_bound,
)
from .core import is_valid
from .enumeration import (
    CaseLabel,
    UnsupportedSize,
    all_base_grids,
    case_census,
    classify_case,
    count_digit_placements,
    is_base_grid,
    sudo_cases,
    total_grids,
)
from .solve import Puzzle, Status, count_solutions, grade, solve
from .symmetry import (
    ShapeClass,
    canonical_form,
    diagonal_planes_signature,
    orbit_partition,
    placement_census,
    shape_census,
    uniform_partition_detector,
)

EXIT_OK, EXIT_INPUT, EXIT_NONE, EXIT_MULTIPLE, EXIT_CHECK = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(args) -> isomap.Format:
    return isomap.Format.KURVE if args.format == "kurve" else isomap.Format.CUBE


def _read_input(args):
    if not args.input:
        raise UsageError("--input is required")
    if args.input == "-":
        text = sys.stdin.read()
    else:
        with open(args.input, encoding="utf-8", newline="") as fh:
            text = fh.read()
    value = isomap.parse(text)
    if isinstance(value, isomap.KurveGrid):
        value = isomap.kurve_to_cube(value)
    return value


class _Out:
    def __init__(self, path):
        self.parts = []
        self.path = path

    def kv(self, **pairs):
        self.parts.append(" ".join(f"{k}={v}" for k, v in pairs.items()) + "\n")

    def raw(self, text):
        self.parts.append(text if text.endswith("\n") else text + "\n")

    def grid(self, grid, fmt):
        self.parts.append(isomap.serialize(grid, fmt))

    def flush(self, stdout):
        text = "".join(self.parts)
        if self.path and self.path != "-":
            with open(self.path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            stdout.write(text)


def _bool(b: bool) -> str:
    return "true" if b else "false"


def cmd_count(args, out):
    out.kv(base=len(all_base_grids(args.size)), total=total_grids(args.size))


def cmd_enumerate(args, out):
    grids = all_base_grids(args.size)
    out.kv(count=len(grids))
    for g in grids:
        out.raw("")
        out.grid(g, _fmt(args))


def cmd_orbits(args, out):
    classes = orbit_partition(all_base_grids(args.size), jobs=args.jobs)
    out.kv(classes=len(classes), sizes=",".join(str(c.size) for c in classes))


def cmd_classify(args, out):
    if args.input:
        g = _read_input(args)
        if not (g.n == 3 and g.is_complete and is_valid(g)):
            raise UsageError("classify needs a complete valid size-3 grid")
        classes = orbit_partition(all_base_grids(3))
        key = canonical_form(g)
        cls = next(i for i, c in enumerate(classes) if c.key == key)
        case = classify_case(g).value if is_base_grid(g) else "none"
        out.kv(symmetry_class=cls, class_size=classes[cls].size, case=case,
               uniform_partition=_bool(uniform_partition_detector(g)),
               diagonal_planes=",".join(map(str, diagonal_planes_signature(g))))
        return
    c = case_census()
    out.kv(case1=c[CaseLabel.CASE1], case2=c[CaseLabel.CASE2], case3=c[CaseLabel.CASE3])


def cmd_sudo_cases(args, out):
    cases = sudo_cases()
    c = Counter(classify_case(g) for g in cases)
    out.kv(count=len(cases), case1=c[CaseLabel.CASE1], case2=c[CaseLabel.CASE2], case3=c[CaseLabel.CASE3])
    for i, g in enumerate(cases):
        out.raw("")
        out.kv(sudo_case=i, case=classify_case(g).value,
               uniform_partition=_bool(uniform_partition_detector(g)))
        out.grid(g, _fmt(args))


def cmd_solve(args, out):
    grid = _read_input(args)
    report = solve(Puzzle.from_grid(grid))
    out.kv(status=report.status.value, deductions=len(report.deductions),
           count=report.count if report.count is not None else "unknown")
    if report.status is Status.UNIQUE:
        out.grid(report.solution, _fmt(args))
        return EXIT_OK
    return EXIT_NONE if report.status is Status.NONE else EXIT_MULTIPLE


def cmd_check(args, out):
    grid = _read_input(args)
    valid = is_valid(grid)
    if not valid:
        out.kv(valid="false", solutions=0)
        return EXIT_NONE
    p = Puzzle.from_grid(grid)
    count = count_solutions(p, cap=args.cap)
    pairs = dict(valid="true", clues=sum(1 for v in grid.cells if v), solutions=count)
    if count == 1 and grid.n == 3:
        pairs["grade"] = grade(p).value
    out.kv(**pairs)
    if count == 0:
        return EXIT_NONE
    return EXIT_OK if count == 1 else EXIT_MULTIPLE


def cmd_minclues(args, out):
    n = args.size
    bound = min_clue_lower_bound(n)
    out.kv(lower_bound=bound)
    grids = [c.representative for c in orbit_partition(all_base_grids(n))]
    for i, g in enumerate(grids):
        cs = find_minimal_puzzle(g, bound)
        if cs is None:
            out.kv(symmetry_class=i, found="false")
            continue
        counts = count_solutions(cs.puzzle())
        out.kv(symmetry_class=i, found="true", clues=len(cs), solutions=counts)
        out.grid(clue_grid(cs), _fmt(args))
        if args.exhaustive and bound > 0:
            rep = exhaustive_subset_check(g, bound - 1)
            out.kv(symmetry_class=i, exhaustive_k=rep.k, subsets=rep.subsets,
                   unique=rep.unique, min_solutions=rep.min_count)
            if rep.unique:
                return EXIT_CHECK
    return EXIT_OK


def cmd_generate(args, out):
    k = args.clues if args.clues is not None else min_clue_lower_bound(args.size)
    gen = generate_puzzle(args.seed, args.size, k)
    out.kv(seed=gen.seed, size=args.size, requested_clues=gen.requested_clues, clues=gen.clues,
           minimal=_bool(is_minimal(gen.clueset)))
    out.grid(gen.puzzle.grid, _fmt(args))


def cmd_convert(args, out):
    grid = _read_input(args)
    out.grid(grid, _fmt(args))


def cmd_shapes(args, out):
    if args.input:
        g = _read_input(args)
        if not (g.n == 3 and g.is_complete and is_valid(g)):
            raise UsageError("shapes needs a complete valid size-3 grid")
        counts = shape_census(g)
    else:
        counts = placement_census(3)
    out.kv(**{s.value: counts[s] for s in ShapeClass})


def cmd_placements(args, out):
    out.raw(str(count_digit_placements(args.size)))


def cmd_verify_paper(args, out):
    from .reproduce import run_all

    results = run_all(exhaustive=args.exhaustive)
    for r in results:
        out.kv(check=r.name, result="pass" if r.passed else "fail", detail=r.detail.replace("\n", " "))
    failed = sum(not r.passed for r in results)
    out.kv(checks=len(results), failed=failed)
    return EXIT_OK if failed == 0 else EXIT_CHECK


COMMANDS = {
    "count": cmd_count,
    "enumerate": cmd_enumerate,
    "orbits": cmd_orbits,
    "classify": cmd_classify,
    "sudo-cases": cmd_sudo_cases,
    "solve": cmd_solve,
    "check": cmd_check,
    "minclues": cmd_minclues,
    "generate": cmd_generate,
    "convert": cmd_convert,
    "shapes": cmd_shapes,
    "placements": cmd_placements,
    "verify-paper": cmd_verify_paper,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sudocube", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--size", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--clues", type=int)
    parser.add_argument("--cap", type=int, default=None)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--format", "--to", dest="format", choices=("cube", "kurve"), default="cube")
    parser.add_argument("--exhaustive", action="store_true")
    parser.add_argument("--output")
    parser.add_argument("--input")
    return parser


def run(argv, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        if args.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        if args.cap is None:
            args.cap = float("inf")
        elif args.cap < 1:
            raise UsageError("--cap must be >= 1")
        out = _Out(args.output)
        code = COMMANDS[args.command](args, out)
        out.flush(stdout)
        return EXIT_OK if code is None else code
    except AssertionError as exc:
        stderr.write(f"internal check failed: {exc}\n")
        return EXIT_CHECK
    except (UsageError, isomap.ParseError, UnsupportedSize, isomap.UnsupportedSize,
            InfeasibleSize, OSError, ValueError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
