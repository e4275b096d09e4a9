"""Reproduction checks for the headline counts and structural facts.

Each check returns a :class:`CheckResult`; :func:`run_all` runs them in
order.  The CLI ``verify-paper`` command prints the resulting table and the
acceptance tests assert on the same functions.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from .clues import (
    SplitMix64,
    exhaustive_subset_check,
    find_minimal_puzzle,
    min_clue_lower_bound,
    random_solution,
    second_solution_by_symbol_swap,
)
from .core import Axis, CubeGrid, coord_of, is_valid
from .enumeration import (
    CaseLabel,
    all_base_grids,
    case_census,
    classify_case,
    count_digit_placements,
    five_corner_positions,
    sudo_cases,
    total_grids,
)
from .isomap import cube_to_kurve, kurve_is_valid, kurve_to_cube
from .solve import Puzzle, count_solutions, count_solutions_backtracking
from .symmetry import (
    GroupElement,
    ShapeClass,
    diagonal_planes_signature,
    orbit_partition,
    placement_census,
    reflect_blocks_relabeled,
    shape_census,
    space_diagonal_rotation,
    swap_layers,
    to_sudo_case,
    uniform_partition_detector,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    lines: list = field(default_factory=list)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.name} ({self.seconds:.2f}s): {self.detail}"


def _timed(name):
    def wrap(fn):
        def run(*args, **kwargs):
            t = time.perf_counter()
            res = fn(*args, **kwargs)
            res.name = name
            res.seconds = time.perf_counter() - t
            return res
        run.__name__ = fn.__name__
        run.check_name = name
        return run
    return wrap


@_timed("census")
def check_census():
    base = len(all_base_grids(3))
    total = total_grids(3)
    return CheckResult("", base == 40 and total == 14515200 == 40 * math.factorial(9),
                       f"base={base} total={total}")


@_timed("cases")
def check_cases():
    c = case_census()
    got = (c[CaseLabel.CASE1], c[CaseLabel.CASE2], c[CaseLabel.CASE3])
    return CheckResult("", got == (16, 12, 12), "case1=%d case2=%d case3=%d" % got)


@_timed("sudo_cases")
def check_sudo_cases():
    cases = sudo_cases()
    c = case_census(cases)
    split = (c[CaseLabel.CASE1], c[CaseLabel.CASE2], c[CaseLabel.CASE3])
    ok = len(cases) == 10 and split == (4, 3, 3) and 10 * 4 * math.factorial(9) == total_grids(3)
    return CheckResult("", ok, "count=%d split=%d/%d/%d" % (len(cases), *split))


@_timed("corners")
def check_corners():
    rep = five_corner_positions()
    ok = rep.holds and set(rep.corner_counts.values()) == {10}
    detail = " ".join(f"({r},{c})={v}" for (r, c), v in rep.corner_counts.items())
    return CheckResult("", ok, f"{detail} off_corner={rep.off_corner}")


@_timed("classes")
def check_classes():
    grids = all_base_grids(3)
    classes = orbit_partition(grids)
    sizes = [c.size for c in classes]
    small = set(classes[0].members)
    detector_ok = all(uniform_partition_detector(g) == (g in small) for g in grids)
    sc = orbit_partition(sudo_cases())
    sc_sizes = [c.size for c in sc]
    ok = len(classes) == 2 and sizes == [4, 36] and sc_sizes == [1, 9] and detector_ok
    return CheckResult("", ok, f"classes={len(classes)} sizes={sizes} sudo_case_split={sc_sizes} "
                               f"detector_exact={detector_ok}")


def _named_moves():
    moves = [
        ("reflect_blocks", reflect_blocks_relabeled()),
        ("swap_b1_b2", swap_layers(Axis.LAYER, 0, 1)),
        ("swap_b2_b3", swap_layers(Axis.LAYER, 1, 2)),
        ("swap_top_middle_rows", swap_layers(Axis.ROW, 0, 1)),
    ]
    rots = []
    for corner in ((0, 0, 0), (2, 0, 0), (0, 2, 0), (0, 0, 2)):
        for turns in (1, 2):
            rots.append((f"rotate_diagonal{corner}x{turns}", space_diagonal_rotation(corner, turns=turns)))
    return moves, rots


def sudo_case_images(move):
    """For each sudo-case: the sudo-case its image normalizes to, and the witness."""
    cases = sudo_cases()
    index = {g: i for i, g in enumerate(cases)}
    out = []
    for g in cases:
        moved = move(g)
        image, fix = to_sudo_case(moved)
        if isinstance(move, GroupElement):
            geo, rho = move.geo, move.relabel
        else:
            geo, rho = move, None
        witness = GroupElement(geo.then(fix.geo), fix.relabel if rho is None else rho.then(fix.relabel))
        assert witness(g) == image
        out.append((index[image], witness))
    return out


@_timed("transforms")
def check_transforms():
    cases = sudo_cases()
    labels = [classify_case(g) for g in cases]
    small = {i for i, g in enumerate(cases) if uniform_partition_detector(g)}
    large = set(range(len(cases))) - small
    moves, rots = _named_moves()
    edges = set()
    lines = []
    facts = {}

    def record(name, images):
        for i, (j, w) in enumerate(images):
            if i != j:
                edges.add((i, j))
        pairs = [(i, j) for i, (j, _) in enumerate(images) if i != j]
        lines.append(f"{name}: " + " ".join(f"{i}->{j}" for i, j in pairs))
        return pairs

    C1, C2, C3 = CaseLabel.CASE1, CaseLabel.CASE2, CaseLabel.CASE3
    for name, move in moves:
        images = sudo_case_images(move)
        pairs = record(name, images)
        if name == "reflect_blocks":
            c1_to_c2 = {(i, j) for i, j in pairs if labels[i] is C1 and labels[j] is C2 and i in large}
            c3_pair = any(labels[i] is C3 and labels[j] is C3 for i, j in pairs)
            facts[name] = len({i for i, _ in c1_to_c2}) == 3 and c3_pair
        elif name in ("swap_b1_b2", "swap_b2_b3"):
            facts[name] = any(labels[i] is C1 and labels[j] is C1 for i, j in pairs)
        else:
            facts[name] = any(labels[i] is C3 and labels[j] is C3 for i, j in pairs)
        for i, (j, w) in enumerate(images):
            if i != j:
                lines.append(f"  witness {i}->{j}: {w.describe()}")
                break
    rot_hit = None
    for name, move in rots:
        images = sudo_case_images(move)
        pairs = record(name, images)
        for i, j in pairs:
            if rot_hit is None and labels[i] is C3 and labels[j] is C2:
                rot_hit = (name, i, j, images[i][1])
    facts["rotation"] = rot_hit is not None
    if rot_hit:
        lines.append(f"  rotation witness {rot_hit[0]} {rot_hit[1]}->{rot_hit[2]}: {rot_hit[3].describe()}")
    # the edges must connect the large class and leave the small one alone
    touched_small = any(i in small or j in small for i, j in edges)
    comp = {min(large)}
    grew = True
    while grew:
        grew = False
        for i, j in edges:
            if (i in comp) != (j in comp):
                comp |= {i, j}
                grew = True
    facts["connects_large_class"] = comp == large and not touched_small
    ok = all(facts.values())
    detail = " ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in facts.items())
    return CheckResult("", ok, detail, lines=lines)


@_timed("small_sizes")
def check_small_sizes():
    totals = tuple(total_grids(n) for n in (1, 2, 3))
    classes = tuple(len(orbit_partition(all_base_grids(n))) for n in (1, 2, 3))
    (g2,) = all_base_grids(2)
    antipodal = all(g2[(r, c, 0)] == g2[(1 - r, 1 - c, 1)] for r in range(2) for c in range(2))
    ok = totals == (1, 24, 14515200) and classes == (1, 1, 2) and antipodal
    return CheckResult("", ok, f"totals={totals} classes={classes} antipodal={antipodal}")


@_timed("min_clues")
def check_min_clues(samples: int = 1000, seed: int = 7, exhaustive: bool = False):
    bound3 = min_clue_lower_bound(3)
    rng = SplitMix64(seed)
    swap_ok = True
    for _ in range(samples):
        s = random_solution(3, rng)
        cells = sorted(rng.shuffle(list(range(27)))[:7])
        p = Puzzle.from_clues(3, [(coord_of(i, 3), s.cells[i]) for i in cells])
        other = second_solution_by_symbol_swap(p, s)
        extends = all(other[c] == v for c, v in p.clues)
        if not (other != s and is_valid(other) and extends and count_solutions(p, cap=2) >= 2):
            swap_ok = False
            break
    classes = orbit_partition(all_base_grids(3))
    certified = []
    for cls in classes:
        cs = find_minimal_puzzle(cls.representative, 8)
        p = cs.puzzle() if cs else None
        certified.append(bool(cs) and count_solutions(p) == 1 and count_solutions_backtracking(p) == 1)
    (g2,) = all_base_grids(2)
    cs2 = find_minimal_puzzle(g2, 3)
    n2_ok = (
        min_clue_lower_bound(2) == 3
        and cs2 is not None
        and count_solutions(cs2.puzzle()) == 1 == count_solutions_backtracking(cs2.puzzle())
    )
    lines = []
    ex_ok = True
    if exhaustive:
        for cls in classes:
            rep = exhaustive_subset_check(cls.representative, 7)
            lines.append(f"exhaustive k=7 subsets={rep.subsets} unique={rep.unique} min_count={rep.min_count}")
            ex_ok &= rep.unique == 0 and rep.min_count >= 2
    ok = bound3 == 8 and swap_ok and all(certified) and n2_ok and ex_ok
    detail = (f"bound={bound3} swap_checks={samples if swap_ok else 'FAIL'} "
              f"certified_per_class={certified} n2_bound=3 n2_ok={n2_ok}")
    if exhaustive:
        detail += f" exhaustive={ex_ok}"
    return CheckResult("", ok, detail, lines=lines)


@_timed("placements")
def check_placements():
    got = tuple(count_digit_placements(n) for n in (1, 2, 3, 4))
    return CheckResult("", got == (1, 4, 36, 576), "counts=" + ",".join(map(str, got)))


@_timed("shapes")
def check_shapes():
    want = {ShapeClass.DIAGONAL: 1, ShapeClass.SCALENE_CORNER: 6, ShapeClass.EQUILATERAL: 2}
    per_grid = all(shape_census(g) == want for g in all_base_grids(3))
    pc = placement_census()
    glob = (pc[ShapeClass.DIAGONAL], pc[ShapeClass.SCALENE_CORNER], pc[ShapeClass.EQUILATERAL])
    ok = per_grid and glob == (4, 24, 8) and sum(glob) == 36
    return CheckResult("", ok, f"per_grid_1_6_2={per_grid} placements={glob[0]}/{glob[1]}/{glob[2]}")


@_timed("planes")
def check_planes():
    grids = all_base_grids(3)
    small = set(orbit_partition(grids)[0].members)
    exact = all((diagonal_planes_signature(g) == (3, 3, 3)) == (g in small) for g in grids)
    return CheckResult("", exact, f"signature_333_iff_small_class={exact}")


def random_clue_sets(count: int, seed: int):
    """Seeded clue sets: subsets of random solutions, some with a stray symbol."""
    rng = SplitMix64(seed)
    out = []
    for t in range(count):
        s = random_solution(3, rng)
        k = rng.below(28)
        cells = sorted(rng.shuffle(list(range(27)))[:k])
        clues = {i: s.cells[i] for i in cells}
        if t % 4 == 3 and cells:
            clues[cells[rng.below(len(cells))]] = 1 + rng.below(9)
        out.append(Puzzle.from_clues(3, [(coord_of(i, 3), v) for i, v in sorted(clues.items())]))
    return out


@_timed("counters")
def check_counters(samples: int = 1000, seed: int = 11):
    puzzles = [Puzzle.from_grid(CubeGrid.empty(3))]
    for i in range(27):
        for v in range(1, 10):
            puzzles.append(Puzzle.from_clues(3, [(coord_of(i, 3), v)]))
    puzzles += random_clue_sets(samples, seed)
    bad = [p for p in puzzles if count_solutions(p) != count_solutions_backtracking(p)]
    empty = count_solutions(puzzles[0])
    return CheckResult("", not bad and empty == 14515200,
                       f"puzzles={len(puzzles)} disagreements={len(bad)} empty={empty}")


def random_partial_grids(count: int, seed: int):
    """Partial grids from random solutions; every fifth gets one corrupted cell."""
    rng = SplitMix64(seed)
    out = []
    for t in range(count):
        s = random_solution(3, rng)
        keep = rng.below(28)
        cells = list(s.cells)
        for i in rng.shuffle(list(range(27)))[keep:]:
            cells[i] = 0
        if t % 5 == 4:
            cells[rng.below(27)] = 1 + rng.below(9)
        out.append(CubeGrid(3, tuple(cells)))
    return out


@_timed("isomorphism")
def check_isomorphism(samples: int = 10000, seed: int = 13):
    grids = random_partial_grids(samples, seed)
    trips = all(kurve_to_cube(cube_to_kurve(g)) == g for g in grids)
    back = all(cube_to_kurve(kurve_to_cube(k)) == k for k in map(cube_to_kurve, grids[:1000]))
    agree = all(is_valid(g) == kurve_is_valid(cube_to_kurve(g)) for g in grids)
    invalid = sum(not is_valid(g) for g in grids)
    ok = trips and back and agree and invalid > 0
    return CheckResult("", ok, f"grids={samples} round_trip={trips and back} validity_agrees={agree} "
                               f"invalid_samples={invalid}")


CHECKS = [
    check_census,
    check_cases,
    check_sudo_cases,
    check_corners,
    check_classes,
    check_transforms,
    check_small_sizes,
    check_min_clues,
    check_placements,
    check_shapes,
    check_planes,
    check_counters,
    check_isomorphism,
]


def run_all(exhaustive: bool = False) -> list[CheckResult]:
    out = []
    for check in CHECKS:
        if check is check_min_clues:
            out.append(check(exhaustive=exhaustive))
        else:
            out.append(check())
    return out
