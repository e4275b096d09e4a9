import random

import pytest

from sudocube.clues import ClueSet, find_minimal_puzzle
from sudocube.core import Coord, CubeGrid, coord_of, is_valid
from sudocube.enumeration import all_base_grids
from sudocube.solve import (
    Contradiction,
    Grade,
    MultipleSolutions,
    NoSolution,
    NotUnique,
    Puzzle,
    Rule,
    Status,
    count_solutions,
    count_solutions_backtracking,
    grade,
    propagate,
    solve,
    solve_unique,
)
from sudocube.symmetry import Relabeling, orbit_partition

BASES = all_base_grids(3)


def blank(grid, cells):
    out = list(grid.cells)
    for i in cells:
        out[i] = 0
    return Puzzle.from_grid(CubeGrid(grid.n, tuple(out)))


def random_solution(rng):
    perm = list(range(1, 10))
    rng.shuffle(perm)
    return Relabeling(tuple(perm))(rng.choice(BASES))


def random_puzzle(rng, k):
    s = random_solution(rng)
    keep = set(rng.sample(range(27), k))
    return blank(s, [i for i in range(27) if i not in keep])


@pytest.fixture(scope="module")
def search_puzzle():
    small, _ = orbit_partition(BASES)
    cs = find_minimal_puzzle(small.representative, 8)
    assert cs is not None
    return cs


def test_complete_minus_one():
    g = BASES[4]
    p = blank(g, [13])
    after, trace = propagate(p)
    assert after.grid == g
    assert len(trace) == 1 and trace[0].rule in (Rule.NAKED_SINGLE, Rule.HIDDEN_SINGLE_PLANE, Rule.THIRD_INSTANCE)
    assert trace[0].cell == coord_of(13, 3) and trace[0].digit == g.cells[13]


def test_complete_minus_one_is_logic_only():
    g = BASES[4]
    p = blank(g, [13])
    assert grade(p) is Grade.LOGIC_ONLY


def test_third_instance():
    p = Puzzle.from_clues(3, [((0, 0, 0), 4), ((1, 1, 1), 4)])
    _, trace = propagate(p)
    first = trace[0]
    assert first.rule is Rule.THIRD_INSTANCE
    assert (first.cell, first.digit) == (Coord(2, 2, 2), 4)
    assert set(first.premises) == {Coord(0, 0, 0), Coord(1, 1, 1)}


def test_contradiction():
    # the third 1 would land on a cell holding 2
    p = Puzzle.from_clues(3, [((0, 0, 0), 1), ((1, 1, 1), 1), ((2, 2, 2), 2)])
    with pytest.raises(Contradiction):
        propagate(p)
    assert count_solutions(p) == 0
    assert solve(p).status is Status.NONE


def test_soundness_and_monotonicity():
    rng = random.Random(31)
    checked = 0
    for _ in range(40):
        p = random_puzzle(rng, rng.randint(6, 12))
        before = count_solutions(p)
        after, trace = propagate(p)
        assert len(trace) <= 27
        for c, v in p.grid.filled():
            assert after.grid[c] == v
        assert count_solutions(after) == before
        grid = p.grid
        for d in trace:
            for other in range(1, 10):
                if other != d.digit:
                    alt = Puzzle.from_grid(grid.with_cell(d.cell, other))
                    assert count_solutions(alt) == 0
            grid = grid.with_cell(d.cell, d.digit)
            checked += 1
    assert checked > 0


def test_counter_examples():
    assert count_solutions(Puzzle.from_grid(CubeGrid.empty(3))) == 14515200
    assert count_solutions_backtracking(Puzzle.from_grid(CubeGrid.empty(3))) == 14515200
    assert count_solutions_backtracking(Puzzle.from_grid(CubeGrid.empty(2))) == 24
    assert count_solutions_backtracking(Puzzle.from_grid(CubeGrid.empty(1))) == 1
    assert count_solutions(Puzzle.from_grid(CubeGrid.empty(2))) == 24
    assert count_solutions(Puzzle.from_grid(BASES[0])) == 1
    assert count_solutions(Puzzle.from_grid(CubeGrid.empty(3)), cap=2) == 2


def test_counters_agree_single_clues():
    for i in range(27):
        for v in range(1, 10):
            p = Puzzle.from_grid(CubeGrid(3, tuple(v if j == i else 0 for j in range(27))))
            assert count_solutions(p) == count_solutions_backtracking(p) == 14515200 // 9


def test_counters_agree_random():
    rng = random.Random(33)
    for _ in range(300):
        p = random_puzzle(rng, rng.randint(1, 10))
        if rng.random() < 0.3:
            # perturb one clue; may create conflicts
            c, _ = rng.choice(list(p.grid.filled()))
            p = Puzzle.from_grid(p.grid.with_cell(c, rng.randint(1, 9)))
        assert count_solutions(p) == count_solutions_backtracking(p)


def test_seven_clues_never_unique():
    rng = random.Random(35)
    for _ in range(500):
        assert count_solutions(random_puzzle(rng, 7), cap=2) >= 2


def test_solve_unique_minus_five():
    rng = random.Random(37)
    g = random_solution(rng)
    # five cells holding five different digits
    cells, digits = [], set()
    for i in rng.sample(range(27), 27):
        if g.cells[i] not in digits:
            cells.append(i)
            digits.add(g.cells[i])
        if len(cells) == 5:
            break
    p = blank(g, cells)
    s = solve_unique(p)
    assert s == g and is_valid(s)
    after, _ = propagate(p)
    assert all(s[c] == v for c, v in after.grid.filled())


def test_solve_unique_errors():
    with pytest.raises(MultipleSolutions) as err:
        solve_unique(blank(BASES[0], range(20)))
    assert err.value.count >= 2
    dup = Puzzle.from_clues(3, [((0, 0, 0), 1), ((0, 1, 0), 1)])
    with pytest.raises(NoSolution):
        solve_unique(dup)


def test_solve_report():
    rep = solve(blank(BASES[2], [0, 1]))
    assert rep.status is Status.UNIQUE and rep.count == 1 and is_valid(rep.solution)
    rep = solve(Puzzle.from_grid(CubeGrid.empty(2)))
    assert rep.status is Status.MULTIPLE and rep.count == 24


def test_grade_requires_search_and_stall(search_puzzle):
    p = search_puzzle.puzzle()
    assert len(search_puzzle) == 8
    assert grade(p) is Grade.REQUIRES_SEARCH
    rep = solve(p, search=False)
    assert rep.status is Status.STALLED and rep.solution is None
    full = solve(p)
    assert full.status is Status.UNIQUE and full.solution == search_puzzle.grid


def test_grade_logic_only_eight_clues():
    _, large = orbit_partition(BASES)
    cs = find_minimal_puzzle(large.representative, 8)
    assert isinstance(cs, ClueSet)
    assert grade(cs.puzzle()) is Grade.LOGIC_ONLY


def test_grade_not_unique():
    with pytest.raises(NotUnique):
        grade(Puzzle.from_grid(CubeGrid.empty(3)))
