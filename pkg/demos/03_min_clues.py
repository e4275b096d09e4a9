"""Why eight clues, and two puzzles that use exactly eight."""
from sudocube.clues import (
    ClueSet,
    clue_grid,
    exhaustive_subset_check,
    find_minimal_puzzle,
    generate_puzzle,
    is_minimal,
    min_clue_lower_bound,
    second_solution_by_symbol_swap,
)
from sudocube.enumeration import all_base_grids
from sudocube.isomap import serialize
from sudocube.solve import count_solutions, count_solutions_backtracking, grade
from sudocube.symmetry import orbit_partition

print("lower bounds:", [min_clue_lower_bound(n) for n in (1, 2, 3)])

# with two symbols missing from the clues, swapping them gives another solution
g = all_base_grids(3)[0]
eight = find_minimal_puzzle(g, 8)
fewer = ClueSet(g, eight.cells[:7])
other = second_solution_by_symbol_swap(fewer.puzzle(), g)
print("7 clues, second solution differs in",
      sum(a != b for a, b in zip(g.cells, other.cells)), "cells")

for i, c in enumerate(orbit_partition(all_base_grids(3))):
    cs = find_minimal_puzzle(c.representative, 8)
    q = cs.puzzle()
    print(f"class {i}: 8 clues, solutions {count_solutions(q)} / {count_solutions_backtracking(q)},"
          f" minimal={is_minimal(cs)}, grade={grade(q).value}")
    print(serialize(clue_grid(cs)))

# every one of the 888 030 seven-clue subsets of a grid has several solutions
rep = exhaustive_subset_check(g, 7)
print(f"7-subsets: {rep.subsets}, unique: {rep.unique}, fewest solutions: {rep.min_count}")

gen = generate_puzzle(seed=0, n=3, k=8)
print("seed 0 puzzle:")
print(serialize(gen.puzzle.grid))
