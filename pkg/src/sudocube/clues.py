"""Minimum-clue bound, unique-puzzle search and seeded generation.

Randomness comes from :class:`SplitMix64` so generated puzzles are the
same on every platform and can be reproduced outside Python:

* state starts at ``seed mod 2**64``; each draw adds ``0x9E3779B97F4A7C15``
  and returns the mixed state
  ``z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
  z *= 0x94D049BB133111EB; z ^= z >> 31`` (all mod 2**64);
* ``below(m)`` rejects draws ``>= 2**64 - (2**64 % m)`` and returns
  ``draw % m``;
* ``shuffle`` is Fisher-Yates from the last index down, swapping ``i``
  with ``below(i + 1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from .core import CubeGrid, coord_of, is_valid
from .enumeration import all_base_grids, base_partitions
from .solve import Puzzle, count_solutions
from .symmetry import Relabeling

MASK64 = (1 << 64) - 1


class NotEnoughMissing(ValueError):
    pass


class UnsupportedSize(ValueError):
    pass


class InfeasibleSize(ValueError):
    pass


class SplitMix64:
    GAMMA = 0x9E3779B97F4A7C15

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + self.GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, m: int) -> int:
        if m <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % m)
        while True:
            x = self.next()
            if x < limit:
                return x % m

    def shuffle(self, items: list) -> list:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items


@dataclass(frozen=True)
class ClueSet:
    grid: CubeGrid  # the solution the clues are drawn from
    cells: tuple  # flat indices, ascending

    @property
    def clues(self) -> tuple:
        n = self.grid.n
        return tuple((coord_of(i, n), self.grid.cells[i]) for i in self.cells)

    def puzzle(self) -> Puzzle:
        return Puzzle.from_clues(self.grid.n, self.clues)

    def __len__(self):
        return len(self.cells)


def min_clue_lower_bound(n: int) -> int:
    """Clues needed so that at most one symbol is absent from the givens."""
    if n not in (1, 2, 3):
        raise UnsupportedSize(f"minimum clues are established for n <= 3, got {n}")
    return n * n - 1


def second_solution_by_symbol_swap(p: Puzzle, s: CubeGrid) -> CubeGrid:
    """Another solution of ``p``: swap two symbols that no clue uses."""
    size = p.n * p.n
    present = {v for _, v in p.clues}
    absent = [v for v in range(1, size + 1) if v not in present]
    if len(absent) < 2:
        raise NotEnoughMissing(f"clues use {len(present)} of {size} symbols")
    a, b = absent[:2]
    return Relabeling.from_transpositions(size, (a, b))(s)


def qualifying_subsets(grid: CubeGrid, k: int):
    """k-cell subsets, lexicographic, whose values miss at most one symbol."""
    n = grid.n
    cells = grid.cells
    total = n ** 3
    need = n * n - 1

    chosen: list = []
    counts = [0] * (n * n + 1)

    def rec(start, distinct):
        left = k - len(chosen)
        if left == 0:
            yield tuple(chosen)
            return
        for i in range(start, total - left + 1):
            v = cells[i]
            new = distinct + (counts[v] == 0)
            if new + left - 1 < need:
                continue
            counts[v] += 1
            chosen.append(i)
            yield from rec(i + 1, new)
            chosen.pop()
            counts[v] -= 1

    yield from rec(0, 0)


def _random_subset(grid: CubeGrid, k: int, rng: SplitMix64) -> tuple:
    """One cell for each of n*n-1 shuffled symbols, the rest uniform."""
    n = grid.n
    size = n * n
    holders = {v: [i for i, x in enumerate(grid.cells) if x == v] for v in range(1, size + 1)}
    symbols = rng.shuffle(list(range(1, size + 1)))
    picked = [holders[v][rng.below(n)] for v in symbols[: size - 1]]
    rest = rng.shuffle([i for i in range(n ** 3) if i not in picked])
    return tuple(sorted(picked + rest[: k - len(picked)]))


def is_unique(clueset: ClueSet) -> bool:
    return count_solutions(clueset.puzzle(), cap=2) == 1


def find_minimal_puzzle(
    grid: CubeGrid,
    k: int,
    budget: Optional[int] = None,
    rng: Optional[SplitMix64] = None,
) -> Optional[ClueSet]:
    """First k-clue subset of ``grid`` with a unique solution.

    Without ``rng`` the qualifying subsets are scanned in lexicographic
    order.  With ``rng``, up to ``budget`` seeded random draws come first
    and the ordered scan follows if they all fail.  ``budget`` caps the
    number of subsets examined in the ordered scan too.
    """
    if not grid.is_complete or not is_valid(grid):
        raise ValueError("source grid must be a complete solution")
    n = grid.n
    if k > n ** 3 or k < 0:
        return None
    if k < n * n - 1:
        return None
    if rng is not None:
        tries = 2000 if budget is None else budget
        for _ in range(tries):
            cs = ClueSet(grid, _random_subset(grid, k, rng))
            if is_unique(cs):
                return cs
    for seen, cells in enumerate(qualifying_subsets(grid, k)):
        if budget is not None and seen >= budget:
            return None
        cs = ClueSet(grid, cells)
        if is_unique(cs):
            return cs
    return None


def is_minimal(clueset: ClueSet) -> bool:
    """Unique, and dropping any single clue breaks uniqueness."""
    if not is_unique(clueset):
        return False
    for i in clueset.cells:
        smaller = ClueSet(clueset.grid, tuple(c for c in clueset.cells if c != i))
        if is_unique(smaller):
            return False
    return True


@dataclass(frozen=True)
class Generated:
    clueset: ClueSet
    seed: int
    requested_clues: int
    clues: int  # larger than requested when no k-subset of the grid was unique

    @property
    def puzzle(self) -> Puzzle:
        return self.clueset.puzzle()

    @property
    def solution(self) -> CubeGrid:
        return self.clueset.grid


def random_solution(n: int, rng: SplitMix64) -> CubeGrid:
    """Uniform over all solutions: a base grid times a relabeling."""
    bases = all_base_grids(n)
    base = bases[rng.below(len(bases))]
    perm = rng.shuffle(list(range(1, n * n + 1)))
    return Relabeling(tuple(perm))(base)


def generate_puzzle(seed: int, n: int, k: int, budget: Optional[int] = None) -> Generated:
    if n not in (1, 2, 3):
        raise InfeasibleSize(f"generation supports n <= 3, got {n}")
    if not min_clue_lower_bound(n) <= k <= n ** 3:
        raise InfeasibleSize(f"need {min_clue_lower_bound(n)} <= clues <= {n ** 3}, got {k}")
    rng = SplitMix64(seed)
    solution = random_solution(n, rng)
    for size in range(k, n ** 3 + 1):
        cs = find_minimal_puzzle(solution, size, budget=budget, rng=rng)
        if cs is not None:
            return Generated(cs, seed, k, size)
    raise InfeasibleSize("no unique clue set found")  # pragma: no cover - the full grid is unique


def batch_solution_counts(n: int, cells: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Solution counts for many clue sets at once.

    ``cells`` and ``values`` are (B, k) arrays: flat cell indices and the
    symbols placed there.  Same partition argument as
    :func:`count_solutions`, vectorized over the batch.
    """
    owners = np.array([p.owner_index for p in base_partitions(n)], dtype=np.int16)
    blocks = owners[:, cells]  # (P, B, k)
    k = cells.shape[1]
    ok = np.ones(blocks.shape[:2], dtype=bool)
    for i, j in combinations(range(k), 2):
        same_block = blocks[:, :, i] == blocks[:, :, j]
        same_value = (values[:, i] == values[:, j])[None, :]
        ok &= same_block == same_value
    srt = np.sort(values, axis=1)
    distinct = 1 + (np.diff(srt, axis=1) != 0).sum(axis=1) if k else np.zeros(len(values), int)
    fact = np.array([math.factorial(i) for i in range(n * n + 1)], dtype=np.int64)
    return ok.sum(axis=0) * fact[n * n - distinct]


@dataclass(frozen=True)
class ExhaustiveReport:
    k: int
    subsets: int
    unique: int
    min_count: int


def exhaustive_subset_check(grid: CubeGrid, k: int, chunk: int = 50000) -> ExhaustiveReport:
    """Count solutions of every k-clue subset of ``grid``."""
    n = grid.n
    vals = np.asarray(grid.cells, dtype=np.int16)
    it = combinations(range(n ** 3), k)
    subsets = unique = 0
    low = None
    while True:
        block = list(_take(it, chunk))
        if not block:
            break
        cells = np.array(block, dtype=np.intp).reshape(len(block), k)
        counts = batch_solution_counts(n, cells, vals[cells])
        subsets += len(block)
        unique += int((counts == 1).sum())
        m = int(counts.min())
        low = m if low is None else min(low, m)
    return ExhaustiveReport(k, subsets, unique, low if low is not None else 0)


def _take(it, m):
    for _ in range(m):
        try:
            yield next(it)
        except StopIteration:
            return


def clue_grid(clueset: ClueSet) -> CubeGrid:
    n = clueset.grid.n
    cells = [0] * n ** 3
    for i in clueset.cells:
        cells[i] = clueset.grid.cells[i]
    return CubeGrid(n, tuple(cells))

