"""Exhaustive censuses of solution grids and single-digit placements."""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product

from .core import (
    CubeGrid,
    Coord,
    complete_third_layer,
    digit_cells,
    find_obstructions,
    flat_index,
    standard_layer,
)


class UnsupportedSize(ValueError):
    pass


class NotBaseGrid(ValueError):
    pass


class CaseLabel(enum.Enum):
    CASE1 = 1
    CASE2 = 2
    CASE3 = 3


def _layer1_candidates(n: int):
    """For each layer-1 cell, the symbols missing from its layer-0 row and column."""
    base = standard_layer(n)
    out = {}
    for r, c in product(range(n), repeat=2):
        seen = set(base[r]) | {base[i][c] for i in range(n)}
        out[r, c] = [v for v in range(1, n * n + 1) if v not in seen]
    return out


def _layer1_fillings(n: int):
    """Yield every layer 1 compatible with the standard layer 0."""
    cand = _layer1_candidates(n)
    cells = list(product(range(n), repeat=2))
    grid = [[0] * n for _ in range(n)]
    used = set()

    def rec(k):
        if k == len(cells):
            yield tuple(map(tuple, grid))
            return
        r, c = cells[k]
        for v in cand[r, c]:
            if v in used or v in grid[r] or any(grid[i][c] == v for i in range(n)):
                continue
            grid[r][c] = v
            used.add(v)
            yield from rec(k + 1)
            grid[r][c] = 0
            used.discard(v)

    yield from rec(0)


@lru_cache(maxsize=None)
def _base_grids(n: int) -> tuple:
    base = standard_layer(n)
    if n == 1:
        return (CubeGrid(1, (1,)),)
    out = []
    for layer1 in _layer1_fillings(n):
        if n == 3 and find_obstructions(base, layer1):
            continue
        out.append(complete_third_layer(base, layer1))
    out.sort(key=lambda g: g.cells)
    return tuple(out)


def all_base_grids(n: int) -> list[CubeGrid]:
    """Every complete grid whose layer 0 is the standard base, sorted."""
    if n not in (1, 2, 3):
        raise UnsupportedSize(f"full-grid census is only available for n <= 3, got {n}")
    return list(_base_grids(n))


def total_grids(n: int) -> int:
    return len(all_base_grids(n)) * math.factorial(n * n)


def is_base_grid(grid: CubeGrid) -> bool:
    return grid.layer(0) == standard_layer(grid.n)


def classify_case(grid: CubeGrid) -> CaseLabel:
    """Case of a size-3 base grid, read off the first row of layer 1."""
    if grid.n != 3 or not is_base_grid(grid):
        raise NotBaseGrid("classification needs a size-3 grid with standard layer 0")
    first = grid.layer(1)[0]
    rows = Counter((d - 1) // 3 for d in first)
    cols = Counter((d - 1) % 3 for d in first)
    if max(rows.values()) == 3:
        return CaseLabel.CASE1
    if max(cols.values()) == 1:
        return CaseLabel.CASE2
    if max(rows.values()) == 2 and max(cols.values()) == 2:
        return CaseLabel.CASE3
    raise NotBaseGrid(f"first row {first} of layer 1 fits no case")


def case_census(grids=None) -> dict:
    grids = all_base_grids(3) if grids is None else grids
    counts = Counter(classify_case(g) for g in grids)
    return {label: counts.get(label, 0) for label in CaseLabel}


SUDO_CASE_CELL = Coord(0, 0, 1)


def sudo_cases() -> list[CubeGrid]:
    """Base grids with 5 in the upper-left cell of layer 1, sorted."""
    return [g for g in all_base_grids(3) if g[SUDO_CASE_CELL] == 5]


@dataclass(frozen=True)
class CornerReport:
    corner_counts: dict  # (r, c) of 5 in layer 1 -> number of base grids
    off_corner: int

    @property
    def holds(self) -> bool:
        return self.off_corner == 0 and sorted(self.corner_counts) == [(0, 0), (0, 2), (2, 0), (2, 2)]


def five_corner_positions() -> CornerReport:
    """Where 5 lands in layer 1 across the 40 base grids."""
    tally = Counter()
    for g in all_base_grids(3):
        (cell,) = [p for p in digit_cells(g, 5) if p.l == 1]
        tally[cell.r, cell.c] += 1
    corners = {k: v for k, v in sorted(tally.items()) if k[0] in (0, 2) and k[1] in (0, 2)}
    return CornerReport(corners, sum(tally.values()) - sum(corners.values()))


@dataclass(frozen=True)
class CellPartition:
    """Transversals of a solution grid, one per symbol, ignoring labels.

    ``blocks[i]`` lists the cells of the symbol ``i+1`` in the source grid
    (sorted by layer).
    """

    n: int
    blocks: tuple

    @classmethod
    def of(cls, grid: CubeGrid) -> "CellPartition":
        n = grid.n
        return cls(n, tuple(tuple(digit_cells(grid, d)) for d in range(1, n * n + 1)))

    @cached_property
    def owner_index(self) -> tuple:
        """``owner[flat_index]`` is the block holding that cell."""
        n = self.n
        out = [0] * n ** 3
        for i, block in enumerate(self.blocks):
            for p in block:
                out[flat_index(p, n)] = i
        return tuple(out)

    def label(self, symbols=None) -> CubeGrid:
        """Fill block ``i`` with ``symbols[i]`` (default ``i+1``)."""
        n = self.n
        symbols = range(1, n * n + 1) if symbols is None else symbols
        cells = [0] * n ** 3
        for block, s in zip(self.blocks, symbols):
            for p in block:
                cells[flat_index(p, n)] = s
        return CubeGrid(n, tuple(cells))

    def key(self) -> frozenset:
        return frozenset(frozenset(b) for b in self.blocks)


@lru_cache(maxsize=None)
def _partitions(n: int) -> tuple:
    return tuple(CellPartition.of(g) for g in all_base_grids(n))


def base_partitions(n: int = 3) -> list[CellPartition]:
    return list(_partitions(n))


def placements(n: int):
    """All cell sets with one cell per layer and distinct rows and columns.

    Brute force over every choice of one cell per layer.
    """
    layer_cells = list(product(range(n), repeat=2))
    for choice in product(layer_cells, repeat=n):
        rows = {rc[0] for rc in choice}
        cols = {rc[1] for rc in choice}
        if len(rows) == n and len(cols) == n:
            yield tuple(Coord(r, c, l) for l, (r, c) in enumerate(choice))


def count_digit_placements(n: int, check: bool = True) -> int:
    if not 1 <= n <= 4:
        raise UnsupportedSize(f"placement counting supports 1 <= n <= 4, got {n}")
    count = math.factorial(n) ** 2
    if check:
        brute = sum(1 for _ in placements(n))
        if brute != count:
            raise AssertionError(f"placement formula {count} != enumeration {brute}")
    return count

