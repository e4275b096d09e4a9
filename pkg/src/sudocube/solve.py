"""Deductive solving and exact solution counting."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

from .core import (
    Axis,
    Coord,
    CubeGrid,
    PlaneId,
    all_planes,
    coord_of,
    flat_index,
    is_valid,
    plane_cells,
)
from .enumeration import base_partitions

UNLIMITED = math.inf


class Contradiction(ValueError):
    def __init__(self, cell, reason: str = ""):
        self.cell = cell
        super().__init__(f"contradiction at {tuple(cell) if cell is not None else '?'}: {reason}")


class NoSolution(ValueError):
    pass


class MultipleSolutions(ValueError):
    def __init__(self, count):
        self.count = count
        super().__init__(f"puzzle has at least {count} solutions")


class NotUnique(ValueError):
    pass


@dataclass(frozen=True)
class Puzzle:
    n: int
    clues: tuple  # ((Coord, symbol), ...) sorted by storage order
    grid: CubeGrid

    @classmethod
    def from_grid(cls, grid: CubeGrid) -> "Puzzle":
        """Every filled cell of ``grid`` becomes a clue."""
        return cls(grid.n, tuple(grid.filled()), grid)

    @classmethod
    def from_clues(cls, n: int, clues) -> "Puzzle":
        return cls.from_grid(CubeGrid.from_clues(n, clues))

    def with_grid(self, grid: CubeGrid) -> "Puzzle":
        return Puzzle(self.n, self.clues, grid)


class Rule(enum.Enum):
    THIRD_INSTANCE = "third_instance"
    HIDDEN_SINGLE_PLANE = "hidden_single_plane"
    NAKED_SINGLE = "naked_single"


@dataclass(frozen=True)
class Deduction:
    cell: Coord
    digit: int
    rule: Rule
    premises: tuple


class Status(enum.Enum):
    UNIQUE = "unique"
    NONE = "none"
    MULTIPLE = "multiple"
    STALLED = "stalled"


@dataclass
class SolveReport:
    status: Status
    deductions: list = field(default_factory=list)
    solution: Optional[CubeGrid] = None
    count: Optional[int] = None


class _State:
    """Mutable propagation state: placed symbols plus plane bitmasks."""

    def __init__(self, grid: CubeGrid):
        n = self.n = grid.n
        self.cells = list(grid.cells)
        self.full = sum(1 << v for v in range(1, n * n + 1))
        self.masks = {p: 0 for p in all_planes(n)}
        for i, v in enumerate(self.cells):
            if not v:
                continue
            p = coord_of(i, n)
            for plane in self._planes(p):
                if self.masks[plane] >> v & 1:
                    raise Contradiction(p, f"symbol {v} repeated in {plane}")
                self.masks[plane] |= 1 << v

    @staticmethod
    def _planes(p):
        return (PlaneId(Axis.ROW, p.r), PlaneId(Axis.COL, p.c), PlaneId(Axis.LAYER, p.l))

    def candidates(self, p: Coord) -> int:
        used = 0
        for plane in self._planes(p):
            used |= self.masks[plane]
        return self.full & ~used

    def place(self, p: Coord, v: int):
        i = flat_index(p, self.n)
        if self.cells[i]:
            raise Contradiction(p, f"cell already holds {self.cells[i]}")
        if not self.candidates(p) >> v & 1:
            raise Contradiction(p, f"symbol {v} blocked")
        self.cells[i] = v
        for plane in self._planes(p):
            self.masks[plane] |= 1 << v

    def grid(self) -> CubeGrid:
        return CubeGrid(self.n, tuple(self.cells))


def _bits(mask: int):
    v = 0
    while mask:
        if mask & 1:
            yield v
        mask >>= 1
        v += 1


def _find_third_instance(st: _State) -> Optional[Deduction]:
    n = st.n
    where: dict = {}
    for i, v in enumerate(st.cells):
        if v:
            where.setdefault(v, []).append(coord_of(i, n))
    for v in sorted(where):
        cells = where[v]
        if len(cells) != n - 1:
            continue
        target = Coord(*(
            (set(range(n)) - {p[a] for p in cells}).pop() for a in range(3)
        ))
        i = flat_index(target, n)
        if st.cells[i] and st.cells[i] != v:
            raise Contradiction(target, f"third {v} forced onto a {st.cells[i]}")
        if not st.cells[i]:
            return Deduction(target, v, Rule.THIRD_INSTANCE, tuple(cells))
    return None


def _find_hidden_single(st: _State) -> Optional[Deduction]:
    n = st.n
    for plane in all_planes(n):
        cells = plane_cells(plane, n)
        empty = [p for p in cells if not st.cells[flat_index(p, n)]]
        missing = st.full & ~st.masks[plane]
        for v in _bits(missing):
            spots = [p for p in empty if st.candidates(p) >> v & 1]
            if not spots:
                raise Contradiction(None, f"symbol {v} has no cell in {plane}")
            if len(spots) == 1:
                premises = tuple(p for p in cells if st.cells[flat_index(p, n)])
                return Deduction(spots[0], v, Rule.HIDDEN_SINGLE_PLANE, premises)
    return None


def _find_naked_single(st: _State) -> Optional[Deduction]:
    n = st.n
    for i, v in enumerate(st.cells):
        if v:
            continue
        p = coord_of(i, n)
        cand = st.candidates(p)
        if cand == 0:
            raise Contradiction(p, "no candidates left")
        if cand & (cand - 1) == 0:
            digit = cand.bit_length() - 1
            premises = tuple(
                q for plane in st._planes(p) for q in plane_cells(plane, n)
                if st.cells[flat_index(q, n)]
            )
            return Deduction(p, digit, Rule.NAKED_SINGLE, tuple(sorted(set(premises))))
    return None


_RULES = (_find_third_instance, _find_hidden_single, _find_naked_single)


def propagate(p: Puzzle) -> tuple[Puzzle, list[Deduction]]:
    """Apply deduction rules to a fixpoint, one placement at a time.

    At each step the first rule (in priority order) that fires is applied.
    Raises Contradiction when the state admits no completion.
    """
    st = _State(p.grid)
    trace = []
    while 0 in st.cells:
        for rule in _RULES:
            d = rule(st)
            if d is not None:
                break
        else:
            break
        st.place(d.cell, d.digit)
        trace.append(d)
    return p.with_grid(st.grid()), trace


def count_solutions(p: Puzzle, cap=UNLIMITED) -> int:
    """Count completions via the base cell partitions.

    Every solution is one of the base partitions with its blocks labeled
    bijectively by the symbols.  A clue pins the block containing its cell;
    consistent pinnings leave ``(n*n - pinned)!`` labelings.
    """
    n = p.n
    size = n * n
    clues = [(flat_index(c, n), v) for c, v in p.grid.filled()]
    total = 0
    for part in base_partitions(n):
        owner = part.owner_index
        block_of: dict = {}
        label_of: dict = {}
        ok = True
        for i, v in clues:
            b = owner[i]
            if block_of.setdefault(v, b) != b or label_of.setdefault(b, v) != v:
                ok = False
                break
        if ok:
            total += math.factorial(size - len(label_of))
            if total >= cap:
                return cap
    return total


def count_solutions_backtracking(p: Puzzle, cap=UNLIMITED) -> int:
    """Count completions by cell-by-cell search over plane candidates.

    Symbols that are neither given nor placed yet are interchangeable, so
    only the smallest of them is tried and its subtree is weighted by their
    number.
    """
    n = p.n
    size = n * n
    full = sum(1 << v for v in range(1, size + 1))
    try:
        st = _State(p.grid)
    except Contradiction:
        return 0
    rows = [st.masks[PlaneId(Axis.ROW, i)] for i in range(n)]
    cols = [st.masks[PlaneId(Axis.COL, i)] for i in range(n)]
    lays = [st.masks[PlaneId(Axis.LAYER, i)] for i in range(n)]
    empty = [coord_of(i, n) for i, v in enumerate(st.cells) if not v]
    seen = 0
    for v in st.cells:
        if v:
            seen |= 1 << v

    def rec(k, seen):
        if k == len(empty):
            return 1
        # most constrained remaining cell
        best = None
        for j in range(k, len(empty)):
            r, c, l = empty[j]
            cand = full & ~(rows[r] | cols[c] | lays[l])
            cnt = bin(cand).count("1")
            if best is None or cnt < best[0]:
                best = (cnt, j, cand)
                if cnt <= 1:
                    break
        cnt, j, cand = best
        if cnt == 0:
            return 0
        empty[k], empty[j] = empty[j], empty[k]
        r, c, l = empty[k]
        fresh = cand & full & ~seen
        choices = cand & seen
        weight = 0
        if fresh:
            choices |= fresh & -fresh
            weight = bin(fresh).count("1")
        total = 0
        for v in _bits(choices):
            bit = 1 << v
            rows[r] |= bit
            cols[c] |= bit
            lays[l] |= bit
            sub = rec(k + 1, seen | bit)
            rows[r] ^= bit
            cols[c] ^= bit
            lays[l] ^= bit
            total += sub * weight if (bit & fresh) else sub
        empty[k], empty[j] = empty[j], empty[k]
        return total

    return min(rec(0, seen), cap)


def _partition_solution(p: Puzzle) -> Optional[CubeGrid]:
    """The completion when exactly one exists, else None."""
    n = p.n
    size = n * n
    clues = [(flat_index(c, n), v) for c, v in p.grid.filled()]
    found = None
    for part in base_partitions(n):
        owner = part.owner_index
        label_of: dict = {}
        block_of: dict = {}
        if any(block_of.setdefault(v, owner[i]) != owner[i] or label_of.setdefault(owner[i], v) != v
               for i, v in clues):
            continue
        if size - len(label_of) > 1:
            return None
        free_blocks = [b for b in range(size) if b not in label_of]
        free_labels = [v for v in range(1, size + 1) if v not in block_of]
        label_of.update(zip(free_blocks, free_labels))
        if found is not None:
            return None
        found = part.label([label_of[b] for b in range(size)])
    return found


def solve_unique(p: Puzzle) -> CubeGrid:
    count = count_solutions(p, cap=2)
    if count == 0:
        raise NoSolution("puzzle has no completion")
    if count > 1:
        raise MultipleSolutions(count)
    solution = _partition_solution(p)
    assert solution is not None and is_valid(solution)
    return solution


def solve(p: Puzzle, search: bool = True) -> SolveReport:
    """Propagate, then (optionally) settle the rest by counting."""
    try:
        after, trace = propagate(p)
    except Contradiction:
        return SolveReport(Status.NONE, count=0)
    if after.grid.is_complete:
        return SolveReport(Status.UNIQUE, trace, after.grid, 1)
    if not search:
        return SolveReport(Status.STALLED, trace)
    count = count_solutions(p, cap=2)
    if count == 0:
        return SolveReport(Status.NONE, trace, count=0)
    if count > 1:
        return SolveReport(Status.MULTIPLE, trace, count=count_solutions(p))
    return SolveReport(Status.UNIQUE, trace, solve_unique(p), 1)


class Grade(enum.Enum):
    LOGIC_ONLY = "logic_only"
    REQUIRES_SEARCH = "requires_search"


def grade(p: Puzzle) -> Grade:
    if count_solutions(p, cap=2) != 1:
        raise NotUnique("grading needs a puzzle with exactly one solution")
    try:
        after, _ = propagate(p)
    except Contradiction as exc:  # pragma: no cover - unique puzzles never contradict
        raise AssertionError("propagation contradicted a solvable puzzle") from exc
    return Grade.LOGIC_ONLY if after.grid.is_complete else Grade.REQUIRES_SEARCH
