"""Grid representation, plane constraints and layer-pair obstructions.

Coordinates are 0-indexed ``(r, c, l)`` triples: row, column and layer.
Layer ``l`` is the block B(l+1) of the printed Sudo-Cube, B1 being the
bottom layer.  Cells are stored flat in ``(l, r, c)`` row-major order.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence

import numpy as np

MAX_SIZE = 4

Symbol = int


class Axis(enum.IntEnum):
    ROW = 0
    COL = 1
    LAYER = 2


class Coord(NamedTuple):
    r: int
    c: int
    l: int


class PlaneId(NamedTuple):
    axis: Axis
    index: int


class ComponentClash(ValueError):
    """Two cells share a coordinate, so they cannot hold the same symbol."""


class InvalidLayerPair(ValueError):
    pass


class Obstructed(ValueError):
    def __init__(self, obstructions):
        self.obstructions = list(obstructions)
        super().__init__(f"{len(self.obstructions)} obstruction(s): {self.obstructions}")


def _check_size(n: int) -> None:
    if not 1 <= n <= MAX_SIZE:
        raise ValueError(f"unsupported size n={n}")


def flat_index(coord: Sequence[int], n: int) -> int:
    r, c, l = coord
    return (l * n + r) * n + c


def coord_of(index: int, n: int) -> Coord:
    l, rest = divmod(index, n * n)
    r, c = divmod(rest, n)
    return Coord(r, c, l)


def all_coords(n: int) -> list[Coord]:
    """Every cell, in storage order."""
    return [coord_of(i, n) for i in range(n ** 3)]


@dataclass(frozen=True)
class CubeGrid:
    """An n x n x n grid of optional symbols in ``1..n**2``.

    ``cells`` is the flat ``(l, r, c)`` tuple with 0 marking an empty
    cell; use indexing (``grid[coord]``) to get ``None`` for empties.
    """

    n: int
    cells: tuple

    def __post_init__(self):
        _check_size(self.n)
        cells = tuple(int(v) for v in self.cells)
        if len(cells) != self.n ** 3:
            raise ValueError(f"expected {self.n ** 3} cells, got {len(cells)}")
        top = self.n * self.n
        for v in cells:
            if not 0 <= v <= top:
                raise ValueError(f"symbol {v} outside 1..{top}")
        object.__setattr__(self, "cells", cells)

    @classmethod
    def empty(cls, n: int) -> "CubeGrid":
        return cls(n, (0,) * n ** 3)

    @classmethod
    def from_layers(cls, layers) -> "CubeGrid":
        """Build from ``layers[l][r][c]``; ``None`` or 0 means empty."""
        arr = [[[0 if v is None else v for v in row] for row in layer] for layer in layers]
        n = len(arr)
        flat = [v for layer in arr for row in layer for v in row]
        return cls(n, tuple(flat))

    @classmethod
    def from_array(cls, arr) -> "CubeGrid":
        """Inverse of :meth:`to_array` (indexed ``[l, r, c]``, 0 = empty)."""
        arr = np.asarray(arr)
        return cls(arr.shape[0], tuple(arr.reshape(-1).tolist()))

    @classmethod
    def from_clues(cls, n: int, clues: Iterable[tuple[Sequence[int], int]]) -> "CubeGrid":
        cells = [0] * n ** 3
        for coord, v in clues:
            cells[flat_index(coord, n)] = v
        return cls(n, tuple(cells))

    def __getitem__(self, coord: Sequence[int]) -> Optional[Symbol]:
        v = self.cells[flat_index(coord, self.n)]
        return v or None

    def with_cell(self, coord: Sequence[int], value: Optional[Symbol]) -> "CubeGrid":
        cells = list(self.cells)
        cells[flat_index(coord, self.n)] = value or 0
        return CubeGrid(self.n, tuple(cells))

    def to_array(self) -> np.ndarray:
        n = self.n
        return np.array(self.cells, dtype=np.int8).reshape(n, n, n)

    def layer(self, l: int) -> tuple:
        """Layer ``l`` as an n x n tuple of rows (0 for empty)."""
        n = self.n
        base = l * n * n
        return tuple(tuple(self.cells[base + r * n : base + r * n + n]) for r in range(n))

    @property
    def is_complete(self) -> bool:
        return 0 not in self.cells

    def filled(self) -> Iterator[tuple[Coord, Symbol]]:
        for i, v in enumerate(self.cells):
            if v:
                yield coord_of(i, self.n), v

    def labels(self) -> bytes:
        """One byte per cell in storage order; the canonical serialization."""
        return bytes(self.cells)

    def __str__(self):
        return "\n\n".join(
            "\n".join("".join(str(v) if v else "." for v in row) for row in self.layer(l))
            for l in range(self.n)
        )


def standard_layer(n: int) -> tuple:
    """The base arrangement: cell (r, c) holds ``n*r + c + 1``."""
    return tuple(tuple(n * r + c + 1 for c in range(n)) for r in range(n))


def plane_cells(plane: PlaneId, n: int) -> list[Coord]:
    axis, index = plane
    if not 0 <= index < n:
        raise IndexError(f"plane index {index} out of range for n={n}")
    out = []
    for a, b in product(range(n), repeat=2):
        if axis == Axis.ROW:
            out.append(Coord(index, a, b))
        elif axis == Axis.COL:
            out.append(Coord(a, index, b))
        else:
            out.append(Coord(a, b, index))
    return out


def all_planes(n: int) -> list[PlaneId]:
    return [PlaneId(axis, i) for axis in Axis for i in range(n)]


def is_valid(grid: CubeGrid) -> bool:
    """True when no axis-perpendicular plane repeats a symbol."""
    n = grid.n
    arr = grid.to_array()  # [l, r, c]
    for axis_slices in (
        (arr[:, r, :] for r in range(n)),
        (arr[:, :, c] for c in range(n)),
        (arr[l] for l in range(n)),
    ):
        for plane in axis_slices:
            vals = plane[plane > 0]
            if len(np.unique(vals)) != len(vals):
                return False
    return True


def digit_cells(grid: CubeGrid, d: Symbol) -> list[Coord]:
    """Cells holding ``d``, sorted by (l, r, c)."""
    return [coord_of(i, grid.n) for i, v in enumerate(grid.cells) if v == d]


def third_position(p1: Sequence[int], p2: Sequence[int]) -> Coord:
    """Where the third copy of a symbol must sit in a size-3 cube."""
    if any(a == b for a, b in zip(p1, p2)):
        raise ComponentClash(f"{tuple(p1)} and {tuple(p2)} share a coordinate")
    return Coord(*(3 - a - b for a, b in zip(p1, p2)))


class ObstructionKind(enum.Enum):
    SWAP = "swap"
    CROSS = "cross"


@dataclass(frozen=True)
class Obstruction:
    digit_a: Symbol
    digit_b: Symbol
    kind: ObstructionKind
    cells: tuple  # (a in layer 0, a in layer 1, b in layer 0, b in layer 1)


def _positions(layer) -> dict:
    return {v: (r, c) for r, row in enumerate(layer) for c, v in enumerate(row)}


def check_layer_pair(layer0, layer1) -> int:
    """Validate two complete stacked layers; returns n."""
    n = len(layer0)
    want = set(range(1, n * n + 1))
    for layer in (layer0, layer1):
        if len(layer) != n or any(len(row) != n for row in layer):
            raise InvalidLayerPair("layers must be n x n")
        if {v for row in layer for v in row} != want:
            raise InvalidLayerPair("each layer must hold every symbol once")
    for r in range(n):
        if set(layer0[r]) & set(layer1[r]):
            raise InvalidLayerPair(f"row-plane {r} repeats a symbol")
    for c in range(n):
        col0 = {layer0[r][c] for r in range(n)}
        col1 = {layer1[r][c] for r in range(n)}
        if col0 & col1:
            raise InvalidLayerPair(f"col-plane {c} repeats a symbol")
    return n


def find_obstructions(layer0, layer1) -> list[Obstruction]:
    """Digit pairs whose forced third-layer cells collide (size 3 only)."""
    n = check_layer_pair(layer0, layer1)
    if n != 3:
        raise InvalidLayerPair("obstructions are defined for n=3 layer pairs")
    pos0, pos1 = _positions(layer0), _positions(layer1)
    target: dict = {}
    for d in range(1, 10):
        t = third_position((*pos0[d], 0), (*pos1[d], 1))
        target.setdefault(t, []).append(d)
    out = []
    for digits in target.values():
        for i, a in enumerate(digits):
            for b in digits[i + 1 :]:
                cells = (
                    Coord(*pos0[a], 0),
                    Coord(*pos1[a], 1),
                    Coord(*pos0[b], 0),
                    Coord(*pos1[b], 1),
                )
                swapped = pos0[a] == pos1[b] and pos1[a] == pos0[b]
                kind = ObstructionKind.SWAP if swapped else ObstructionKind.CROSS
                out.append(Obstruction(a, b, kind, cells))
    out.sort(key=lambda o: (o.digit_a, o.digit_b))
    return out


def complete_third_layer(layer0, layer1) -> CubeGrid:
    """Stack two layers and place every symbol's last occurrence.

    For n=2 the two layers already form the whole cube.
    """
    n = check_layer_pair(layer0, layer1)
    if n == 2:
        return CubeGrid.from_layers([layer0, layer1])
    if n != 3:
        raise InvalidLayerPair("layer-pair completion needs n in {2, 3}")
    bad = find_obstructions(layer0, layer1)
    if bad:
        raise Obstructed(bad)
    pos0, pos1 = _positions(layer0), _positions(layer1)
    top = [[0] * 3 for _ in range(3)]
    for d in range(1, 10):
        r, c, _ = third_position((*pos0[d], 0), (*pos1[d], 1))
        top[r][c] = d
    return CubeGrid.from_layers([layer0, layer1, top])


def plane_masks(grid: CubeGrid):
    """Bitmasks of used symbols per row-, col- and layer-plane.

    Bit ``v`` is set when symbol ``v`` is present.  Raises ValueError when a
    plane repeats a symbol.
    """
    n = grid.n
    rows, cols, lays = [0] * n, [0] * n, [0] * n
    for i, v in enumerate(grid.cells):
        if not v:
            continue
        r, c, l = coord_of(i, n)
        bit = 1 << v
        if (rows[r] | cols[c] | lays[l]) & bit:
            raise ValueError(f"symbol {v} repeated in a plane through {(r, c, l)}")
        rows[r] |= bit
        cols[c] |= bit
        lays[l] |= bit
    return rows, cols, lays

