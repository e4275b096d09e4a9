"""Symmetry group of the Sudo-Cube, canonical forms and class detectors.

The geometric part of the group is (S_n)^3 x| S_3: each element permutes
the three axes and then the layers along every axis.  Reversing an axis is
a layer permutation, so rotations and reflections of the cube are already
included.  Symbol relabelings commute with all of it.

A transform with ``axis_perm = p`` and ``layer_perms = L`` sends the cell
with coordinates ``x`` to the cell ``y`` where ``y[j] = L[j][x[p[j]]]``.
"""

from __future__ import annotations

import enum
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from typing import Optional, Sequence

import numpy as np

from .core import Axis, Coord, CubeGrid, coord_of, digit_cells, flat_index, standard_layer

CanonicalKey = bytes


def _identity(n):
    return tuple(range(n))


def _inverse(p):
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


@dataclass(frozen=True)
class GeometricTransform:
    axis_perm: tuple
    layer_perms: tuple

    @classmethod
    def identity(cls, n: int) -> "GeometricTransform":
        return cls((0, 1, 2), (_identity(n),) * 3)

    @property
    def n(self) -> int:
        return len(self.layer_perms[0])

    def map_coord(self, x: Sequence[int]) -> Coord:
        p, L = self.axis_perm, self.layer_perms
        return Coord(*(L[j][x[p[j]]] for j in range(3)))

    def then(self, other: "GeometricTransform") -> "GeometricTransform":
        """``self`` followed by ``other``."""
        p1, L1 = self.axis_perm, self.layer_perms
        p2, L2 = other.axis_perm, other.layer_perms
        axis = tuple(p1[p2[k]] for k in range(3))
        layers = tuple(tuple(L2[k][v] for v in L1[p2[k]]) for k in range(3))
        return GeometricTransform(axis, layers)

    def inverse(self) -> "GeometricTransform":
        q = _inverse(self.axis_perm)
        return GeometricTransform(q, tuple(_inverse(self.layer_perms[q[i]]) for i in range(3)))

    def source_index(self) -> np.ndarray:
        """``src`` with ``new.cells == old.cells[src]``."""
        n = self.n
        src = np.empty(n ** 3, dtype=np.intp)
        for i in range(n ** 3):
            src[flat_index(self.map_coord(coord_of(i, n)), n)] = i
        return src

    def __call__(self, grid: CubeGrid) -> CubeGrid:
        cells = np.asarray(grid.cells)[self.source_index()]
        return CubeGrid(grid.n, tuple(cells.tolist()))

    def describe(self) -> str:
        names = "rcl"
        axes = "".join(names[a] for a in self.axis_perm)
        lay = ",".join("".join(map(str, L)) for L in self.layer_perms)
        return f"axes={axes} layers={lay}"


@dataclass(frozen=True)
class Relabeling:
    """``perm[s-1]`` is the new label of symbol ``s``."""

    perm: tuple

    def __post_init__(self):
        perm = tuple(int(v) for v in self.perm)
        if sorted(perm) != list(range(1, len(perm) + 1)):
            raise ValueError(f"{perm} is not a permutation of 1..{len(perm)}")
        object.__setattr__(self, "perm", perm)

    @classmethod
    def identity(cls, size: int) -> "Relabeling":
        return cls(tuple(range(1, size + 1)))

    @classmethod
    def from_transpositions(cls, size: int, *pairs) -> "Relabeling":
        perm = list(range(1, size + 1))
        for a, b in pairs:
            perm[a - 1], perm[b - 1] = perm[b - 1], perm[a - 1]
        return cls(tuple(perm))

    def __getitem__(self, s: int) -> int:
        return self.perm[s - 1]

    def then(self, other: "Relabeling") -> "Relabeling":
        return Relabeling(tuple(other[v] for v in self.perm))

    def inverse(self) -> "Relabeling":
        inv = [0] * len(self.perm)
        for s, v in enumerate(self.perm, start=1):
            inv[v - 1] = s
        return Relabeling(tuple(inv))

    def __call__(self, grid: CubeGrid) -> CubeGrid:
        table = (0,) + self.perm
        return CubeGrid(grid.n, tuple(table[v] for v in grid.cells))


@dataclass(frozen=True)
class GroupElement:
    """Geometric move followed by a relabeling."""

    geo: GeometricTransform
    relabel: Relabeling

    @classmethod
    def identity(cls, n: int) -> "GroupElement":
        return cls(GeometricTransform.identity(n), Relabeling.identity(n * n))

    def then(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.geo.then(other.geo), self.relabel.then(other.relabel))

    def inverse(self) -> "GroupElement":
        return GroupElement(self.geo.inverse(), self.relabel.inverse())

    def __call__(self, grid: CubeGrid) -> CubeGrid:
        return self.relabel(self.geo(grid))

    def describe(self) -> str:
        return f"{self.geo.describe()} relabel={''.join(map(str, self.relabel.perm))}"


def apply(g, grid: CubeGrid) -> CubeGrid:
    """Act on a grid with a GroupElement, GeometricTransform or Relabeling."""
    return g(grid)


def geometric_group(n: int) -> list[GeometricTransform]:
    """All (n!)^3 * 3! geometric transforms in a fixed order."""
    if not 1 <= n <= 3:
        raise ValueError(f"geometric group is provided for n <= 3, got {n}")
    perms = list(permutations(range(n)))
    return [
        GeometricTransform(axes, layers)
        for axes in permutations(range(3))
        for layers in product(perms, repeat=3)
    ]


@lru_cache(maxsize=None)
def _source_table(n: int) -> np.ndarray:
    return np.stack([t.source_index() for t in geometric_group(n)])


# --- named moves -----------------------------------------------------------


def swap_layers(axis: Axis, i: int, j: int, n: int = 3) -> GeometricTransform:
    """Exchange two parallel slices perpendicular to ``axis``."""
    perm = list(range(n))
    perm[i], perm[j] = perm[j], perm[i]
    layers = [_identity(n)] * 3
    layers[axis] = tuple(perm)
    return GeometricTransform((0, 1, 2), tuple(layers))


def transpose_blocks(n: int = 3) -> GeometricTransform:
    """Reflect every layer across its main diagonal (swap rows and columns)."""
    return GeometricTransform((1, 0, 2), (_identity(n),) * 3)


def reflect_blocks_relabeled(n: int = 3) -> GroupElement:
    """Block transpose plus the relabeling that restores a standard layer 0.

    For n=3 the relabeling swaps 2<->4, 3<->7 and 6<->8.
    """
    pairs = [
        (n * r + c + 1, n * c + r + 1) for r in range(n) for c in range(r + 1, n)
    ]
    return GroupElement(transpose_blocks(n), Relabeling.from_transpositions(n * n, *pairs))


def space_diagonal_rotation(corner: Sequence[int], n: int = 3, turns: int = 1) -> GeometricTransform:
    """Rotate 120 degrees * turns about the diagonal through ``corner``."""
    rev = tuple(range(n - 1, -1, -1))
    flips = tuple(rev if corner[a] else _identity(n) for a in range(3))
    mirror = GeometricTransform((0, 1, 2), flips)
    spin = GeometricTransform((1, 2, 0), (_identity(n),) * 3)
    rot = GeometricTransform.identity(n)
    for _ in range(turns % 3):
        rot = rot.then(spin)
    return mirror.then(rot).then(mirror)


# --- normal forms ----------------------------------------------------------


def normalize_relabel(grid: CubeGrid) -> tuple[CubeGrid, Relabeling]:
    """Relabel so that layer 0 is the standard base."""
    n = grid.n
    base = standard_layer(n)
    perm = [0] * (n * n)
    for r, row in enumerate(grid.layer(0)):
        for c, v in enumerate(row):
            perm[v - 1] = base[r][c]
    rho = Relabeling(tuple(perm))
    return rho(grid), rho


def _normalized_images(cells: np.ndarray, src: np.ndarray) -> np.ndarray:
    """Every geometric image of ``cells``, each relabeled to a standard layer 0."""
    n2 = round(len(cells) ** (2 / 3))
    images = cells[src]
    table = np.zeros((len(src), n2 + 1), dtype=np.uint8)
    rows = np.arange(len(src))[:, None]
    table[rows, images[:, :n2]] = np.arange(1, n2 + 1, dtype=np.uint8)
    return np.take_along_axis(table, images, axis=1)


def _row_argmin(arr: np.ndarray) -> int:
    order = np.lexsort(arr.T[::-1])
    return int(order[0])


def canonical_form(grid: CubeGrid) -> CanonicalKey:
    """Smallest labeled serialization over the grid's symmetry orbit."""
    if not grid.is_complete:
        raise ValueError("canonical forms are defined for complete grids")
    cells = np.asarray(grid.cells, dtype=np.intp)
    imgs = _normalized_images(cells, _source_table(grid.n))
    return imgs[_row_argmin(imgs)].tobytes()


def _grid_from_key(key: CanonicalKey, n: int) -> CubeGrid:
    return CubeGrid(n, tuple(key))


def find_mapping(source: CubeGrid, target: CubeGrid) -> Optional[GroupElement]:
    """A group element carrying ``source`` onto ``target``, if any."""
    n = source.n
    cells = np.asarray(source.cells, dtype=np.intp)
    tgt_norm, tgt_rho = normalize_relabel(target)
    want = np.asarray(tgt_norm.cells, dtype=np.uint8)
    imgs = _normalized_images(cells, _source_table(n))
    hits = np.flatnonzero((imgs == want).all(axis=1))
    if len(hits) == 0:
        return None
    geo = geometric_group(n)[int(hits[0])]
    _, rho = normalize_relabel(geo(source))
    return GroupElement(geo, rho.then(tgt_rho.inverse()))


@dataclass(frozen=True)
class OrbitClass:
    key: CanonicalKey
    representative: CubeGrid
    members: tuple
    witnesses: tuple  # witnesses[i] maps members[i] onto the representative

    @property
    def size(self) -> int:
        return len(self.members)


def orbit_partition(grids: Sequence[CubeGrid], jobs: int = 1) -> list[OrbitClass]:
    """Group grids by canonical form, largest class last.

    Classes are sorted by (size, key); the representative of each is the
    member with the smallest serialization.
    """
    grids = list(grids)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            keys = list(pool.map(canonical_form, grids))
    else:
        keys = [canonical_form(g) for g in grids]
    buckets: dict = {}
    for g, k in zip(grids, keys):
        buckets.setdefault(k, []).append(g)
    out = []
    for key, members in buckets.items():
        members.sort(key=lambda g: g.cells)
        rep = members[0]
        witnesses = tuple(find_mapping(m, rep) for m in members)
        out.append(OrbitClass(key, rep, tuple(members), witnesses))
    out.sort(key=lambda c: (c.size, c.key))
    return out


# --- structural detectors --------------------------------------------------


def _line_partition(arr: np.ndarray, fixed: int, index: int, slicing: int) -> frozenset:
    """Symbols of the plane ``fixed = index`` grouped by the ``slicing`` coordinate."""
    n = arr.shape[0]
    groups = []
    for j in range(n):
        sel = [slice(None)] * 3
        sel[fixed] = index
        sel[slicing] = j
        groups.append(frozenset(arr[tuple(sel)].ravel().tolist()))
    return frozenset(groups)


def uniform_partition_detector(grid: CubeGrid) -> bool:
    """True when every family of parallel planes splits the symbols alike.

    For each plane family and each of the two other axes, the three lines
    of a plane partition the symbols; the partition must not depend on the
    plane.
    """
    n = grid.n
    arr = np.transpose(grid.to_array(), (1, 2, 0))  # [r, c, l]
    for fixed in range(3):
        for slicing in range(3):
            if slicing == fixed:
                continue
            parts = {_line_partition(arr, fixed, i, slicing) for i in range(n)}
            if len(parts) != 1:
                return False
    return True


class ShapeClass(enum.Enum):
    DIAGONAL = "diagonal"
    SCALENE_CORNER = "scalene_corner"
    EQUILATERAL = "equilateral"


def classify_cells(cells: Sequence[Sequence[int]]) -> ShapeClass:
    """Shape of a three-cell transversal of the 3-cube."""
    cells = [tuple(p) for p in cells]
    if (1, 1, 1) in cells:
        return ShapeClass.DIAGONAL
    if any(all(x in (0, 2) for x in p) for p in cells):
        return ShapeClass.SCALENE_CORNER
    return ShapeClass.EQUILATERAL


def classify_digit_shape(grid: CubeGrid, d: int) -> ShapeClass:
    if grid.n != 3:
        raise ValueError("shape classes are defined for n=3")
    return classify_cells(digit_cells(grid, d))


def shape_census(grid: CubeGrid) -> dict:
    counts = Counter(classify_digit_shape(grid, d) for d in range(1, 10))
    return {s: counts.get(s, 0) for s in ShapeClass}


def placement_census(n: int = 3) -> dict:
    """Shape tally over every possible placement of one digit."""
    from .enumeration import placements

    if n != 3:
        raise ValueError("shape classes are defined for n=3")
    counts = Counter(classify_cells(p) for p in placements(3))
    return {s: counts.get(s, 0) for s in ShapeClass}


def diagonal_planes(corner: Sequence[int]) -> list[list[Coord]]:
    """The three planes through the space diagonal at ``corner``.

    Each contains the diagonal and a pair of opposite cube edges.
    """
    def u(x, a):
        return 2 - x if corner[a] else x

    planes = []
    for a, b in ((0, 1), (1, 2), (0, 2)):
        planes.append([
            Coord(r, c, l)
            for l, r, c in product(range(3), repeat=3)
            if u((r, c, l)[a], a) == u((r, c, l)[b], b)
        ])
    return planes


def diagonal_planes_signature(grid: CubeGrid) -> tuple:
    """Distinct-symbol counts of the three planes through the diagonal digit."""
    diag = [d for d in range(1, 10) if classify_digit_shape(grid, d) is ShapeClass.DIAGONAL]
    (d,) = diag
    corner = next(p for p in digit_cells(grid, d) if p != (1, 1, 1))
    return tuple(len({grid[p] for p in plane}) for plane in diagonal_planes(corner))


# --- sudo-case normalization -----------------------------------------------


def to_sudo_case(grid: CubeGrid) -> tuple[CubeGrid, GroupElement]:
    """Bring a size-3 grid to sudo-case form with an explicit witness.

    Relabel to a standard layer 0, then reverse rows and/or columns so the
    5 of layer 1 sits in its upper-left corner, relabeling again.
    """
    for flip_r, flip_c in ((0, 0), (1, 0), (0, 1), (1, 1)):
        geo = GeometricTransform(
            (0, 1, 2),
            ((2, 1, 0) if flip_r else (0, 1, 2), (2, 1, 0) if flip_c else (0, 1, 2), (0, 1, 2)),
        )
        moved, rho0 = normalize_relabel(grid)
        out, rho1 = normalize_relabel(geo(moved))
        if out[0, 0, 1] == 5:
            # relabel commutes with geometry, so fold both relabelings after geo
            return out, GroupElement(geo, rho0.then(rho1))
    raise ValueError("5 is not at a corner of layer 1; not a size-3 solution grid")
