"""Bent-grid (Sudo-Kurve) presentation and the text file format.

A size-n Kurve grid is drawn as n blocks placed corner to corner.  The
first and last blocks are the bottom and top cube layers as printed; every
block in between is stored in on-page orientation and becomes a cube layer
after a flip across its anti-diagonal.  For the 3-block puzzle this means a
bent row runs through TL row r, MID column n-1-r and BR row r.

Text format::

    #sudocube n=3          (or #sudokurve n=3)
    123
    456
    789
    <blank line>
    ...                    (n blocks of n lines)

Symbols are single characters ``1``..``n*n``, ``.`` is an empty cell, the
file ends with a newline and contains no other whitespace.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Union

from .core import CubeGrid, Coord, flat_index


class UnsupportedSize(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class SizeMismatch(ParseError):
    pass


class BadSymbol(ParseError):
    pass


class Format(enum.Enum):
    CUBE = "sudocube"
    KURVE = "sudokurve"


class LineKind(enum.Enum):
    ROW = "row"
    COLUMN = "column"


def _is_flipped(b: int, n: int) -> bool:
    return 0 < b < n - 1


@dataclass(frozen=True)
class KurveGrid:
    """``blocks[b][i][j]`` in page orientation, 0 for empty.

    For n=3 the blocks are TL, MID, BR.
    """

    n: int
    blocks: tuple

    def __post_init__(self):
        n = self.n
        if not 1 <= n <= 3:
            raise UnsupportedSize(f"no Kurve layout for n={n}")
        blocks = tuple(tuple(tuple(int(v or 0) for v in row) for row in b) for b in self.blocks)
        if len(blocks) != n or any(len(b) != n or any(len(row) != n for row in b) for b in blocks):
            raise ValueError(f"a size-{n} Kurve grid needs {n} blocks of {n}x{n}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def empty(cls, n: int) -> "KurveGrid":
        return cls(n, tuple(((0,) * n,) * n for _ in range(n)))

    def __getitem__(self, key):
        b, i, j = key
        return self.blocks[b][i][j] or None


@dataclass(frozen=True)
class BentLine:
    kind: LineKind
    index: int
    cells: tuple  # (block, i, j) in traversal order


def kurve_cell_to_coord(b: int, i: int, j: int, n: int) -> Coord:
    if _is_flipped(b, n):
        return Coord(n - 1 - j, n - 1 - i, b)
    return Coord(i, j, b)


def coord_to_kurve_cell(coord, n: int) -> tuple:
    r, c, l = coord
    if _is_flipped(l, n):
        return (l, n - 1 - c, n - 1 - r)
    return (l, r, c)


def kurve_to_cube(k: KurveGrid) -> CubeGrid:
    n = k.n
    cells = [0] * n ** 3
    for b, block in enumerate(k.blocks):
        for i, row in enumerate(block):
            for j, v in enumerate(row):
                cells[flat_index(kurve_cell_to_coord(b, i, j, n), n)] = v
    return CubeGrid(n, tuple(cells))


def cube_to_kurve(g: CubeGrid) -> KurveGrid:
    n = g.n
    if n > 3:
        raise UnsupportedSize(f"no Kurve layout for n={n}")
    blocks = [[[0] * n for _ in range(n)] for _ in range(n)]
    for idx, v in enumerate(g.cells):
        l, rest = divmod(idx, n * n)
        r, c = divmod(rest, n)
        b, i, j = coord_to_kurve_cell((r, c, l), n)
        blocks[b][i][j] = v
    return KurveGrid(n, tuple(tuple(map(tuple, b)) for b in blocks))


def bent_line(kind: LineKind, index: int, n: int) -> BentLine:
    """Cells of a bent row or column.

    Flipped blocks are walked top-to-bottom for rows and left-to-right for
    columns; only the cell set matters for the constraints.
    """
    if not 0 <= index < n:
        raise IndexError(f"line index {index} out of range for n={n}")
    cells = []
    for b in range(n):
        flipped = _is_flipped(b, n)
        for t in range(n):
            if kind is LineKind.ROW:
                cells.append((b, t, n - 1 - index) if flipped else (b, index, t))
            else:
                cells.append((b, n - 1 - index, t) if flipped else (b, t, index))
    return BentLine(kind, index, tuple(cells))


def kurve_is_valid(k: KurveGrid) -> bool:
    """Blocks, bent rows and bent columns are duplicate-free."""
    n = k.n
    groups = [[(b, i, j) for i in range(n) for j in range(n)] for b in range(n)]
    for kind in LineKind:
        groups += [bent_line(kind, x, n).cells for x in range(n)]
    for cells in groups:
        vals = [k.blocks[b][i][j] for b, i, j in cells]
        vals = [v for v in vals if v]
        if len(vals) != len(set(vals)):
            return False
    return True


_HEADER = re.compile(r"#(sudocube|sudokurve) n=([0-9]+)")


def _format_blocks(blocks) -> str:
    return "\n\n".join(
        "\n".join("".join(str(v) if v else "." for v in row) for row in block) for block in blocks
    )


def serialize(value: Union[CubeGrid, KurveGrid], fmt: Format = None) -> str:
    """Text form of a grid; ``fmt`` converts a cube to the Kurve layout."""
    if fmt is None:
        fmt = Format.KURVE if isinstance(value, KurveGrid) else Format.CUBE
    if fmt is Format.KURVE and isinstance(value, CubeGrid):
        value = cube_to_kurve(value)
    elif fmt is Format.CUBE and isinstance(value, KurveGrid):
        value = kurve_to_cube(value)
    n = value.n
    if n > 3:
        raise UnsupportedSize("symbols above 9 have no single-character form")
    blocks = value.blocks if isinstance(value, KurveGrid) else [value.layer(l) for l in range(n)]
    return f"#{fmt.value} n={n}\n{_format_blocks(blocks)}\n"


def parse(text: str, fmt: Format = None) -> Union[CubeGrid, KurveGrid]:
    """Parse the text format; ``fmt=None`` accepts either header."""
    if not text.endswith("\n"):
        raise ParseError("missing trailing newline", text.count("\n") + 1)
    lines = text[:-1].split("\n")
    m = _HEADER.fullmatch(lines[0])
    if not m:
        raise ParseError("expected header '#sudocube n=<n>' or '#sudokurve n=<n>'", 1)
    found = Format(m.group(1))
    if fmt is not None and found is not fmt:
        raise ParseError(f"expected a {fmt.value} file, found {found.value}", 1)
    n = int(m.group(2))
    if not 1 <= n <= 3:
        raise SizeMismatch(f"unsupported size n={n}", 1, len(lines[0]))
    expected = n * (n + 1)
    body = lines[1:]
    if len(body) != expected - 1:
        raise SizeMismatch(f"expected {expected - 1} lines after the header, got {len(body)}",
                           min(len(lines), expected) + 1)
    top = n * n
    blocks = []
    for b in range(n):
        block = []
        for i in range(n):
            lineno = 2 + b * (n + 1) + i
            line = body[lineno - 2]
            if len(line) != n:
                raise SizeMismatch(f"expected {n} characters, got {len(line)}", lineno,
                                   min(len(line), n) + 1)
            row = []
            for j, ch in enumerate(line):
                if ch == ".":
                    row.append(0)
                elif ch.isdigit() and 1 <= int(ch) <= top:
                    row.append(int(ch))
                else:
                    raise BadSymbol(f"bad symbol {ch!r} for n={n}", lineno, j + 1)
            block.append(tuple(row))
        blocks.append(tuple(block))
        if b < n - 1:
            sep = 2 + b * (n + 1) + n
            if body[sep - 2] != "":
                raise ParseError("expected a blank line between blocks", sep)
    if found is Format.KURVE:
        return KurveGrid(n, tuple(blocks))
    return CubeGrid.from_layers(blocks)
