"""ASCII rendering of boards, positions and root-map tables.

Boards follow the square arrangements used throughout the package: the
upper-triangular array for type A, the 2n x n / (2n+1) x n stacks for
types D and B/C, and a single height-ordered column for G2.  Factors of
a product sit side by side separated by a gutter.
"""

from __future__ import annotations

from .embedding import Embedding
from .game import Position
from .roots import RootSystem

GUTTER = 2
_REGION_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def _grid_geometry(rs: RootSystem):
    """Global (row, col) cell for every root id, plus grid dimensions."""
    layout = rs.layout()
    col_offset = {}
    acc = 0
    nrows = 0
    for c in range(len(rs.factors)):
        rows, cols = rs.board_shape(c)
        col_offset[c] = acc
        acc += cols + GUTTER
        nrows = max(nrows, rows)
    cells = {}
    for rid, (row, col, comp) in layout.items():
        cells[rid] = (row, col_offset[comp] + col)
    ncols = acc - GUTTER
    return cells, nrows, ncols


def render_position(pos: Position) -> str:
    """Board with region shading letters and a dot for each token."""
    rs = pos.embedding.target
    cells, nrows, ncols = _grid_geometry(rs)
    region_of = {}
    for i, mask in enumerate(pos.regions):
        for rid in rs.mask_ids(mask):
            region_of[rid] = _REGION_LETTERS[i % len(_REGION_LETTERS)]
    grid = [["   "] * (ncols + 1) for _ in range(nrows + 1)]
    for rid, (row, col) in cells.items():
        letter = region_of.get(rid, "?")
        tok = "●" if pos.tokens >> rid & 1 else " "
        grid[row][col] = f"{letter}{tok} "
    lines = ["".join(row).rstrip() for row in grid[1:]]
    return "\n".join(line for line in lines)


def render_board_names(rs: RootSystem, width: int = 9) -> str:
    """Board with each square labeled by its root name."""
    cells, nrows, ncols = _grid_geometry(rs)
    grid = [[" " * width] * (ncols + 1) for _ in range(nrows + 1)]
    for rid, (row, col) in cells.items():
        name = rs.roots[rid].name
        grid[row][col] = name.ljust(width)[:width]
    lines = ["".join(row).rstrip() for row in grid[1:]]
    return "\n".join(lines)


def render_phat_table(e: Embedding, width: int = 9) -> str:
    """The root map drawn on the target board; '.' marks zero squares."""
    rs = e.target
    cells, nrows, ncols = _grid_geometry(rs)
    grid = [[" " * width] * (ncols + 1) for _ in range(nrows + 1)]
    for rid, (row, col) in cells.items():
        img = e.phat_root(rid)
        name = "." if img is None else img.name
        grid[row][col] = name.ljust(width)[:width]
    lines = ["".join(row).rstrip() for row in grid[1:]]
    header = f"{e.spec}: target {rs.spec} -> source {e.source.spec}"
    return "\n".join([header] + lines)
