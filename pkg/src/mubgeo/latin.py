"""Latin squares, orthogonality and orthogonal-mate search.

A square is an ``n x n`` integer array with symbols ``0 .. n-1``.  Mates are
found by splitting the square into ``n`` disjoint transversals; a square has
an orthogonal mate exactly when such a decomposition exists.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .errors import MalformedArray, NotOrthogonal, OrderMismatch, OrderTooLarge, WrongCount
from .gf import FieldTable

MATE_SEARCH_CAP = 10
ENUMERATION_CAP = 6


class Violation(NamedTuple):
    kind: str  # "row" or "column"
    index: int
    symbol: int


class LatinCheck(NamedTuple):
    ok: bool
    violation: Violation | None


class OrthogonalityCheck(NamedTuple):
    ok: bool
    witness: tuple[tuple[int, int], tuple[int, int]] | None


def _as_array(square) -> np.ndarray:
    if isinstance(square, LatinSquare):
        return square.cells
    rows = [list(r) for r in square]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise MalformedArray("expected a non-empty square array")
    arr = np.asarray(rows)
    if not np.issubdtype(arr.dtype, np.integer):
        raise MalformedArray("symbols must be integers")
    if arr.min() < 0 or arr.max() >= n:
        raise MalformedArray(f"symbols must lie in 0..{n - 1}")
    return arr.astype(np.int64)


def is_latin(square) -> LatinCheck:
    """Check the Latin property, reporting the first repeated symbol.

    Rows are scanned before columns; within a line the first symbol seen
    twice is reported.
    """
    a = _as_array(square)
    for kind, lines in (("row", a), ("column", a.T)):
        for idx, line in enumerate(lines):
            seen = set()
            for s in line:
                if s in seen:
                    return LatinCheck(False, Violation(kind, idx, int(s)))
                seen.add(s)
    return LatinCheck(True, None)


@dataclass(frozen=True, eq=False)
class LatinSquare:
    cells: np.ndarray

    def __post_init__(self):
        arr = _as_array(self.cells)
        check = is_latin(arr)
        if not check.ok:
            v = check.violation
            raise MalformedArray(f"not Latin: symbol {v.symbol} repeats in {v.kind} {v.index}")
        arr.setflags(write=False)
        object.__setattr__(self, "cells", arr)

    @property
    def n(self) -> int:
        return self.cells.shape[0]

    def __eq__(self, other):
        return isinstance(other, LatinSquare) and np.array_equal(self.cells, other.cells)

    def __hash__(self):
        return hash(self.cells.tobytes())

    def canonical_symbols(self) -> "LatinSquare":
        """Relabel symbols so the first row reads ``0, 1, ..., n-1``."""
        relabel = np.empty(self.n, dtype=np.int64)
        relabel[self.cells[0]] = np.arange(self.n)
        return LatinSquare(relabel[self.cells])

    def to_text(self) -> str:
        return "\n".join(" ".join(str(int(s)) for s in row) for row in self.cells)


def are_orthogonal(A, B) -> OrthogonalityCheck:
    """Injectivity of ``(i, j) -> (A[i,j], B[i,j])``.

    On failure the witness is the two cells (row-major first collision) that
    share a symbol pair.
    """
    a, b = _as_array(A), _as_array(B)
    if a.shape != b.shape:
        raise OrderMismatch(f"orders {a.shape[0]} and {b.shape[0]} differ")
    n = a.shape[0]
    seen = np.full(n * n, -1, dtype=np.int64)
    keys = (a * n + b).ravel()
    for cell, key in enumerate(keys):
        if seen[key] >= 0:
            first = int(seen[key])
            return OrthogonalityCheck(False, (divmod(first, n), divmod(cell, n)))
        seen[key] = cell
    return OrthogonalityCheck(True, None)


@dataclass(frozen=True)
class MolsSet:
    """Pairwise orthogonal Latin squares of a common order."""

    n: int
    squares: tuple[LatinSquare, ...]

    def __post_init__(self):
        sq = tuple(s if isinstance(s, LatinSquare) else LatinSquare(s) for s in self.squares)
        object.__setattr__(self, "squares", sq)
        if any(s.n != self.n for s in sq):
            raise OrderMismatch("all squares must have order n")
        if len(sq) > max(self.n - 1, 1):
            raise WrongCount(f"more than n-1 = {self.n - 1} mutually orthogonal squares")
        for i in range(len(sq)):
            for j in range(i + 1, len(sq)):
                check = are_orthogonal(sq[i], sq[j])
                if not check.ok:
                    raise NotOrthogonal(f"squares {i} and {j} repeat a pair at cells {check.witness}")

    def __len__(self):
        return len(self.squares)

    def to_text(self) -> str:
        return "\n\n".join(s.to_text() for s in self.squares) + "\n"


def parse_squares(text: str) -> list[LatinSquare]:
    """Parse whitespace text: rows per line, squares separated by blank lines."""
    blocks, cur = [], []
    for line in text.splitlines():
        if line.strip():
            cur.append([int(t) for t in line.split()])
        elif cur:
            blocks.append(cur)
            cur = []
    if cur:
        blocks.append(cur)
    return [LatinSquare(b) for b in blocks]


def parse_mols(text: str) -> MolsSet:
    squares = parse_squares(text)
    if not squares:
        raise MalformedArray("no squares found")
    return MolsSet(squares[0].n, tuple(squares))


def cyclic_square(n: int, shift: int = 0) -> LatinSquare:
    i, j = np.indices((n, n))
    return LatinSquare((i + j + shift) % n)


def mols_from_field(F: FieldTable) -> MolsSet:
    """The n-1 squares ``L_m(i, j) = m*i + j`` for nonzero m in GF(n)."""
    n = F.order
    i, j = np.indices((n, n))
    squares = tuple(LatinSquare(F.add_table[F.mul_table[m, i], j]) for m in range(1, n))
    return MolsSet(n, squares)


# ---------------------------------------------------------------- mate search


class MateResult(NamedTuple):
    mate: LatinSquare | None
    exhaustive: bool


def transversals(square) -> list[tuple[int, ...]]:
    """All transversals as column tuples ``t`` (cell ``(i, t[i])``), lexicographic."""
    a = _as_array(square)
    n = a.shape[0]
    rows = a.tolist()
    found: list[tuple[int, ...]] = []
    cols: list[int] = []

    def extend(i: int, used_cols: int, used_syms: int) -> None:
        if i == n:
            found.append(tuple(cols))
            return
        row = rows[i]
        for c in range(n):
            if used_cols >> c & 1:
                continue
            s = row[c]
            if used_syms >> s & 1:
                continue
            cols.append(c)
            extend(i + 1, used_cols | 1 << c, used_syms | 1 << s)
            cols.pop()

    extend(0, 0, 0)
    return found


def _disjoint_cover(trans: list[tuple[int, ...]], n: int) -> list[tuple[int, ...]] | None:
    """First set of n cell-disjoint transversals, grouped by their row-0 column."""
    masks = []
    for t in trans:
        m = 0
        for i, c in enumerate(t):
            m |= 1 << (i * n + c)
        masks.append(m)
    by_start: list[list[int]] = [[] for _ in range(n)]
    for idx, t in enumerate(trans):
        by_start[t[0]].append(idx)
    chosen: list[int] = []

    def search(col: int, covered: int) -> bool:
        if col == n:
            return True
        for idx in by_start[col]:
            if masks[idx] & covered:
                continue
            chosen.append(idx)
            if search(col + 1, covered | masks[idx]):
                return True
            chosen.pop()
        return False

    return [trans[i] for i in chosen] if search(0, 0) else None


def find_orthogonal_mate(square, *, cap: int = MATE_SEARCH_CAP) -> MateResult:
    """Search for a Latin square orthogonal to ``square``.

    Transversals are enumerated row-major with ascending columns, then a
    disjoint cover is chosen starting from row-0 column 0.  The mate takes
    symbol ``k`` on the transversal that passes through cell ``(0, k)``, so
    its first row is ``0 .. n-1``.  The search always runs to completion, so
    ``exhaustive`` is True whenever no mate is returned.
    """
    a = _as_array(square)
    n = a.shape[0]
    if n > cap:
        raise OrderTooLarge(f"mate search limited to order {cap}")
    cover = _disjoint_cover(transversals(a), n)
    if cover is None:
        return MateResult(None, True)
    mate = np.empty((n, n), dtype=np.int64)
    for t in cover:
        for i, c in enumerate(t):
            mate[i, c] = t[0]
    return MateResult(LatinSquare(mate), True)


# ------------------------------------------------------------- enumeration


def enumerate_reduced_squares(n: int) -> Iterator[LatinSquare]:
    """Yield every reduced Latin square of order n in lexicographic cell order.

    Reduced means first row and first column read ``0, 1, ..., n-1``.
    """
    if n > ENUMERATION_CAP:
        raise OrderTooLarge(f"enumeration limited to order {ENUMERATION_CAP}")
    if n < 1:
        raise MalformedArray("order must be positive")
    grid = [[0] * n for _ in range(n)]
    row_used = [0] * n
    col_used = [0] * n
    for k in range(n):
        grid[0][k] = k
        grid[k][0] = k
        row_used[0] |= 1 << k
        col_used[k] |= 1 << k
        row_used[k] |= 1 << k
        col_used[0] |= 1 << k
    cells = [(i, j) for i in range(1, n) for j in range(1, n)]

    def fill(pos: int) -> Iterator[LatinSquare]:
        if pos == len(cells):
            yield LatinSquare(np.array(grid))
            return
        i, j = cells[pos]
        blocked = row_used[i] | col_used[j]
        for s in range(n):
            if blocked >> s & 1:
                continue
            grid[i][j] = s
            row_used[i] |= 1 << s
            col_used[j] |= 1 << s
            yield from fill(pos + 1)
            row_used[i] &= ~(1 << s)
            col_used[j] &= ~(1 << s)

    yield from fill(0)


def _has_mate(cells: np.ndarray) -> bool:
    return find_orthogonal_mate(cells).mate is not None


def tarry_sweep(order: int, jobs: int | None = None) -> tuple[int, int]:
    """Run the mate search over every reduced square of ``order``.

    Returns ``(squares_examined, squares_with_mate)``.  ``jobs`` > 1 spreads
    the searches over worker processes; the result only depends on counts.
    """
    if not 2 <= order <= ENUMERATION_CAP:
        raise OrderTooLarge(f"sweep defined for orders 2..{ENUMERATION_CAP}")
    squares = [s.cells for s in enumerate_reduced_squares(order)]
    jobs = jobs or os.cpu_count() or 1
    if jobs == 1 or len(squares) < 64:
        found = sum(map(_has_mate, squares))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            found = sum(pool.map(_has_mate, squares, chunksize=max(1, len(squares) // (8 * jobs))))
    return len(squares), int(found)


def canonical_mols(squares: Sequence[LatinSquare]) -> set[bytes]:
    """Order-free, symbol-relabel-free fingerprint of a family of squares."""
    return {s.canonical_symbols().cells.tobytes() for s in squares}
