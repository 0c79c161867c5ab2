"""Finite affine planes as explicit incidence structures.

Points are the integers ``0 .. n^2 - 1``.  A plane stores its lines (sorted
point tuples) and its pencils (tuples of line indices).  The pencils are kept
as given rather than recomputed, because their order fixes how the plane is
later paired with the bases of a MUB set.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .errors import InvalidPlane, MalformedIncidence, SamePencil, WrongCount
from .gf import FieldTable
from .latin import LatinSquare, MolsSet


@dataclass(frozen=True, eq=False)
class AffinePlane:
    n: int
    lines: tuple[tuple[int, ...], ...]
    pencils: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 1 or not self.lines or not self.pencils:
            raise MalformedIncidence("a plane needs a positive order, lines and pencils")
        npts = self.n * self.n
        lines = []
        for idx, line in enumerate(self.lines):
            pts = tuple(sorted(int(p) for p in line))
            if not pts:
                raise MalformedIncidence(f"line {idx} is empty")
            if len(set(pts)) != len(pts):
                raise MalformedIncidence(f"line {idx} repeats a point")
            if pts[0] < 0 or pts[-1] >= npts:
                raise MalformedIncidence(f"line {idx} has a point outside 0..{npts - 1}")
            lines.append(pts)
        pencils = tuple(tuple(int(l) for l in pen) for pen in self.pencils)
        for pen in pencils:
            if any(not 0 <= l < len(lines) for l in pen):
                raise MalformedIncidence("pencil refers to an unknown line")
        object.__setattr__(self, "lines", tuple(lines))
        object.__setattr__(self, "pencils", pencils)

    @property
    def num_points(self) -> int:
        return self.n * self.n

    @cached_property
    def incidence(self) -> np.ndarray:
        """Boolean ``(lines, points)`` incidence matrix."""
        inc = np.zeros((len(self.lines), self.num_points), dtype=bool)
        for i, line in enumerate(self.lines):
            inc[i, list(line)] = True
        return inc

    @cached_property
    def line_position(self) -> dict[int, tuple[int, int]]:
        """Line index -> ``(pencil, position within pencil)``."""
        return {l: (P, k) for P, pen in enumerate(self.pencils) for k, l in enumerate(pen)}

    @cached_property
    def choices(self) -> np.ndarray:
        """``choices[point, P]`` is the position, within pencil P, of the line through point.

        Requires every pencil to partition the point set.
        """
        out = np.full((self.num_points, len(self.pencils)), -1, dtype=np.int64)
        for P, pen in enumerate(self.pencils):
            for k, l in enumerate(pen):
                out[list(self.lines[l]), P] = k
        if (out < 0).any():
            raise InvalidPlane("a pencil does not cover every point")
        return out

    def signature(self) -> tuple[frozenset, frozenset]:
        """Label-independent summary of lines and pencils on this point set."""
        lines = frozenset(frozenset(l) for l in self.lines)
        pens = frozenset(frozenset(frozenset(self.lines[l]) for l in pen) for pen in self.pencils)
        return lines, pens

    def relabel_points(self, perm) -> "AffinePlane":
        """Plane with point ``a`` renamed ``perm[a]``; line and pencil order kept."""
        perm = np.asarray(perm)
        return AffinePlane(self.n, tuple(tuple(int(perm[p]) for p in l) for l in self.lines), self.pencils)

    def to_json(self) -> dict:
        return {"n": self.n, "lines": [list(l) for l in self.lines], "pencils": [list(p) for p in self.pencils]}

    @classmethod
    def from_json(cls, data: dict) -> "AffinePlane":
        try:
            return cls(int(data["n"]), tuple(map(tuple, data["lines"])), tuple(map(tuple, data["pencils"])))
        except (KeyError, TypeError) as exc:
            raise MalformedIncidence(f"bad plane JSON: {exc}") from exc

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh)

    @classmethod
    def load(cls, path) -> "AffinePlane":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


class Check(NamedTuple):
    passed: bool
    witness: object = None


class AxiomReport(NamedTuple):
    a1: Check
    a2: Check
    a3: Check
    counting: Check

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self)

    def failures(self) -> dict[str, object]:
        return {name: c.witness for name, c in zip(self._fields, self) if not c.passed}


def _first(mask: np.ndarray):
    idx = np.argwhere(mask)
    return tuple(int(v) for v in idx[0]) if len(idx) else None


def verify_axioms(plane: AffinePlane) -> AxiomReport:
    """Exhaustive check of A1-A3 plus the derived counts.

    Witnesses: A1 the first point pair not on exactly one common line; A2 the
    first ``(line, point)`` with point off the line and not exactly one
    parallel through it; counting a short description of the first count
    that is off.
    """
    n = plane.n
    inc = plane.incidence.astype(np.int64)
    L, V = inc.shape

    common = inc.T @ inc
    bad = common != 1
    np.fill_diagonal(bad, False)
    w = _first(bad)
    a1 = Check(w is None, w)

    meet = inc @ inc.T
    disjoint = (meet == 0).astype(np.int64)
    np.fill_diagonal(disjoint, 0)
    parallels = disjoint @ inc
    w = _first((inc == 0) & (parallels != 1))
    a2 = Check(w is None, w)

    sizes = inc.sum(axis=1)
    short = np.flatnonzero(sizes < 2)
    if short.size:
        a3 = Check(False, ("line with fewer than two points", int(short[0])))
    elif L < 2:
        a3 = Check(False, ("fewer than two lines", L))
    else:
        a3 = Check(True)

    counting = Check(True)
    degrees = inc.sum(axis=0)
    problems = []
    if V != n * n:
        problems.append(("points", V, n * n))
    if L != n * n + n:
        problems.append(("lines", L, n * n + n))
    off = np.flatnonzero(sizes != n)
    if off.size:
        problems.append(("points on line", int(off[0]), int(sizes[off[0]])))
    off = np.flatnonzero(degrees != n + 1)
    if off.size:
        problems.append(("lines through point", int(off[0]), int(degrees[off[0]])))
    if len(plane.pencils) != n + 1:
        problems.append(("pencils", len(plane.pencils), n + 1))
    listed = sorted(l for pen in plane.pencils for l in pen)
    if listed != list(range(L)):
        problems.append(("pencils do not partition the lines", None, None))
    for P, pen in enumerate(plane.pencils):
        cover = inc[list(pen)].sum(axis=0) if pen else np.zeros(V, dtype=np.int64)
        if len(pen) != n or (cover != 1).any():
            problems.append(("pencil is not a parallel class", P, len(pen)))
            break
    if problems:
        counting = Check(False, problems[0])
    return AxiomReport(a1, a2, a3, counting)


def plane_from_mols(mols: MolsSet) -> AffinePlane:
    """Rows, columns, then the level sets of each square, as pencils 0, 1, 2, ..."""
    n = mols.n
    if len(mols) != n - 1:
        raise WrongCount(f"need n - 1 = {n - 1} squares, got {len(mols)}")
    cells = np.arange(n * n).reshape(n, n)
    lines: list[tuple[int, ...]] = []
    lines += [tuple(cells[r]) for r in range(n)]
    lines += [tuple(cells[:, c]) for c in range(n)]
    for sq in mols.squares:
        lines += [tuple(cells[sq.cells == s]) for s in range(n)]
    pencils = tuple(tuple(range(P * n, P * n + n)) for P in range(n + 1))
    return AffinePlane(n, tuple(lines), pencils)


def plane_from_field(F: FieldTable) -> AffinePlane:
    """Point ``(x, y)`` of GF(n)^2 is labelled ``x*n + y``.

    Pencil 0 holds the lines ``x = c``; pencil ``1 + m`` holds ``y = m*x + c``
    for slope m.  Within a pencil, lines are ordered by c.
    """
    n = F.order
    x = np.arange(n)
    lines: list[tuple[int, ...]] = [tuple(c * n + x) for c in range(n)]
    for m in range(n):
        mx = F.mul_table[m, x]
        for c in range(n):
            y = F.add_table[mx, c]
            lines.append(tuple(x * n + y))
    pencils = tuple(tuple(range(P * n, P * n + n)) for P in range(n + 1))
    return AffinePlane(n, tuple(lines), pencils)


def plane_to_mols(plane: AffinePlane, row_pencil: int = 0, col_pencil: int = 1) -> MolsSet:
    """Read off n - 1 Latin squares, coordinatizing by two pencils."""
    if row_pencil == col_pencil:
        raise SamePencil("row and column pencils must differ")
    report = verify_axioms(plane)
    if not report.passed:
        raise InvalidPlane(f"plane fails verification: {report.failures()}")
    n = plane.n
    ch = plane.choices
    cell_point = np.empty((n, n), dtype=np.int64)
    cell_point[ch[:, row_pencil], ch[:, col_pencil]] = np.arange(plane.num_points)
    squares = tuple(
        LatinSquare(ch[cell_point, P]) for P in range(n + 1) if P not in (row_pencil, col_pencil)
    )
    return MolsSet(n, squares)
