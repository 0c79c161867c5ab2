import functools

import numpy as np
import pytest

from mubgeo.affine import AffinePlane
from mubgeo.gf import field_create, field_of_order
from mubgeo.mub import mubs_for_dimension
from mubgeo.polytope import polytope_from_mubs

PRIME_POWERS = (2, 3, 4, 5, 7, 8, 9)


def grid_plane(n, pencils):
    """Plane on the n x n grid; ``pencils`` lists lines as (row, col) cells."""
    lines, pens = [], []
    for pen in pencils:
        idx = []
        for line in pen:
            idx.append(len(lines))
            lines.append(tuple(r * n + c for r, c in line))
        pens.append(tuple(idx))
    return AffinePlane(n, tuple(lines), tuple(pens))


# the two small planes drawn as bullet patterns, pencil by pencil
ORDER2_PENCILS = [
    [[(0, 0), (1, 0)], [(0, 1), (1, 1)]],
    [[(1, 0), (1, 1)], [(0, 0), (0, 1)]],
    [[(0, 1), (1, 0)], [(0, 0), (1, 1)]],
]
ORDER3_PENCILS = [
    [[(0, 0), (1, 0), (2, 0)], [(0, 1), (1, 1), (2, 1)], [(0, 2), (1, 2), (2, 2)]],
    [[(2, 0), (2, 1), (2, 2)], [(1, 0), (1, 1), (1, 2)], [(0, 0), (0, 1), (0, 2)]],
    [[(0, 2), (1, 1), (2, 0)], [(0, 0), (1, 2), (2, 1)], [(0, 1), (1, 0), (2, 2)]],
    [[(0, 1), (1, 2), (2, 0)], [(0, 2), (1, 0), (2, 1)], [(0, 0), (1, 1), (2, 2)]],
]
# symbol = which line of the pencil passes through the cell
THIRD_PENCIL_SQUARE = [[1, 2, 0], [2, 0, 1], [0, 1, 2]]
FOURTH_PENCIL_SQUARE = [[2, 0, 1], [1, 2, 0], [0, 1, 2]]


@pytest.fixture
def plane2():
    return grid_plane(2, ORDER2_PENCILS)


@pytest.fixture
def plane3():
    return grid_plane(3, ORDER3_PENCILS)


@functools.lru_cache(maxsize=None)
def quantum_polytope(n):
    return polytope_from_mubs(mubs_for_dimension(n))


def nearfield_plane9():
    """Plane of order 9 over the Dickson nearfield (not coordinatized by a field)."""
    F = field_create(3, 2)
    n = 9
    squares = {int(F.mul_table[a, a]) for a in range(1, n)}

    def mul(a, b):
        if a == 0 or b == 0:
            return 0
        if b in squares:
            return int(F.mul_table[a, b])
        return int(F.mul_table[F.mul_table[a, F.mul_table[a, a]], b])

    x = np.arange(n)
    lines = [tuple(c * n + x) for c in range(n)]
    for m in range(n):
        for c in range(n):
            ys = np.array([F.add_table[mul(xx, m), c] for xx in range(n)])
            lines.append(tuple(x * n + ys))
    pencils = tuple(tuple(range(P * n, P * n + n)) for P in range(n + 1))
    return AffinePlane(n, tuple(lines), pencils)


def random_density(n, rng, rank=None):
    rank = rank or n
    g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_pure(n, rng):
    return random_density(n, rng, rank=1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def gf():
    return field_of_order


# acceptance criteria append "PASS/FAIL ..." lines here
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
