import csv
import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mubgeo.affine import plane_from_field
from mubgeo.errors import DimensionMismatch, MissingPlane
from mubgeo.gf import field_of_order
from mubgeo.hspace import maximally_mixed
from mubgeo.mub import mubs_for_dimension
from mubgeo.polytope import inscribe_dsimplex
from mubgeo.wigner import (
    WignerTable,
    direct_line_probabilities,
    line_probabilities,
    probabilities_csv,
    state_from_wigner,
    wigner_from_state,
)

from conftest import PRIME_POWERS, nearfield_plane9, quantum_polytope, random_density, random_pure


def dsimplex(n, plane=None):
    return inscribe_dsimplex(quantum_polytope(n), plane or plane_from_field(field_of_order(n)))


@pytest.mark.parametrize("n", PRIME_POWERS)
def test_roundtrip_and_marginals(n, rng):
    D = dsimplex(n)
    for _ in range(20):
        rho = random_density(n, rng)
        W = wigner_from_state(rho, D)
        assert np.abs(state_from_wigner(W) - rho).max() < 1e-10
        assert abs(W.values.sum() - 1) < 1e-12
        p = line_probabilities(W)
        assert np.abs(p.sum(axis=1) - 1).max() < 1e-12
        assert np.abs(p - direct_line_probabilities(rho, D)).max() < 1e-10


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([2, 3, 4, 5]), st.integers(0, 2**32 - 1))
def test_purity_from_wigner(n, seed):
    rho = random_density(n, np.random.default_rng(seed))
    W = wigner_from_state(rho, dsimplex(n))
    # the point-face operators are orthogonal with norm n
    assert np.isclose(np.trace(rho @ rho).real, n * np.sum(W.values**2), atol=1e-12)


def test_direct_probabilities_against_bases(rng):
    n = 5
    D = dsimplex(n)
    psi = rng.normal(size=n) + 1j * rng.normal(size=n)
    psi /= np.linalg.norm(psi)
    rho = np.outer(psi, psi.conj())
    W = wigner_from_state(rho, D)
    B = mubs_for_dimension(n).bases
    born = np.abs(np.einsum("Iix,x->Ii", B.conj(), psi)) ** 2
    assert np.allclose(line_probabilities(W), born, atol=1e-10)


def test_maximally_mixed_is_flat():
    n = 4
    W = wigner_from_state(maximally_mixed(n), dsimplex(n))
    assert np.allclose(W.values, 1 / n**2)
    assert W.negativity() == pytest.approx(0, abs=1e-12)


def test_corner_state_concentrates_on_its_line():
    n = 3
    D = dsimplex(n)
    rho = D.polytope.corners[2, 1]
    p = line_probabilities(wigner_from_state(rho, D))
    assert np.isclose(p[2, 1], 1) and np.allclose(np.delete(p[2], 1), 0)
    assert np.allclose(np.delete(p, 2, axis=0), 1 / n)


def test_pure_states_can_be_negative(rng):
    n = 3
    D = dsimplex(n)
    negs = [wigner_from_state(random_pure(n, rng), D).negativity() for _ in range(20)]
    assert max(negs) > 1e-3


@pytest.mark.parametrize("which", ["plane2", "plane3"])
def test_source_planes(which, request, rng):
    plane = request.getfixturevalue(which)
    D = dsimplex(plane.n, plane)
    rho = random_density(plane.n, rng)
    W = wigner_from_state(rho, D)
    assert np.abs(state_from_wigner(W) - rho).max() < 1e-10
    assert np.abs(line_probabilities(W) - direct_line_probabilities(rho, D)).max() < 1e-10


def test_nearfield_plane(rng):
    D = dsimplex(9, nearfield_plane9())
    for _ in range(5):
        rho = random_density(9, rng)
        W = wigner_from_state(rho, D)
        assert np.abs(state_from_wigner(W) - rho).max() < 1e-10
        p = line_probabilities(W)
        assert np.abs(p.sum(axis=1) - 1).max() < 1e-12
        assert np.abs(p - direct_line_probabilities(rho, D)).max() < 1e-10


def test_grid_layout():
    n = 3
    D = dsimplex(n)
    W = wigner_from_state(maximally_mixed(n), D)
    g = W.grid()
    assert g.shape == (n, n)
    # rows and columns of the grid are the lines of pencils 0 and 1
    p = line_probabilities(W)
    assert np.allclose(g.sum(axis=1), p[0]) and np.allclose(g.sum(axis=0), p[1])


def test_errors(rng):
    D = dsimplex(3)
    with pytest.raises(DimensionMismatch):
        wigner_from_state(random_density(2, rng), D)
    bare = WignerTable(3, np.full(9, 1 / 9))
    with pytest.raises(MissingPlane):
        line_probabilities(bare)
    with pytest.raises(MissingPlane):
        state_from_wigner(bare)
    with pytest.raises(MissingPlane):
        bare.grid()
    with pytest.raises(DimensionMismatch):
        state_from_wigner(WignerTable(3, np.zeros(4)), D)


def test_csv_output():
    p = np.array([[0.25, 0.75], [0.5, 0.5], [1.0, 0.0]])
    rows = list(csv.reader(io.StringIO(probabilities_csv(p))))
    assert rows[0] == ["pencil", "line0", "line1"]
    assert np.allclose(np.array(rows[1:], dtype=float)[:, 1:], p)


def test_json_contains_plane():
    n = 2
    D = dsimplex(n)
    data = wigner_from_state(maximally_mixed(n), D).to_json()
    assert data["n"] == 2 and len(data["values"]) == 2 and "plane" in data
