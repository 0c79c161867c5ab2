import itertools

import numpy as np
import pytest

from mubgeo import mub as mub_module
from mubgeo.errors import (
    DegenerateCombination,
    NonUnitVector,
    OrderNotPrimePower,
    OrderTooLarge,
    TooManyBases,
)
from mubgeo.gf import field_create, field_of_order
from mubgeo.mub import (
    MubSet,
    character_mubs,
    clock_operator,
    displacement,
    mub_construct,
    mub_verify,
    mubs_for_dimension,
    shift_operator,
    weyl_partition,
)

from conftest import PRIME_POWERS


def same_basis(u, v):
    """Rows of u and v agree up to order and phase."""
    ov = np.abs(u.conj() @ v.T) ** 2
    return np.allclose(ov.max(axis=1), 1, atol=1e-9)


@pytest.mark.parametrize("n", PRIME_POWERS)
def test_complete_set(n):
    mubs = mubs_for_dimension(n)
    assert mubs.bases.shape == (n + 1, n, n)
    r = mub_verify(mubs)
    assert r.passed and r.bases == n + 1
    assert r.orthonormality_error < 1e-10 and r.unbiasedness_deviation < 1e-10


@pytest.mark.parametrize("p", [3, 5, 7])
def test_character_formula_oracle(p):
    ref = character_mubs(p)
    assert mub_verify(ref).passed
    ours = mubs_for_dimension(p).bases
    # every constructed basis is one of the formula's bases, reordered and rephased
    matched = set()
    for I in range(p + 1):
        hits = [J for J in range(p + 1) if same_basis(ours[I], ref[J])]
        assert len(hits) == 1
        matched.add(hits[0])
    assert matched == set(range(p + 1))


@pytest.mark.parametrize("n", [2, 4, 8, 9])
def test_weyl_classes_commute_and_partition(n):
    F = field_of_order(n)
    classes = weyl_partition(F)
    assert len(classes) == n + 1
    labels = [lab for c in classes for lab in c.labels]
    assert len(labels) == n * n - 1 and len(set(labels)) == n * n - 1 and (0, 0) not in labels
    for c in classes:
        for A, B in itertools.combinations(c.operators, 2):
            assert np.allclose(A @ B, B @ A, atol=1e-12)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_operators_are_unitary_and_trace_orthogonal(n):
    F = field_of_order(n)
    ops = [displacement(F, a, b) for a in range(n) for b in range(n)]
    for U in ops:
        assert np.allclose(U @ U.conj().T, np.eye(n))
    G = np.array([[np.trace(A.conj().T @ B) for B in ops] for A in ops])
    assert np.allclose(G, n * np.eye(n * n), atol=1e-10)


def test_shift_and_clock_examples():
    F = field_create(3)
    assert np.array_equal(shift_operator(F, 1) @ np.eye(3)[0], np.eye(3)[1])
    w = np.exp(2j * np.pi / 3)
    assert np.allclose(np.diag(clock_operator(F, 1)), [1, w, w * w])


def test_deterministic_and_seed_recorded():
    a = mubs_for_dimension(5)
    b = mubs_for_dimension(5)
    assert np.array_equal(a.bases, b.bases)
    assert a.metadata["seed"] == mub_module.DEFAULT_SEED
    assert a.metadata["p"] == 5 and a.metadata["k"] == 1


def test_basis_zero_is_standard():
    assert np.array_equal(mubs_for_dimension(4).bases[0], np.eye(4))


def test_retry_on_degenerate_combination(monkeypatch):
    real = mub_module.joint_eigenbasis
    calls = {"n": 0}

    def flaky(ops, rng):
        calls["n"] += 1
        if calls["n"] == 1:
            raise DegenerateCombination("forced")
        return real(ops, rng)

    monkeypatch.setattr(mub_module, "joint_eigenbasis", flaky)
    mubs = mubs_for_dimension(3)
    assert mub_verify(mubs).passed
    assert mubs.metadata["retries"][0] == 1


def test_retry_exhaustion(monkeypatch):
    def always(ops, rng):
        raise DegenerateCombination("forced")

    monkeypatch.setattr(mub_module, "joint_eigenbasis", always)
    with pytest.raises(DegenerateCombination):
        mubs_for_dimension(3)


def test_refusals():
    with pytest.raises(OrderNotPrimePower):
        mubs_for_dimension(6)
    with pytest.raises(OrderNotPrimePower):
        mubs_for_dimension(10)
    with pytest.raises(OrderTooLarge):
        mubs_for_dimension(17)


def test_verify_rejections():
    B = mubs_for_dimension(2).bases
    with pytest.raises(TooManyBases):
        mub_verify(np.concatenate([B, B[:1]]))
    with pytest.raises(NonUnitVector):
        mub_verify(2 * B)


def test_verify_reports_worst_pair():
    B = mubs_for_dimension(3).bases.copy()
    B[2] = B[1]
    r = mub_verify(B)
    assert not r.passed
    I, i, J, j = r.worst_pair
    assert {I, J} == {1, 2}
    assert r.unbiasedness_deviation == pytest.approx(1 - 1 / 3)


def test_partial_set_passes():
    r = mub_verify(mubs_for_dimension(4).bases[:3])
    assert r.passed and r.bases == 3


def test_json_roundtrip(tmp_path):
    mubs = mubs_for_dimension(4)
    path = tmp_path / "m.json"
    mubs.save(path)
    again = MubSet.load(path)
    assert np.array_equal(again.bases, mubs.bases)
    assert again.metadata == mubs.metadata


def test_different_seed_same_quality():
    mubs = mub_construct(field_of_order(8), seed=7)
    assert mub_verify(mubs).passed
