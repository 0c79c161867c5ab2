"""The Euclidean space of unit-trace Hermitian matrices.

Distances use ``D^2(A, B) = Tr(A - B)^2 / 2`` and the origin is the
maximally mixed matrix ``1/n``.  Bloch coordinates are taken with respect to
the generalized Gell-Mann matrices (symmetric pairs, antisymmetric pairs,
diagonals), each normalised so ``Tr E^2 / 2 = 1``; with that choice the
Bloch map is an isometry.

Matrices are plain ``numpy`` complex arrays throughout.
"""
from __future__ import annotations

import json
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotUnitTrace

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12


def check_hermitian(a, *, unit_trace: bool = True, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate and return ``a`` as a complex square Hermitian array."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.abs(a).max(initial=0.0)))
    if np.abs(a - a.conj().T).max(initial=0.0) > tol * scale:
        raise NotHermitian("matrix is not Hermitian")
    if unit_trace and abs(np.trace(a) - 1) > TRACE_TOL * scale * a.shape[0]:
        raise NotUnitTrace(f"trace {np.trace(a).real:.6g} != 1")
    return a


def _same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")


def maximally_mixed(n: int) -> np.ndarray:
    if n < 1:
        raise DimensionMismatch("dimension must be positive")
    return np.eye(n, dtype=complex) / n


def distance_sq(a, b) -> float:
    """Squared distance ``Tr(A - B)^2 / 2``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    _same_dim(a, b)
    d = a - b
    # Tr(D^2) = sum |d_ij|^2 for Hermitian D
    return 0.5 * float(np.vdot(d, d).real)


def scalar(a, b) -> float:
    """Scalar product about the origin: ``(Tr AB - 1/n) / 2``."""
    a = check_hermitian(a, tol=1e-10)
    b = check_hermitian(b, tol=1e-10)
    _same_dim(a, b)
    n = a.shape[0]
    return 0.5 * (float(np.trace(a @ b).real) - 1.0 / n)


@lru_cache(maxsize=None)
def _gellmann(n: int) -> np.ndarray:
    mats = []
    for j in range(n):
        for k in range(j + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[j, k] = m[k, j] = 1
            mats.append(m)
    for j in range(n):
        for k in range(j + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[j, k] = -1j
            m[k, j] = 1j
            mats.append(m)
    for l in range(1, n):
        diag = np.zeros(n)
        diag[:l] = 1
        diag[l] = -l
        mats.append(np.diag(diag * np.sqrt(2.0 / (l * (l + 1)))).astype(complex))
    out = np.array(mats).reshape(n * n - 1, n, n)
    out.setflags(write=False)
    return out


def gellmann_basis(n: int) -> np.ndarray:
    """The ``n^2 - 1`` traceless Hermitian basis matrices, shape ``(n^2-1, n, n)``."""
    return _gellmann(n)


def to_bloch(a) -> np.ndarray:
    """Real coordinates ``c`` with ``A = 1/n + sum_k c_k E_k``."""
    a = check_hermitian(a, tol=1e-10)
    E = _gellmann(a.shape[0])
    return 0.5 * np.einsum("kji,ij->k", E, a).real


def from_bloch(v, n: int | None = None) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if n is None:
        n = int(round(np.sqrt(v.size + 1)))
    if v.ndim != 1 or v.size != n * n - 1:
        raise DimensionMismatch(f"expected {n * n - 1} coordinates, got {v.size}")
    return maximally_mixed(n) + np.einsum("k,kij->ij", v, _gellmann(n))


def min_eigenvalue(a) -> float:
    return float(np.linalg.eigvalsh(np.asarray(a, dtype=complex))[0])


def projector(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=complex)
    return np.outer(v, v.conj())


# ------------------------------------------------------------------- JSON


def matrix_to_json(a) -> list:
    """Row-major nested list of ``[re, im]`` pairs."""
    a = np.asarray(a, dtype=complex)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def matrix_from_json(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.shape[-1] != 2:
        raise DimensionMismatch("complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def load_matrix(path) -> np.ndarray:
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        data = data.get("matrix", data.get("state"))
    return matrix_from_json(data)
