"""Complete sets of mutually unbiased bases in prime-power dimension.

The n^2 - 1 displacement operators ``X_a Z_b`` (``a, b`` in GF(n), not both
zero) split into n + 1 commuting classes, one per line through the origin of
GF(n)^2.  Basis 0 is the standard basis; basis I >= 1 is the joint
eigenbasis of class I.  The same route works in characteristic 2, where the
quadratic character formula does not.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import (
    CommutationFailure,
    DegenerateCombination,
    NonUnitVector,
    OrderTooLarge,
    TooManyBases,
)
from .gf import FieldTable, field_of_order, is_prime
from .hspace import matrix_from_json, matrix_to_json

MUB_ORDER_CAP = 16
DEFAULT_SEED = 1729
MAX_RETRIES = 8
COMMUTE_TOL = 1e-10
MUB_TOL = 1e-10


def shift_operator(F: FieldTable, a: int) -> np.ndarray:
    """``X_a |x> = |x + a>``."""
    n = F.order
    X = np.zeros((n, n), dtype=complex)
    X[F.add_table[:, a], np.arange(n)] = 1
    return X


def clock_operator(F: FieldTable, b: int) -> np.ndarray:
    """``Z_b |x> = exp(2 pi i tr(b x) / p) |x>``."""
    phases = F.trace_table[F.mul_table[b]]
    return np.diag(np.exp(2j * np.pi * phases / F.p))


def displacement(F: FieldTable, a: int, b: int) -> np.ndarray:
    return shift_operator(F, a) @ clock_operator(F, b)


@dataclass(frozen=True)
class WeylOperatorClass:
    """Displacements ``X_a Z_b`` with ``(a, b)`` on one line through the origin."""

    direction: tuple[int, int]
    labels: tuple[tuple[int, int], ...]
    operators: np.ndarray = field(repr=False)


def _directions(F: FieldTable) -> list[tuple[int, int]]:
    # class 0 is the clock line, whose eigenbasis is the standard basis
    return [(0, 1)] + [(1, m) for m in range(F.order)]


def weyl_partition(F: FieldTable) -> list[WeylOperatorClass]:
    """The n + 1 commuting classes, each verified to commute exactly."""
    n = F.order
    if n > MUB_ORDER_CAP:
        raise OrderTooLarge(f"MUB construction limited to n <= {MUB_ORDER_CAP}")
    classes = []
    for a0, b0 in _directions(F):
        labels = tuple((int(F.mul_table[lam, a0]), int(F.mul_table[lam, b0])) for lam in range(1, n))
        ops = np.array([displacement(F, a, b) for a, b in labels])
        comm = np.einsum("aij,bjk->abik", ops, ops) - np.einsum("bij,ajk->abik", ops, ops)
        worst = np.abs(comm).max(initial=0.0)
        if worst > COMMUTE_TOL:
            raise CommutationFailure(f"class {(a0, b0)} fails to commute ({worst:.3g})")
        classes.append(WeylOperatorClass((a0, b0), labels, ops))
    return classes


def _angle_key(values: np.ndarray) -> tuple[float, ...]:
    ang = np.mod(np.angle(values), 2 * np.pi)
    ang[ang > 2 * np.pi - 1e-9] = 0.0
    return tuple(np.round(ang, 9))


def _fix_phase(v: np.ndarray) -> np.ndarray:
    mags = np.abs(v)
    idx = int(np.argmax(mags >= mags.max() - 1e-9))
    return v * (abs(v[idx]) / v[idx])


def joint_eigenbasis(ops: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Common eigenvectors (rows) of commuting unitaries, canonically ordered.

    A random Hermitian combination of the operators is diagonalized; a
    near-degenerate spectrum raises DegenerateCombination.
    """
    n = ops.shape[1]
    c = rng.normal(size=len(ops)) + 1j * rng.normal(size=len(ops))
    H = np.einsum("k,kij->ij", c, ops)
    H = H + H.conj().T
    w, V = np.linalg.eigh(H)
    if n > 1 and np.min(np.diff(w)) < 1e-6 * max(1.0, np.abs(w).max()):
        raise DegenerateCombination("combination has a repeated eigenvalue")
    vecs = V.T
    eig = np.einsum("ki,aij,kj->ka", vecs.conj(), ops, vecs)
    resid = np.einsum("aij,kj->kai", ops, vecs) - eig[:, :, None] * vecs[:, None, :]
    if np.abs(resid).max(initial=0.0) > COMMUTE_TOL:
        raise DegenerateCombination("eigenvectors are not shared by the whole class")
    order = sorted(range(n), key=lambda k: _angle_key(eig[k]))
    return np.array([_fix_phase(vecs[k]) for k in order])


@dataclass(frozen=True, eq=False)
class MubSet:
    """``bases[I, i]`` is vector i of basis I (shape ``(m, n, n)``)."""

    n: int
    bases: np.ndarray = field(repr=False)
    metadata: dict = field(default_factory=dict)

    def projectors(self) -> np.ndarray:
        """``P[I, i] = |e_Ii><e_Ii|``, shape ``(m, n, n, n)``."""
        B = self.bases
        return np.einsum("Iix,Iiy->Iixy", B, B.conj())

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "bases": [matrix_to_json(b) for b in self.bases],
            "metadata": self.metadata,
        }

    @classmethod
    def from_json(cls, data: dict) -> "MubSet":
        bases = np.array([matrix_from_json(b) for b in data["bases"]])
        return cls(int(data["n"]), bases, dict(data.get("metadata", {})))

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh)

    @classmethod
    def load(cls, path) -> "MubSet":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def mub_construct(F: FieldTable, seed: int = DEFAULT_SEED) -> MubSet:
    """n + 1 mutually unbiased bases in dimension ``F.order``."""
    n = F.order
    classes = weyl_partition(F)
    bases = [np.eye(n, dtype=complex)]
    retries = []
    for cls in classes[1:]:
        for attempt in range(MAX_RETRIES):
            rng = np.random.default_rng([seed + attempt, *cls.direction])
            try:
                bases.append(joint_eigenbasis(cls.operators, rng))
                retries.append(attempt)
                break
            except DegenerateCombination:
                continue
        else:
            raise DegenerateCombination(f"no usable combination for class {cls.direction}")
    meta = {"p": F.p, "k": F.k, "modulus": list(F.modulus), "seed": seed, "retries": retries}
    return MubSet(n, np.array(bases), meta)


def mubs_for_dimension(n: int, seed: int = DEFAULT_SEED) -> MubSet:
    """Refuses dimensions that are not prime powers (OrderNotPrimePower)."""
    if n > MUB_ORDER_CAP:
        raise OrderTooLarge(f"MUB construction limited to n <= {MUB_ORDER_CAP}")
    return mub_construct(field_of_order(n), seed)


def character_mubs(p: int) -> np.ndarray:
    """Standard basis plus ``e_{b,i}(x) = w^(b x^2 + i x) / sqrt(p)``, odd prime p."""
    if not is_prime(p) or p == 2:
        raise ValueError("character formula needs an odd prime")
    x = np.arange(p)
    w = np.exp(2j * np.pi / p)
    bases = [np.eye(p, dtype=complex)]
    for b in range(p):
        bases.append(np.array([w ** ((b * x * x + i * x) % p) for i in range(p)]) / np.sqrt(p))
    return np.array(bases)


class MubReport(NamedTuple):
    n: int
    bases: int
    orthonormality_error: float
    unbiasedness_deviation: float
    worst_pair: tuple[int, int, int, int] | None
    passed: bool


def mub_verify(bases, tol: float = MUB_TOL) -> MubReport:
    """All-pairs check of orthonormality and ``|<e_Ii|e_Jj>|^2 = 1/n``.

    ``worst_pair`` is the index quadruple ``(I, i, J, j)`` with the largest
    deviation from 1/n (None when fewer than two bases are given).
    """
    B = np.asarray(bases.bases if isinstance(bases, MubSet) else bases, dtype=complex)
    if B.ndim != 3 or B.shape[1] != B.shape[2]:
        raise ValueError("expected an (m, n, n) array of basis vectors")
    m, n = B.shape[0], B.shape[2]
    if m > n + 1:
        raise TooManyBases(f"{m} bases exceed the maximum n + 1 = {n + 1}")
    norms = np.linalg.norm(B, axis=2)
    if np.abs(norms - 1).max() > 1e-6:
        raise NonUnitVector("basis vectors must have unit norm")
    G = np.einsum("Iix,Jjx->IiJj", B.conj(), B)
    eye = np.eye(n)
    ortho = max(float(np.abs(G[I, :, I, :] - eye).max()) for I in range(m))
    dev, worst = 0.0, None
    if m > 1:
        D = np.abs(np.abs(G) ** 2 - 1.0 / n)
        for I in range(m):
            D[I, :, I, :] = -1.0
        flat = int(np.argmax(D))
        worst = tuple(int(v) for v in np.unravel_index(flat, D.shape))
        dev = float(D.flat[flat])
    return MubReport(n, m, ortho, dev, worst, ortho <= tol and dev <= tol)
