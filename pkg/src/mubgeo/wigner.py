"""Discrete Wigner function on an affine plane.

``W[a] = Tr(A_a rho) / n`` for the point-face operators of a D-simplex.
Since ``Tr A_a A_b = n delta_ab`` the operators are an orthogonal basis and
the inverse is simply ``rho = sum_a W[a] A_a``.  Values are kept per plane
point; negative entries are reported as they are.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, MissingPlane
from .hspace import check_hermitian
from .polytope import DSimplex


@dataclass(frozen=True, eq=False)
class WignerTable:
    n: int
    values: np.ndarray
    dsimplex: DSimplex | None = field(default=None, repr=False)

    def grid(self) -> np.ndarray:
        """``(n, n)`` view, coordinatized by the lines of pencils 0 and 1."""
        if self.dsimplex is None:
            raise MissingPlane("grid view needs the plane")
        ch = self.dsimplex.choices
        out = np.empty((self.n, self.n))
        out[ch[:, 0], ch[:, 1]] = self.values
        return out

    def negativity(self) -> float:
        """Sum of the absolute values of the negative entries."""
        return float(-self.values[self.values < 0].sum())

    def to_json(self) -> dict:
        data = {"n": self.n, "values": self.grid().tolist() if self.dsimplex else self.values.tolist()}
        if self.dsimplex is not None:
            data["plane"] = self.dsimplex.plane.to_json()
        return data


def wigner_from_state(rho, D: DSimplex) -> WignerTable:
    rho = check_hermitian(rho, tol=1e-10)
    if rho.shape != (D.n, D.n):
        raise DimensionMismatch(f"state has shape {rho.shape}, plane order is {D.n}")
    values = np.einsum("axy,yx->a", D.operators, rho) / D.n
    return WignerTable(D.n, values.real.copy(), D)


def state_from_wigner(W: WignerTable, D: DSimplex | None = None) -> np.ndarray:
    D = D or W.dsimplex
    if D is None:
        raise MissingPlane("reconstruction needs the D-simplex")
    values = np.asarray(W.values, dtype=float)
    if values.shape != (D.n * D.n,):
        raise DimensionMismatch(f"expected {D.n * D.n} values")
    return np.einsum("a,axy->xy", values, D.operators)


def line_probabilities(W: WignerTable) -> np.ndarray:
    """``p[P, k]``: the sum of W along line k of pencil P."""
    if W.dsimplex is None:
        raise MissingPlane("line sums need the plane")
    plane = W.dsimplex.plane
    return np.array([[W.values[list(plane.lines[l])].sum() for l in pen] for pen in plane.pencils])


def direct_line_probabilities(rho, D: DSimplex) -> np.ndarray:
    """``Tr P rho`` for every corner, arranged like :func:`line_probabilities`."""
    rho = np.asarray(rho, dtype=complex)
    return np.einsum("Iixy,yx->Ii", D.polytope.corners, rho).real


def probabilities_csv(p: np.ndarray) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["pencil"] + [f"line{k}" for k in range(p.shape[1])])
    for P, row in enumerate(p):
        writer.writerow([P] + [repr(float(v)) for v in row])
    return buf.getvalue()
