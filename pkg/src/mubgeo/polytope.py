"""The complementarity polytope and the simplex of point-face operators.

Corners ``P[I, i]`` are unit-trace Hermitian matrices: n + 1 regular
simplices (one per basis, "B-simplices") in mutually orthogonal subspaces.
A point face takes one corner from every B-simplex; its operator is

    A = sum_I P[I, choice[I]] - 1.

An affine plane of order n selects n^2 point faces whose operators satisfy
``Tr A_a A_b = n delta_ab``: pencil P picks the corner of B-simplex P, and
the line through a point within that pencil picks which corner.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .affine import AffinePlane, verify_axioms
from .errors import (
    AbstractRealization,
    DimensionMismatch,
    IncompleteChoice,
    InvalidMubSet,
    InvalidPlane,
    PlaneOrderMismatch,
    UnknownLine,
)
from .hspace import check_hermitian, from_bloch, matrix_from_json, matrix_to_json
from .mub import MubSet, mub_verify

IDENTITY_TOL = 1e-10
SIC_TOL = 1e-8
QUANTUM = "quantum"
ABSTRACT = "abstract"


@dataclass(frozen=True, eq=False)
class Polytope:
    """``corners[I, i]`` is corner i of B-simplex I, shape ``(n+1, n, n, n)``."""

    n: int
    corners: np.ndarray = field(repr=False)
    realization: str = QUANTUM

    def trace_products(self) -> np.ndarray:
        """``T[I, i, J, j] = Tr P_Ii P_Jj``."""
        return np.einsum("Iixy,Jjyx->IiJj", self.corners, self.corners).real

    def flat_corners(self) -> np.ndarray:
        return self.corners.reshape(-1, self.n, self.n)


class PolytopeIdentities(NamedTuple):
    trace: float
    purity: float
    simplex: float
    unbiased: float
    radius: float

    def worst(self) -> float:
        return max(self)


def polytope_identities(poly: Polytope) -> PolytopeIdentities:
    """Largest deviation in each defining identity of the corners.

    ``Tr P = 1``, ``Tr P^2 = 1``, ``Tr P_Ii P_Ij = 0`` (i != j),
    ``Tr P_Ii P_Jj = 1/n`` (I != J), and distance ``sqrt((n-1)/2n)`` from
    the origin.
    """
    n = poly.n
    T = poly.trace_products()
    tr = np.einsum("Iixx->Ii", poly.corners)
    trace = float(np.abs(tr - 1).max())
    diag = np.einsum("IiIi->Ii", T)
    purity = float(np.abs(diag - 1).max())
    simplex = 0.0
    unbiased = 0.0
    for I in range(n + 1):
        block = T[I, :, I, :] - np.eye(n) * diag[I][:, None]
        simplex = max(simplex, float(np.abs(block).max()))
        for J in range(n + 1):
            if J != I:
                unbiased = max(unbiased, float(np.abs(T[I, :, J, :] - 1.0 / n).max()))
    shifted = poly.corners - np.eye(n) / n
    d2 = 0.5 * np.einsum("Iixy,Iiyx->Ii", shifted, shifted).real
    radius = float(np.abs(np.sqrt(d2) - math.sqrt((n - 1) / (2 * n))).max())
    return PolytopeIdentities(trace, purity, simplex, unbiased, radius)


def polytope_from_mubs(mubs: MubSet, tol: float = IDENTITY_TOL) -> Polytope:
    report = mub_verify(mubs, tol)
    if not report.passed or report.bases != mubs.n + 1:
        raise InvalidMubSet(f"not a complete MUB set: {report}")
    poly = Polytope(mubs.n, mubs.projectors(), QUANTUM)
    ids = polytope_identities(poly)
    if ids.worst() > tol:
        raise InvalidMubSet(f"corner identities violated: {ids}")
    return poly


def _simplex_coordinates(n: int) -> np.ndarray:
    """n vertices in R^(n-1) of a centred regular simplex with circumradius sqrt((n-1)/2n)."""
    centred = np.eye(n) - 1.0 / n
    helmert = np.zeros((n - 1, n))
    for k in range(1, n):
        helmert[k - 1, :k] = 1.0
        helmert[k - 1, k] = -k
        helmert[k - 1] /= math.sqrt(k * (k + 1))
    return centred @ helmert.T / math.sqrt(2.0)


def abstract_bloch_corners(n: int) -> np.ndarray:
    """Bloch vectors ``(n+1, n, n^2-1)``: block I occupies coordinates ``I(n-1) .. (I+1)(n-1)``."""
    block = _simplex_coordinates(n)
    out = np.zeros((n + 1, n, n * n - 1))
    for I in range(n + 1):
        out[I, :, I * (n - 1):(I + 1) * (n - 1)] = block
    return out


def polytope_abstract(n: int) -> Polytope:
    """The polytope built directly in Bloch space, for any n >= 2.

    Corners are Hermitian with unit trace and purity but need not be
    positive semidefinite.
    """
    if n < 2:
        raise DimensionMismatch("polytope needs n >= 2")
    vecs = abstract_bloch_corners(n)
    corners = np.array([[from_bloch(v, n) for v in block] for block in vecs])
    return Polytope(n, corners, ABSTRACT)


class PositivityReport(NamedTuple):
    min_eigenvalues: np.ndarray
    worst: float
    is_density_set: bool


def positivity_report(poly: Polytope, tol: float = IDENTITY_TOL) -> PositivityReport:
    eigs = np.linalg.eigvalsh(poly.corners)[..., 0]
    worst = float(eigs.min())
    return PositivityReport(eigs, worst, worst >= -tol)


# ------------------------------------------------------------ point faces


@dataclass(frozen=True, eq=False)
class PointFaceOperator:
    choice: tuple[int, ...]
    matrix: np.ndarray = field(repr=False)


def _normalise_choice(poly: Polytope, choice) -> tuple[int, ...]:
    n = poly.n
    if isinstance(choice, dict):
        missing = [I for I in range(n + 1) if I not in choice]
        if missing:
            raise IncompleteChoice(f"no corner chosen for B-simplices {missing}")
        choice = [choice[I] for I in range(n + 1)]
    choice = tuple(int(c) for c in choice)
    if len(choice) != n + 1:
        raise IncompleteChoice(f"need one corner for each of the {n + 1} B-simplices")
    if any(not 0 <= c < n for c in choice):
        raise IncompleteChoice("corner index out of range")
    return choice


def point_face_operator(poly: Polytope, choice) -> PointFaceOperator:
    """``A = sum_I P[I, choice[I]] - n * rho_*``; ``choice`` is a sequence or dict."""
    choice = _normalise_choice(poly, choice)
    n = poly.n
    A = poly.corners[np.arange(n + 1), list(choice)].sum(axis=0) - np.eye(n)
    return PointFaceOperator(choice, A)


def facet_evaluate(A: PointFaceOperator | np.ndarray, rho) -> float:
    """``Tr A rho``: 1 on the point face, 0 on the opposite facet."""
    mat = A.matrix if isinstance(A, PointFaceOperator) else np.asarray(A)
    rho = check_hermitian(rho, tol=1e-10)
    if rho.shape != mat.shape:
        raise DimensionMismatch(f"shapes {mat.shape} and {rho.shape} differ")
    return float(np.trace(mat @ rho).real)


# -------------------------------------------------------------- D-simplex


@dataclass(frozen=True, eq=False)
class DSimplex:
    """Point-face operators selected by an affine plane.

    ``operators[a]`` belongs to plane point ``a`` and ``choices[a, P]`` is the
    corner it takes from B-simplex P.
    """

    n: int
    plane: AffinePlane
    polytope: Polytope
    choices: np.ndarray = field(repr=False)
    operators: np.ndarray = field(repr=False)

    def gram(self) -> np.ndarray:
        return np.einsum("axy,byx->ab", self.operators, self.operators).real

    def gram_error(self) -> float:
        return float(np.abs(self.gram() - self.n * np.eye(self.n**2)).max())

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "realization": self.polytope.realization,
            "plane": self.plane.to_json(),
            "choices": self.choices.tolist(),
            "operators": [matrix_to_json(a) for a in self.operators],
        }

    @classmethod
    def from_json(cls, data: dict) -> "DSimplex":
        """Rebuild from an export; corners are recovered by line sums."""
        n = int(data["n"])
        plane = AffinePlane.from_json(data["plane"])
        ops = np.array([matrix_from_json(a) for a in data["operators"]])
        corners = np.zeros((n + 1, n, n, n), dtype=complex)
        for P, pen in enumerate(plane.pencils):
            for k, l in enumerate(pen):
                corners[P, k] = ops[list(plane.lines[l])].sum(axis=0) / n
        poly = Polytope(n, corners, data.get("realization", QUANTUM))
        return cls(n, plane, poly, np.asarray(data["choices"], dtype=np.int64), ops)


def inscribe_dsimplex(poly: Polytope, plane: AffinePlane) -> DSimplex:
    """Select one point face per plane point.

    Pencil P is paired with B-simplex P and the k-th line of a pencil with
    corner k.
    """
    if plane.n != poly.n:
        raise PlaneOrderMismatch(f"plane order {plane.n} != polytope order {poly.n}")
    report = verify_axioms(plane)
    if not report.passed:
        raise InvalidPlane(f"plane fails verification: {report.failures()}")
    n = poly.n
    ch = plane.choices
    ops = poly.corners[np.arange(n + 1)[None, :], ch].sum(axis=1) - np.eye(n)
    return DSimplex(n, plane, poly, ch, ops)


def corner_from_dsimplex(D: DSimplex, line: int) -> np.ndarray:
    """``(1/n) sum_{a on line} A_a``, which equals the corner paired with the line."""
    if not 0 <= line < len(D.plane.lines):
        raise UnknownLine(f"plane has no line {line}")
    return D.operators[list(D.plane.lines[line])].sum(axis=0) / D.n


def corner_for_line(D: DSimplex, line: int) -> np.ndarray:
    if not 0 <= line < len(D.plane.lines):
        raise UnknownLine(f"plane has no line {line}")
    P, k = D.plane.line_position[line]
    return D.polytope.corners[P, k]


# ------------------------------------------------------------ SIC candidates


class SicOperatorReport(NamedTuple):
    purity: float
    trace_cube: float
    min_eigenvalue: float
    is_pure_state: bool


class SicReport(NamedTuple):
    orientation: int
    operators: list
    overlap_error: float
    worst_min_eigenvalue: float
    is_sic: bool


def sic_states(D: DSimplex, orientation: int = 1) -> np.ndarray:
    """``rho_a = rho_* + s (A_a - rho_*) / sqrt(n + 1)`` with ``s = orientation``.

    Both signs give ``Tr rho^2 = 1`` and pairwise ``Tr rho_a rho_b = 1/(n+1)``;
    ``s = -1`` points towards the centre of the facet opposite the point face.
    """
    n = D.n
    mixed = np.eye(n) / n
    return mixed + orientation * (D.operators - mixed) / math.sqrt(n + 1)


def _sic_report(D: DSimplex, orientation: int, tol: float) -> SicReport:
    n = D.n
    rhos = sic_states(D, orientation)
    sq = np.einsum("axy,ayz->axz", rhos, rhos)
    purity = np.einsum("axx->a", sq).real
    cube = np.einsum("axy,ayx->a", sq, rhos).real
    mins = np.linalg.eigvalsh(rhos)[:, 0]
    ops = [
        SicOperatorReport(float(p), float(c), float(m), bool(m >= -tol and abs(c - 1) <= tol))
        for p, c, m in zip(purity, cube, mins)
    ]
    G = np.einsum("axy,byx->ab", rhos, rhos).real
    off = G[~np.eye(n * n, dtype=bool)]
    overlap = float(np.abs(off - 1.0 / (n + 1)).max()) if off.size else 0.0
    return SicReport(orientation, ops, overlap, float(mins.min()), all(o.is_pure_state for o in ops))


def sic_candidate(D: DSimplex, orientation: int | None = None, tol: float = SIC_TOL) -> SicReport:
    """Rescale the D-simplex onto the pure-state sphere and test positivity.

    With ``orientation=None`` both signs are tried; the first that yields a
    SIC is reported (``+1`` preferred), otherwise the one whose worst
    eigenvalue is larger.
    """
    if D.polytope.realization != QUANTUM:
        raise AbstractRealization("SIC test needs corners that are quantum states")
    if orientation is not None:
        return _sic_report(D, orientation, tol)
    reports = [_sic_report(D, s, tol) for s in (1, -1)]
    for r in reports:
        if r.is_sic:
            return r
    return max(reports, key=lambda r: r.worst_min_eigenvalue)


class SicSearchResult(NamedTuple):
    found: bool
    report: SicReport
    dsimplex: DSimplex
    relabeling: tuple | None
    examined: int
    exhaustive: bool
    best_min_eigenvalue: float
    best_face_min_eigenvalue: float | None


def relabel_plane(plane: AffinePlane, pencil_order: Sequence[int], line_perms: Sequence[Sequence[int]]) -> AffinePlane:
    """New pencil I is old pencil ``pencil_order[I]``; its old k-th line moves to ``line_perms[I][k]``."""
    pencils = []
    for I, P in enumerate(pencil_order):
        old = plane.pencils[P]
        new = [0] * len(old)
        for k, l in enumerate(old):
            new[line_perms[I][k]] = l
        pencils.append(tuple(new))
    return AffinePlane(plane.n, plane.lines, tuple(pencils))


def _face_min_eigenvalues(poly: Polytope, orientation: int) -> dict[tuple[int, ...], float]:
    n = poly.n
    faces = np.array(list(itertools.product(range(n), repeat=n + 1)))
    out = {}
    mixed = np.eye(n) / n
    for start in range(0, len(faces), 4096):
        chunk = faces[start:start + 4096]
        A = poly.corners[np.arange(n + 1)[None, :], chunk].sum(axis=1) - np.eye(n)
        rho = mixed + orientation * (A - mixed) / math.sqrt(n + 1)
        mins = np.linalg.eigvalsh(rho)[:, 0]
        out.update(zip(map(tuple, chunk.tolist()), mins.tolist()))
    return out


def _search_relabelings(plane: AffinePlane, good: set) -> tuple | None:
    """First (pencil order, line permutations) sending every point to a good face."""
    n = plane.n
    ch = plane.choices
    prefixes = [set() for _ in range(n + 2)]
    for face in good:
        for L in range(n + 2):
            prefixes[L].add(face[:L])
    perms = list(itertools.permutations(range(n)))

    for order in itertools.permutations(range(n + 1)):
        cols = ch[:, list(order)]
        chosen: list[tuple[int, ...]] = []

        def extend(I: int, partial: list[tuple[int, ...]]):
            if I == n + 1:
                return tuple(chosen)
            for sigma in perms:
                nxt = [p + (sigma[c],) for p, c in zip(partial, cols[:, I])]
                if all(p in prefixes[I + 1] for p in nxt):
                    chosen.append(sigma)
                    hit = extend(I + 1, nxt)
                    if hit is not None:
                        return hit
                    chosen.pop()
            return None

        hit = extend(0, [()] * plane.num_points)
        if hit is not None:
            return tuple(order), hit
    return None


def sic_search(
    poly: Polytope,
    plane: AffinePlane,
    *,
    face_limit: int = 50_000,
    max_relabelings: int = 2_000,
    tol: float = SIC_TOL,
) -> SicSearchResult:
    """Look for a plane relabeling whose D-simplex rescales to a SIC.

    When all ``n^(n+1)`` point faces can be tabulated (at most
    ``face_limit``), the faces that rescale to pure states are listed first
    and every relabeling (pencil order and line order within pencils) is
    searched with prefix pruning, so a negative answer is exhaustive.
    Otherwise the first ``max_relabelings`` line relabelings, in
    lexicographic order, are evaluated directly.
    """
    if poly.realization != QUANTUM:
        raise AbstractRealization("SIC test needs corners that are quantum states")
    n = poly.n
    default = inscribe_dsimplex(poly, plane)
    default_report = sic_candidate(default, tol=tol)
    best = default_report.worst_min_eigenvalue

    if n ** (n + 1) <= face_limit:
        face_bound = -math.inf
        for s in (1, -1):
            mins = _face_min_eigenvalues(poly, s)
            face_bound = max(face_bound, max(mins.values()))
            good = {f for f, m in mins.items() if m >= -tol}
            hit = _search_relabelings(plane, good) if len(good) >= n * n else None
            if hit is not None:
                order, sigmas = hit
                D = inscribe_dsimplex(poly, relabel_plane(plane, order, sigmas))
                report = sic_candidate(D, s, tol)
                if report.is_sic:
                    return SicSearchResult(True, report, D, hit, 1, True,
                                           report.worst_min_eigenvalue, face_bound)
        total = math.factorial(n + 1) * math.factorial(n) ** (n + 1)
        return SicSearchResult(False, default_report, default, None, total, True, best, face_bound)

    examined = 0
    perms = list(itertools.permutations(range(n)))
    order = tuple(range(n + 1))
    for sigmas in itertools.product(perms, repeat=n + 1):
        if examined >= max_relabelings:
            break
        examined += 1
        D = inscribe_dsimplex(poly, relabel_plane(plane, order, sigmas))
        report = sic_candidate(D, tol=tol)
        best = max(best, report.worst_min_eigenvalue)
        if report.is_sic:
            return SicSearchResult(True, report, D, (order, sigmas), examined, False, best, None)
    total = math.factorial(n) ** (n + 1)
    return SicSearchResult(False, default_report, default, None, examined, examined >= total, best, None)
