"""Command-line entry point: ``mubgeo <command> ...``.

Exit codes: 0 when every checked identity is within tolerance, 1 when one is
not, 2 for usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .affine import AffinePlane, plane_from_field, plane_from_mols, verify_axioms
from .errors import MubGeoError
from .gf import field_of_order, prime_power
from .hspace import check_hermitian, load_matrix, min_eigenvalue
from .latin import mols_from_field, parse_mols, tarry_sweep
from .mub import DEFAULT_SEED, MUB_ORDER_CAP, mub_verify, mubs_for_dimension
from .polytope import (
    inscribe_dsimplex,
    polytope_abstract,
    polytope_from_mubs,
    polytope_identities,
    positivity_report,
    sic_search,
)
from .wigner import (
    direct_line_probabilities,
    line_probabilities,
    probabilities_csv,
    state_from_wigner,
    wigner_from_state,
)

# known (examined, with mate) outcomes of the reduced-square sweep
TARRY_EXPECTED = {2: (1, 0), 3: (1, 1), 6: (9408, 0)}
SIC_ORDER_CAP = 9


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: list[str]
    status: str = "pass"
    metrics: dict = field(default_factory=dict)
    artifacts: list[str] = field(default_factory=list)

    def check(self, name: str, value: float, tol: float) -> None:
        self.metrics[name] = float(value)
        if not value <= tol:
            self.status = "fail"

    def to_json(self) -> str:
        return json.dumps(
            {"command": self.command, "status": self.status, "metrics": self.metrics, "artifacts": self.artifacts},
            sort_keys=True,
        )

    @property
    def exit_code(self) -> int:
        # a bounded search that ends without an answer is not a failure
        return {"pass": 0, "indeterminate": 0, "fail": 1}.get(self.status, 1)


def _prime_power_order(n: int, cap: int | None = None) -> int:
    if prime_power(n) is None:
        raise UsageError(f"{n} is not a prime power")
    if cap is not None and n > cap:
        raise UsageError(f"order {n} exceeds the cap {cap}")
    return n


def _write(path: str | None, text: str, report: RunReport) -> None:
    if path:
        Path(path).write_text(text)
        report.artifacts.append(str(path))


def cmd_mub(args, report: RunReport) -> list[str]:
    n = _prime_power_order(args.n, MUB_ORDER_CAP)
    mubs = mubs_for_dimension(n, args.seed)
    r = mub_verify(mubs, args.tolerance)
    report.metrics["bases"] = r.bases
    report.check("orthonormality_error", r.orthonormality_error, args.tolerance)
    report.check("unbiasedness_deviation", r.unbiasedness_deviation, args.tolerance)
    _write(args.out, json.dumps(mubs.to_json()), report)
    return [f"n={n}: {r.bases} bases, max |overlap|^2 - 1/n deviation {r.unbiasedness_deviation:.3e}"]


def _plane_lines(plane: AffinePlane) -> list[str]:
    out = [f"order {plane.n}: {plane.num_points} points, {len(plane.lines)} lines, {len(plane.pencils)} pencils"]
    for P, pen in enumerate(plane.pencils):
        out.append(f"pencil {P}: " + " | ".join(" ".join(map(str, plane.lines[l])) for l in pen))
    return out


def cmd_plane(args, report: RunReport) -> list[str]:
    if args.verify:
        plane = AffinePlane.load(args.verify)
    elif args.from_mols:
        plane = plane_from_mols(parse_mols(Path(args.from_mols).read_text()))
    elif args.n is not None:
        plane = plane_from_field(field_of_order(_prime_power_order(args.n)))
    else:
        raise UsageError("give an order, --from-mols FILE or --verify FILE")
    axioms = verify_axioms(plane)
    report.metrics.update(
        n=plane.n, points=plane.num_points, lines=len(plane.lines), pencils=len(plane.pencils)
    )
    for name, check in zip(axioms._fields, axioms):
        report.metrics[name] = check.passed
    if not axioms.passed:
        report.status = "fail"
        report.metrics["witnesses"] = {k: repr(v) for k, v in axioms.failures().items()}
    if not args.verify:
        _write(args.out, json.dumps(plane.to_json()), report)
    lines = _plane_lines(plane)
    lines.append("axioms: " + ("pass" if axioms.passed else f"FAIL {axioms.failures()}"))
    return lines


def cmd_mols(args, report: RunReport) -> list[str]:
    n = _prime_power_order(args.n)
    mols = mols_from_field(field_of_order(n))
    report.metrics["squares"] = len(mols)
    text = mols.to_text()
    _write(args.out, text, report)
    return [text.rstrip()]


def cmd_tarry(args, report: RunReport) -> list[str]:
    if not 2 <= args.order <= 6:
        raise UsageError("order must be between 2 and 6")
    start = time.perf_counter()
    examined, mates = tarry_sweep(args.order, args.jobs)
    elapsed = time.perf_counter() - start
    report.metrics.update(squares_examined=examined, mates_found=mates)
    expected = TARRY_EXPECTED.get(args.order)
    if expected is not None and expected != (examined, mates):
        report.status = "fail"
    return [f"order {args.order}: {examined} reduced squares, {mates} with an orthogonal mate ({elapsed:.1f} s)"]


def _polytope(n: int, abstract: bool, seed: int):
    if abstract:
        return polytope_abstract(n)
    return polytope_from_mubs(mubs_for_dimension(_prime_power_order(n, MUB_ORDER_CAP), seed))


def cmd_polytope(args, report: RunReport) -> list[str]:
    poly = _polytope(args.n, args.abstract, args.seed)
    ids = polytope_identities(poly)
    for name, value in zip(ids._fields, ids):
        report.check(f"{name}_error", value, args.tolerance)
    pos = positivity_report(poly, args.tolerance)
    report.metrics["realization"] = poly.realization
    report.metrics["min_corner_eigenvalue"] = pos.worst
    report.metrics["is_density_set"] = pos.is_density_set
    if poly.realization == "quantum" and not pos.is_density_set:
        report.status = "fail"
    return [
        f"{poly.realization} polytope, n={poly.n}: worst identity error {ids.worst():.3e}",
        f"min corner eigenvalue {pos.worst:.6f} ({'density matrices' if pos.is_density_set else 'not all positive'})",
    ]


def cmd_wigner(args, report: RunReport) -> list[str]:
    rho = check_hermitian(load_matrix(args.state), tol=1e-10)
    n = rho.shape[0]
    if args.n is not None and args.n != n:
        raise UsageError(f"--n {args.n} does not match the {n}x{n} state")
    if args.plane:
        plane = AffinePlane.load(args.plane)
        poly = _polytope(n, prime_power(n) is None or n > MUB_ORDER_CAP, args.seed)
    else:
        _prime_power_order(n, MUB_ORDER_CAP)
        plane = plane_from_field(field_of_order(n))
        poly = _polytope(n, False, args.seed)
    D = inscribe_dsimplex(poly, plane)
    report.check("dsimplex_gram_error", D.gram_error(), args.tolerance)
    W = wigner_from_state(rho, D)
    p = line_probabilities(W)
    report.check("roundtrip_error", float(np.abs(state_from_wigner(W) - rho).max()), args.tolerance)
    report.check("marginal_error", float(np.abs(p.sum(axis=1) - 1).max()), max(args.tolerance, 1e-12))
    report.check("line_probability_error", float(np.abs(p - direct_line_probabilities(rho, D)).max()), args.tolerance)
    report.metrics["min_line_probability"] = float(p.min())
    report.metrics["negative_lines"] = int((p < -args.tolerance).sum())
    report.metrics["wigner_negativity"] = W.negativity()
    report.metrics["realization"] = poly.realization
    notes = []
    if min_eigenvalue(rho) < -args.tolerance:
        notes.append("warning: state is not positive semidefinite; continuing")
    if report.metrics["negative_lines"]:
        notes.append(f"warning: {report.metrics['negative_lines']} line probabilities are negative")
    if args.out:
        data = W.to_json()
        data["probabilities"] = p.tolist()
        _write(args.out, json.dumps(data), report)
        _write(str(Path(args.out).with_suffix(".csv")), probabilities_csv(p), report)
    grid = W.grid()
    return notes + ["W ="] + ["  " + " ".join(f"{v: .6f}" for v in row) for row in grid]


def cmd_sic(args, report: RunReport) -> list[str]:
    n = _prime_power_order(args.n, SIC_ORDER_CAP)
    poly = polytope_from_mubs(mubs_for_dimension(n, args.seed))
    res = sic_search(poly, plane_from_field(field_of_order(n)))
    report.check("overlap_error", res.report.overlap_error, max(args.tolerance, 1e-8))
    report.metrics.update(
        sic_found=res.found,
        orientation=res.report.orientation if res.found else None,
        best_min_eigenvalue=res.best_min_eigenvalue,
        best_face_min_eigenvalue=res.best_face_min_eigenvalue,
        relabelings_examined=res.examined,
        exhaustive=res.exhaustive,
    )
    if not res.found and not res.exhaustive and report.status == "pass":
        report.status = "indeterminate"
    if res.found:
        return [f"n={n}: SIC found (orientation {res.report.orientation:+d}, relabeling {res.relabeling})"]
    return [f"n={n}: no SIC; best min eigenvalue {res.best_min_eigenvalue:.6f}"
            f" ({'exhaustive' if res.exhaustive else f'{res.examined} relabelings'})"]


COMMANDS = {
    "mub": cmd_mub,
    "plane": cmd_plane,
    "mols": cmd_mols,
    "tarry": cmd_tarry,
    "polytope": cmd_polytope,
    "wigner": cmd_wigner,
    "sic": cmd_sic,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the main artifact to this file")
    common.add_argument("--tolerance", type=float, default=1e-10)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--json", action="store_true", help="print the run report as JSON")

    parser = argparse.ArgumentParser(prog="mubgeo", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mub", parents=[common], help="construct and verify a complete MUB set")
    p.add_argument("n", type=int)

    p = sub.add_parser("plane", parents=[common], help="generate or verify an affine plane")
    p.add_argument("n", type=int, nargs="?")
    p.add_argument("--from-mols", metavar="FILE")
    p.add_argument("--verify", metavar="FILE")

    p = sub.add_parser("mols", parents=[common], help="n-1 MOLS from the field of order n")
    p.add_argument("n", type=int)

    p = sub.add_parser("tarry", parents=[common], help="mate search over all reduced Latin squares")
    p.add_argument("--order", type=int, default=6)
    p.add_argument("--jobs", type=int, default=None)

    p = sub.add_parser("polytope", parents=[common], help="check the complementarity polytope")
    p.add_argument("n", type=int)
    p.add_argument("--abstract", action="store_true", help="build in Bloch space, without MUBs")

    p = sub.add_parser("wigner", parents=[common], help="Wigner function of a state")
    p.add_argument("--state", required=True, metavar="FILE")
    p.add_argument("--n", type=int)
    p.add_argument("--plane", metavar="FILE")

    p = sub.add_parser("sic", parents=[common], help="look for a SIC among D-simplex relabelings")
    p.add_argument("n", type=int)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    report = RunReport(command=argv)
    try:
        lines = COMMANDS[args.command](args, report)
    except (UsageError, MubGeoError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        print(report.to_json())
    else:
        print("\n".join(lines))
        print(f"status: {report.status}")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
