import json
import subprocess
import sys

import numpy as np
import pytest

from mubgeo.affine import AffinePlane
from mubgeo.cli import main
from mubgeo.hspace import matrix_to_json
from mubgeo.mub import MubSet, mub_verify

from conftest import nearfield_plane9


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_mub_command(capsys, tmp_path):
    path = tmp_path / "m.json"
    code, out, _ = run(capsys, "mub", "4", "--out", str(path))
    assert code == 0 and "status: pass" in out
    assert mub_verify(MubSet.load(path)).passed


@pytest.mark.parametrize("n", ["6", "10", "12"])
def test_mub_refuses_non_prime_powers(capsys, n):
    code, _, err = run(capsys, "mub", n)
    assert code == 2 and "not a prime power" in err


def test_json_report_is_stable(capsys):
    code, out1, _ = run(capsys, "mub", "3", "--json")
    _, out2, _ = run(capsys, "mub", "3", "--json")
    assert code == 0 and out1 == out2
    rep = json.loads(out1)
    assert rep["status"] == "pass" and rep["metrics"]["bases"] == 4


def test_plane_and_mols_roundtrip(capsys, tmp_path):
    mols = tmp_path / "m.txt"
    assert run(capsys, "mols", "5", "--out", str(mols))[0] == 0
    plane = tmp_path / "p.json"
    code, out, _ = run(capsys, "plane", "--from-mols", str(mols), "--out", str(plane))
    assert code == 0 and "axioms: pass" in out
    code, out, _ = run(capsys, "plane", "--verify", str(plane))
    assert code == 0


def test_plane_verify_failure(capsys, tmp_path):
    plane = nearfield_plane9()
    lines = [list(l) for l in plane.lines]
    # trade a point between two parallel lines
    lines[0][0], lines[1][0] = lines[1][0], lines[0][0]
    bad = AffinePlane(9, tuple(map(tuple, lines)), plane.pencils)
    path = tmp_path / "bad.json"
    bad.save(path)
    code, out, _ = run(capsys, "plane", "--verify", str(path), "--json")
    assert code == 1
    assert json.loads(out)["status"] == "fail"


def test_plane_usage_errors(capsys, tmp_path):
    assert run(capsys, "plane")[0] == 2
    assert run(capsys, "plane", "6")[0] == 2
    assert run(capsys, "plane", "--verify", str(tmp_path / "missing.json"))[0] == 2


def test_tarry_small(capsys):
    code, out, _ = run(capsys, "tarry", "--order", "3", "--json")
    assert code == 0
    assert json.loads(out)["metrics"] == {"squares_examined": 1, "mates_found": 1}
    assert run(capsys, "tarry", "--order", "7")[0] == 2


def test_polytope_commands(capsys):
    code, out, _ = run(capsys, "polytope", "3", "--json")
    assert code == 0 and json.loads(out)["metrics"]["is_density_set"] is True
    code, out, _ = run(capsys, "polytope", "6", "--abstract", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["metrics"]["is_density_set"] is False
    assert rep["metrics"]["min_corner_eigenvalue"] < 0
    assert run(capsys, "polytope", "6")[0] == 2


def write_state(path, rho):
    path.write_text(json.dumps(matrix_to_json(rho)))


def test_wigner_command(capsys, tmp_path):
    state = tmp_path / "rho.json"
    write_state(state, np.diag([0.5, 0.3, 0.2]))
    out_path = tmp_path / "w.json"
    code, out, _ = run(capsys, "wigner", "--state", str(state), "--out", str(out_path))
    assert code == 0 and "status: pass" in out
    data = json.loads(out_path.read_text())
    assert np.isclose(np.sum(data["values"]), 1)
    assert out_path.with_suffix(".csv").exists()


def test_wigner_with_external_plane(capsys, tmp_path):
    plane = tmp_path / "plane.json"
    nearfield_plane9().save(plane)
    state = tmp_path / "rho.json"
    write_state(state, np.eye(9) / 9)
    code, out, _ = run(capsys, "wigner", "--state", str(state), "--plane", str(plane), "--json")
    assert code == 0 and json.loads(out)["metrics"]["realization"] == "quantum"


def test_wigner_warns_on_non_positive_state(capsys, tmp_path):
    state = tmp_path / "rho.json"
    write_state(state, np.diag([1.2, -0.2]))
    code, out, _ = run(capsys, "wigner", "--state", str(state))
    assert code == 0 and "warning" in out


def test_wigner_errors(capsys, tmp_path):
    state = tmp_path / "rho.json"
    write_state(state, np.eye(2))
    assert run(capsys, "wigner", "--state", str(state))[0] == 2
    write_state(state, np.eye(2) / 2)
    assert run(capsys, "wigner", "--state", str(state), "--n", "3")[0] == 2
    state.write_text("{not json")
    assert run(capsys, "wigner", "--state", str(state))[0] == 2


def test_sic_command(capsys):
    code, out, _ = run(capsys, "sic", "2", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["metrics"]["sic_found"] is True
    code, out, _ = run(capsys, "sic", "4", "--json")
    rep = json.loads(out)
    assert rep["metrics"]["sic_found"] is False and rep["metrics"]["exhaustive"] is True


def test_bounded_sic_is_indeterminate(capsys):
    code, out, _ = run(capsys, "sic", "7", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "indeterminate"
    assert rep["metrics"]["exhaustive"] is False and rep["metrics"]["relabelings_examined"] == 2000


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "mubgeo", "mub", "2"], capture_output=True, text=True)
    assert res.returncode == 0 and "status: pass" in res.stdout
