import json

import numpy as np
import pytest
from conftest import SZ, dephasing_generator, transpose_superop

from cpsemi.cli import main
from cpsemi.generator import decompose, same_generator
from cpsemi.superop import ad_superop, identity_superop


def c2j(z):
    z = complex(z)
    return [z.real, z.imag]


def m2j(m):
    return [[c2j(z) for z in row] for row in np.asarray(m, dtype=complex)]


def superop_doc(mat, n):
    return {"type": "superop", "n": n, "matrix": m2j(mat)}


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def run(capsys, argv):
    rc = main(argv)
    return rc, capsys.readouterr().out


@pytest.fixture
def dephasing_file(tmp_path):
    return write(tmp_path, "deph.json", superop_doc(dephasing_generator(), 2))


def test_analyze_dephasing(dephasing_file, capsys):
    rc, out = run(capsys, ["analyze", "--input", dephasing_file])
    assert rc == 0
    rep = json.loads(out)
    assert rep["ccp"] is True
    assert rep["unital"] is True
    assert rep["rank"] == 1
    assert rep["index"] == 1
    assert rep["hermiticity_preserving"] is True
    assert rep["residual"] <= 1e-10


def test_analyze_output_is_byte_stable(dephasing_file, tmp_path, capsys):
    rc1, out1 = run(capsys, ["analyze", "--input", dephasing_file])
    rc2, out2 = run(capsys, ["analyze", "--input", dephasing_file])
    assert rc1 == rc2 == 0
    assert out1 == out2


def test_analyze_automorphism_note(tmp_path, capsys):
    h = np.array([[0.4, 0.1], [0.1, -0.4]])
    mat = np.kron(np.eye(2), 1j * h) + np.kron((-1j * h).T, np.eye(2))
    path = write(tmp_path, "auto.json", superop_doc(mat, 2))
    rc, out = run(capsys, ["analyze", "--input", path])
    rep = json.loads(out)
    assert rc == 0
    assert rep["rank"] == 0
    assert rep["index"] == 0
    assert "automorphism" in rep["note"]


def test_analyze_rejects_transpose_with_witness(tmp_path, capsys):
    path = write(tmp_path, "tr.json", superop_doc(transpose_superop(2), 2))
    rc, out = run(capsys, ["analyze", "--input", path])
    assert rc == 2
    rep = json.loads(out)
    assert rep["ccp"] is False
    assert rep["projected_eigenvalue"] == pytest.approx(-1.0)
    assert len(rep["witness"]) == 4


def test_parse_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["analyze", "--input", str(bad)]) == 1
    capsys.readouterr()
    assert main(["analyze", "--input", str(tmp_path / "missing.json")]) == 1
    capsys.readouterr()
    doc = superop_doc(dephasing_generator(), 2)
    del doc["matrix"]
    assert main(["analyze", "--input", write(tmp_path, "nokey.json", doc)]) == 1
    capsys.readouterr()
    doc = superop_doc(dephasing_generator(), 2)
    doc["n"] = 99
    assert main(["analyze", "--input", write(tmp_path, "bign.json", doc)]) == 1


def test_decompose_round_trip(dephasing_file, tmp_path, capsys):
    out_path = str(tmp_path / "gkls.json")
    rc = main(["decompose", "--input", dephasing_file, "--output", out_path])
    assert rc == 0
    doc = json.loads(open(out_path).read())
    assert doc["type"] == "gkls"
    assert doc["rank"] == 1
    rc2, out2 = run(capsys, ["analyze", "--input", out_path])
    assert rc2 == 0
    rep = json.loads(out2)
    assert rep["rank"] == 1 and rep["unital"] is True
    # re-ingested canonical data describes the same generator
    kraus = [
        np.array([[complex(re, im) for re, im in row] for row in op])
        for op in doc["kraus"]
    ]
    k = np.array([[complex(re, im) for re, im in row] for row in doc["k"]])
    mat2 = sum(np.kron(v.conj(), v) for v in kraus)
    mat2 = mat2 + np.kron(np.eye(2), k) + np.kron(k.conj(), np.eye(2))
    assert same_generator(decompose(dephasing_generator()), decompose(mat2))


def test_hamiltonian_lindblad_input(tmp_path, capsys):
    doc = {
        "type": "hamiltonian_lindblad",
        "n": 2,
        "h": m2j(np.array([[0.2, 0.0], [0.0, -0.2]])),
        "lindblad": [m2j(SZ)],
    }
    rc, out = run(capsys, ["analyze", "--input", write(tmp_path, "hl.json", doc)])
    assert rc == 0
    rep = json.loads(out)
    assert rep["unital"] is True and rep["rank"] == 1


def test_hamiltonian_lindblad_rejects_non_hermitian(tmp_path, capsys):
    doc = {
        "type": "hamiltonian_lindblad",
        "n": 2,
        "h": m2j(np.array([[0.0, 1.0], [0.0, 0.0]])),
        "lindblad": [m2j(SZ)],
    }
    assert main(["analyze", "--input", write(tmp_path, "hl.json", doc)]) == 1


def test_covariance_command(dephasing_file, tmp_path, capsys):
    units = {
        "units": [
            {"c": [0.0, 0.0], "v": [[1.0, 0.0]]},
            {"c": [0.0, 0.0], "v": [[-1.0, 0.0]]},
        ]
    }
    upath = write(tmp_path, "units.json", units)
    rc, out = run(
        capsys, ["covariance", "--input", dephasing_file, "--units", upath]
    )
    assert rc == 0
    rep = json.loads(out)
    assert rep["closed"] == pytest.approx([-1.0, 0.0])
    assert rep["abs_error"] <= 1e-3


def test_covariance_branch_failure_is_exit_3(dephasing_file, tmp_path, capsys):
    units = {
        "units": [
            {"c": [0.0, 0.0], "v": [[0.0, 0.0]]},
            {"c": [0.0, 8 * np.pi], "v": [[0.0, 0.0]]},
        ]
    }
    upath = write(tmp_path, "units.json", units)
    rc = main(
        ["covariance", "--input", dephasing_file, "--units", upath, "--m", "8"]
    )
    assert rc == 3


def test_covariance_rejects_wrong_coordinate_count(dephasing_file, tmp_path, capsys):
    units = {
        "units": [
            {"c": [0.0, 0.0], "v": [[1.0, 0.0], [0.0, 0.0]]},
            {"c": [0.0, 0.0], "v": [[1.0, 0.0], [0.0, 0.0]]},
        ]
    }
    upath = write(tmp_path, "units.json", units)
    assert main(["covariance", "--input", dephasing_file, "--units", upath]) == 1


def test_verify_all_checks(dephasing_file, capsys):
    rc, out = run(capsys, ["verify", "--input", dephasing_file])
    assert rc == 0
    rep = json.loads(out)
    assert rep["pass"] is True
    assert set(rep["checks"]) == {
        "product_system",
        "domination",
        "gauge",
        "units",
        "covariance",
    }
    assert all(entry["pass"] for entry in rep["checks"].values())


def test_verify_subset_of_checks(dephasing_file, capsys):
    rc, out = run(
        capsys,
        ["verify", "--input", dephasing_file, "--checks", "product_system,gauge"],
    )
    assert rc == 0
    rep = json.loads(out)
    assert set(rep["checks"]) == {"product_system", "gauge"}


def test_index_command_writes_output(dephasing_file, tmp_path, capsys):
    out_path = str(tmp_path / "idx.json")
    rc = main(["index", "--input", dephasing_file, "--output", out_path])
    assert rc == 0
    rep = json.loads(open(out_path).read())
    assert rep["index"] == 1
    assert "dilation" in rep["index_note"]
