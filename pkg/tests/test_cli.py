import json
import subprocess
import sys

import pytest

from finiteqm.cli import main
from finiteqm.serialize import read_convergence_csv, read_spectrum_csv
from finiteqm.spectra import analytic_spectrum
from finiteqm.lattice import LatticeConfig


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_spectrum_table(capsys):
    code, out, _ = run(capsys, "spectrum", "--d", "5", "--boundary", "periodic", "--check")
    assert code == 0
    assert "match: PASS" in out and "multiplicities=[1, 2, 2]" in out


def test_spectrum_json(capsys):
    code, out, _ = run(capsys, "spectrum", "--d", "4", "--a", "1", "--format", "json", "--check")
    data = json.loads(out)
    assert code == 0 and data["match"]["pass"]
    assert data["meta"]["program"] == "finiteqm"
    assert "vector" not in data["analytic"]["entries"][0]
    expected = [float(e) for e in analytic_spectrum(LatticeConfig(4)).energies]
    assert [e["energy"] for e in data["analytic"]["entries"]] == expected


def test_spectrum_csv_vectors(capsys):
    code, out, _ = run(capsys, "spectrum", "--d", "3", "--a", "1", "--format", "csv", "--vectors")
    rows = read_spectrum_csv(out)
    assert code == 0 and len(rows) == 3 and len(rows[0]["vector"]) == 3
    assert rows[0]["energy"] == pytest.approx(0.4282578076222932, rel=1e-15)


def test_no_header(capsys):
    _, out, _ = run(capsys, "spectrum", "--d", "3", "--format", "json", "--no-header")
    assert "meta" not in json.loads(out)
    _, out, _ = run(capsys, "spectrum", "--d", "3", "--format", "csv", "--no-header")
    assert out.startswith("m,parity")


def test_output_file(capsys, tmp_path):
    path = tmp_path / "out.csv"
    code, out, _ = run(capsys, "wavefunction", "--d", "7", "--m", "2", "--format", "csv",
                       "-o", str(path))
    assert code == 0 and out == ""
    assert "n,x,psi" in path.read_text()


def test_wavefunction_ring(capsys):
    code, out, _ = run(capsys, "wavefunction", "--d", "6", "--boundary", "periodic", "--m", "3",
                       "--parity", "odd", "--format", "json")
    data = json.loads(out)
    assert code == 0 and "renormalized" in data["notes"]


@pytest.mark.parametrize("argv", [
    ["spectrum", "--d", "1"],
    ["spectrum", "--d", "4", "--a", "-1"],
    ["wavefunction", "--d", "5", "--m", "0"],
    ["wavefunction", "--d", "5", "--boundary", "periodic", "--m", "1"],
    ["verify", "--d", "3", "--suite", "pauli"],
    ["verify", "--d", "3", "--suite", "weyl"],
    ["converge", "--dsweep", "64,128"],
    ["converge", "--a", "0.1"],
    ["converge", "--dsweep", "128,64,256,512"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "usage:" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["spectrum", "--d", "4", "--a", "1", "--L", "1"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["converge", "--dsweep", "a,b"])
    assert info.value.code == 2


def test_verify_pass(capsys):
    code, out, _ = run(capsys, "verify", "--d", "2", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["pass"]
    assert any(c["name"] == "pauli_product" for c in data["checks"])


def test_verify_fail_exit_1(capsys, monkeypatch):
    monkeypatch.setenv("FINITEQM_TOL", "0")
    code, out, _ = run(capsys, "verify", "--d", "7", "--boundary", "periodic")
    assert code == 1 and "overall: FAIL" in out


def test_converge_csv(capsys):
    code, out, _ = run(capsys, "converge", "--m", "2", "--dsweep", "64,128,256,512", "--format", "csv")
    rep = read_convergence_csv(out, "nonperiodic", 2)
    assert code == 0 and len(rep.rows) == 4 and 0.9 <= rep.exponent <= 1.1


def test_converge_expansion(capsys):
    code, out, _ = run(capsys, "converge", "--expansion", "--mode", "3", "--dsweep", "99,199,399")
    assert code == 0 and "deviation ratios" in out


def test_converge_periodic_m1_table(capsys):
    code, out, _ = run(capsys, "converge", "--boundary", "periodic", "--m", "1")
    assert code == 0 and "errors vanish" in out


def test_module_entry_point_is_deterministic():
    argv = [sys.executable, "-m", "finiteqm", "spectrum", "--d", "9", "--boundary", "periodic",
            "--check", "--vectors", "--format", "json"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second and json.loads(first)["match"]["pass"]
