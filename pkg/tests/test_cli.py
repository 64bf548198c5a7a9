import json
import subprocess
import sys

import pytest

from icsskit import __version__
from icsskit.cli import main

from conftest import FIXTURES

ALL = sorted(p.stem for p in FIXTURES.glob("*.json") if p.stem != "broken_boundary")


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", ALL)
def test_oracle_compare_every_fixture(capsys, name):
    code, out, err = _run(capsys, "oracle-compare", str(FIXTURES / f"{name}.json"))
    assert code == 0, err
    assert out.startswith("ICSS == oracle: ")


def test_analyze_quadruple_planes(capsys):
    code, out, _ = _run(capsys, "analyze", str(FIXTURES / "quadruple_planes.json"))
    assert code == 0
    assert "s(f) = 4, d(f) = 3" in out
    assert "H_*(Y) = (ℤ, 0, ℤ)" in out
    assert "slots (dis_homology): {2}" in out
    assert "wedge of 1 2-sphere" in out


def test_analyze_json_is_deterministic(capsys):
    path = str(FIXTURES / "s_lines_4.json")
    first = _run(capsys, "analyze", path, "--output", "json")[1]
    second = _run(capsys, "analyze", path, "--output", "json")[1]
    assert first == second
    data = json.loads(first)
    assert data["homology_text"] == "(ℤ, ℤ³)"
    assert data["wedge"]["spheres"] == {"1": 3}


def test_validate_and_homology(capsys):
    code, out, _ = _run(capsys, "validate", str(FIXTURES / "two_lines.json"))
    assert code == 0 and out.startswith("OK germ model two_lines")
    code, out, _ = _run(capsys, "homology", str(FIXTURES / "s_lines_3.json"))
    assert code == 0 and out.strip() == "H_*(image) = (ℤ, ℤ)"


def test_broken_boundary(capsys):
    code, out, err = _run(capsys, "validate", str(FIXTURES / "broken_boundary.json"))
    assert code == 2
    assert err.strip() == "ERROR BoundarySquareNonzero: degree 2"
    assert out == ""


def test_fplus_without_witness(capsys):
    code, _, err = _run(capsys, "fplus", str(FIXTURES / "s_lines_3.json"))
    assert code == 1
    assert err.startswith("ERROR NoWitness:")


def test_fplus_with_witness(capsys):
    code, out, _ = _run(capsys, "fplus", str(FIXTURES / "disk_bouquet_3_4.json"))
    assert code == 0
    assert "FAIL" not in out


def test_mpp_and_alt_homology(capsys):
    code, out, _ = _run(capsys, "mpp", str(FIXTURES / "quadruple_planes.json"))
    assert code == 0
    assert "D^3: dim 0" in out
    code, out, _ = _run(capsys, "alt-homology", str(FIXTURES / "quadruple_planes.json"))
    assert code == 0
    assert "H^alt_*(D^3) = (ℤ⁴)" in out


def test_icss_text_and_json(capsys):
    code, out, _ = _run(capsys, "icss", str(FIXTURES / "disk_bouquet_3_4.json"))
    assert code == 0
    assert "collapse certified at E_2" in out
    code, out, _ = _run(capsys, "icss", str(FIXTURES / "disk_bouquet_3_4.json"), "--output", "json")
    data = json.loads(out)
    assert data["abutment"] == [{"rank": 1, "torsion": []}, {"rank": 0, "torsion": []},
                                {"rank": 2, "torsion": []}]


def test_max_k_below_d_is_refused(capsys):
    code, _, err = _run(capsys, "icss", str(FIXTURES / "quadruple_planes.json"), "--max-k", "2")
    assert code == 2
    assert "ERROR MalformedInput" in err
    code, _, _ = _run(capsys, "icss", str(FIXTURES / "quadruple_planes.json"), "--max-k", "3")
    assert code == 0
    code, _, _ = _run(capsys, "icss", str(FIXTURES / "quadruple_planes.json"), "--max-k", "0")
    assert code == 2


def test_malformed_inputs(capsys, tmp_path):
    code, _, err = _run(capsys, "validate", str(tmp_path / "missing.json"))
    assert code == 2 and "ERROR MalformedInput" in err
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = _run(capsys, "validate", str(bad))
    assert code == 2 and "not valid JSON" in err
    cx = tmp_path / "cx.json"
    cx.write_text(json.dumps({"cells": {"0": ["a"]}}))
    code, _, err = _run(capsys, "icss", str(cx))
    assert code == 2 and "germ model" in err
    code, _, _ = _run(capsys, "bogus", str(cx))
    assert code == 2


def test_cell_limit_is_reported(capsys, monkeypatch):
    monkeypatch.setenv("ICSSKIT_MAX_CELLS", "20")
    code, _, err = _run(capsys, "icss", str(FIXTURES / "quadruple_planes.json"))
    assert code == 2
    assert err.startswith("ERROR CellLimitExceeded")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "icsskit", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert __version__ in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "icsskit", "homology", str(FIXTURES / "two_lines.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "H_*(image) = (ℤ)"
