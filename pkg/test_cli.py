#!/usr/bin/env python3
"""
Tests for the torus-reciprocal command line
"""
import json
import os
import sys

import pytest

# Add the project directory to the Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import config_manager
import main
from document_io import document_to_graph, load_document


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setattr(config_manager, "_config_manager", None)
    return tmp_path


@pytest.fixture
def k7_file(workdir):
    path = workdir / "k7.json"
    assert main.main(["instance", "k7_uniform", "-o", str(path)]) == 0
    return str(path)


def _run(capsys, argv):
    code = main.main(argv)
    return code, capsys.readouterr().out


def test_instance_to_stdout(workdir, capsys):
    code, out = _run(capsys, ["instance", "grid_2"])
    assert code == 0
    assert json.loads(out)["name"] == "grid_2"


def test_validate(k7_file, capsys):
    code, out = _run(capsys, ["validate", k7_file])
    assert code == 0
    assert "valid: V=7 E=21 F=14" in out


def test_validate_reports_violations(k7_file, workdir, capsys):
    data = json.loads(open(k7_file, encoding="utf-8").read())
    data["vertices"][2] = [1.5, 0.25]
    broken = workdir / "broken.json"
    broken.write_text(json.dumps(data), encoding="utf-8")
    code, out = _run(capsys, ["validate", str(broken), "--report", str(workdir / "report.csv")])
    assert code == 1
    assert "violation: vertices outside" in out
    assert "VIOLATIONS" in (workdir / "report.csv").read_text(encoding="utf-8")


def test_covariance(k7_file, capsys):
    code, out = _run(capsys, ["covariance", k7_file, "--stress", "uniform"])
    assert code == 0
    assert out.splitlines() == ["alpha=2 beta=2 gamma=1 det=3", "[[2,1],[1,2]]"]


def test_equilibrium(k7_file, capsys):
    code, out = _run(capsys, ["equilibrium", k7_file, "--stress", "weird"])
    assert code == 0
    assert out.startswith("equilibrium=yes")


def test_force_torus(k7_file, capsys):
    code, out = _run(capsys, ["force-torus", k7_file, "--stress", "uniform", "--mode", "parallel"])
    assert code == 0
    assert out.strip() == "[[2,1],[1,2]]"
    code, out = _run(capsys, ["force-torus", k7_file, "--stress", "uniform", "--mode", "orthogonal"])
    assert out.strip() == "[[2,-1],[-1,2]]"


@pytest.mark.parametrize("sigma", ["0.5", "1", "3"])
def test_reciprocal_negative_is_impossible(k7_file, capsys, sigma):
    code, out = _run(capsys, ["reciprocal", k7_file, "--stress", "negative", "--mode", "orthogonal",
                              "--sigma", sigma])
    assert code == 2
    assert "no reciprocal torus" in out
    assert "= -1 <= 0" in out


def test_reciprocal_parallel_is_impossible_for_k7(k7_file, capsys):
    code, out = _run(capsys, ["reciprocal", k7_file, "--stress", "uniform", "--mode", "parallel"])
    assert code == 2
    assert "not a positive multiple of I" in out


def test_reciprocal_orthogonal_writes_dual(k7_file, workdir, capsys):
    dual_path = workdir / "dual.json"
    primal_path = workdir / "primal.json"
    report_path = workdir / "check.txt"
    code, out = _run(capsys, ["reciprocal", k7_file, "--stress", "uniform", "--mode", "orthogonal",
                              "--sigma", "2", "--angle", "30", "--out", str(dual_path),
                              "--primal-out", str(primal_path), "--report", str(report_path)])
    assert code == 0
    assert "verification: passed" in out
    assert "same_lattice=yes" in out
    assert "reciprocal=yes" in out
    dual, stresses = document_to_graph(load_document(str(dual_path)))
    assert dual.num_vertices == 14
    assert set(stresses) == {"dual"}
    assert "RECIPROCAL DIAGRAM REPORT" in report_path.read_text(encoding="utf-8")

    code, out = _run(capsys, ["analyze", str(dual_path)])
    assert code == 0
    assert "embedding=yes" in out
    code, out = _run(capsys, ["validate", str(primal_path)])
    assert code == 0


def test_analyze_weird_dual(k7_file, workdir, capsys):
    dual_path = workdir / "weird_dual.json"
    code, _ = _run(capsys, ["reciprocal", k7_file, "--stress", "weird", "--mode", "orthogonal",
                            "--out", str(dual_path)])
    assert code == 0
    code, out = _run(capsys, ["analyze", str(dual_path), "--report", str(workdir / "weird.xlsx")])
    assert code == 2
    assert "embedding=no" in out
    assert (workdir / "weird.xlsx").exists()


def test_stress_basis(k7_file, workdir, capsys):
    target = workdir / "basis.json"
    code, out = _run(capsys, ["stress-basis", k7_file, "--out", str(target)])
    assert code == 0
    stresses = load_document(str(target)).stresses
    assert "basis_0" in stresses
    assert "uniform" in stresses


def test_render(k7_file, workdir, capsys):
    svg_path = workdir / "k7.svg"
    code, _ = _run(capsys, ["render", k7_file, "-o", str(svg_path)])
    assert code == 0
    first = svg_path.read_text(encoding="utf-8")
    assert first.count('class="primal-edge"') == 189
    _run(capsys, ["render", k7_file, "-o", str(svg_path)])
    assert svg_path.read_text(encoding="utf-8") == first


def test_render_with_overlay(k7_file, workdir, capsys):
    dual_path = workdir / "dual.json"
    code, _ = _run(capsys, ["reciprocal", k7_file, "--stress", "weird", "--mode", "orthogonal",
                            "--out", str(dual_path)])
    assert code == 0
    svg_path = workdir / "overlay.svg"
    code, _ = _run(capsys, ["render", k7_file, "--dual", str(dual_path), "-o", str(svg_path)])
    assert code == 0
    assert "degenerate-vertex" in svg_path.read_text(encoding="utf-8")


def test_unknown_instance_fails(workdir, capsys):
    code = main.main(["instance", "k9"])
    assert code == 1
    assert "Unknown built-in instance" in capsys.readouterr().err


def test_missing_file_fails(workdir, capsys):
    assert main.main(["validate", str(workdir / "nope.json")]) == 1


def test_unknown_stress_fails(k7_file, capsys):
    assert main.main(["covariance", k7_file, "--stress", "heavy"]) == 1


def test_bad_arguments(workdir, capsys):
    assert main.main(["reciprocal"]) == 1
    assert main.main(["--tol", "-1", "instance", "grid_1"]) == 1
    assert main.main(["--help"]) == 0


def test_tolerance_from_config(workdir, capsys):
    config = workdir / "custom.json"
    config.write_text(json.dumps({"numerics": {"abs_tol": 1e-6}}), encoding="utf-8")
    code, out = _run(capsys, ["--config", str(config), "config"])
    assert code == 0
    assert "numerics.abs_tol=1e-06" in out
    sample = workdir / "sample.json"
    assert main.main(["--config", str(config), "config", "--sample", str(sample)]) == 0
    assert json.loads(sample.read_text(encoding="utf-8"))["render"]["tile"] == 3
