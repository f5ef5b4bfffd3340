#!/usr/bin/env python3
"""
Tests for report export
"""
import csv
import os
import sys

import pytest

# Add the project directory to the Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from drawing_analysis import analyze_drawing
from export import EXCEL_AVAILABLE, ReportExporter
from instances import k7_graph, k7_stress
from models import ReciprocalMode, ReciprocityReport
from reciprocal import build_dual_drawing, orthogonal_torus_family


@pytest.fixture(scope="module")
def weird_report():
    k7 = k7_graph()
    family = orthogonal_torus_family(k7, k7_stress("weird"))
    dual = build_dual_drawing(k7.with_torus(family.instantiate()), family.stress, ReciprocalMode.ORTHOGONAL)
    return analyze_drawing(dual.graph)


def _sections(report):
    return {"degeneracies": report.to_frame()}


def test_export_csv(tmp_path, weird_report):
    path = tmp_path / "report.csv"
    exporter = ReportExporter()
    assert exporter.export(str(path), "Drawing analysis", weird_report.summary(), _sections(weird_report))
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["=== DRAWING ANALYSIS ==="]
    assert ["=== DEGENERACIES ==="] in rows
    assert ["kind", "a", "b", "offset", "s", "t", "length"] in rows
    assert any(row and row[0] == "coincident_vertices" for row in rows)


def test_export_text_without_timestamp(tmp_path, weird_report):
    exporter = ReportExporter(include_timestamps=False)
    text = exporter.format_text("Drawing analysis", weird_report.summary(), _sections(weird_report))
    assert "Generated on" not in text
    assert text.startswith("=" * 60 + "\nDRAWING ANALYSIS\n")
    assert "DEGENERACIES" in text
    path = tmp_path / "report.txt"
    assert exporter.export(str(path), "Drawing analysis", weird_report.summary(), _sections(weird_report))
    assert path.read_text(encoding="utf-8") == text


def test_empty_sections_are_marked(tmp_path):
    report = ReciprocityReport(ReciprocalMode.PARALLEL)
    text = ReportExporter(include_timestamps=False).format_text(
        "Reciprocal diagram report", {"passes": report.passes}, {"violations": report.to_frame()})
    assert "(none)" in text
    assert "True" in text


@pytest.mark.skipif(not EXCEL_AVAILABLE, reason="openpyxl not installed")
def test_export_excel(tmp_path, weird_report):
    import openpyxl

    path = tmp_path / "report.xlsx"
    assert ReportExporter().export(str(path), "Drawing analysis", weird_report.summary(), _sections(weird_report))
    workbook = openpyxl.load_workbook(str(path))
    assert workbook.sheetnames == ["Summary", "degeneracies"]
    assert workbook["Summary"]["A1"].value == "Drawing analysis"
    assert workbook["degeneracies"]["A1"].value == "kind"
    assert workbook["degeneracies"]["A1"].font.bold


def test_export_failure_returns_false(tmp_path, weird_report):
    path = tmp_path / "missing" / "report.csv"
    assert not ReportExporter().export(str(path), "x", {}, _sections(weird_report))
