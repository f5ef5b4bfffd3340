#!/usr/bin/env python3
"""
Tests for SVG rendering
"""
import os
import sys

import pytest

# Add the project directory to the Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from drawing_analysis import analyze_drawing
from instances import k7_graph, k7_stress
from models import ReciprocalMode
from reciprocal import build_dual_drawing, orthogonal_torus_family
from render import RenderOptions, render_svg, save_svg


@pytest.fixture(scope="module")
def k7():
    return k7_graph()


def test_k7_counts(k7):
    svg = render_svg(k7)
    assert svg.count('class="primal-edge"') == 21 * 9
    assert svg.count('class="vertex"') == 7
    assert svg.count('class="torus-outline"') == 1
    assert "dual-edge" not in svg
    assert "degenerate" not in svg


def test_render_is_deterministic(k7):
    assert render_svg(k7) == render_svg(k7)


def test_tile_option(k7):
    svg = render_svg(k7, RenderOptions(tile=1, labels=True))
    assert svg.count('class="primal-edge"') == 21
    assert svg.count('class="label"') == 7


def test_weird_dual_overlay_is_highlighted(k7):
    family = orthogonal_torus_family(k7, k7_stress("weird"))
    primal = k7.with_torus(family.instantiate())
    dual = build_dual_drawing(primal, family.stress, ReciprocalMode.ORTHOGONAL)
    options = RenderOptions(overlay=dual, highlight=analyze_drawing(dual.graph))
    svg = render_svg(primal, options)
    assert "dual-vertex degenerate-vertex" in svg
    assert "dual-edge degenerate-edge" in svg
    assert svg.count("dual-vertex") == 14
    assert 'id="dual-tile-block"' in svg


def test_plain_graph_overlay(k7):
    dual = build_dual_drawing(k7, k7_stress("uniform"), ReciprocalMode.PARALLEL)
    svg = render_svg(k7, RenderOptions(overlay=dual.graph))
    assert svg.count("dual-edge") == 21 * 9
    assert svg == render_svg(k7, RenderOptions(overlay=dual))


def test_save_svg(k7, tmp_path):
    path = tmp_path / "k7.svg"
    save_svg(render_svg(k7), str(path))
    assert path.read_text(encoding="utf-8").lstrip().startswith("<?xml")
