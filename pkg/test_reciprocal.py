#!/usr/bin/env python3
"""
Tests for reciprocal criteria, torus families, force tori and dual drawings
"""
import math
import os
import sys
from dataclasses import replace

import numpy as np
import pytest

# Add the project directory to the Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from drawing_analysis import is_embedding
from instances import grid_graph, k7_graph, k7_stress
from models import (FlatTorus, NonEquilibriumError, NonIntegralHomologyError, NoReciprocalTorus,
                    ReciprocalMode, TorusFamily)
from reciprocal import (J, build_dual_drawing, dual_cohomology_pattern, dual_displacements,
                        dual_stress, expected_cohomology_pattern, force_torus,
                        orthogonal_force_torus, orthogonal_torus_family, parallel_criterion,
                        parallel_force_torus, parallel_torus_family, torus_family,
                        verify_reciprocal)
from stress import is_equilibrium
from torus_core import displacement_matrix, validate

K7 = k7_graph()
UNIFORM = k7_stress("uniform")


def test_force_tori_of_uniform_k7():
    np.testing.assert_allclose(parallel_force_torus(K7, UNIFORM).basis, [[2, 1], [1, 2]], atol=1e-12)
    np.testing.assert_allclose(orthogonal_force_torus(K7, UNIFORM).basis, [[2, -1], [-1, 2]], atol=1e-12)
    np.testing.assert_allclose(force_torus(K7, UNIFORM, ReciprocalMode.PARALLEL).basis,
                               parallel_force_torus(K7, UNIFORM).basis)


def test_parallel_criterion_fails_for_k7():
    result = parallel_criterion(K7, UNIFORM)
    assert not result
    np.testing.assert_allclose(result.covariance.matrix, [[2, 1], [1, 2]], atol=1e-12)


def test_parallel_verdict_ignores_torus():
    for basis in ([[1.0, 0.0], [0.0, 1.0]], [[2.0, 1.0], [0.5, 3.0]]):
        g = K7.with_torus(FlatTorus(np.array(basis)))
        assert not parallel_criterion(g, UNIFORM)


def test_grid_is_parallel_reciprocal_everywhere():
    g = grid_graph(3)
    assert parallel_criterion(g, np.ones(g.num_edges))
    family = parallel_torus_family(g, np.ones(g.num_edges))
    assert isinstance(family, TorusFamily)
    assert not family.rescaled
    torus = family.instantiate(matrix=np.array([[1.5, 0.3], [-0.2, 0.8]]))
    primal = g.with_torus(torus)
    dual = build_dual_drawing(primal, family.stress, ReciprocalMode.PARALLEL)
    report = verify_reciprocal(primal, dual, family.stress, tol=1e-9)
    assert report.is_reciprocal


def test_parallel_family_rescales_multiple_of_identity():
    g = grid_graph(2)
    family = parallel_torus_family(g, 2 * np.ones(g.num_edges))
    assert family.scale_factor == pytest.approx(0.5)
    np.testing.assert_allclose(family.stress.omega, np.ones(g.num_edges))


def test_parallel_family_of_k7_is_empty():
    family = parallel_torus_family(K7, k7_stress("weird"))
    assert isinstance(family, NoReciprocalTorus)
    assert not family


def test_orthogonal_family_of_uniform_rescales():
    family = orthogonal_torus_family(K7, UNIFORM)
    assert family.scale_factor == pytest.approx(1 / math.sqrt(3))
    assert family.covariance.determinant == pytest.approx(1.0)
    expected = np.array([[2, -1], [0, math.sqrt(3)]]) / math.sqrt(3)
    np.testing.assert_allclose(family.base, expected, atol=1e-12)


def test_orthogonal_family_of_negative_stress():
    family = orthogonal_torus_family(K7, k7_stress("negative"))
    assert isinstance(family, NoReciprocalTorus)
    assert family.determinant == pytest.approx(-1.0, abs=1e-12)
    assert "= -1 <= 0" in family.reason
    scaled = orthogonal_torus_family(K7, k7_stress("negative").scaled(5.0))
    assert isinstance(scaled, NoReciprocalTorus)


def test_torus_family_requires_equilibrium():
    omega = np.ones(21)
    omega[0] = 3.0
    with pytest.raises(NonEquilibriumError):
        torus_family(K7, omega, ReciprocalMode.ORTHOGONAL)


def test_family_instantiate():
    family = orthogonal_torus_family(K7, UNIFORM)
    torus = family.instantiate(2.0, math.pi / 2)
    np.testing.assert_allclose(torus.basis, 2.0 * np.array([[0, -1], [1, 0]]) @ family.base, atol=1e-12)
    with pytest.raises(ValueError):
        family.instantiate(0.0)


def test_dual_displacements_without_target():
    parallel = dual_displacements(K7, UNIFORM, ReciprocalMode.PARALLEL)
    np.testing.assert_allclose(parallel, displacement_matrix(K7).T)
    orthogonal = dual_displacements(K7, UNIFORM, ReciprocalMode.ORTHOGONAL)
    np.testing.assert_allclose(orthogonal, (J @ displacement_matrix(K7)).T)


def test_parallel_dual_of_uniform_k7():
    dual = build_dual_drawing(K7, UNIFORM, ReciprocalMode.PARALLEL)
    assert dual.graph.num_vertices == 14
    assert dual.graph.num_edges == 21
    assert validate(dual.graph).is_valid
    np.testing.assert_allclose(dual.graph.torus.basis, [[2, 1], [1, 2]], atol=1e-12)
    report = verify_reciprocal(K7, dual, UNIFORM)
    assert report.passes
    assert not report.same_lattice
    np.testing.assert_allclose(dual_cohomology_pattern(K7, dual), np.eye(2), atol=1e-9)


def test_dual_vertex_faces_match_face_count():
    dual = build_dual_drawing(K7, UNIFORM, ReciprocalMode.PARALLEL)
    assert len(dual.vertex_faces) == 14
    assert sorted(d for face in dual.vertex_faces for d in face) == list(range(42))


def test_orthogonal_dual_pattern():
    family = orthogonal_torus_family(K7, UNIFORM)
    primal = K7.with_torus(family.instantiate())
    dual = build_dual_drawing(primal, family.stress, ReciprocalMode.ORTHOGONAL)
    np.testing.assert_allclose(dual.graph.torus.basis, primal.torus.basis, atol=1e-12)
    np.testing.assert_allclose(dual_cohomology_pattern(primal, dual),
                               expected_cohomology_pattern(ReciprocalMode.ORTHOGONAL), atol=1e-9)
    report = verify_reciprocal(primal, dual, family.stress, tol=1e-9)
    assert report.is_reciprocal



def test_sheared_torus_is_outside_orthogonal_family():
    family = orthogonal_torus_family(K7, UNIFORM)
    sheared = K7.with_torus(FlatTorus(family.base @ np.array([[1.0, 0.4], [0.0, 1.0]])))
    dual = build_dual_drawing(sheared, family.stress, ReciprocalMode.ORTHOGONAL)
    report = verify_reciprocal(sheared, dual, family.stress, tol=1e-9)
    # Still a force diagram, but on a different torus
    assert report.passes
    assert not report.same_lattice
    assert not report.is_reciprocal
    with pytest.raises(NonIntegralHomologyError):
        build_dual_drawing(sheared, family.stress, ReciprocalMode.ORTHOGONAL, target_torus=sheared.torus)

def test_orthogonal_dual_fails_parallel_laws():
    family = orthogonal_torus_family(K7, UNIFORM)
    primal = K7.with_torus(family.instantiate())
    dual = build_dual_drawing(primal, family.stress, ReciprocalMode.ORTHOGONAL)
    report = verify_reciprocal(primal, dual, family.stress, mode=ReciprocalMode.PARALLEL)
    assert len(report.angle_violations) == 21
    assert not report.passes


def test_verify_detects_moved_dual_vertex():
    dual = build_dual_drawing(K7, UNIFORM, ReciprocalMode.PARALLEL)
    coords = np.array(dual.graph.vertex_coords)
    coords[3] = (coords[3] + (0.01, 0.0)) % 1.0
    moved = replace(dual, graph=dual.graph.with_coords(coords))
    report = verify_reciprocal(K7, moved, UNIFORM)
    assert report.angle_violations
    assert report.length_violations
    assert not report.passes
    assert len(report.to_frame()) >= 2


def test_verify_detects_negated_stress():
    dual = build_dual_drawing(K7, UNIFORM, ReciprocalMode.PARALLEL)
    report = verify_reciprocal(K7, dual, -UNIFORM.omega)
    assert not report.angle_violations
    assert not report.length_violations
    assert report.orientation_violations == list(range(21))


def test_dual_of_dual_is_in_equilibrium():
    dual = build_dual_drawing(K7, UNIFORM, ReciprocalMode.PARALLEL)
    star = dual_stress(UNIFORM)
    assert is_equilibrium(dual.graph, star, tol=1e-9)
    np.testing.assert_allclose(parallel_force_torus(dual.graph, star).basis, K7.torus.basis, atol=1e-9)


def test_positive_parallel_dual_is_embedded():
    dual = build_dual_drawing(K7, UNIFORM, ReciprocalMode.PARALLEL)
    assert is_embedding(dual.graph)
