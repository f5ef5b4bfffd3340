#!/usr/bin/env python3
"""
Tests for circulations, cocirculations and homology classes
"""
import os
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

# Add the project directory to the Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from flows import (check_harmonic_identity, cocirculation_rows, cycle_basis, face_sums,
                   homology_class, is_circulation, is_cocirculation, random_circulation,
                   vertex_incidence)
from instances import grid_graph, k7_graph
from models import CocirculationError, FlowLengthError, NotCirculationError
from torus_core import displacement_matrix

K7 = k7_graph()
K7_BASIS = cycle_basis(K7)


def test_cycle_basis_size_and_conservation():
    assert len(K7_BASIS) == K7.num_edges - K7.num_vertices + 1
    for circulation in K7_BASIS:
        assert is_circulation(K7, circulation)


def test_vertex_incidence_signs():
    incidence = vertex_incidence(K7)
    assert incidence.shape == (7, 21)
    assert incidence[K7.edge_head[0], 0] == 1
    assert incidence[K7.edge_tail[0], 0] == -1
    np.testing.assert_array_equal(incidence.sum(axis=0), np.zeros(21))


def test_loop_class_on_one_vertex_map():
    g = grid_graph(1)
    assert homology_class(g, [1.0, 0.0]).class_vec.tolist() == [1.0, 0.0]
    assert homology_class(g, [2.0, -3.0]).class_vec.tolist() == [2.0, -3.0]


def test_non_circulation_rejected():
    phi = np.zeros(21)
    phi[0] = 1.0
    assert not is_circulation(K7, phi)
    with pytest.raises(NotCirculationError):
        homology_class(K7, phi)


def test_wrong_length_rejected():
    with pytest.raises(FlowLengthError):
        is_circulation(K7, np.zeros(20))


def test_k7_class_cycles():
    # The seven edges of one class close up after wrapping around the torus
    phi = np.zeros(21)
    phi[0:7] = 1.0
    assert is_circulation(K7, phi)
    assert homology_class(K7, phi).class_vec.tolist() == [1.0, 3.0]
    assert homology_class(K7, phi).is_integral()


def test_harmonic_identity_on_basis():
    for circulation in K7_BASIS:
        assert check_harmonic_identity(K7, circulation)


def test_harmonic_identity_detects_corrupted_homology():
    circulation = K7_BASIS[0]
    e = int(np.flatnonzero(circulation.phi)[0])
    homology = np.array(K7.dart_homology)
    homology[2 * e] += (1, 0)
    homology[2 * e + 1] -= (1, 0)
    corrupted = K7.with_homology(homology)
    assert not check_harmonic_identity(corrupted, circulation, displacement=displacement_matrix(K7))


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-10, 10), min_size=2, max_size=2),
       st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_homology_class_is_linear(coefficients, seed):
    rng = np.random.default_rng(seed)
    a, b = coefficients
    phi = random_circulation(K7, rng, K7_BASIS).phi
    psi = random_circulation(K7, rng, K7_BASIS).phi
    combined = homology_class(K7, a * phi + b * psi, tol=1e-7).class_vec
    separate = a * homology_class(K7, phi, tol=1e-7).class_vec + b * homology_class(K7, psi, tol=1e-7).class_vec
    np.testing.assert_allclose(combined, separate, atol=1e-7)


@pytest.mark.parametrize("g", [K7, grid_graph(1), grid_graph(3)], ids=["k7", "grid_1", "grid_3"])
def test_homology_rows_are_cocirculations(g):
    rows = cocirculation_rows(g)
    assert rows[0].rotated_class == (1, 0)
    assert rows[1].standard_class == (-1, 0)
    for row in rows:
        assert is_cocirculation(g, row.theta)


def test_non_cocirculation():
    theta = np.zeros(21)
    theta[0] = 1.0
    assert not is_cocirculation(K7, theta)
    assert np.count_nonzero(face_sums(K7, theta)) == 2


def test_incremented_homology_entry_breaks_cocirculation_rows():
    homology = np.array(K7.dart_homology)
    homology[0] += (1, 0)
    homology[1] -= (1, 0)
    with pytest.raises(CocirculationError):
        cocirculation_rows(K7.with_homology(homology))
