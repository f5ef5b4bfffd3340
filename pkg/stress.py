"""
Equilibrium stresses: verification, stress space, covariance and harmonic positioning
"""
import logging
from typing import Optional, Sequence, Union

import numpy as np
from scipy.linalg import null_space
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import spsolve

from config import TorusConfig
from models import (CovarianceMatrix, EquilibriumResult, FlatTorus, FlowLengthError,
                    SingularLaplacianError, StressVector, TorusGraph, TorusGraphError)
from performance import timed
from torus_core import (displacement_matrix, lattice_reduce, require_valid,
                        rotation_from_geometry)

logger = logging.getLogger(__name__)

StressLike = Union[StressVector, np.ndarray, Sequence[float]]


def stress_weights(g: TorusGraph, omega: StressLike) -> np.ndarray:
    """Plain weight array of length E"""
    weights = omega.omega if isinstance(omega, StressVector) else np.asarray(omega, dtype=float).reshape(-1)
    if len(weights) != g.num_edges:
        raise FlowLengthError(g.num_edges, len(weights))
    return np.asarray(weights, dtype=float)


def equilibrium_matrix(g: TorusGraph) -> np.ndarray:
    """
    2V x E matrix A with (A omega)[2p:2p+2] the weighted sum of the
    displacements of the darts leaving vertex p.
    """
    delta = displacement_matrix(g)
    matrix = np.zeros((2 * g.num_vertices, g.num_edges))
    for e in range(g.num_edges):
        t, h = g.edge_tail[e], g.edge_head[e]
        matrix[2 * t:2 * t + 2, e] += delta[:, e]
        matrix[2 * h:2 * h + 2, e] -= delta[:, e]
    return matrix


def equilibrium_residuals(g: TorusGraph, omega: StressLike) -> np.ndarray:
    """V x 2 residual force at every vertex, in reference coordinates"""
    weights = stress_weights(g, omega)
    return (equilibrium_matrix(g) @ weights).reshape(-1, 2)


def is_equilibrium(g: TorusGraph, omega: StressLike, tol: float = TorusConfig.ABS_TOL,
                   allow_zero: bool = False) -> EquilibriumResult:
    """
    Equilibrium test with per-vertex residuals (infinity norm).

    The tolerance is scaled by max(1, sum |omega_e| |Delta_e|). Zero weights
    raise ZeroStressError unless allow_zero is set.
    """
    if not allow_zero and not isinstance(omega, StressVector):
        omega = StressVector(stress_weights(g, omega))
    weights = stress_weights(g, omega)
    residuals = equilibrium_residuals(g, weights)
    lengths = np.linalg.norm(displacement_matrix(g), axis=0)
    scaled_tol = tol * max(1.0, float(np.sum(np.abs(weights) * lengths)))
    max_residual = float(np.max(np.abs(residuals), initial=0.0))
    return EquilibriumResult(max_residual <= scaled_tol, residuals, max_residual, scaled_tol)


def covariance(g: TorusGraph, omega: StressLike) -> CovarianceMatrix:
    """alpha, beta, gamma of Delta Omega Delta^T from reference displacements"""
    weights = stress_weights(g, omega)
    delta = displacement_matrix(g)
    x, y = delta[0], delta[1]
    return CovarianceMatrix(alpha=float(np.sum(weights * x * x)),
                            beta=float(np.sum(weights * y * y)),
                            gamma=float(np.sum(weights * x * y)))


@timed
def stress_space(g: TorusGraph, cutoff: float = TorusConfig.SVD_CUTOFF) -> np.ndarray:
    """Orthonormal basis of the equilibrium stresses, one row per basis vector"""
    matrix = equilibrium_matrix(g)
    basis = null_space(matrix, rcond=cutoff).T
    logger.info(f"Stress space of {g.name or 'graph'} has dimension {len(basis)}")
    return basis


def _components(g: TorusGraph) -> int:
    adjacency = coo_matrix((np.ones(g.num_edges), (g.edge_tail, g.edge_head)),
                           shape=(g.num_vertices, g.num_vertices))
    components, _ = connected_components(adjacency, directed=False)
    return int(components)


def harmonic_position(blueprint: TorusGraph, omega: StressLike,
                      torus: Optional[FlatTorus] = None) -> TorusGraph:
    """
    Place the vertices of a blueprint (combinatorial map plus dart homology)
    so that omega is an equilibrium stress, with vertex 0 pinned at the origin.

    Solves the weighted Laplacian system L x = b where
    b_p = sum of omega_e lambda(d) over darts d leaving p. Coordinates are
    then reduced into [0,1)^2 and the homology adjusted so displacements are
    unchanged.
    """
    weights = stress_weights(blueprint, omega)
    if not StressVector(weights).is_positive:
        raise TorusGraphError("Harmonic positioning needs a strictly positive stress")
    V = blueprint.num_vertices
    components = _components(blueprint)
    if components != 1:
        raise SingularLaplacianError(components)

    rows, cols, values = [], [], []
    rhs = np.zeros((V, 2))
    for e in range(blueprint.num_edges):
        t, h = int(blueprint.edge_tail[e]), int(blueprint.edge_head[e])
        w = weights[e]
        lam = blueprint.edge_shift(e)
        rhs[t] += w * lam
        rhs[h] -= w * lam
        if t == h:
            continue
        rows += [t, h, t, h]
        cols += [t, h, h, t]
        values += [w, w, -w, -w]
    laplacian = coo_matrix((values, (rows, cols)), shape=(V, V)).tocsc()

    positions = np.zeros((V, 2))
    if V > 1:
        reduced = laplacian[1:, 1:]
        for axis in range(2):
            positions[1:, axis] = spsolve(reduced, rhs[1:, axis])
    if not np.all(np.isfinite(positions)):
        raise SingularLaplacianError(components)

    coords, offsets = lattice_reduce(positions)
    homology = np.array(blueprint.dart_homology)
    for e in range(blueprint.num_edges):
        t, h = blueprint.edge_tail[e], blueprint.edge_head[e]
        homology[2 * e] = blueprint.dart_homology[2 * e] + offsets[h] - offsets[t]
        homology[2 * e + 1] = -homology[2 * e]

    placed = TorusGraph(torus or blueprint.torus, coords, blueprint.edge_tail, blueprint.edge_head,
                        homology, blueprint.rotation, blueprint.name)
    if placed.rotation is None:
        placed = rotation_from_geometry(placed)
    require_valid(placed)
    check = is_equilibrium(placed, weights, tol=TorusConfig.STRESS_SPACE_TOL)
    logger.debug(f"Harmonic position of {blueprint.name or 'blueprint'}: residual {check.max_residual:.3g}")
    if not check.is_equilibrium:
        logger.warning(f"Harmonic position residual {check.max_residual:.3g} above {check.tolerance:.3g}")
    return placed
