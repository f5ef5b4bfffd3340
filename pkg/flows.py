"""
Circulations, cocirculations and their (co)homology classes
"""
import logging
from typing import List, Optional, Tuple, Union

import numpy as np

from config import TorusConfig
from models import (Circulation, Cocirculation, CocirculationError, FlowLengthError,
                    HomologyClass, NotCirculationError, TorusGraph)
from torus_core import (face_orbits, displacement_matrix, homology_matrix,
                        require_valid, spanning_tree)

logger = logging.getLogger(__name__)

FlowLike = Union[Circulation, np.ndarray, List[float]]


def _edge_vector(g: TorusGraph, values: FlowLike) -> np.ndarray:
    if isinstance(values, Circulation):
        values = values.phi
    vector = np.asarray(values, dtype=float).reshape(-1)
    if len(vector) != g.num_edges:
        raise FlowLengthError(g.num_edges, len(vector))
    return vector


def vertex_incidence(g: TorusGraph) -> np.ndarray:
    """V x E signed incidence: +1 at the head, -1 at the tail, 0 for loops"""
    incidence = np.zeros((g.num_vertices, g.num_edges))
    for e in range(g.num_edges):
        incidence[g.edge_head[e], e] += 1
        incidence[g.edge_tail[e], e] -= 1
    return incidence


def circulation_residual(g: TorusGraph, phi: FlowLike) -> float:
    """Largest net flow into any vertex"""
    phi = _edge_vector(g, phi)
    if g.num_vertices == 0:
        return 0.0
    return float(np.max(np.abs(vertex_incidence(g) @ phi)))


def is_circulation(g: TorusGraph, phi: FlowLike, tol: float = TorusConfig.ABS_TOL) -> bool:
    """True iff flow is conserved at every vertex within tol"""
    return circulation_residual(g, phi) <= tol


def homology_class(g: TorusGraph, phi: FlowLike, tol: float = TorusConfig.ABS_TOL) -> HomologyClass:
    """[phi] = Lambda phi for a circulation phi"""
    vector = _edge_vector(g, phi)
    residual = circulation_residual(g, vector)
    if residual > tol:
        raise NotCirculationError(residual)
    return HomologyClass(homology_matrix(g) @ vector)


def check_harmonic_identity(g: TorusGraph, phi: FlowLike, tol: float = 1e-10,
                            displacement: Optional[np.ndarray] = None) -> bool:
    """
    True iff ||Delta phi - Lambda phi||_inf <= tol.

    displacement may be supplied to test the homology data of g against an
    independently known displacement matrix.
    """
    vector = _edge_vector(g, phi)
    delta = displacement_matrix(g, check=False) if displacement is None else np.asarray(displacement)
    lam = homology_matrix(g, check=False)
    gap = float(np.max(np.abs(delta @ vector - lam @ vector), initial=0.0))
    return gap <= tol


def cycle_basis(g: TorusGraph) -> List[Circulation]:
    """
    Fundamental cycles of a BFS spanning tree rooted at vertex 0, one per
    non-tree edge in increasing edge order.
    """
    require_valid(g)
    tree = spanning_tree(g.num_vertices, g.edge_tail, g.edge_head)

    # Signed flow carrying one unit from each vertex up to the root
    to_root = np.zeros((g.num_vertices, g.num_edges))
    for v in tree.order[1:]:
        p, e = tree.parent[v], tree.parent_edge[v]
        to_root[v] = to_root[p]
        to_root[v, e] += -1.0 if g.edge_tail[e] == p else 1.0

    tree_edges = set(int(e) for e in tree.parent_edge if e >= 0)
    basis = []
    for e in range(g.num_edges):
        if e in tree_edges:
            continue
        phi = to_root[g.edge_head[e]] - to_root[g.edge_tail[e]]
        phi[e] += 1.0
        basis.append(Circulation(phi))
    logger.debug(f"Cycle basis of {g.name or 'graph'}: {len(basis)} circulations")
    return basis


def random_circulation(g: TorusGraph, rng: np.random.Generator,
                       basis: Optional[List[Circulation]] = None) -> Circulation:
    """Gaussian combination of the fundamental cycles"""
    basis = cycle_basis(g) if basis is None else basis
    coefficients = rng.standard_normal(len(basis))
    phi = np.zeros(g.num_edges)
    for c, circulation in zip(coefficients, basis):
        phi += c * circulation.phi
    return Circulation(phi)


def face_sums(g: TorusGraph, theta: FlowLike) -> np.ndarray:
    """Signed sum of theta around every face boundary"""
    theta = _edge_vector(g, theta)
    sums = []
    for orbit in face_orbits(g):
        sums.append(sum(theta[d // 2] if d % 2 == 0 else -theta[d // 2] for d in orbit))
    return np.array(sums, dtype=float)


def is_cocirculation(g: TorusGraph, theta: FlowLike, tol: float = TorusConfig.ABS_TOL) -> bool:
    """True iff theta sums to zero around every face"""
    sums = face_sums(g, theta)
    return bool(np.all(np.abs(sums) <= tol))


def cocirculation_rows(g: TorusGraph) -> Tuple[Cocirculation, Cocirculation]:
    """
    Rows of the homology matrix as cocirculations, tagged with their
    cohomology classes in the rotated dual and in the standard dual.
    """
    lam = homology_matrix(g, check=False)
    rows = []
    for r in range(2):
        sums = face_sums(g, lam[r])
        bad = np.flatnonzero(np.abs(sums) > TorusConfig.ABS_TOL)
        if len(bad):
            raise CocirculationError(int(bad[0]), r, float(sums[bad[0]]))
        rows.append(Cocirculation(lam[r].astype(float),
                                  TorusConfig.ROTATED_COCYCLE_CLASSES[r],
                                  TorusConfig.STANDARD_COCYCLE_CLASSES[r]))
    return rows[0], rows[1]
