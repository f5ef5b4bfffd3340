"""
Orthogonal and parallel reciprocal diagrams on flat tori
"""
import logging
import math
from typing import Optional, Union

import numpy as np

from config import TorusConfig
from models import (CovarianceMatrix, CriterionResult, DualDrawing, FlatTorus,
                    InvalidGraphError, NonEquilibriumError, NonIntegralHomologyError,
                    NoReciprocalTorus, ReciprocalMode, ReciprocityReport, StressVector,
                    TorusFamily, TorusGraph)
from performance import timed
from stress import StressLike, covariance, is_equilibrium, stress_weights
from torus_core import (dart_face, displacement_matrix, face_orbits, homology_matrix,
                        lattice_reduce, require_valid, spanning_tree, validate)
from utils import format_matrix, format_number

logger = logging.getLogger(__name__)

J = np.array(TorusConfig.QUARTER_TURN)

TorusLike = Union[FlatTorus, np.ndarray]


def _as_stress(g: TorusGraph, omega: StressLike) -> StressVector:
    return omega if isinstance(omega, StressVector) else StressVector(stress_weights(g, omega))


def _as_torus(torus: TorusLike) -> FlatTorus:
    return torus if isinstance(torus, FlatTorus) else FlatTorus(np.asarray(torus, dtype=float))


def _require_equilibrium(g: TorusGraph, omega: StressVector, tol: float) -> None:
    check = is_equilibrium(g, omega, tol=tol)
    if not check.is_equilibrium:
        raise NonEquilibriumError(check.max_residual)


def parallel_criterion(g: TorusGraph, omega: StressLike,
                       tol: float = TorusConfig.ABS_TOL) -> CriterionResult:
    """omega is a parallel reciprocal stress on every flat torus iff Delta Omega Delta^T = I"""
    omega = _as_stress(g, omega)
    _require_equilibrium(g, omega, tol)
    cov = covariance(g, omega)
    holds = float(np.max(np.abs(cov.matrix - np.eye(2)))) <= tol
    logger.debug(f"Parallel criterion: covariance {format_matrix(cov.matrix)} -> {holds}")
    return CriterionResult(holds, cov)


def orthogonal_torus_family(g: TorusGraph, omega: StressLike,
                            tol: float = TorusConfig.ABS_TOL) -> Union[TorusFamily, NoReciprocalTorus]:
    """
    Tori sigma R [[beta, -gamma], [0, 1]] on which omega is an orthogonal
    reciprocal stress. A positive alpha beta - gamma^2 other than 1 is fixed
    by scaling omega by 1 / sqrt(alpha beta - gamma^2); a non-positive one
    admits no torus at all.
    """
    omega = _as_stress(g, omega)
    _require_equilibrium(g, omega, tol)
    cov = covariance(g, omega)
    det = cov.determinant

    if abs(det - 1.0) <= tol:
        scale = 1.0
    elif det > tol:
        scale = 1.0 / math.sqrt(det)
        logger.info(f"alpha*beta - gamma^2 = {format_number(det)}; rescaling stress by {format_number(scale)}")
    else:
        reason = (f"alpha*beta - gamma^2 = {format_number(det)} <= 0: "
                  "no flat torus and no scaling of this stress admits an orthogonal reciprocal diagram")
        logger.info(reason)
        return NoReciprocalTorus(reason, det, cov)

    if scale != 1.0:
        omega = omega.scaled(scale)
        cov = CovarianceMatrix(cov.alpha * scale, cov.beta * scale, cov.gamma * scale)
    base = np.array([[cov.beta, -cov.gamma], [0.0, 1.0]])
    return TorusFamily(base, ReciprocalMode.ORTHOGONAL, "sigma > 0, rotation R: M = sigma R base",
                       omega, cov, scale)


def parallel_torus_family(g: TorusGraph, omega: StressLike,
                          tol: float = TorusConfig.ABS_TOL) -> Union[TorusFamily, NoReciprocalTorus]:
    """
    Every nonsingular torus when Delta Omega Delta^T = I. A covariance that
    is a positive multiple s I is fixed by scaling omega by 1/s.
    """
    omega = _as_stress(g, omega)
    criterion = parallel_criterion(g, omega, tol)
    cov = criterion.covariance
    scale = 1.0
    if not criterion.holds:
        is_multiple = abs(cov.gamma) <= tol and abs(cov.alpha - cov.beta) <= tol and cov.alpha > tol
        if not is_multiple:
            reason = (f"Delta Omega Delta^T = {format_matrix(cov.matrix)} is not a positive multiple of I: "
                      "no flat torus admits a parallel reciprocal diagram")
            logger.info(reason)
            return NoReciprocalTorus(reason, cov.determinant, cov)
        scale = 1.0 / cov.alpha
        omega = omega.scaled(scale)
        cov = CovarianceMatrix(cov.alpha * scale, cov.beta * scale, cov.gamma * scale)
        logger.info(f"Covariance is {format_number(1 / scale)} I; rescaling stress by {format_number(scale)}")
    return TorusFamily(np.eye(2), ReciprocalMode.PARALLEL, "any nonsingular M", omega, cov, scale)


def torus_family(g: TorusGraph, omega: StressLike, mode: ReciprocalMode,
                 tol: float = TorusConfig.ABS_TOL) -> Union[TorusFamily, NoReciprocalTorus]:
    if mode is ReciprocalMode.PARALLEL:
        return parallel_torus_family(g, omega, tol)
    return orthogonal_torus_family(g, omega, tol)


def native_dual_displacements(g: TorusGraph, omega: StressLike, mode: ReciprocalMode) -> np.ndarray:
    """E x 2 native dual rows: (M Delta Omega)^T, quarter-turned for orthogonal mode"""
    weights = stress_weights(g, omega)
    native = g.torus.basis @ displacement_matrix(g) * weights
    if mode is ReciprocalMode.ORTHOGONAL:
        native = J @ native
    return native.T


def dual_displacements(g: TorusGraph, omega: StressLike, mode: ReciprocalMode,
                       target_torus: Optional[TorusLike] = None) -> np.ndarray:
    """
    E x 2 dual displacement rows.

    Without a target torus: parallel mode gives the reference rows
    Omega Delta^T, orthogonal mode the native rows (J M Delta Omega)^T.
    With a target torus N: reference rows of the native rows on T_N.
    """
    if target_torus is None:
        if mode is ReciprocalMode.PARALLEL:
            return (displacement_matrix(g) * stress_weights(g, omega)).T
        return native_dual_displacements(g, omega, mode)
    target = _as_torus(target_torus)
    return native_dual_displacements(g, omega, mode) @ target.inverse.T


def parallel_force_torus(g: TorusGraph, omega: StressLike,
                         tol: float = TorusConfig.ABS_TOL) -> FlatTorus:
    """N = M Delta Omega Delta^T"""
    omega = _as_stress(g, omega)
    _require_equilibrium(g, omega, tol)
    return FlatTorus(g.torus.basis @ covariance(g, omega).matrix)


def orthogonal_force_torus(g: TorusGraph, omega: StressLike,
                           tol: float = TorusConfig.ABS_TOL) -> FlatTorus:
    """N = J M Delta Omega Delta^T J^T"""
    omega = _as_stress(g, omega)
    _require_equilibrium(g, omega, tol)
    return FlatTorus(J @ g.torus.basis @ covariance(g, omega).matrix @ J.T)


def force_torus(g: TorusGraph, omega: StressLike, mode: ReciprocalMode,
                tol: float = TorusConfig.ABS_TOL) -> FlatTorus:
    if mode is ReciprocalMode.PARALLEL:
        return parallel_force_torus(g, omega, tol)
    return orthogonal_force_torus(g, omega, tol)


@timed
def build_dual_drawing(g: TorusGraph, omega: StressLike, mode: ReciprocalMode,
                       target_torus: Optional[TorusLike] = None,
                       tol: float = TorusConfig.ABS_TOL,
                       homology_tol: float = TorusConfig.HOMOLOGY_TOL) -> DualDrawing:
    """
    Draw G* on the target torus (the force torus by default).

    Dual vertex f sits on face f of G; dual edge k runs from the face on the
    right of primal edge k to the face on its left, and dual dart ids equal
    primal dart ids. Vertices are placed by integrating the reference dual
    rows along a BFS tree of G* from face 0 at the origin; every other dual
    edge must then close up to an integral homology vector.
    """
    require_valid(g)
    omega = _as_stress(g, omega)
    _require_equilibrium(g, omega, tol)
    target = force_torus(g, omega, mode, tol) if target_torus is None else _as_torus(target_torus)

    reference = dual_displacements(g, omega, mode, target)
    faces = face_orbits(g)
    left = dart_face(g)
    tails = np.array([left[2 * k + 1] for k in range(g.num_edges)], dtype=int)
    heads = np.array([left[2 * k] for k in range(g.num_edges)], dtype=int)

    tree = spanning_tree(len(faces), tails, heads)
    if len(tree.order) != len(faces):
        raise InvalidGraphError(validate(g))
    positions = np.zeros((len(faces), 2))
    for f in tree.order[1:]:
        parent, e = tree.parent[f], tree.parent_edge[f]
        step = reference[e] if tails[e] == parent else -reference[e]
        positions[f] = positions[parent] + step

    coords, _ = lattice_reduce(positions)
    raw = reference - (coords[heads] - coords[tails])
    rounded = np.round(raw)
    gap = np.abs(raw - rounded)
    bad = np.flatnonzero(np.any(gap > homology_tol, axis=1))
    if len(bad):
        e = int(bad[0])
        raise NonIntegralHomologyError(e, raw[e])

    homology = np.zeros((2 * g.num_edges, 2), dtype=int)
    homology[0::2] = rounded.astype(int)
    homology[1::2] = -rounded.astype(int)
    rotation = tuple(tuple(d ^ 1 for d in orbit) for orbit in faces)
    dual_graph = TorusGraph(target, coords, tails, heads, homology, rotation,
                            f"{g.name}*" if g.name else "dual")
    report = validate(dual_graph)
    if not report.is_valid:
        raise InvalidGraphError(report)

    logger.info(f"Built {mode.value} dual of {g.name or 'graph'}: "
                f"{len(faces)} vertices on torus {format_matrix(target.basis)}")
    return DualDrawing(dual_graph, mode, np.arange(g.num_edges), g.torus, omega,
                       tuple(tuple(orbit) for orbit in faces))


def verify_reciprocal(g: TorusGraph, dual: DualDrawing, omega: StressLike,
                      tol: float = TorusConfig.ABS_TOL,
                      mode: Optional[ReciprocalMode] = None) -> ReciprocityReport:
    """
    Per-edge check of the angle law (normalized dot or cross product), the
    length law |e*| = |omega_e| |e| and the orientation of each dual edge,
    in native coordinates. mode defaults to the dual's own mode.
    """
    mode = mode or dual.mode
    weights = stress_weights(g, omega)
    primal = g.torus.to_native(displacement_matrix(g, check=False))
    dual_native = dual.graph.torus.to_native(displacement_matrix(dual.graph, check=False))
    report = ReciprocityReport(mode=mode, same_lattice=g.torus.same_lattice(dual.graph.torus))

    for k, e in enumerate(dual.edge_map):
        e = int(e)
        p, q = primal[:, e], dual_native[:, k]
        norm_p, norm_q = float(np.linalg.norm(p)), float(np.linalg.norm(q))
        if mode is ReciprocalMode.ORTHOGONAL:
            angle = abs(float(p @ q)) / max(norm_p * norm_q, TorusConfig.DET_TOL)
            expected = weights[e] * (J @ p)
        else:
            angle = abs(float(p[0] * q[1] - p[1] * q[0])) / max(norm_p * norm_q, TorusConfig.DET_TOL)
            expected = weights[e] * p
        target_length = abs(weights[e]) * norm_p
        length = abs(norm_q - target_length) / max(1.0, target_length)

        if angle > tol:
            report.angle_violations.append((k, angle))
        if length > tol:
            report.length_violations.append((k, length))
        if angle <= tol and float(q @ expected) < 0:
            report.orientation_violations.append(k)
        report.max_violation = max(report.max_violation, angle, length)

    logger.debug(f"Reciprocity check ({mode.value}): max violation {report.max_violation:.3g}")
    return report


def dual_stress(omega: StressLike) -> StressVector:
    """omega*_{e*} = 1 / omega_e"""
    if isinstance(omega, StressVector):
        return omega.reciprocal()
    return StressVector(np.asarray(omega, dtype=float)).reciprocal()


def dual_cohomology_pattern(g: TorusGraph, dual: DualDrawing) -> np.ndarray:
    """
    Lambda Delta*_ref: the identity for parallel duals and [[0,1],[-1,0]]
    for orthogonal duals on the force torus.
    """
    lam = homology_matrix(g)[:, dual.edge_map]
    return lam @ displacement_matrix(dual.graph).T


def expected_cohomology_pattern(mode: ReciprocalMode) -> np.ndarray:
    if mode is ReciprocalMode.PARALLEL:
        return np.eye(2)
    return J.T.copy()
