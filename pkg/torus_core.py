"""
Flat torus graphs: combinatorial map, validation, displacement and homology matrices
"""
import logging
import math
import weakref
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from config import TorusConfig
from models import (AmbiguousRotationError, InvalidGraphError, TorusGraph,
                    ValidationReport)

logger = logging.getLogger(__name__)

_validity_cache: "weakref.WeakKeyDictionary[TorusGraph, ValidationReport]" = weakref.WeakKeyDictionary()


class NativeDrawing(NamedTuple):
    """Vertex points (V x 2) and edge displacements (2 x E) in native coordinates"""
    points: np.ndarray
    displacements: np.ndarray


class SpanningTree(NamedTuple):
    """BFS tree: visiting order, parent node and parent edge per node (-1 at the root and unreached)"""
    order: List[int]
    parent: np.ndarray
    parent_edge: np.ndarray


def _rotation_positions(g: TorusGraph) -> Dict[int, Tuple[int, int]]:
    """dart -> (vertex, position in the counterclockwise order)"""
    positions = {}
    for v, darts in enumerate(g.rotation):
        for i, d in enumerate(darts):
            positions[d] = (v, i)
    return positions


def face_orbits(g: TorusGraph) -> List[List[int]]:
    """
    Faces as dart orbits of d -> prev(rev(d)), the clockwise neighbour of the
    reversed dart. Each face lies to the left of its darts and is traced
    counterclockwise. Faces are numbered by their smallest dart, and every
    orbit starts at it.
    """
    if g.rotation is None:
        raise InvalidGraphError(ValidationReport(["rotation system missing"]))
    positions = _rotation_positions(g)
    seen = [False] * g.num_darts
    faces = []
    for start in range(g.num_darts):
        if seen[start]:
            continue
        orbit = []
        d = start
        while not seen[d]:
            seen[d] = True
            orbit.append(d)
            v, i = positions[g.rev(d)]
            darts = g.rotation[v]
            d = darts[(i - 1) % len(darts)]
        faces.append(orbit)
    return faces


def dart_face(g: TorusGraph) -> np.ndarray:
    """Index of the face on the left of every dart"""
    faces = np.full(g.num_darts, -1, dtype=int)
    for f, orbit in enumerate(face_orbits(g)):
        faces[orbit] = f
    return faces


def count_faces(g: TorusGraph) -> int:
    return len(face_orbits(g))


def spanning_tree(num_nodes: int, tails: Sequence[int], heads: Sequence[int], root: int = 0) -> SpanningTree:
    """Breadth-first spanning tree; neighbours are scanned in increasing edge index"""
    adjacency: List[List[Tuple[int, int]]] = [[] for _ in range(num_nodes)]
    for e, (t, h) in enumerate(zip(tails, heads)):
        adjacency[int(t)].append((e, int(h)))
        if int(h) != int(t):
            adjacency[int(h)].append((e, int(t)))

    parent = np.full(num_nodes, -1, dtype=int)
    parent_edge = np.full(num_nodes, -1, dtype=int)
    visited = np.zeros(num_nodes, dtype=bool)
    order = [root]
    visited[root] = True
    head = 0
    while head < len(order):
        u = order[head]
        head += 1
        for e, w in sorted(adjacency[u]):
            if not visited[w]:
                visited[w] = True
                parent[w] = u
                parent_edge[w] = e
                order.append(w)
    return SpanningTree(order, parent, parent_edge)


def _count_components(num_nodes: int, tails: np.ndarray, heads: np.ndarray) -> int:
    if num_nodes == 0:
        return 0
    data = np.ones(len(tails))
    adjacency = coo_matrix((data, (tails, heads)), shape=(num_nodes, num_nodes))
    components, _ = connected_components(adjacency, directed=False)
    return int(components)


def _raw_displacements(g: TorusGraph) -> np.ndarray:
    coords = g.vertex_coords
    forward = g.dart_homology[0::2]
    return (coords[g.edge_head] + forward - coords[g.edge_tail]).T


def validate(g: TorusGraph, tol: float = TorusConfig.ABS_TOL) -> ValidationReport:
    """List every violated torus graph invariant; the report is empty iff g is valid"""
    violations: List[str] = []
    V, E = g.num_vertices, g.num_edges

    if abs(g.torus.det) <= TorusConfig.DET_TOL:
        violations.append(f"degenerate torus: det = {g.torus.det:g}")

    coords = g.vertex_coords
    if not np.all(np.isfinite(coords)):
        violations.append("vertex coordinates must be finite")
    elif np.any(coords < 0) or np.any(coords >= 1):
        outside = sorted({int(v) for v in np.flatnonzero(np.any((coords < 0) | (coords >= 1), axis=1))})
        violations.append(f"vertices outside the reference square [0,1)^2: {outside}")

    if V == 0:
        violations.append("graph has no vertices")
        return ValidationReport(violations)

    endpoints_ok = True
    for name, ends in (("tail", g.edge_tail), ("head", g.edge_head)):
        bad = [int(e) for e in np.flatnonzero((ends < 0) | (ends >= V))]
        if bad:
            endpoints_ok = False
            violations.append(f"edge {name} index out of range on edges {bad}")

    asymmetric = [e for e in range(E) if np.any(g.dart_homology[2 * e + 1] != -g.dart_homology[2 * e])]
    if asymmetric:
        violations.append(f"homology not antisymmetric (lambda(rev d) != -lambda(d)) on edges {asymmetric}")

    rotation_ok = False
    if g.rotation is None:
        violations.append("rotation system missing")
    elif len(g.rotation) != V:
        violations.append(f"rotation lists {len(g.rotation)} vertices, graph has {V}")
    elif endpoints_ok:
        rotation_ok = True
        for v, darts in enumerate(g.rotation):
            expected = sorted(g.outgoing_darts(v))
            if sorted(darts) != expected:
                rotation_ok = False
                violations.append(f"rotation at vertex {v} is not a permutation of its outgoing darts")

    if not endpoints_ok:
        return ValidationReport(violations)

    components = _count_components(V, g.edge_tail, g.edge_head)
    if components != 1:
        violations.append(f"graph is not connected: {components} components")

    if rotation_ok:
        faces = face_orbits(g)
        euler = V - E + len(faces)
        if euler != 0:
            violations.append(f"Euler condition violated: V - E + F = {V} - {E} + {len(faces)} = {euler}")
        for f, orbit in enumerate(faces):
            total = g.dart_homology[orbit].sum(axis=0)
            if np.any(total != 0):
                violations.append(f"face {f} does not close: homology sum {tuple(int(x) for x in total)}")

    native = g.torus.to_native(_raw_displacements(g))
    zero = [int(e) for e in np.flatnonzero(np.linalg.norm(native, axis=0) <= tol)]
    if zero:
        violations.append(f"zero-length edges: {zero}")

    if violations:
        logger.debug(f"Graph {g.name or '<unnamed>'} has {len(violations)} violations")
    return ValidationReport(violations)


def require_valid(g: TorusGraph) -> TorusGraph:
    """Raise InvalidGraphError unless g passes validate; results are cached per graph object"""
    report = _validity_cache.get(g)
    if report is None:
        report = validate(g)
        _validity_cache[g] = report
    if not report.is_valid:
        raise InvalidGraphError(report)
    return g


def displacement_matrix(g: TorusGraph, check: bool = True) -> np.ndarray:
    """2 x E matrix; column e is coords(head) + lambda(e) - coords(tail) in reference coordinates"""
    if check:
        require_valid(g)
    return _raw_displacements(g)


def homology_matrix(g: TorusGraph, check: bool = True) -> np.ndarray:
    """2 x E integer matrix whose column e is the homology vector of the forward dart of e"""
    if check:
        require_valid(g)
    return np.array(g.dart_homology[0::2].T, dtype=int)


def dart_displacement(g: TorusGraph, d: int, delta: Optional[np.ndarray] = None) -> np.ndarray:
    """Reference displacement of a dart; reverse darts get the negated edge column"""
    if delta is None:
        delta = _raw_displacements(g)
    column = delta[:, d // 2]
    return column if d % 2 == 0 else -column


def native_coords(g: TorusGraph) -> NativeDrawing:
    """Vertex positions and edge displacements after applying the torus matrix"""
    require_valid(g)
    points = (g.torus.basis @ g.vertex_coords.T).T
    return NativeDrawing(points, g.torus.to_native(_raw_displacements(g)))


def rotation_from_geometry(g: TorusGraph, tol: float = TorusConfig.ABS_TOL) -> TorusGraph:
    """Set the rotation to the counterclockwise order of outgoing native directions, starting at angle 0"""
    native = g.torus.to_native(_raw_displacements(g))
    rotation = []
    for v in range(g.num_vertices):
        entries = []
        for d in g.outgoing_darts(v):
            vec = native[:, d // 2] if d % 2 == 0 else -native[:, d // 2]
            if np.linalg.norm(vec) <= tol:
                raise AmbiguousRotationError(v, (d, g.rev(d)))
            angle = math.atan2(vec[1], vec[0]) % (2 * math.pi)
            entries.append((angle, d, vec / np.linalg.norm(vec)))
        entries.sort(key=lambda item: (item[0], item[1]))
        for i, (_, d, unit) in enumerate(entries):
            if len(entries) < 2:
                break
            _, other, other_unit = entries[(i + 1) % len(entries)]
            if other != d and np.linalg.norm(unit - other_unit) <= tol:
                raise AmbiguousRotationError(v, (d, other))
        rotation.append(tuple(d for _, d, _ in entries))
    logger.debug(f"Derived rotation system for {g.num_vertices} vertices from geometry")
    return g.with_rotation(rotation)


def reversed_edge(g: TorusGraph, e: int) -> TorusGraph:
    """Same graph with edge e oriented the other way; its two dart ids swap roles"""
    tails = np.array(g.edge_tail)
    heads = np.array(g.edge_head)
    tails[e], heads[e] = g.edge_head[e], g.edge_tail[e]
    homology = np.array(g.dart_homology)
    homology[[2 * e, 2 * e + 1]] = homology[[2 * e + 1, 2 * e]]
    swap = {2 * e: 2 * e + 1, 2 * e + 1: 2 * e}
    rotation = None
    if g.rotation is not None:
        rotation = tuple(tuple(swap.get(d, d) for d in darts) for darts in g.rotation)
    return TorusGraph(g.torus, g.vertex_coords, tails, heads, homology, rotation, g.name)


def lattice_reduce(points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Split points into representatives in [0,1)^2 and integer lattice offsets"""
    points = np.asarray(points, dtype=float)
    offsets = np.floor(points)
    reduced = points - offsets
    wrapped = reduced >= 1.0
    reduced[wrapped] = 0.0
    offsets[wrapped] += 1
    return reduced, offsets.astype(int)


def shortest_shift(raw: Sequence[float], tol: float = TorusConfig.ABS_TOL) -> Tuple[int, int]:
    """
    Homology vector making raw + shift the shortest representative inside
    (-1,1)^2; ties go to the lexicographically smallest shift.
    """
    raw = np.asarray(raw, dtype=float)
    best = None
    for sx in (-1, 0, 1):
        for sy in (-1, 0, 1):
            candidate = raw + (sx, sy)
            if np.any(np.abs(candidate) >= 1):
                continue
            length = float(np.linalg.norm(candidate))
            if best is None or length < best[0] - tol:
                best = (length, (sx, sy))
    if best is None:
        raise ValueError(f"No representative of {tuple(raw)} lies inside (-1,1)^2")
    return best[1]
