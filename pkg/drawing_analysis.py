"""
Embedding tests for torus drawings: coincident vertices, crossings, overlaps
and self-intersecting faces, all decided in the universal cover
"""
import logging
from itertools import product
from typing import Iterator, List, Optional, Tuple

import numpy as np

from config import TorusConfig
from models import (DegeneracyReport, EdgeCrossing, EdgeOverlap, FacePolygon,
                    NonClosingFaceError, TorusGraph, VertexCoincidence, VertexEdgeContact)
from performance import timed
from torus_core import dart_displacement, displacement_matrix, face_orbits, require_valid

logger = logging.getLogger(__name__)


def _cross(a: np.ndarray, b: np.ndarray) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


def segment_relation(p0: np.ndarray, p1: np.ndarray, q0: np.ndarray, q1: np.ndarray,
                     tol: float = TorusConfig.ABS_TOL) -> Optional[Tuple[str, float, float]]:
    """
    Classify how segment p0p1 meets segment q0q1.

    Returns ("cross", s, t) for a crossing interior to both segments,
    ("overlap", length, 0) for collinear segments sharing a piece of positive
    length, ("touch", s, t) when they meet only at an endpoint of one of them,
    and None when they are disjoint. s and t are the parameters along p and q.
    """
    d1, d2 = p1 - p0, q1 - q0
    len1, len2 = float(np.linalg.norm(d1)), float(np.linalg.norm(d2))
    if len1 <= tol or len2 <= tol:
        return None
    offset = q0 - p0
    denom = _cross(d1, d2)

    if abs(denom) <= tol * len1 * len2:
        if abs(_cross(d1, offset)) / len1 > tol:
            return None
        s0 = float(offset @ d1) / len1 ** 2
        s1 = float((q1 - p0) @ d1) / len1 ** 2
        lo, hi = max(0.0, min(s0, s1)), min(1.0, max(s0, s1))
        shared = (hi - lo) * len1
        if shared > tol:
            return ("overlap", shared, 0.0)
        if shared >= -tol:
            return ("touch", min(max(lo, 0.0), 1.0), 0.0)
        return None

    s = _cross(offset, d2) / denom
    t = _cross(offset, d1) / denom
    slack_s, slack_t = tol / len1, tol / len2
    if not (-slack_s <= s <= 1 + slack_s and -slack_t <= t <= 1 + slack_t):
        return None
    if slack_s < s < 1 - slack_s and slack_t < t < 1 - slack_t:
        return ("cross", s, t)
    return ("touch", s, t)


def _offset_range(low: np.ndarray, high: np.ndarray, other_low: np.ndarray,
                  other_high: np.ndarray, slack: float) -> Iterator[Tuple[int, int]]:
    """Integer shifts k whose translate of the other box meets [low, high]"""
    start = np.ceil(low - other_high - slack).astype(int)
    stop = np.floor(high - other_low + slack).astype(int)
    return product(range(start[0], stop[0] + 1), range(start[1], stop[1] + 1))


def _reference_slack(g: TorusGraph, tol: float) -> float:
    return tol * float(np.linalg.norm(g.torus.inverse, 2)) + 1e-12


def _coincident_vertices(g: TorusGraph, tol: float) -> List[VertexCoincidence]:
    coords = g.vertex_coords
    found = []
    for a in range(g.num_vertices):
        for b in range(a + 1, g.num_vertices):
            shift = np.round(coords[a] - coords[b])
            gap = g.torus.basis @ (coords[b] + shift - coords[a])
            if np.linalg.norm(gap) <= tol:
                found.append(VertexCoincidence(a, b, (int(shift[0]), int(shift[1]))))
    return found


def _edge_pairs(g: TorusGraph, delta: np.ndarray, tol: float):
    crossings, overlaps = [], []
    slack = _reference_slack(g, tol)
    starts = g.vertex_coords[g.edge_tail]
    ends = starts + delta.T
    lows, highs = np.minimum(starts, ends), np.maximum(starts, ends)
    basis = g.torus.basis

    for a in range(g.num_edges):
        p0, p1 = basis @ starts[a], basis @ ends[a]
        for b in range(a, g.num_edges):
            for k in _offset_range(lows[a], highs[a], lows[b], highs[b], slack):
                if a == b and k <= (0, 0):
                    continue
                shift = np.array(k, dtype=float)
                q0, q1 = basis @ (starts[b] + shift), basis @ (ends[b] + shift)
                relation = segment_relation(p0, p1, q0, q1, tol)
                if relation is None:
                    continue
                kind, first, second = relation
                if kind == "cross":
                    crossings.append(EdgeCrossing(a, b, k, first, second))
                elif kind == "overlap":
                    overlaps.append(EdgeOverlap(a, b, k, first))
    return crossings, overlaps


def _vertex_edge_contacts(g: TorusGraph, delta: np.ndarray, tol: float) -> List[VertexEdgeContact]:
    contacts = []
    slack = _reference_slack(g, tol)
    basis = g.torus.basis
    for e in range(g.num_edges):
        start = g.vertex_coords[g.edge_tail[e]]
        end = start + delta[:, e]
        low, high = np.minimum(start, end), np.maximum(start, end)
        p0, p1 = basis @ start, basis @ end
        direction = p1 - p0
        length = float(np.linalg.norm(direction))
        for v in range(g.num_vertices):
            point = g.vertex_coords[v]
            for k in _offset_range(low, high, point, point, slack):
                q = basis @ (point + np.array(k, dtype=float))
                t = float((q - p0) @ direction) / length ** 2
                if abs(_cross(direction, q - p0)) / length > tol:
                    continue
                if t * length <= tol or (1 - t) * length <= tol:
                    continue
                contacts.append(VertexEdgeContact(v, e, k, t))
    return contacts


def face_polygons(g: TorusGraph, tol: float = TorusConfig.ABS_TOL) -> List[FacePolygon]:
    """Every face boundary lifted to the universal cover, starting at the tail of its smallest dart"""
    require_valid(g)
    delta = displacement_matrix(g)
    polygons = []
    for f, orbit in enumerate(face_orbits(g)):
        point = np.array(g.vertex_coords[g.tail(orbit[0])], dtype=float)
        points = []
        for d in orbit:
            points.append(point)
            point = point + dart_displacement(g, d, delta)
        reference = np.array(points)
        gap = float(np.linalg.norm(g.torus.basis @ (point - reference[0])))
        if gap > tol:
            raise NonClosingFaceError(f, gap)
        polygons.append(FacePolygon(f, tuple(orbit), reference, (g.torus.basis @ reference.T).T, gap))
    return polygons


def polygon_self_intersects(points: np.ndarray, tol: float = TorusConfig.ABS_TOL) -> bool:
    """
    True iff a closed polygon is not simple: non-adjacent sides meet, adjacent
    sides fold back over each other, or two corners coincide.
    """
    points = np.asarray(points, dtype=float)
    n = len(points)
    if n < 3:
        return n == 2
    for i in range(n):
        for j in range(i + 1, n):
            if np.linalg.norm(points[i] - points[j]) <= tol:
                return True
    sides = [(points[i], points[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            relation = segment_relation(*sides[i], *sides[j], tol)
            if relation is None:
                continue
            if not adjacent or relation[0] == "overlap":
                return True
    return False


@timed
def analyze_drawing(g: TorusGraph, tol: float = TorusConfig.ABS_TOL) -> DegeneracyReport:
    """
    Exhaustive pairwise tests in the universal cover. Every edge is lifted
    from its tail's representative; the other element is tested against all
    lattice translates whose bounding boxes meet the edge's.
    """
    require_valid(g)
    delta = displacement_matrix(g)
    report = DegeneracyReport()
    report.coincident_vertex_pairs = _coincident_vertices(g, tol)
    report.crossing_edge_pairs, report.overlapping_edge_pairs = _edge_pairs(g, delta, tol)
    report.vertex_edge_contacts = _vertex_edge_contacts(g, delta, tol)
    report.self_intersecting_faces = [p.face for p in face_polygons(g, tol)
                                      if polygon_self_intersects(p.points, tol)]
    counts = ", ".join(f"{k}={v}" for k, v in report.summary().items())
    logger.info(f"Analyzed {g.name or 'drawing'}: {counts}")
    return report


def is_embedding(g: TorusGraph, tol: float = TorusConfig.ABS_TOL) -> bool:
    """True iff analyze_drawing finds nothing"""
    return analyze_drawing(g, tol).is_empty
