"""
Built-in instances: the symmetric K7 on the square torus and n x n grid maps
"""
import logging
from typing import Dict

import numpy as np

from config import TorusConfig
from document_io import graph_to_document
from models import (DocumentError, FlatTorus, GraphDocument, StressVector, TorusGraph,
                    UnknownInstanceError)
from torus_core import rotation_from_geometry, shortest_shift

logger = logging.getLogger(__name__)


def k7_graph() -> TorusGraph:
    """
    v_i = (i/7, 3i/7 mod 1); edge (k-1)*7 + i joins v_i to v_{i+k} for
    k = 1, 2, 3 with the shortest-representative homology.
    """
    n, step = TorusConfig.K7_ORDER, TorusConfig.K7_SLOPE_STEP
    coords = np.array([[i / n, (step * i % n) / n] for i in range(n)])
    edges = []
    for k in TorusConfig.K7_CLASS_STEPS:
        for i in range(n):
            j = (i + k) % n
            edges.append((i, j, shortest_shift(coords[j] - coords[i])))
    graph = TorusGraph.from_edges(FlatTorus.square(), coords, edges, name="k7")
    return rotation_from_geometry(graph)


def k7_stress(table: str) -> StressVector:
    """Class weights of a named table spread over the 21 edges"""
    weights = TorusConfig.K7_STRESS_TABLES[table]
    return StressVector(np.repeat(np.asarray(weights, dtype=float), TorusConfig.K7_ORDER))


def k7_class_of_edge(e: int) -> int:
    """Step k (1, 2 or 3) of edge e"""
    return TorusConfig.K7_CLASS_STEPS[e // TorusConfig.K7_ORDER]


def grid_graph(n: int) -> TorusGraph:
    """
    n x n grid map: vertex j*n + i at (i/n, j/n), each with a right edge and
    an up edge of length 1/n. n = 1 gives the one-vertex square map.
    """
    if n < 1:
        raise ValueError(f"Grid size must be positive, got {n}")
    coords = np.array([[i / n, j / n] for j in range(n) for i in range(n)])
    edges = []
    for j in range(n):
        for i in range(n):
            v = j * n + i
            edges.append((v, j * n + (i + 1) % n, (1 if i == n - 1 else 0, 0)))
            edges.append((v, ((j + 1) % n) * n + i, (0, 1 if j == n - 1 else 0)))
    graph = TorusGraph.from_edges(FlatTorus.square(), coords, edges, name=f"grid_{n}")
    return rotation_from_geometry(graph)


def builtin_stresses(name: str) -> Dict[str, StressVector]:
    if name in TorusConfig.BUILTIN_K7:
        return {table: k7_stress(table) for table in TorusConfig.K7_STRESS_TABLES}
    graph = builtin_graph(name)
    return {"uniform": StressVector(np.ones(graph.num_edges))}


def builtin_graph(name: str) -> TorusGraph:
    if name in TorusConfig.BUILTIN_K7:
        return k7_graph()
    if name.startswith(TorusConfig.GRID_PREFIX):
        size = name[len(TorusConfig.GRID_PREFIX):]
        if size.isdigit() and int(size) >= 1:
            return grid_graph(int(size))
    raise UnknownInstanceError(name)


def builtin_instance(name: str) -> GraphDocument:
    """Document for k7_uniform, k7_weird, k7_negative or grid_<n>"""
    graph = builtin_graph(name)
    document = graph_to_document(graph, builtin_stresses(name), name=name)
    logger.info(f"Built instance {name}: {graph.num_vertices} vertices, {graph.num_edges} edges")
    return document


def default_stress_name(document: GraphDocument) -> str:
    """Stress table selected when none is named: the only one, or the instance's namesake"""
    if len(document.stresses) == 1:
        return next(iter(document.stresses))
    if document.name in TorusConfig.BUILTIN_K7:
        return TorusConfig.BUILTIN_K7[document.name]
    raise DocumentError(f"Document has stress tables {sorted(document.stresses)}; name one with --stress")
