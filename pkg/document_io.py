"""
Graph documents: JSON text with a canonical, byte-stable serialization
"""
import json
import logging
import math
from typing import Any, Dict, List, Mapping, Optional, Tuple

import numpy as np

from config import TorusConfig
from models import (DocumentError, FlatTorus, GraphDocument, StressVector, TorusGraph)
from torus_core import rotation_from_geometry
from utils import validate_integer_input, validate_numeric_input

logger = logging.getLogger(__name__)

_KEYS = {"version", "torus", "vertices", "edges", "rotation", "stresses", "name"}


def _number(value: Any, field_name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DocumentError(f"Invalid numeric value for {field_name}: {value!r}")
    try:
        return validate_numeric_input(value, field_name)
    except ValueError as e:
        raise DocumentError(str(e))


def _integer(value: Any, field_name: str) -> int:
    if isinstance(value, str):
        raise DocumentError(f"Invalid integer value for {field_name}: {value!r}")
    try:
        return validate_integer_input(value, field_name)
    except ValueError as e:
        raise DocumentError(str(e))


def _pair(value: Any, field_name: str) -> List[float]:
    if not isinstance(value, list) or len(value) != 2:
        raise DocumentError(f"{field_name} must be a list of two numbers")
    return [_number(x, field_name) for x in value]


def document_from_dict(data: Mapping[str, Any]) -> GraphDocument:
    """Check a decoded document and convert it into a GraphDocument"""
    if not isinstance(data, Mapping):
        raise DocumentError("Document must be a JSON object")
    unknown = sorted(set(data) - _KEYS)
    if unknown:
        raise DocumentError(f"Unknown document keys: {unknown}")
    for key in ("version", "torus", "vertices", "edges"):
        if key not in data:
            raise DocumentError(f"Document is missing '{key}'")

    version = _integer(data["version"], "version")
    if version != TorusConfig.DOCUMENT_VERSION:
        raise DocumentError(f"Unsupported document version {version}")

    torus = data["torus"]
    if not isinstance(torus, list) or len(torus) != 2:
        raise DocumentError("torus must be a 2x2 matrix")
    torus = [_pair(row, "torus") for row in torus]

    if not isinstance(data["vertices"], list):
        raise DocumentError("vertices must be a list")
    vertices = [_pair(v, f"vertex {i}") for i, v in enumerate(data["vertices"])]
    V = len(vertices)

    if not isinstance(data["edges"], list):
        raise DocumentError("edges must be a list")
    edges = []
    for i, edge in enumerate(data["edges"]):
        if not isinstance(edge, Mapping) or set(edge) != {"tail", "head", "shift"}:
            raise DocumentError(f"edge {i} must have exactly tail, head and shift")
        tail = _integer(edge["tail"], f"edge {i} tail")
        head = _integer(edge["head"], f"edge {i} head")
        for end in (tail, head):
            if not 0 <= end < V:
                raise DocumentError(f"edge {i} endpoint {end} out of range (0..{V - 1})")
        shift = edge["shift"]
        if not isinstance(shift, list) or len(shift) != 2:
            raise DocumentError(f"edge {i} shift must be a list of two integers")
        shift = [_integer(s, f"edge {i} shift") for s in shift]
        edges.append({"tail": tail, "head": head, "shift": shift})
    E = len(edges)

    rotation = data.get("rotation")
    if rotation is not None:
        if not isinstance(rotation, list) or len(rotation) != V:
            raise DocumentError("rotation must list the darts of every vertex")
        checked = []
        seen = set()
        for v, darts in enumerate(rotation):
            if not isinstance(darts, list):
                raise DocumentError(f"rotation of vertex {v} must be a list")
            darts = [_integer(d, f"rotation of vertex {v}") for d in darts]
            for d in darts:
                if not 0 <= d < 2 * E:
                    raise DocumentError(f"rotation of vertex {v}: dart {d} out of range (0..{2 * E - 1})")
                if d in seen:
                    raise DocumentError(f"dart {d} appears twice in the rotation")
                seen.add(d)
            checked.append(darts)
        rotation = checked

    stresses = data.get("stresses") or {}
    if not isinstance(stresses, Mapping):
        raise DocumentError("stresses must map names to weight lists")
    tables = {}
    for name, values in stresses.items():
        if not isinstance(values, list) or len(values) != E:
            raise DocumentError(f"stress '{name}' must list one weight per edge ({E})")
        tables[str(name)] = [_number(x, f"stress {name}") for x in values]

    name = data.get("name")
    if name is not None and not isinstance(name, str):
        raise DocumentError("name must be a string")
    return GraphDocument(version, torus, vertices, edges, rotation, tables, name)


def parse_document(text: str) -> GraphDocument:
    """Parse document text; malformed input raises DocumentError"""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"Malformed document: {e}")
    return document_from_dict(data)


def format_float(value: float) -> str:
    """17 significant digits, always with a decimal point or exponent"""
    value = float(value)
    if not math.isfinite(value):
        raise DocumentError(f"Cannot serialize non-finite value {value}")
    if value == 0:
        value = 0.0
    text = f"{value:.{TorusConfig.FLOAT_DIGITS}g}"
    if not any(c in text for c in ".e"):
        text += ".0"
    return text


def _emit_scalar(value: Any) -> str:
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    return json.dumps(value, ensure_ascii=False)


def _is_flat(value: Any) -> bool:
    if isinstance(value, list):
        return all(not isinstance(x, (list, dict)) for x in value)
    if isinstance(value, dict):
        size = 0
        for x in value.values():
            if isinstance(x, dict) or (isinstance(x, list) and not _is_flat(x)):
                return False
            size += len(x) if isinstance(x, list) else 1
        return size <= 8
    return True


def _emit(value: Any, indent: int) -> str:
    pad = " " * indent
    inner = " " * (indent + 2)
    if isinstance(value, dict):
        items = sorted(value.items())
        if _is_flat(value):
            return "{" + ", ".join(f"{json.dumps(k)}: {_emit(v, 0)}" for k, v in items) + "}"
        body = ",\n".join(f"{inner}{json.dumps(k)}: {_emit(v, indent + 2)}" for k, v in items)
        return "{\n" + body + "\n" + pad + "}"
    if isinstance(value, list):
        if _is_flat(value):
            return "[" + ", ".join(_emit_scalar(x) for x in value) + "]"
        body = ",\n".join(inner + _emit(x, indent + 2) for x in value)
        return "[\n" + body + "\n" + pad + "]"
    return _emit_scalar(value)


def document_to_dict(doc: GraphDocument) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "version": int(doc.version),
        "torus": [[float(x) for x in row] for row in doc.torus],
        "vertices": [[float(x) for x in v] for v in doc.vertices],
        "edges": [{"tail": int(e["tail"]), "head": int(e["head"]),
                   "shift": [int(s) for s in e["shift"]]} for e in doc.edges],
    }
    if doc.rotation is not None:
        data["rotation"] = [[int(d) for d in darts] for darts in doc.rotation]
    if doc.stresses:
        data["stresses"] = {name: [float(x) for x in values] for name, values in doc.stresses.items()}
    if doc.name is not None:
        data["name"] = doc.name
    return data


def serialize_document(doc: GraphDocument) -> str:
    """Canonical text: sorted keys, 17-digit floats, integers without a decimal point"""
    return _emit(document_to_dict(doc), 0) + "\n"


def canonicalize(text: str) -> str:
    return serialize_document(parse_document(text))


def document_to_graph(doc: GraphDocument) -> Tuple[TorusGraph, Dict[str, np.ndarray]]:
    """TorusGraph plus raw stress tables; a missing rotation is derived from geometry"""
    torus = FlatTorus(np.array(doc.torus, dtype=float))
    edges = [(e["tail"], e["head"], e["shift"]) for e in doc.edges]
    graph = TorusGraph.from_edges(torus, np.array(doc.vertices, dtype=float).reshape(-1, 2),
                                  edges, doc.rotation, name=doc.name or "")
    if graph.rotation is None:
        graph = rotation_from_geometry(graph)
    stresses = {name: np.array(values, dtype=float) for name, values in doc.stresses.items()}
    return graph, stresses


def graph_to_document(g: TorusGraph, stresses: Optional[Mapping[str, Any]] = None,
                      name: Optional[str] = None) -> GraphDocument:
    tables = {}
    for key, values in (stresses or {}).items():
        weights = values.omega if isinstance(values, StressVector) else np.asarray(values, dtype=float)
        tables[key] = [float(x) for x in weights]
    edges = [{"tail": int(g.edge_tail[e]), "head": int(g.edge_head[e]),
              "shift": [int(s) for s in g.edge_shift(e)]} for e in range(g.num_edges)]
    rotation = None if g.rotation is None else [list(darts) for darts in g.rotation]
    return GraphDocument(TorusConfig.DOCUMENT_VERSION, g.torus.as_lists(),
                         [[float(x) for x in v] for v in g.vertex_coords],
                         edges, rotation, tables, name)


def load_document(path: str) -> GraphDocument:
    with open(path, 'r', encoding='utf-8') as f:
        document = parse_document(f.read())
    logger.info(f"Loaded document {path}: {len(document.vertices)} vertices, {len(document.edges)} edges")
    return document


def save_document(doc: GraphDocument, path: str) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        f.write(serialize_document(doc))
    logger.info(f"Document written to {path}")
