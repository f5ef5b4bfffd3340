"""
Data models for torus-reciprocal
"""
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from config import TorusConfig


def _frozen_array(values, dtype=float) -> np.ndarray:
    array = np.array(values, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class FlatTorus:
    """Flat torus T_M = R^2 / M Z^2; the columns of basis generate the lattice"""
    basis: np.ndarray

    def __post_init__(self):
        basis = _frozen_array(self.basis)
        if basis.shape != (2, 2) or not np.all(np.isfinite(basis)):
            raise DegenerateTorusError(float("nan"), "torus basis must be a finite 2x2 matrix")
        det = float(np.linalg.det(basis))
        if abs(det) <= TorusConfig.DET_TOL:
            raise DegenerateTorusError(det)
        object.__setattr__(self, "basis", basis)

    @classmethod
    def square(cls) -> "FlatTorus":
        """The square flat torus T_[]"""
        return cls(np.eye(2))

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.basis))

    @property
    def inverse(self) -> np.ndarray:
        return np.linalg.inv(self.basis)

    def to_native(self, reference: np.ndarray) -> np.ndarray:
        """Map reference column vectors (2 x k) to native coordinates"""
        return self.basis @ np.asarray(reference, dtype=float)

    def composed(self, outer: np.ndarray) -> "FlatTorus":
        """Torus with basis outer @ M"""
        return FlatTorus(np.asarray(outer, dtype=float) @ self.basis)

    def scaled(self, sigma: float) -> "FlatTorus":
        return FlatTorus(sigma * self.basis)

    def same_lattice(self, other: "FlatTorus", tol: float = TorusConfig.ABS_TOL) -> bool:
        """True iff M Z^2 = N Z^2, i.e. M^-1 N is an integer unimodular matrix"""
        change = np.linalg.solve(self.basis, other.basis)
        rounded = np.round(change)
        if np.max(np.abs(change - rounded)) > tol:
            return False
        return abs(abs(round(float(np.linalg.det(rounded)))) - 1) == 0

    def as_lists(self) -> List[List[float]]:
        return [[float(x) for x in row] for row in self.basis]


class Dart(NamedTuple):
    """Dart 2k or 2k+1 of edge k"""
    id: int
    edge: int
    is_forward: bool


@dataclass(frozen=True, eq=False)
class TorusGraph:
    """
    Geodesic graph on a flat torus.

    vertex_coords are reference coordinates in [0,1)^2; native position is
    torus.basis @ coords. Darts 2k and 2k+1 belong to edge k, the forward dart
    runs from edge_tail[k] to edge_head[k]. rotation lists the outgoing darts of
    every vertex in counterclockwise order.
    """
    torus: FlatTorus
    vertex_coords: np.ndarray
    edge_tail: np.ndarray
    edge_head: np.ndarray
    dart_homology: np.ndarray
    rotation: Optional[Tuple[Tuple[int, ...], ...]] = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "vertex_coords", _frozen_array(self.vertex_coords).reshape(-1, 2))
        object.__setattr__(self, "edge_tail", _frozen_array(self.edge_tail, dtype=int).reshape(-1))
        object.__setattr__(self, "edge_head", _frozen_array(self.edge_head, dtype=int).reshape(-1))
        object.__setattr__(self, "dart_homology", _frozen_array(self.dart_homology, dtype=int).reshape(-1, 2))
        if len(self.edge_tail) != len(self.edge_head):
            raise InvalidGraphError(ValidationReport(["edge tail and head arrays differ in length"]))
        if len(self.dart_homology) != 2 * len(self.edge_tail):
            raise InvalidGraphError(ValidationReport(["dart homology must have two rows per edge"]))
        if self.rotation is not None:
            object.__setattr__(self, "rotation", tuple(tuple(int(d) for d in darts) for darts in self.rotation))

    @classmethod
    def from_edges(cls, torus: FlatTorus, coords: Sequence[Sequence[float]],
                   edges: Sequence[Tuple[int, int, Sequence[int]]],
                   rotation: Optional[Sequence[Sequence[int]]] = None,
                   name: str = "") -> "TorusGraph":
        """Build a graph from (tail, head, shift) triples; shift is the forward dart's homology"""
        tails = [int(t) for t, _, _ in edges]
        heads = [int(h) for _, h, _ in edges]
        homology = []
        for _, _, shift in edges:
            homology.append([int(shift[0]), int(shift[1])])
            homology.append([-int(shift[0]), -int(shift[1])])
        return cls(torus, np.asarray(coords, dtype=float), np.asarray(tails, dtype=int),
                   np.asarray(heads, dtype=int), np.asarray(homology, dtype=int).reshape(-1, 2),
                   None if rotation is None else tuple(tuple(r) for r in rotation), name)

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_coords)

    @property
    def num_edges(self) -> int:
        return len(self.edge_tail)

    @property
    def num_darts(self) -> int:
        return 2 * len(self.edge_tail)

    def dart(self, d: int) -> Dart:
        return Dart(d, d // 2, d % 2 == 0)

    @staticmethod
    def rev(d: int) -> int:
        return d ^ 1

    def tail(self, d: int) -> int:
        e = d // 2
        return int(self.edge_tail[e] if d % 2 == 0 else self.edge_head[e])

    def head(self, d: int) -> int:
        e = d // 2
        return int(self.edge_head[e] if d % 2 == 0 else self.edge_tail[e])

    def edge_shift(self, e: int) -> np.ndarray:
        """Homology vector of the forward dart of edge e"""
        return self.dart_homology[2 * e]

    def outgoing_darts(self, v: int) -> List[int]:
        return [d for d in range(self.num_darts) if self.tail(d) == v]

    def with_torus(self, torus: FlatTorus) -> "TorusGraph":
        """Image of the same reference drawing on another flat torus"""
        return replace(self, torus=torus)

    def with_coords(self, coords: np.ndarray) -> "TorusGraph":
        return replace(self, vertex_coords=np.asarray(coords, dtype=float))

    def with_rotation(self, rotation: Sequence[Sequence[int]]) -> "TorusGraph":
        return replace(self, rotation=tuple(tuple(r) for r in rotation))

    def with_homology(self, dart_homology: np.ndarray) -> "TorusGraph":
        return replace(self, dart_homology=np.asarray(dart_homology, dtype=int))


@dataclass
class ValidationReport:
    """Violations of the torus graph invariants; empty iff valid"""
    violations: List[str] = field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"violation": self.violations}, columns=["violation"])


@dataclass(frozen=True, eq=False)
class StressVector:
    """One nonzero weight per edge"""
    omega: np.ndarray

    def __post_init__(self):
        omega = _frozen_array(self.omega).reshape(-1)
        zero = [int(e) for e in np.flatnonzero(np.abs(omega) <= TorusConfig.ABS_TOL)]
        if zero:
            raise ZeroStressError(zero)
        object.__setattr__(self, "omega", omega)

    def __len__(self) -> int:
        return len(self.omega)

    @property
    def is_positive(self) -> bool:
        return bool(np.all(self.omega > 0))

    def scaled(self, sigma: float) -> "StressVector":
        return StressVector(sigma * self.omega)

    def reciprocal(self) -> "StressVector":
        """omega*_e = 1 / omega_e"""
        return StressVector(1.0 / self.omega)


@dataclass(frozen=True)
class CovarianceMatrix:
    """Covariance matrix Delta Omega Delta^T = [[alpha, gamma], [gamma, beta]]"""
    alpha: float
    beta: float
    gamma: float

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.alpha, self.gamma], [self.gamma, self.beta]])

    @property
    def determinant(self) -> float:
        return self.alpha * self.beta - self.gamma ** 2


@dataclass(frozen=True)
class EquilibriumResult:
    """Verdict of the equilibrium test with per-vertex residual vectors"""
    is_equilibrium: bool
    residuals: np.ndarray
    max_residual: float
    tolerance: float

    def __bool__(self) -> bool:
        return self.is_equilibrium


@dataclass(frozen=True)
class HomologyClass:
    """Homology (or cohomology) class of a circulation, as a 2-vector"""
    class_vec: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "class_vec", _frozen_array(self.class_vec).reshape(2))

    def is_integral(self, tol: float = TorusConfig.ABS_TOL) -> bool:
        return bool(np.all(np.abs(self.class_vec - np.round(self.class_vec)) <= tol))


@dataclass(frozen=True)
class Circulation:
    """Edge flow conserved at every vertex"""
    phi: np.ndarray


@dataclass(frozen=True)
class Cocirculation:
    """Edge row vector summing to zero around every face, with its classes"""
    theta: np.ndarray
    rotated_class: Tuple[int, int]
    standard_class: Tuple[int, int]


class ReciprocalMode(Enum):
    ORTHOGONAL = "orthogonal"
    PARALLEL = "parallel"


@dataclass(frozen=True)
class TorusFamily:
    """
    Flat tori on which a stress is reciprocal.

    Orthogonal mode: sigma * R(angle) * base for sigma > 0 and any rotation R.
    Parallel mode: any nonsingular matrix (base is the identity).
    stress is the stress the family belongs to, rescaled when the input
    needed the scaling condition.
    """
    base: np.ndarray
    mode: ReciprocalMode
    free_params: str
    stress: StressVector
    covariance: CovarianceMatrix
    scale_factor: float = 1.0

    @property
    def rescaled(self) -> bool:
        return self.scale_factor != 1.0

    def instantiate(self, sigma: float = 1.0, angle: float = 0.0,
                    matrix: Optional[np.ndarray] = None) -> FlatTorus:
        """Family member sigma * R(angle) * base, or matrix itself in parallel mode"""
        if self.mode is ReciprocalMode.PARALLEL:
            return FlatTorus(np.eye(2) if matrix is None else matrix)
        if sigma <= 0:
            raise ValueError(f"Scale must be positive, got {sigma}")
        c, s = np.cos(angle), np.sin(angle)
        rotation = np.array([[c, -s], [s, c]])
        return FlatTorus(sigma * rotation @ self.base)


@dataclass(frozen=True)
class NoReciprocalTorus:
    """No flat torus (and no scaling) admits the reciprocal diagram"""
    reason: str
    determinant: float
    covariance: CovarianceMatrix

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class CriterionResult:
    """Parallel reciprocality verdict with the covariance it was based on"""
    holds: bool
    covariance: CovarianceMatrix

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True, eq=False)
class DualDrawing:
    """Drawing of G* on its own flat torus; dual edge k corresponds to primal edge edge_map[k]"""
    graph: TorusGraph
    mode: ReciprocalMode
    edge_map: np.ndarray
    source_torus: FlatTorus
    stress: StressVector
    vertex_faces: Tuple[Tuple[int, ...], ...] = ()


@dataclass
class ReciprocityReport:
    """Per-edge violations of the reciprocal angle, length and orientation laws"""
    mode: ReciprocalMode
    angle_violations: List[Tuple[int, float]] = field(default_factory=list)
    length_violations: List[Tuple[int, float]] = field(default_factory=list)
    orientation_violations: List[int] = field(default_factory=list)
    max_violation: float = 0.0
    same_lattice: bool = False

    @property
    def passes(self) -> bool:
        return not (self.angle_violations or self.length_violations or self.orientation_violations)

    @property
    def is_reciprocal(self) -> bool:
        """Edge laws hold and the dual lives on the primal's own torus"""
        return self.passes and self.same_lattice

    def to_frame(self) -> pd.DataFrame:
        rows = [{"kind": "angle", "edge": e, "value": v} for e, v in self.angle_violations]
        rows += [{"kind": "length", "edge": e, "value": v} for e, v in self.length_violations]
        rows += [{"kind": "orientation", "edge": e, "value": np.nan} for e in self.orientation_violations]
        return pd.DataFrame(rows, columns=["kind", "edge", "value"])


@dataclass(frozen=True)
class VertexCoincidence:
    a: int
    b: int
    offset: Tuple[int, int]


@dataclass(frozen=True)
class EdgeCrossing:
    edge_a: int
    edge_b: int
    offset: Tuple[int, int]
    s: float
    t: float


@dataclass(frozen=True)
class EdgeOverlap:
    edge_a: int
    edge_b: int
    offset: Tuple[int, int]
    length: float


@dataclass(frozen=True)
class VertexEdgeContact:
    vertex: int
    edge: int
    offset: Tuple[int, int]
    t: float


@dataclass
class DegeneracyReport:
    """Obstructions to a drawing being an embedding; empty iff embedding"""
    coincident_vertex_pairs: List[VertexCoincidence] = field(default_factory=list)
    crossing_edge_pairs: List[EdgeCrossing] = field(default_factory=list)
    overlapping_edge_pairs: List[EdgeOverlap] = field(default_factory=list)
    vertex_edge_contacts: List[VertexEdgeContact] = field(default_factory=list)
    self_intersecting_faces: List[int] = field(default_factory=list)

    @property
    def is_empty(self) -> bool:
        return not (self.coincident_vertex_pairs or self.crossing_edge_pairs
                    or self.overlapping_edge_pairs or self.vertex_edge_contacts
                    or self.self_intersecting_faces)

    def involves_vertices(self, a: int, b: int) -> bool:
        return any({p.a, p.b} == {a, b} for p in self.coincident_vertex_pairs)

    def involves_edges(self, a: int, b: int) -> bool:
        pairs = list(self.crossing_edge_pairs) + list(self.overlapping_edge_pairs)
        return any({p.edge_a, p.edge_b} == {a, b} for p in pairs)

    def summary(self) -> Dict[str, int]:
        return {
            "coincident_vertex_pairs": len(self.coincident_vertex_pairs),
            "crossing_edge_pairs": len(self.crossing_edge_pairs),
            "overlapping_edge_pairs": len(self.overlapping_edge_pairs),
            "vertex_edge_contacts": len(self.vertex_edge_contacts),
            "self_intersecting_faces": len(self.self_intersecting_faces),
        }

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for p in self.coincident_vertex_pairs:
            rows.append({"kind": "coincident_vertices", "a": p.a, "b": p.b, "offset": p.offset})
        for c in self.crossing_edge_pairs:
            rows.append({"kind": "crossing", "a": c.edge_a, "b": c.edge_b, "offset": c.offset,
                         "s": c.s, "t": c.t})
        for o in self.overlapping_edge_pairs:
            rows.append({"kind": "overlap", "a": o.edge_a, "b": o.edge_b, "offset": o.offset,
                         "length": o.length})
        for v in self.vertex_edge_contacts:
            rows.append({"kind": "vertex_on_edge", "a": v.vertex, "b": v.edge, "offset": v.offset,
                         "t": v.t})
        for f in self.self_intersecting_faces:
            rows.append({"kind": "self_intersecting_face", "a": f})
        return pd.DataFrame(rows, columns=["kind", "a", "b", "offset", "s", "t", "length"])


@dataclass(frozen=True)
class FacePolygon:
    """Face boundary traced in the universal cover, starting at the tail of darts[0]"""
    face: int
    darts: Tuple[int, ...]
    reference_points: np.ndarray
    points: np.ndarray
    closure_gap: float


@dataclass
class GraphDocument:
    """Text-file form of a torus graph with named stress tables"""
    version: int
    torus: List[List[float]]
    vertices: List[List[float]]
    edges: List[Dict[str, object]]
    rotation: Optional[List[List[int]]] = None
    stresses: Dict[str, List[float]] = field(default_factory=dict)
    name: Optional[str] = None


class TorusGraphError(ValueError):
    """Base class for torus-reciprocal domain errors"""


class InvalidGraphError(TorusGraphError):
    """Exception raised when a graph violates its invariants"""
    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__("Invalid torus graph: " + "; ".join(report.violations))


class DegenerateTorusError(TorusGraphError):
    """Exception raised for a (numerically) singular torus matrix"""
    def __init__(self, det: float, message: Optional[str] = None):
        self.det = det
        super().__init__(message or f"Degenerate torus: |det M| = {abs(det):.3g} is not above {TorusConfig.DET_TOL:g}")


class AmbiguousRotationError(TorusGraphError):
    """Exception raised when two outgoing darts share a direction"""
    def __init__(self, vertex: int, darts: Tuple[int, int]):
        self.vertex = vertex
        self.darts = darts
        super().__init__(f"Ambiguous rotation at vertex {vertex}: darts {darts[0]} and {darts[1]} leave in the same direction")


class ZeroStressError(TorusGraphError):
    """Exception raised when a stress vector has zero entries"""
    def __init__(self, edges: List[int]):
        self.edges = edges
        super().__init__(f"Stress must be nonzero on every edge; zero on edges {edges}")


class FlowLengthError(TorusGraphError):
    """Exception raised when an edge vector has the wrong length"""
    def __init__(self, expected: int, actual: int):
        self.expected = expected
        self.actual = actual
        super().__init__(f"Expected one value per edge ({expected}), got {actual}")


class NotCirculationError(TorusGraphError):
    """Exception raised when flow is not conserved at some vertex"""
    def __init__(self, max_residual: float):
        self.max_residual = max_residual
        super().__init__(f"Not a circulation: vertex imbalance up to {max_residual:.3g}")


class CocirculationError(TorusGraphError):
    """Exception raised when a homology row does not sum to zero around a face"""
    def __init__(self, face: int, row: int, value: float):
        self.face = face
        self.row = row
        self.value = value
        super().__init__(f"Row {row} of the homology matrix sums to {value:g} around face {face}")


class NonEquilibriumError(TorusGraphError):
    """Exception raised when a stress is not in equilibrium"""
    def __init__(self, max_residual: float):
        self.max_residual = max_residual
        super().__init__(f"Stress is not in equilibrium: residual {max_residual:.3g}")


class SingularLaplacianError(TorusGraphError):
    """Exception raised when the weighted Laplacian cannot be solved"""
    def __init__(self, components: int):
        self.components = components
        super().__init__(f"Weighted Laplacian is singular: blueprint has {components} components")


class NonIntegralHomologyError(TorusGraphError):
    """Exception raised when an integrated dual edge does not close up on the lattice"""
    def __init__(self, edge: int, value: Sequence[float]):
        self.edge = edge
        self.value = tuple(float(x) for x in value)
        super().__init__(f"Dual edge {edge} has non-integral homology {self.value}")


class NonClosingFaceError(TorusGraphError):
    """Exception raised when a face boundary does not close in the universal cover"""
    def __init__(self, face: int, gap: float):
        self.face = face
        self.gap = gap
        super().__init__(f"Face {face} does not close: gap {gap:.3g}")


class DocumentError(TorusGraphError):
    """Exception raised for malformed graph documents"""


class UnknownInstanceError(TorusGraphError):
    """Exception raised for an unknown built-in instance name"""
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Unknown built-in instance: {name}")
