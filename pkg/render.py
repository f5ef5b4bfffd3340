"""
SVG rendering of torus drawings with optional dual overlay
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Set, Tuple, Union

import drawsvg as draw
import numpy as np

from models import DegeneracyReport, DualDrawing, TorusGraph
from torus_core import displacement_matrix, require_valid

logger = logging.getLogger(__name__)

PRIMAL_STROKE = "#2c3e50"
DUAL_STROKE = "#c0392b"
HIGHLIGHT = "#f39c12"
OUTLINE_STROKE = "#7f8c8d"


@dataclass
class RenderOptions:
    """tile is the side of the square block of torus copies that is drawn"""
    tile: int = 3
    overlay: Optional[Union[DualDrawing, TorusGraph]] = None
    scale: float = 300.0
    labels: bool = False
    highlight: Optional[DegeneracyReport] = None
    stroke_width: float = 1.5
    padding: float = 20.0


@dataclass
class _Canvas:
    xmin: float
    ymax: float
    scale: float
    padding: float

    def point(self, p: np.ndarray) -> Tuple[float, float]:
        x = (float(p[0]) - self.xmin) * self.scale + self.padding
        y = (self.ymax - float(p[1])) * self.scale + self.padding
        return round(x, 4), round(y, 4)


def _tile_offsets(tile: int) -> List[Tuple[int, int]]:
    first = -(tile // 2)
    return [(i, j) for j in range(first, first + tile) for i in range(first, first + tile)]


def _tile_corners(g: TorusGraph, tile: int) -> np.ndarray:
    first = -(tile // 2)
    last = first + tile
    corners = np.array([[first, first], [last, first], [last, last], [first, last]], dtype=float)
    return (g.torus.basis @ corners.T).T


def _draw_edges(d: draw.Drawing, canvas: _Canvas, g: TorusGraph, tile: int, css_class: str,
                stroke: str, width: float, flagged: Set[int]) -> None:
    delta = displacement_matrix(g)
    for k in _tile_offsets(tile):
        shift = np.array(k, dtype=float)
        for e in range(g.num_edges):
            start = g.vertex_coords[g.edge_tail[e]] + shift
            x0, y0 = canvas.point(g.torus.basis @ start)
            x1, y1 = canvas.point(g.torus.basis @ (start + delta[:, e]))
            highlighted = e in flagged
            d.append(draw.Line(x0, y0, x1, y1,
                               stroke=HIGHLIGHT if highlighted else stroke,
                               stroke_width=width * (2 if highlighted else 1),
                               class_=f"{css_class} degenerate-edge" if highlighted else css_class))


def _draw_vertices(d: draw.Drawing, canvas: _Canvas, g: TorusGraph, css_class: str, fill: str,
                   radius: float, flagged: Set[int], labels: bool) -> None:
    for v in range(g.num_vertices):
        x, y = canvas.point(g.torus.basis @ g.vertex_coords[v])
        highlighted = v in flagged
        d.append(draw.Circle(x, y, radius * (1.6 if highlighted else 1),
                             fill=HIGHLIGHT if highlighted else fill,
                             class_=f"{css_class} degenerate-vertex" if highlighted else css_class))
        if labels:
            d.append(draw.Text(str(v), 11, round(x + radius + 2, 4), round(y - radius - 2, 4),
                               fill=fill, class_="label"))


def _overlay_graph(overlay: Union[DualDrawing, TorusGraph]) -> TorusGraph:
    return overlay.graph if isinstance(overlay, DualDrawing) else overlay


def _flagged(report: Optional[DegeneracyReport]) -> Tuple[Set[int], Set[int]]:
    if report is None:
        return set(), set()
    vertices = {p.a for p in report.coincident_vertex_pairs} | {p.b for p in report.coincident_vertex_pairs}
    vertices |= {c.vertex for c in report.vertex_edge_contacts}
    edges = set()
    for pair in list(report.crossing_edge_pairs) + list(report.overlapping_edge_pairs):
        edges |= {pair.edge_a, pair.edge_b}
    return vertices, edges


def render_svg(g: TorusGraph, options: Optional[RenderOptions] = None) -> str:
    """
    Deterministic SVG of g on a tile x tile block of torus copies: the
    fundamental parallelogram outline, every edge lifted from each copy
    (clipped to the block), vertices of the central copy and, when given,
    the dual overlay in its own stroke class. Elements listed in the
    highlight report (which describes the overlay when there is one) are
    drawn in the highlight colour.
    """
    options = options or RenderOptions()
    require_valid(g)
    corners = _tile_corners(g, options.tile)
    if options.overlay is not None:
        corners = np.vstack([corners, _tile_corners(_overlay_graph(options.overlay), options.tile)])
    xmin, ymin = corners.min(axis=0)
    xmax, ymax = corners.max(axis=0)
    canvas = _Canvas(float(xmin), float(ymax), options.scale, options.padding)
    width = round((xmax - xmin) * options.scale + 2 * options.padding, 4)
    height = round((ymax - ymin) * options.scale + 2 * options.padding, 4)

    d = draw.Drawing(width, height)
    d.append(draw.Rectangle(0, 0, width, height, fill="white"))

    clip = draw.ClipPath(id="tile-block")
    block = [canvas.point(c) for c in _tile_corners(g, options.tile)]
    clip.append(draw.Lines(*[x for p in block for x in p], close=True))
    primal_group = draw.Group(clip_path=clip, class_="primal")

    cell = [canvas.point(g.torus.basis @ np.array(c, dtype=float)) for c in ((0, 0), (1, 0), (1, 1), (0, 1))]
    d.append(draw.Lines(*[x for p in cell for x in p], close=True, fill="none",
                        stroke=OUTLINE_STROKE, stroke_width=options.stroke_width,
                        stroke_dasharray="6,4", class_="torus-outline"))

    overlay_vertices, overlay_edges = _flagged(options.highlight if options.overlay is not None else None)
    primal_vertices, primal_edges = _flagged(options.highlight if options.overlay is None else None)

    _draw_edges(primal_group, canvas, g, options.tile, "primal-edge", PRIMAL_STROKE,
                options.stroke_width, primal_edges)
    d.append(primal_group)

    if options.overlay is not None:
        dual = _overlay_graph(options.overlay)
        dual_clip = draw.ClipPath(id="dual-tile-block")
        dual_block = [canvas.point(c) for c in _tile_corners(dual, options.tile)]
        dual_clip.append(draw.Lines(*[x for p in dual_block for x in p], close=True))
        dual_group = draw.Group(clip_path=dual_clip, class_="dual")
        _draw_edges(dual_group, canvas, dual, options.tile, "dual-edge", DUAL_STROKE,
                    options.stroke_width, overlay_edges)
        d.append(dual_group)

    _draw_vertices(d, canvas, g, "vertex", PRIMAL_STROKE, 4.0, primal_vertices, options.labels)
    if options.overlay is not None:
        _draw_vertices(d, canvas, _overlay_graph(options.overlay), "dual-vertex", DUAL_STROKE, 3.0,
                       overlay_vertices, options.labels)

    svg = d.as_svg()
    logger.debug(f"Rendered {g.name or 'drawing'}: {len(svg)} bytes")
    return svg


def save_svg(svg: str, path: str) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        f.write(svg)
    logger.info(f"SVG written to {path}")
