"""
Tropical Corals - SVG rendering

Static SVG 1.1 figures of corals, their extensions and Morse trees. Geometry
is kept exact until the final coordinate transform, and numbers are printed
with a fixed precision so equal inputs give byte-identical files.
"""

import logging
from fractions import Fraction
from typing import List, Optional, Tuple, Union

import networkx as nx

from corals.core.config import settings
from corals.core.errors import OutputUnwritable, ParseError
from corals.tropical.coral import TropicalCoral, require_valid
from corals.tropical.counting import TropicalCurve
from corals.tropical.lattice import LatticeVector, RationalPoint
from corals.tropical.morse import MorseTree, region_labels, require_valid_tmt

logger = logging.getLogger(__name__)

Viewport = Tuple[Fraction, Fraction, Fraction, Fraction]  # xmin, hmin, xmax, hmax

PREAMBLE = """<?xml version="1.0" standalone="no"?>
<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" "http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">
<svg width="{width:.3f}" height="{height:.3f}" viewBox="0 0 {width:.3f} {height:.3f}" version="1.1" xmlns="http://www.w3.org/2000/svg">
<rect x="0" y="0" width="{width:.3f}" height="{height:.3f}" style="fill:#ffffff"/>
"""

POSTAMBLE = "</svg>\n"

MARGIN = 20.0


def parse_viewport(text: str) -> Viewport:
    """Parse "xmin,hmin,xmax,hmax"."""
    try:
        parts = [Fraction(p.strip()) for p in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"viewport {text!r} is not four rationals") from exc
    if len(parts) != 4 or parts[0] >= parts[2] or parts[1] >= parts[3]:
        raise ParseError(f"viewport {text!r} must be xmin,hmin,xmax,hmax with min < max")
    return parts[0], parts[1], parts[2], parts[3]


class SvgCanvas:
    """Collects elements in model coordinates; h grows upward."""

    def __init__(self, viewport: Viewport, scale: float):
        self.viewport = viewport
        self.scale = scale
        self.commands: List[str] = []

    def _xy(self, x: Fraction, h: Fraction) -> Tuple[float, float]:
        xmin, _, _, hmax = self.viewport
        return float(x - xmin) * self.scale + MARGIN, float(hmax - h) * self.scale + MARGIN

    def line(self, p: RationalPoint, q: RationalPoint, kind: str, dashed: bool = False, width: float = 1.5) -> None:
        x1, y1 = self._xy(p.x, p.h)
        x2, y2 = self._xy(q.x, q.h)
        dash = ";stroke-dasharray:6,4" if dashed else ""
        color = "#888888" if dashed else "#000000"
        self.commands.append(
            f'<line class="{kind}" x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" y2="{y2:.3f}" '
            f'style="stroke:{color};stroke-width:{width:.1f}{dash}"/>'
        )

    def dot(self, p: RationalPoint, kind: str = "vertex") -> None:
        x, y = self._xy(p.x, p.h)
        self.commands.append(f'<circle class="{kind}" cx="{x:.3f}" cy="{y:.3f}" r="3.000" style="fill:#000000"/>')

    def text(self, p: RationalPoint, label: str, kind: str = "label") -> None:
        x, y = self._xy(p.x, p.h)
        self.commands.append(
            f'<text class="{kind}" x="{x + 4:.3f}" y="{y - 4:.3f}" font-size="12" '
            f'font-family="monospace">{label}</text>'
        )

    def render(self) -> str:
        xmin, hmin, xmax, hmax = self.viewport
        width = float(xmax - xmin) * self.scale + 2 * MARGIN
        height = float(hmax - hmin) * self.scale + 2 * MARGIN
        return PREAMBLE.format(width=width, height=height) + "\n".join(self.commands) + "\n" + POSTAMBLE


def clip_ray(p: RationalPoint, u: LatticeVector, viewport: Viewport) -> Optional[RationalPoint]:
    """Exit point of the ray p + t*u (t >= 0) from the viewport, None if it misses."""
    xmin, hmin, xmax, hmax = viewport
    t_lo, t_hi = Fraction(0), None
    for start, step, lo, hi in ((p.x, u.a, xmin, xmax), (p.h, u.b, hmin, hmax)):
        if step == 0:
            if not lo <= start <= hi:
                return None
            continue
        a, b = (lo - start) / step, (hi - start) / step
        a, b = min(a, b), max(a, b)
        t_lo = max(t_lo, a)
        t_hi = b if t_hi is None else min(t_hi, b)
    if t_hi is None or t_hi < t_lo:
        return None
    return p.step(t_hi, u)


def _midpoint(p: RationalPoint, q: RationalPoint) -> RationalPoint:
    return RationalPoint((p.x + q.x) / 2, (p.h + q.h) / 2)


def _weight_label(canvas: SvgCanvas, p: RationalPoint, q: RationalPoint, w: int) -> None:
    if w > 1:
        canvas.text(_midpoint(p, q), str(w), kind="weight")


# ============================================================================
# Corals and curves
# ============================================================================

def render_coral(c: TropicalCoral, viewport: Viewport, scale: Optional[float] = None) -> str:
    """Coral on the truncated cone with dashed extensions toward the origin."""
    require_valid(c)
    canvas = SvgCanvas(viewport, scale or settings.plot_scale)
    xmin, _, xmax, _ = viewport
    canvas.line(RationalPoint(xmin, 1), RationalPoint(xmax, 1), "boundary", dashed=True, width=1.0)

    t, g = c.ctype, c.graph
    for e, (a, b) in g.bounded_edges:
        p, q = c.positions[a], c.positions[b]
        canvas.line(p, q, "segment")
        _weight_label(canvas, p, q, g.weight(e))
    for e, v in g.positive_edges:
        p = c.positions[v]
        end = clip_ray(p, t.flag_dirs[(v, e)], viewport)
        if end is not None:
            canvas.line(p, end, "ray")
            _weight_label(canvas, p, end, g.weight(e))
    origin = RationalPoint(0, 0)
    for v in g.negative_vertices:
        canvas.line(c.positions[v], origin, "extension", dashed=True)
    for v in g.vertex_ids:
        canvas.dot(c.positions[v])
    logger.debug("rendered coral with %d elements", len(canvas.commands))
    return canvas.render()


def render_curve(tc: TropicalCurve, viewport: Viewport, scale: Optional[float] = None) -> str:
    """Plane tropical curve; rays through the origin are dashed."""
    canvas = SvgCanvas(viewport, scale or settings.plot_scale)
    for e, (a, b) in tc.bounded_edges:
        p, q = tc.vertices[a], tc.vertices[b]
        canvas.line(p, q, "segment")
        _weight_label(canvas, p, q, tc.weights.get(e, 1))
    for r in tc.rays:
        p = tc.vertices[r.vertex]
        end = clip_ray(p, r.direction, viewport)
        if end is None:
            continue
        canvas.line(p, end, "extension" if r.negative else "ray", dashed=r.negative)
        _weight_label(canvas, p, end, r.weight)
    for p in tc.vertices.values():
        canvas.dot(p)
    return canvas.render()


# ============================================================================
# Morse trees
# ============================================================================

def render_tree(m: MorseTree, scale: Optional[float] = None) -> str:
    """One-dimensional picture: vertices over their phi value, one row per depth."""
    require_valid_tmt(m)
    G = nx.Graph()
    G.add_nodes_from(m.vertices)
    G.add_edges_from(pair for _, pair in m.edges)
    depth = nx.single_source_shortest_path_length(G, m.root)

    levels = max(depth.values())
    phis = list(m.phi.values())
    viewport = (min(phis) - 1, Fraction(-1), max(phis) + 1, Fraction(levels + 1))
    canvas = SvgCanvas(viewport, scale or settings.plot_scale)
    canvas.line(RationalPoint(viewport[0], 0), RationalPoint(viewport[2], 0), "axis", width=1.0)

    def place(v: int) -> RationalPoint:
        return RationalPoint(m.phi[v], levels - depth[v] + 1)

    for e, (a, b) in m.edges:
        canvas.line(place(a), place(b), "edge")
    labels = region_labels(m)
    for v in m.vertices:
        canvas.dot(place(v))
        if v in labels:
            i, j = labels[v]
            canvas.text(place(v), f"p{i}{j}={m.phi[v]}", kind="external")
    return canvas.render()


# ============================================================================
# Output
# ============================================================================

def write_svg(text: str, path: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputUnwritable(f"cannot write {path}: {exc.strerror}", details={"path": path}) from exc
    logger.info("wrote %s", path)


def plot(obj: Union[TropicalCoral, TropicalCurve, MorseTree], out_path: str,
         viewport: Optional[Viewport] = None) -> str:
    """Render obj and write it to out_path; returns the SVG text."""
    viewport = viewport or parse_viewport(settings.plot_viewport)
    if isinstance(obj, TropicalCoral):
        text = render_coral(obj, viewport)
    elif isinstance(obj, TropicalCurve):
        text = render_curve(obj, viewport)
    else:
        text = render_tree(obj)
    write_svg(text, out_path)
    return text
