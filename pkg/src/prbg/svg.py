"""Deterministic SVG drawings of point graphs and decompositions."""
from __future__ import annotations

from xml.sax.saxutils import escape

from .decompose import Decomposition
from .proximity import GeoGraph

CANVAS = 600
MARGIN = 40
RADIUS = 5
FONT_SIZE = 11
STYLES = {
    "edge": 'stroke="#333333" stroke-width="1.5"',
    "e1": 'stroke="#1f77b4" stroke-width="2"',
    "e2": 'stroke="#d62728" stroke-width="2"',
    "dropped": 'stroke="#999999" stroke-width="1" stroke-dasharray="4 3"',
}


def _frame(points):
    xs = [float(p.x) for p in points]
    ys = [float(p.y) for p in points]
    lo_x, hi_x, lo_y, hi_y = min(xs), max(xs), min(ys), max(ys)
    span = max(hi_x - lo_x, hi_y - lo_y) or 1.0
    k = (CANVAS - 2 * MARGIN) / span

    def place(p):
        return MARGIN + (float(p.x) - lo_x) * k, CANVAS - MARGIN - (float(p.y) - lo_y) * k

    return place


def _doc(body: list[str]) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" '
            f'viewBox="0 0 {CANVAS} {CANVAS}">')
    return "\n".join([head, f'<rect width="{CANVAS}" height="{CANVAS}" fill="white"/>', *body, "</svg>"]) + "\n"


def _line(a, b, style: str, cls: str) -> str:
    return f'<line class="{cls}" x1="{a[0]:.2f}" y1="{a[1]:.2f}" x2="{b[0]:.2f}" y2="{b[1]:.2f}" {STYLES[style]}/>'


def _vertices(points, place) -> list[str]:
    out = []
    for i, p in enumerate(points):
        x, y = place(p)
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{RADIUS}" fill="black"/>')
        out.append(f'<text x="{x + 7:.2f}" y="{y - 7:.2f}" font-size="{FONT_SIZE}" '
                   f'font-family="monospace">{escape(str(i + 1))}</text>')
    return out


def export_svg(obj: GeoGraph | Decomposition) -> str:
    """Points as labelled circles, edges as lines.

    A decomposition colours its first class blue, its second red and every
    dropped edge grey dashed.
    """
    if isinstance(obj, Decomposition):
        g = obj.source
        place = _frame(g.points)
        body = []
        groups = [
            ("e1", sorted(obj.point_edge(1, e) for e in obj.g1.edges)),
            ("e2", sorted(obj.point_edge(2, e) for e in obj.g2.edges)),
            ("dropped", sorted(set(obj.noncrossing_dropped) | set(obj.left_trimmed) | set(obj.right_trimmed))),
        ]
        for style, edges in groups:
            body += [_line(place(g.points[a]), place(g.points[b]), style, style) for a, b in edges]
        return _doc(body + _vertices(g.points, place))
    g = obj
    if not g.points:
        return _doc([])
    place = _frame(g.points)
    body = [_line(place(g.points[a]), place(g.points[b]), "edge", "edge") for a, b in sorted(g.edges)]
    return _doc(body + _vertices(g.points, place))
