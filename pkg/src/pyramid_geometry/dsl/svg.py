"""SVG 1.1 rendering of an evaluated construction.

Every bound point, line and circle becomes an element labelled with its
identifier, in binding order. The y axis is flipped so the drawing reads
like a textbook figure.
"""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET

from ..geom import Circle, Line, Point
from .evaluator import Env

SVG_NS = "http://www.w3.org/2000/svg"
ET.register_namespace("", SVG_NS)

Bounds = tuple[float, float, float, float]  # xmin, ymin, xmax, ymax


def _fmt(v: float) -> str:
    text = f"{v:.6f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def auto_bounds(env: Env, margin: float = 0.1) -> Bounds:
    xs, ys = [], []
    for _, _, v in env.items():
        if isinstance(v, Point):
            xs.append(v.x)
            ys.append(v.y)
        elif isinstance(v, Circle):
            xs += [v.center.x - v.radius, v.center.x + v.radius]
            ys += [v.center.y - v.radius, v.center.y + v.radius]
    if not xs:
        return (-1.0, -1.0, 1.0, 1.0)
    xmin, xmax, ymin, ymax = min(xs), max(xs), min(ys), max(ys)
    pad = margin * max(xmax - xmin, ymax - ymin, 1.0)
    return (xmin - pad, ymin - pad, xmax + pad, ymax + pad)


def _clip(line: Line, b: Bounds) -> tuple[Point, Point] | None:
    """Liang-Barsky clip of an infinite line to the viewport."""
    lo, hi = -math.inf, math.inf
    for p0, d, vmin, vmax in (
        (line.anchor.x, line.direction.x, b[0], b[2]),
        (line.anchor.y, line.direction.y, b[1], b[3]),
    ):
        if abs(d) < 1e-15:
            if not vmin <= p0 <= vmax:
                return None
            continue
        t1, t2 = sorted(((vmin - p0) / d, (vmax - p0) / d))
        lo, hi = max(lo, t1), min(hi, t2)
    if lo > hi:
        return None
    return line.point_at(lo), line.point_at(hi)


def render_svg(env: Env, viewport: Bounds | None = None, title: str | None = None) -> str:
    b = viewport or auto_bounds(env)
    xmin, ymin, xmax, ymax = b
    w, h = xmax - xmin, ymax - ymin
    stroke = _fmt(max(w, h) / 400)
    font = _fmt(max(w, h) / 40)
    dot = _fmt(max(w, h) / 200)

    root = ET.Element(
        f"{{{SVG_NS}}}svg",
        {
            "version": "1.1",
            "viewBox": f"{_fmt(xmin)} {_fmt(-ymax)} {_fmt(w)} {_fmt(h)}",
            "width": "800",
            "height": _fmt(800 * h / w),
        },
    )
    if title:
        ET.SubElement(root, f"{{{SVG_NS}}}title").text = title
    g = ET.SubElement(root, f"{{{SVG_NS}}}g", {"stroke-width": stroke, "font-size": font, "font-family": "sans-serif"})

    def label(name: str, x: float, y: float) -> None:
        t = ET.SubElement(g, f"{{{SVG_NS}}}text", {"x": _fmt(x), "y": _fmt(-y), "class": "label"})
        t.text = name

    for name, kind, v in env.items():
        if isinstance(v, Point):
            ET.SubElement(
                g, f"{{{SVG_NS}}}circle",
                {"id": name, "class": "point", "cx": _fmt(v.x), "cy": _fmt(-v.y), "r": dot, "fill": "black"},
            )
            label(name, v.x, v.y)
        elif isinstance(v, Line):
            seg = _clip(v, b)
            if seg is None:
                continue
            p, q = seg
            ET.SubElement(
                g, f"{{{SVG_NS}}}line",
                {"id": name, "class": "line", "x1": _fmt(p.x), "y1": _fmt(-p.y), "x2": _fmt(q.x), "y2": _fmt(-q.y), "stroke": "steelblue"},
            )
            label(name, v.anchor.x, v.anchor.y)
        elif isinstance(v, Circle):
            ET.SubElement(
                g, f"{{{SVG_NS}}}circle",
                {"id": name, "class": "circle", "cx": _fmt(v.center.x), "cy": _fmt(-v.center.y), "r": _fmt(v.radius), "fill": "none", "stroke": "firebrick"},
            )
            label(name, v.center.x + v.radius * math.cos(math.pi / 4), v.center.y + v.radius * math.sin(math.pi / 4))

    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"
