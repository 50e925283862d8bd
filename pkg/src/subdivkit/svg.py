"""SVG rendering of polygons and refinement traces."""
from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .refinement import Polygon, RefinementTrace

SVG_NS = "http://www.w3.org/2000/svg"

# initial polygon first, then one colour per refinement level
PALETTE = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")


@dataclass(frozen=True)
class Style:
    stroke: str
    width: float = 1.5
    dash: str | None = None


@dataclass(frozen=True)
class SvgScene:
    polylines: tuple[tuple[Polygon, Style], ...]
    view_box: tuple[float, float, float, float]


def _xy(p: Polygon) -> list[tuple[float, float]]:
    # SVG's y axis points down; flip it so shapes keep their orientation.
    if p.dimension == 1:
        return [(float(pt[0]), 0.0) for pt in p.points]
    return [(float(pt[0]), 0.0 - float(pt[1])) for pt in p.points]


def _view_box(polygons: Sequence[Polygon], margin: float = 0.05) -> tuple[float, float, float, float]:
    xs, ys = [], []
    for p in polygons:
        for x, y in _xy(p):
            xs.append(x)
            ys.append(y)
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0)
    pad = margin * span if span > 0 else 1.0
    return (x0 - pad, y0 - pad, (x1 - x0) + 2 * pad, (y1 - y0) + 2 * pad)


def scene_for_trace(trace: RefinementTrace) -> SvgScene:
    items = []
    for level, poly in enumerate(trace.levels):
        colour = PALETTE[level % len(PALETTE)]
        items.append((poly, Style(colour, 2.0 if level == 0 else 1.2, None)))
    return SvgScene(tuple(items), _view_box(trace.levels))


def scene_for_polygons(polygons: Sequence[Polygon]) -> SvgScene:
    items = tuple((p, Style(PALETTE[i % len(PALETTE)])) for i, p in enumerate(polygons))
    return SvgScene(items, _view_box(polygons))


def _num(x: float) -> str:
    return f"{x:.9g}"


def render(scene: SvgScene, title: str | None = None) -> str:
    x, y, w, h = scene.view_box
    root = ET.Element(
        "svg",
        xmlns=SVG_NS,
        version="1.1",
        width="640",
        height=_num(640 * h / w) if w > 0 else "640",
        viewBox=" ".join(_num(v) for v in (x, y, w, h)),
    )
    if title:
        ET.SubElement(root, "title").text = title
    for level, (poly, style) in enumerate(scene.polylines):
        pts = _xy(poly)
        if poly.closed:
            pts.append(pts[0])
        attrs = {
            "points": " ".join(f"{_num(px)},{_num(py)}" for px, py in pts),
            "fill": "none",
            "stroke": style.stroke,
            "stroke-width": _num(style.width),
            "vector-effect": "non-scaling-stroke",
            "data-level": str(level),
            "data-vertices": str(len(poly)),
        }
        if style.dash:
            attrs["stroke-dasharray"] = style.dash
        ET.SubElement(root, "polyline", attrs)
    ET.indent(root)
    return ET.tostring(root, encoding="unicode", xml_declaration=True) + "\n"


def write_svg(scene: SvgScene, path: str | Path, title: str | None = None) -> None:
    Path(path).write_text(render(scene, title), encoding="utf-8")
