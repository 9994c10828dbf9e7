"""SVG drawings of tour lifts in the cover.

Knight moves are straight segments between square centres.  Red horizontal
lines mark rows ``k*n`` (the seams where the glide acts on Mobius and Klein
boards); on Klein boards blue vertical lines mark columns ``k*m``.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET

from ktours.boards import Surface
from ktours.homotopy import LiftedPath

MARGIN = 1


def render_svg(lift: LiftedPath, scale: int = 32) -> str:
    spec = lift.board
    xs = [a for a, _ in lift.steps]
    ys = [b for _, b in lift.steps]
    if spec.surface in (Surface.RECTANGLE, Surface.CYLINDER):
        ys += [0, spec.n - 1]
    if spec.surface in (Surface.RECTANGLE, Surface.MOBIUS):
        xs += [0, spec.m - 1]
    x0, x1 = min(xs) - MARGIN, max(xs) + 1 + MARGIN
    y0, y1 = min(ys) - MARGIN, max(ys) + 1 + MARGIN
    width, height = (x1 - x0) * scale, (y1 - y0) * scale

    def px(x: float) -> float:
        return (x - x0) * scale

    def py(y: float) -> float:  # rows grow upward
        return (y1 - y) * scale

    svg = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", width=str(width), height=str(height),
                     viewBox=f"0 0 {width} {height}")
    ET.SubElement(svg, "rect", width=str(width), height=str(height), fill="#f4f4f4")
    guides = ET.SubElement(svg, "g", {"class": "guides", "stroke-width": "2"})
    if spec.surface in (Surface.MOBIUS, Surface.KLEIN):
        for k in range(-(-y0 // spec.n), y1 // spec.n + 1):
            y = py(k * spec.n)
            ET.SubElement(guides, "line", x1="0", y1=str(y), x2=str(width), y2=str(y), stroke="red")
    if spec.surface is Surface.KLEIN:
        for k in range(-(-x0 // spec.m), x1 // spec.m + 1):
            x = px(k * spec.m)
            ET.SubElement(guides, "line", x1=str(x), y1="0", x2=str(x), y2=str(height), stroke="blue")
    tour = ET.SubElement(svg, "g", {"class": "tour", "stroke": "black", "stroke-width": "2"})
    for (a, b), (c, d) in zip(lift.steps, lift.steps[1:]):
        ET.SubElement(tour, "line", x1=str(px(a + 0.5)), y1=str(py(b + 0.5)), x2=str(px(c + 0.5)),
                      y2=str(py(d + 0.5)))
    a, b = lift.start
    ET.SubElement(svg, "circle", cx=str(px(a + 0.5)), cy=str(py(b + 0.5)), r=str(scale / 5), fill="white",
                  stroke="black")
    return ET.tostring(svg, encoding="unicode") + "\n"
