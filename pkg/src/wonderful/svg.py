"""Minimal deterministic SVG output for rank <= 2 pictures.

Drawing coordinates are the only place floats appear; they are formatted
with a fixed number of decimals so the output is byte-stable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .affine import Alcove
from .errors import UnsupportedError
from .voronoi import LTFan, VoronoiCell

WIDTH = 480
HEIGHT = 360


def _f(x) -> str:
    return f"{float(x):.3f}"


@dataclass
class Canvas:
    """World box [xmin, xmax] x [ymin, ymax] mapped onto the pixel frame (y up)."""

    xmin: float
    xmax: float
    ymin: float
    ymax: float
    elements: list[str] = field(default_factory=list)

    def _px(self, x, y) -> tuple[str, str]:
        sx = (float(x) - self.xmin) / (self.xmax - self.xmin) * (WIDTH - 40) + 20
        sy = HEIGHT - 20 - (float(y) - self.ymin) / (self.ymax - self.ymin) * (HEIGHT - 40)
        return _f(sx), _f(sy)

    def dot(self, x, y, cls: str = "lattice"):
        px, py = self._px(x, y)
        self.elements.append(f'<circle class="{cls}" cx="{px}" cy="{py}" r="3"/>')

    def line(self, a: Sequence, b: Sequence, cls: str):
        x1, y1 = self._px(*a)
        x2, y2 = self._px(*b)
        self.elements.append(f'<line class="{cls}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')

    def polygon(self, pts: Sequence[Sequence], cls: str):
        coords = " ".join(",".join(self._px(*p)) for p in pts)
        self.elements.append(f'<polygon class="{cls}" points="{coords}"/>')

    def render(self, title: str) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
                f'viewBox="0 0 {WIDTH} {HEIGHT}">')
        style = ("<style>.lattice{fill:#000}.center{fill:#c00}.ray{stroke:#036;stroke-width:1}"
                 ".cell{fill:none;stroke:#999;stroke-width:1}.wall{stroke:#c00;stroke-width:1.5}"
                 ".axis{stroke:#ccc;stroke-width:1}.alcove{fill:#fdd;stroke:#c00}</style>")
        body = "\n".join(self.elements)
        return f"{head}\n<title>{title}</title>\n{style}\n{body}\n</svg>\n"


def _angular_key(v):
    # order vertices of a convex polygon around its centroid without trig
    x, y = v
    half = 0 if (y > 0 or (y == 0 and x > 0)) else 1
    return (half, Fraction(-x, abs(x) + abs(y)) if half == 0 else Fraction(x, abs(x) + abs(y)))


def _ordered(vertices: Sequence[Sequence]) -> list:
    n = len(vertices)
    cx = sum(Fraction(v[0]) for v in vertices) / n
    cy = sum(Fraction(v[1]) for v in vertices) / n
    return sorted(vertices, key=lambda v: _angular_key((Fraction(v[0]) - cx, Fraction(v[1]) - cy)))


def lt_fan_svg(lf: LTFan, height: int = 2) -> str:
    """Cone on the Voronoi subdivision of a rank-one lattice, drawn in the (V_T, height) plane."""
    if lf.form.rank != 1:
        raise UnsupportedError("LT fan pictures need a rank-one lattice (ambient dimension 2)")
    w = lf.window
    c = Canvas(-w - 1, w + 1, 0, height)
    c.line((-w - 1, 0), (w + 1, 0), "axis")
    c.line((-w - 1, 1), (w + 1, 1), "axis")
    for ray in lf.rays:
        x, h = ray
        scale = Fraction(height, h)
        end = (Fraction(x) * scale, height)
        if abs(end[0]) > w + 1:
            end = (Fraction(w + 1) * (1 if x > 0 else -1), Fraction(h * (w + 1), abs(x)))
        c.line((0, 0), end, "ray")
    for s in lf.centers:
        c.dot(s[0], 1, "center")
    c.dot(0, 0)
    return c.render("cone on the Voronoi subdivision")


def fan_svg(cones_2d: Sequence[Sequence[Sequence]]) -> str:
    """Rays of a fan in a rank-two lattice; each cone given by its generators."""
    c = Canvas(-3, 3, -3, 3)
    c.line((-3, 0), (3, 0), "axis")
    c.line((0, -3), (0, 3), "axis")
    rays = sorted({tuple(g) for cone in cones_2d for g in cone})
    for r in rays:
        m = max(abs(Fraction(x)) for x in r)
        c.line((0, 0), tuple(Fraction(x) * 3 / m for x in r), "ray")
    c.dot(0, 0)
    return c.render("fan")


def alcove_svg(al: Alcove) -> str:
    pts = [v for _, v in al.vertices]
    dim = len(pts[0])
    if dim > 2:
        raise UnsupportedError("alcove pictures need rank <= 2")
    if dim == 1:
        pts = [(p[0], 0) for p in pts]
    xs = [Fraction(p[0]) for p in pts]
    ys = [Fraction(p[1]) for p in pts]
    pad = Fraction(1, 2)
    c = Canvas(min(xs) - pad, max(xs) + pad, min(ys) - pad, max(ys) + pad)
    for x in range(int(min(xs) - pad) - 1, int(max(xs) + pad) + 2):
        for y in range(int(min(ys) - pad) - 1, int(max(ys) + pad) + 2):
            if min(xs) - pad <= x <= max(xs) + pad and min(ys) - pad <= y <= max(ys) + pad:
                c.dot(x, y)
    if dim == 1:
        c.line(pts[0], pts[1], "wall")
    else:
        c.polygon(_ordered(pts), "alcove")
    return c.render("fundamental alcove")


def voronoi_svg(cells: Sequence[VoronoiCell]) -> str:
    if not cells:
        return Canvas(-1, 1, -1, 1).render("voronoi")
    dim = len(cells[0].center)
    if dim > 2:
        raise UnsupportedError("Voronoi pictures need rank <= 2")
    if dim == 1:
        xs = [Fraction(v[0]) for cell in cells for v in cell.vertices]
        c = Canvas(min(xs) - 1, max(xs) + 1, -1, 1)
        for cell in cells:
            a, b = cell.interval()
            c.line((a, 0), (b, 0), "cell")
            c.dot(cell.center[0], 0, "center")
        return c.render("voronoi")
    xs = [Fraction(v[0]) for cell in cells for v in cell.vertices]
    ys = [Fraction(v[1]) for cell in cells for v in cell.vertices]
    c = Canvas(min(xs) - 1, max(xs) + 1, min(ys) - 1, max(ys) + 1)
    for cell in cells:
        c.polygon(_ordered(cell.vertices), "cell")
        c.dot(*cell.center, cls="center")
    return c.render("voronoi")


def empty_svg() -> str:
    return Canvas(-1, 1, -1, 1).render("empty")


def svg_elements(doc: str) -> list[str]:
    """Tag names of the drawn elements, in order (for structural comparisons)."""
    return re.findall(r"<(circle|line|polygon)\b", doc)
