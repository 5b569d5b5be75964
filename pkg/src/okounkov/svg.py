"""Static SVG emission for bodies and PL functions.

The only place floating point enters the library: coordinates are
rendered with 12 significant digits.  Two-dimensional polytopes become
polygons, one-variable PL functions become graphs, and three-dimensional
bodies are drawn as a stack of evenly spaced horizontal slices.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DimensionTooHigh
from .geometry import PLFunction, Polytope, slice_polytope

WIDTH = 420.0
HEIGHT = 420.0
MARGIN = 40.0


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _bounds(points):
    xs = [float(p[0]) for p in points]
    ys = [float(p[1]) for p in points]
    lo = (min(xs), min(ys))
    hi = (max(xs), max(ys))
    span = (max(hi[0] - lo[0], 1e-9), max(hi[1] - lo[1], 1e-9))
    return lo, span


def _to_screen(p, lo, span):
    x = MARGIN + (float(p[0]) - lo[0]) / span[0] * (WIDTH - 2 * MARGIN)
    y = HEIGHT - MARGIN - (float(p[1]) - lo[1]) / span[1] * (HEIGHT - 2 * MARGIN)
    return x, y


def _polygon_order(vertices):
    cx = sum(float(v[0]) for v in vertices) / len(vertices)
    cy = sum(float(v[1]) for v in vertices) / len(vertices)
    import math

    return sorted(
        vertices, key=lambda v: math.atan2(float(v[1]) - cy, float(v[0]) - cx)
    )


def _document(elements) -> str:
    body = "\n".join(elements)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(WIDTH)}" height="{_fmt(HEIGHT)}">\n{body}\n</svg>\n'
    )


def polytope_svg(p: Polytope) -> str:
    """Polygon rendering of a 1- or 2-dimensional polytope."""
    if p.ambient_dim == 1:
        pts = [(v[0], Fraction(0)) for v in p.vertices]
    elif p.ambient_dim == 2:
        pts = list(p.vertices)
    elif p.ambient_dim == 3:
        return slice_stack_svg(p)
    else:
        raise DimensionTooHigh(f"cannot draw a {p.ambient_dim}-dimensional body")
    lo, span = _bounds(pts)
    ordered = _polygon_order(pts)
    coords = " ".join(
        ",".join(map(_fmt, _to_screen(v, lo, span))) for v in ordered
    )
    shape = (
        f'<polygon points="{coords}" fill="#9ecae1" stroke="#2171b5" '
        f'stroke-width="1.5"/>'
    )
    labels = [
        f'<circle cx="{_fmt(_to_screen(v, lo, span)[0])}" '
        f'cy="{_fmt(_to_screen(v, lo, span)[1])}" r="2.5" fill="#08306b"/>'
        for v in pts
    ]
    return _document([shape, *labels])


def pl_function_svg(f: PLFunction) -> str:
    """Graph of a PL function with a one-dimensional domain."""
    if f.domain.ambient_dim != 1:
        raise DimensionTooHigh("graph rendering needs a 1-dimensional domain")
    knots = sorted({v[0] for cell in f.cells for v in cell})
    pts = [(x, f.value((x,))) for x in knots]
    lo, span = _bounds(pts)
    path = " ".join(",".join(map(_fmt, _to_screen(p, lo, span))) for p in pts)
    line = (
        f'<polyline points="{path}" fill="none" stroke="#cb181d" '
        f'stroke-width="2"/>'
    )
    axis = (
        f'<line x1="{_fmt(MARGIN)}" y1="{_fmt(HEIGHT - MARGIN)}" '
        f'x2="{_fmt(WIDTH - MARGIN)}" y2="{_fmt(HEIGHT - MARGIN)}" '
        f'stroke="#636363" stroke-width="1"/>'
    )
    return _document([axis, line])


def slice_stack_svg(p: Polytope, slices: int = 5) -> str:
    """Three-dimensional body as evenly spaced slice polygons."""
    if p.ambient_dim != 3:
        raise DimensionTooHigh("slice stack rendering needs a 3-dimensional body")
    axis = 2
    lo_t = min(v[axis] for v in p.vertices)
    hi_t = max(v[axis] for v in p.vertices)
    all_pts = [(v[0], v[1]) for v in p.vertices]
    lo, span = _bounds(all_pts)
    elements = []
    for i in range(slices):
        t = lo_t + (hi_t - lo_t) * Fraction(2 * i + 1, 2 * slices)
        sl = slice_polytope(p, {axis: t})
        if sl.is_empty or len(sl.vertices) < 3:
            continue
        ordered = _polygon_order(list(sl.vertices))
        coords = " ".join(
            ",".join(map(_fmt, _to_screen(v, lo, span))) for v in ordered
        )
        opacity = 0.25 + 0.12 * i
        elements.append(
            f'<polygon points="{coords}" fill="#a1d99b" '
            f'fill-opacity="{_fmt(opacity)}" stroke="#238b45" stroke-width="1"/>'
        )
    return _document(elements)
