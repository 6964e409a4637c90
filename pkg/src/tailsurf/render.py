"""Deterministic SVG rendering of surfaces, trajectories, and decompositions.

Exact coordinates are shadowed to floats only here, printed at a fixed nine
decimal places through a single affine scale, with a fixed palette and no
timestamps: the same scene always renders to byte-identical SVG.  Nothing
ever reads exact values back out of a rendering.

Marker colors follow one fixed scheme: portal crossings blue, roof crossings
red, singular contacts black, highlighted start points yellow, with dot
sizes ordered black > red > blue > yellow.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .flow import Trajectory
from .surface import PORTAL, ROOF, SINGULAR, Tail

SCALE = 160.0
MARGIN = 24.0

PALETTE = (
    "#1b9e77",
    "#d95f02",
    "#7570b3",
    "#e7298a",
    "#66a61e",
    "#e6ab02",
    "#a6761d",
    "#666666",
    "#1f78b4",
    "#b2df8a",
)

MARKERS = {
    "singular": ("#000000", 5.0),
    "roof": ("#d62728", 4.0),
    "portal": ("#1f77b4", 3.0),
    "special": ("#e6c700", 2.5),
}


@dataclass
class Scene:
    """Everything to draw, in deterministic order: the surface outline, then
    bands, then polylines, then markers."""

    tail: Tail
    n_squares: int
    bands: list = field(default_factory=list)  # (x0, y0, x1, y1, fill)
    polylines: list = field(default_factory=list)  # (points, color, width)
    markers: list = field(default_factory=list)  # (point, kind)


def _fmt(v: float) -> str:
    return f"{v:.9f}"


def render_scene(scene: Scene) -> str:
    """Serialize the scene to SVG text; pure function of its input."""
    tail, n = scene.tail, scene.n_squares
    extent = float(tail.offset(n))
    width = 2 * MARGIN + extent * SCALE
    height = 2 * MARGIN + SCALE

    def tx(x) -> str:
        return _fmt(MARGIN + float(x) * SCALE)

    def ty(y) -> str:
        return _fmt(MARGIN + (1.0 - float(y)) * SCALE)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        '<rect width="100%" height="100%" fill="#ffffff"/>',
    ]
    for x0, y0, x1, y1, fill in scene.bands:
        parts.append(
            f'<rect class="band" x="{tx(x0)}" y="{ty(y1)}" '
            f'width="{_fmt((float(x1) - float(x0)) * SCALE)}" '
            f'height="{_fmt((float(y1) - float(y0)) * SCALE)}" '
            f'fill="{fill}" fill-opacity="0.35" stroke="none"/>'
        )
    # the staircase outline of squares 1..n
    outline = [f"M {tx(0)} {ty(0)}", f"L {tx(tail.offset(n))} {ty(0)}"]
    for k in range(n, 0, -1):
        outline.append(f"L {tx(tail.offset(k))} {ty(tail.side(k))}")
        outline.append(f"L {tx(tail.offset(k - 1))} {ty(tail.side(k))}")
    outline.append("Z")
    parts.append(
        f'<path class="surface" d="{" ".join(outline)}" fill="none" '
        'stroke="#333333" stroke-width="1.5"/>'
    )
    # shared inner edges, dashed
    for k in range(1, n):
        x = tail.offset(k)
        parts.append(
            f'<line class="edge" x1="{tx(x)}" y1="{ty(0)}" x2="{tx(x)}" '
            f'y2="{ty(tail.side(k + 1))}" stroke="#999999" stroke-width="0.75" '
            'stroke-dasharray="4 3"/>'
        )
    for points, color, width_ in scene.polylines:
        coords = " ".join(f"{tx(p[0])},{ty(p[1])}" for p in points)
        parts.append(
            f'<polyline class="flow" points="{coords}" fill="none" '
            f'stroke="{color}" stroke-width="{_fmt(width_)}"/>'
        )
    for point, kind in scene.markers:
        color, radius = MARKERS[kind]
        parts.append(
            f'<circle class="marker-{kind}" cx="{tx(point[0])}" cy="{ty(point[1])}" '
            f'r="{_fmt(radius)}" fill="{color}"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def surface_scene(tail: Tail, n_squares: int) -> Scene:
    return Scene(tail=tail, n_squares=n_squares)


def add_trajectory(
    scene: Scene,
    traj: Trajectory,
    color: str = "#2ca02c",
    width: float = 1.25,
    with_markers: bool = True,
) -> Scene:
    """Draw a traced path as one polyline per segment plus event markers."""
    for a, b in traj.segments:
        scene.polylines.append(([a, b], color, width))
    if with_markers:
        scene.markers.append((traj.start, "special"))
        for ev in traj.events:
            if ev.kind == ROOF:
                scene.markers.append((ev.point, "roof"))
            elif ev.kind == PORTAL:
                scene.markers.append((ev.point, "portal"))
                scene.markers.append((scene.tail.identify(ev), "portal"))
            elif ev.kind == SINGULAR:
                scene.markers.append((ev.point, "singular"))
    return scene


def spine_scene(tail: Tail, n_squares: int = 8) -> Scene:
    from .cylinders import spine_chain

    chain = spine_chain(tail, n_squares=n_squares)
    scene = surface_scene(tail, n_squares)
    return add_trajectory(scene, chain.pieces[0], color="#000000", width=1.5)


def decomposition_scene(decomposition, n_squares: int | None = None) -> Scene:
    """Waist curves of every cylinder, one palette color per index, plus the
    spine in black on top."""
    tail = Tail.from_q(decomposition.q)
    if n_squares is None:
        n_squares = len(decomposition.cylinders) + 2
    scene = surface_scene(tail, n_squares)
    for cyl in decomposition.cylinders:
        color = PALETTE[(cyl.k - 1) % len(PALETTE)]
        for a, b in cyl.waist.segments:
            scene.polylines.append(([a, b], color, 1.0))
    spine_piece = decomposition.spine.pieces[0]
    for a, b in spine_piece.segments:
        scene.polylines.append(([a, b], "#000000", 1.6))
    return scene


def axis_scene(axis_decomposition, n_squares: int | None = None) -> Scene:
    """Axis cylinders drawn as filled bands (horizontal strips or squares)."""
    tail = Tail(axis_decomposition.r)
    count = len(axis_decomposition.cylinders)
    if n_squares is None:
        n_squares = count + 1
    scene = surface_scene(tail, n_squares)
    for cyl in axis_decomposition.cylinders:
        color = PALETTE[(cyl.k - 1) % len(PALETTE)]
        if axis_decomposition.kind == "horizontal":
            scene.bands.append(
                (Fraction(0), tail.side(cyl.k + 1), tail.offset(cyl.k), tail.side(cyl.k), color)
            )
        else:
            scene.bands.append(
                (tail.offset(cyl.k - 1), Fraction(0), tail.offset(cyl.k), tail.side(cyl.k), color)
            )
    return scene
