"""Deterministic SVG rendering and edge rasterisation.

Torus layouts render in three context modes: a single cell with
boundary labels on wrapped links (nocontext), a half-cell replicated
margin (partial), and the full 3x3 tiling with the centre cell
highlighted (full).  Sphere layouts project through Equal Earth or the
two-disc Orthographic Hemisphere view.

Output is byte-stable: fixed 6-decimal coordinates, no timestamps,
element order fixed by node and edge indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .geometry import best_wrapping, torus_edge_segments
from .graphs import Clustering, Graph
from .layout import FlatLayout, SphereLayout, TorusLayout, panned_positions
from .metrics import TopologyMismatch
from .projections import (
    EQUAL_EARTH,
    ORTHOGRAPHIC,
    equal_earth_extent,
    great_circle_points,
    project_equal_earth,
    rotate_points,
    sample_equal_earth_outline,
    vector_to_lonlat,
)

GREAT_CIRCLE_SEGMENTS = 64

MODES = ("flat", "torus-nocontext", "torus-partial", "torus-full", "sphere")

PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


class RasterTooSmall(ValueError):
    pass


@dataclass(frozen=True)
class ProjectionKind:
    tag: str
    rotation: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if self.tag not in (EQUAL_EARTH, ORTHOGRAPHIC):
            raise ValueError(f"unknown projection {self.tag!r}")


@dataclass(frozen=True)
class RenderSpec:
    mode: str
    projection: Optional[str] = None
    viewport: Optional[tuple[int, int]] = None
    boundary_labels: bool = True
    node_radius: float = 4.0
    stroke: float = 1.0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if (self.mode == "sphere") != (self.projection is not None):
            raise ValueError("projection must be given exactly for sphere mode")
        if self.viewport is not None and min(self.viewport) <= 0:
            raise ValueError("viewport must be positive")

    def resolved_viewport(self) -> tuple[int, int]:
        if self.viewport is not None:
            return self.viewport
        return (900, 317) if self.mode == "sphere" else (650, 650)


def _f(v: float) -> str:
    s = f"{v:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _node_fill(i: int, c: Optional[Clustering]) -> str:
    if c is None:
        return PALETTE[0]
    return PALETTE[c.assignment[i] % len(PALETTE)]


class _Svg:
    def __init__(self, w: int, h: int):
        self.parts = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
            f'viewBox="0 0 {w} {h}">',
        ]

    def line(self, x1, y1, x2, y2, stroke, width):
        self.parts.append(
            f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
            f'stroke="{stroke}" stroke-width="{_f(width)}"/>'
        )

    def circle(self, cx, cy, r, fill):
        self.parts.append(
            f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(r)}" fill="{fill}"/>'
        )

    def rect(self, x, y, w, h, stroke, width):
        self.parts.append(
            f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(w)}" height="{_f(h)}" '
            f'fill="none" stroke="{stroke}" stroke-width="{_f(width)}"/>'
        )

    def text(self, x, y, content, size=10, fill="#000000"):
        self.parts.append(
            f'<text x="{_f(x)}" y="{_f(y)}" font-size="{size}" '
            f'text-anchor="middle" fill="{fill}">{content}</text>'
        )

    def path(self, points, stroke, width):
        coords = " L ".join(f"{_f(x)} {_f(y)}" for x, y in points)
        self.parts.append(
            f'<path d="M {coords}" fill="none" stroke="{stroke}" '
            f'stroke-width="{_f(width)}"/>'
        )

    def done(self) -> str:
        return "\n".join(self.parts + ["</svg>"])


def _clip_segment(p, q, xmin, ymin, xmax, ymax):
    """Liang-Barsky; returns the clipped segment or None."""
    dx = q[0] - p[0]
    dy = q[1] - p[1]
    t0, t1 = 0.0, 1.0
    for num, den in (
        (xmin - p[0], dx), (p[0] - xmax, -dx),
        (ymin - p[1], dy), (p[1] - ymax, -dy),
    ):
        if den == 0.0:
            if num > 0.0:
                return None
            continue
        t = num / den
        if den > 0.0:
            if t > t1:
                return None
            t0 = max(t0, t)
        else:
            if t < t0:
                return None
            t1 = min(t1, t)
    if t0 > t1:
        return None
    return (
        (p[0] + t0 * dx, p[1] + t0 * dy),
        (p[0] + t1 * dx, p[1] + t1 * dy),
    )


# --- torus / flat ------------------------------------------------------------


def _render_flat(layout: FlatLayout, g: Graph, spec: RenderSpec,
                 c: Optional[Clustering]) -> str:
    w, h = spec.resolved_viewport()
    pos = layout.positions
    xmin, ymin = pos.min(axis=0)
    xmax, ymax = pos.max(axis=0)
    span = max(xmax - xmin, ymax - ymin, 1e-9)
    margin = 0.08 * min(w, h)
    scale = (min(w, h) - 2 * margin) / span
    ox = (w - scale * (xmax - xmin)) / 2 - scale * xmin
    oy = (h - scale * (ymax - ymin)) / 2 - scale * ymin

    def to_px(p):
        return (ox + scale * p[0], oy + scale * p[1])

    svg = _Svg(w, h)
    for u, v in g.edges:
        x1, y1 = to_px(pos[u])
        x2, y2 = to_px(pos[v])
        svg.line(x1, y1, x2, y2, "#333333", spec.stroke)
    for i in range(g.node_count):
        x, y = to_px(pos[i])
        svg.circle(x, y, spec.node_radius, _node_fill(i, c))
    if g.labels is not None:
        for i in range(g.node_count):
            x, y = to_px(pos[i])
            svg.text(x, y - spec.node_radius - 2, g.labels[i])
    return svg.done()


def _torus_transform(spec: RenderSpec, cell: float, tiles: float, origin: float):
    """Pixel mapping for a square region [origin, origin + tiles*cell)^2."""
    w, h = spec.resolved_viewport()
    scale = min(w, h) / (tiles * cell)
    ox = (w - scale * tiles * cell) / 2 - scale * origin
    oy = (h - scale * tiles * cell) / 2 - scale * origin
    return scale, ox, oy


def _render_torus(layout: TorusLayout, g: Graph, spec: RenderSpec,
                  c: Optional[Clustering]) -> str:
    w, h = spec.resolved_viewport()
    cell = layout.cell_size
    pos = panned_positions(layout)
    svg = _Svg(w, h)

    if spec.mode == "torus-nocontext":
        scale, ox, oy = _torus_transform(spec, cell, 1.0, 0.0)

        def to_px(p):
            return (ox + scale * p[0], oy + scale * p[1])

        labels = []
        for u, v in g.edges:
            off, _, _ = best_wrapping(tuple(pos[u]), tuple(pos[v]), cell)
            pieces = torus_edge_segments(tuple(pos[u]), tuple(pos[v]), off, cell)
            for p, q in pieces:
                x1, y1 = to_px(p)
                x2, y2 = to_px(q)
                svg.line(x1, y1, x2, y2, "#333333", spec.stroke)
            if off != (0, 0) and spec.boundary_labels and len(pieces) >= 2:
                # name the far endpoint where the link leaves the cell
                labels.append((to_px(pieces[0][1]), g.label_of(v)))
                labels.append((to_px(pieces[-1][0]), g.label_of(u)))
        for i in range(g.node_count):
            x, y = to_px(pos[i])
            svg.circle(x, y, spec.node_radius, _node_fill(i, c))
        if g.labels is not None:
            for i in range(g.node_count):
                x, y = to_px(pos[i])
                svg.text(x, y - spec.node_radius - 2, g.labels[i])
        for (x, y), content in labels:
            svg.text(min(max(x, 8.0), w - 8.0), min(max(y, 10.0), h - 4.0),
                     content, size=9, fill="#555555")
        svg.rect(ox, oy, scale * cell, scale * cell, "#aaaaaa", 1.0)
        return svg.done()

    # replicated-context modes
    if spec.mode == "torus-full":
        origin, tiles = -cell, 3.0
    else:  # torus-partial: half-cell margin around the centre cell
        origin, tiles = -cell / 2.0, 2.0
    scale, ox, oy = _torus_transform(spec, cell, tiles, origin)
    lo, hi = origin, origin + tiles * cell

    def to_px(p):
        return (ox + scale * p[0], oy + scale * p[1])

    for u, v in g.edges:
        _, vec, _ = best_wrapping(tuple(pos[u]), tuple(pos[v]), cell)
        for j in (-1, 0, 1):
            for i in (-1, 0, 1):
                p = (pos[u][0] + i * cell, pos[u][1] + j * cell)
                q = (p[0] + vec[0], p[1] + vec[1])
                clipped = _clip_segment(p, q, lo, lo, hi, hi)
                if clipped is None:
                    continue
                (x1, y1), (x2, y2) = (to_px(clipped[0]), to_px(clipped[1]))
                svg.line(x1, y1, x2, y2, "#333333", spec.stroke)
    for i in range(g.node_count):
        for j in (-1, 0, 1):
            for k in (-1, 0, 1):
                x = pos[i][0] + k * cell
                y = pos[i][1] + j * cell
                if lo <= x < hi and lo <= y < hi:
                    px, py = to_px((x, y))
                    svg.circle(px, py, spec.node_radius, _node_fill(i, c))
    # centre cell highlighted
    cx0, cy0 = to_px((0.0, 0.0))
    svg.rect(cx0, cy0, scale * cell, scale * cell, "#d62728", 1.5)
    return svg.done()


# --- sphere ------------------------------------------------------------------


def _equal_earth_to_px(w: int, h: int, margin: float = 2.0):
    x_max, y_max = equal_earth_extent()
    scale = min((w - 2 * margin) / (2 * x_max), (h - 2 * margin) / (2 * y_max))

    def to_px(xy):
        return (w / 2.0 + scale * xy[0], h / 2.0 - scale * xy[1])

    return to_px, scale


def _orthographic_geometry(w: int, h: int, margin: float = 2.0):
    r = min(w / 4.0 - margin, h / 2.0 - margin)
    centres = {"west": (w / 4.0, h / 2.0), "east": (3.0 * w / 4.0, h / 2.0)}

    def to_px(face, u, v):
        cx, cy = centres[face]
        return (cx + r * u, cy - r * v)

    return to_px, r, centres


def sphere_edge_polylines(layout: SphereLayout, g: Graph, kind: ProjectionKind,
                          w: int, h: int) -> list[list[tuple[float, float]]]:
    """Projected great-circle polylines in pixel space, split where the
    path leaves the map (dateline jump or hemisphere change)."""
    rotated = rotate_points(layout.positions, kind.rotation)
    pieces: list[list[tuple[float, float]]] = []
    if kind.tag == EQUAL_EARTH:
        to_px, scale = _equal_earth_to_px(w, h)
        from .projections import A1, A2, A3, A4, M

        for u, v in g.edges:
            pts = great_circle_points(rotated[u], rotated[v], GREAT_CIRCLE_SEGMENTS)
            lons = np.arctan2(pts[:, 1], pts[:, 0])
            lats = np.arcsin(np.clip(pts[:, 2], -1.0, 1.0))
            theta = np.arcsin(M * np.sin(lats))
            t2 = theta * theta
            t6 = t2 * t2 * t2
            xs = lons * np.cos(theta) / (
                M * (A1 + 3.0 * A2 * t2 + t6 * (7.0 * A3 + 9.0 * A4 * t2))
            )
            ys = theta * (A1 + A2 * t2 + t6 * (A3 + A4 * t2))
            px = w / 2.0 + scale * xs
            py = h / 2.0 - scale * ys
            breaks = np.abs(np.diff(lons)) > math.pi  # crossed the seam
            start = 0
            for i in np.nonzero(breaks)[0]:
                if i + 1 - start > 1:
                    pieces.append(list(zip(px[start:i + 1], py[start:i + 1])))
                start = i + 1
            if len(px) - start > 1:
                pieces.append(list(zip(px[start:], py[start:])))
    else:
        to_px, _, _ = _orthographic_geometry(w, h)
        for u, v in g.edges:
            pts = great_circle_points(rotated[u], rotated[v], GREAT_CIRCLE_SEGMENTS)
            current = []
            face0 = None
            for p in pts:
                face = "east" if p[2] >= 0.0 else "west"
                uu, vv = float(p[0]), float(p[1])
                if face == "west":
                    uu = -uu
                px = to_px(face, uu, vv)
                if face != face0 and current:
                    if len(current) > 1:
                        pieces.append(current)
                    current = []
                face0 = face
                current.append(px)
            if len(current) > 1:
                pieces.append(current)
    return pieces


def _render_sphere(layout: SphereLayout, g: Graph, spec: RenderSpec,
                   c: Optional[Clustering]) -> str:
    w, h = spec.resolved_viewport()
    kind = ProjectionKind(spec.projection, layout.view_rotation)
    svg = _Svg(w, h)
    if kind.tag == EQUAL_EARTH:
        to_px, _ = _equal_earth_to_px(w, h)
        outline = [to_px(p) for p in sample_equal_earth_outline()]
        svg.path(outline, "#aaaaaa", 1.0)
    else:
        _, r, centres = _orthographic_geometry(w, h)
        for face in ("west", "east"):
            cx, cy = centres[face]
            svg.parts.append(
                f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(r)}" fill="none" '
                f'stroke="#aaaaaa" stroke-width="1.000000"/>'
            )
    for piece in sphere_edge_polylines(layout, g, kind, w, h):
        svg.path(piece, "#333333", spec.stroke)

    rotated = rotate_points(layout.positions, kind.rotation)
    if kind.tag == EQUAL_EARTH:
        for i in range(g.node_count):
            lon, lat = vector_to_lonlat(rotated[i])
            x, y = to_px(project_equal_earth(lon, lat))
            svg.circle(x, y, spec.node_radius, _node_fill(i, c))
    else:
        to_px, _, _ = _orthographic_geometry(w, h)
        for i in range(g.node_count):
            p = rotated[i]
            face = "east" if p[2] >= 0.0 else "west"
            uu = float(p[0]) if face == "east" else -float(p[0])
            x, y = to_px(face, uu, float(p[1]))
            svg.circle(x, y, spec.node_radius, _node_fill(i, c))
    return svg.done()


def render(layout, g: Graph, spec: RenderSpec,
           clustering: Optional[Clustering] = None) -> str:
    """Deterministic SVG document for the layout under the given spec."""
    expected = {
        "flat": FlatLayout,
        "torus-nocontext": TorusLayout,
        "torus-partial": TorusLayout,
        "torus-full": TorusLayout,
        "sphere": SphereLayout,
    }[spec.mode]
    if not isinstance(layout, expected):
        raise TopologyMismatch(
            f"mode {spec.mode!r} needs a {expected.__name__}, got {type(layout).__name__}"
        )
    if spec.mode == "flat":
        return _render_flat(layout, g, spec, clustering)
    if spec.mode == "sphere":
        return _render_sphere(layout, g, spec, clustering)
    return _render_torus(layout, g, spec, clustering)


# --- edge rasterisation -------------------------------------------------------


@dataclass
class EdgeMask:
    width: int
    height: int
    bits: np.ndarray
    border_band: int

    def set_pixel_count(self) -> int:
        return int(self.bits.sum())

    def to_pbm(self) -> bytes:
        header = f"P4\n{self.width} {self.height}\n".encode("ascii")
        return header + np.packbits(self.bits, axis=1).tobytes()


def _stroke_pieces(bits: np.ndarray, pieces) -> None:
    """1-px stroke of polyline pieces into a boolean grid (vectorised)."""
    h, w = bits.shape
    p0s = []
    p1s = []
    for piece in pieces:
        arr = np.asarray(piece, dtype=float)
        if len(arr) < 2:
            continue
        p0s.append(arr[:-1])
        p1s.append(arr[1:])
    if not p0s:
        return
    p0 = np.concatenate(p0s)
    p1 = np.concatenate(p1s)
    delta = p1 - p0
    counts = np.maximum(
        np.ceil(np.abs(delta).max(axis=1)).astype(np.int64) + 1, 2
    )
    total = int(counts.sum())
    seg = np.repeat(np.arange(len(counts)), counts)
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    local = np.arange(total) - starts[seg]
    t = local / (counts[seg] - 1)
    xs = np.rint(p0[seg, 0] + t * delta[seg, 0]).astype(np.int64)
    ys = np.rint(p0[seg, 1] + t * delta[seg, 1]).astype(np.int64)
    keep = (xs >= 0) & (xs < w) & (ys >= 0) & (ys < h)
    bits[ys[keep], xs[keep]] = True


def rasterize_edges_mask(layout: SphereLayout, g: Graph, kind: ProjectionKind,
                         wh: tuple[int, int], border_band: int = 6) -> EdgeMask:
    """Monochrome bitmap of the projected edge paths."""
    w, h = wh
    if w < 64:
        raise RasterTooSmall("mask width must be at least 64 px")
    if border_band >= min(w, h) / 2:
        raise ValueError("border band too wide for the raster")
    bits = np.zeros((h, w), dtype=bool)
    pieces = sphere_edge_polylines(layout, g, kind, w, h)
    _stroke_pieces(bits, pieces)
    return EdgeMask(w, h, bits, border_band)


_BAND_CACHE: dict = {}


def projection_band_mask(tag: str, wh: tuple[int, int], band: int) -> np.ndarray:
    """Pixels within `band` px of the projection outline (cached).

    The outline does not depend on the rotation, only on the projection
    and viewport.
    """
    key = (tag, wh, band)
    if key in _BAND_CACHE:
        return _BAND_CACHE[key]
    w, h = wh
    outline_bits = np.zeros((h, w), dtype=bool)
    if tag == EQUAL_EARTH:
        to_px, _ = _equal_earth_to_px(w, h)
        outline = [[to_px(p) for p in sample_equal_earth_outline(360)]]
    else:
        _, r, centres = _orthographic_geometry(w, h)
        outline = []
        for face in ("west", "east"):
            cx, cy = centres[face]
            pts = [
                (cx + r * math.cos(2 * math.pi * k / 720),
                 cy + r * math.sin(2 * math.pi * k / 720))
                for k in range(721)
            ]
            outline.append(pts)
    _stroke_pieces(outline_bits, outline)
    ys, xs = np.nonzero(outline_bits)
    out = np.zeros((h, w), dtype=bool)
    for dy in range(-band, band + 1):
        for dx in range(-band, band + 1):
            if dx * dx + dy * dy > band * band:
                continue
            yy = ys + dy
            xx = xs + dx
            keep = (yy >= 0) & (yy < h) & (xx >= 0) & (xx < w)
            out[yy[keep], xx[keep]] = True
    _BAND_CACHE[key] = out
    return out


def boundary_pixel_penalty(mask: EdgeMask, tag: str = EQUAL_EARTH) -> int:
    """Edge pixels falling inside the periphery band of the outline."""
    band = projection_band_mask(tag, (mask.width, mask.height), mask.border_band)
    return int((mask.bits & band).sum())
