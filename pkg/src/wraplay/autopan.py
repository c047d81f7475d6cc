"""Automatic view panning (torus) and rotation (sphere).

The torus panner sweeps the |V| candidate boundary positions per axis
(midpoints between consecutive sorted coordinates, plus the wrap-around
gap), scoring each by the wrapping cost sum(1/length) over the links
that would split there, then centres the result.  The two axes are
independent, so per-axis minima give the grid optimum.

Sphere rotations are found stochastically: many rotation triples are
sampled and scored, by split-edge count on the orthographic view or by
boundary-band edge pixels on Equal Earth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import best_wrapping
from .graphs import Graph
from .layout import SphereLayout, TorusLayout, panned_positions
from .metrics import TopologyMismatch
from .projections import EQUAL_EARTH, normalize_angle, rotation_matrix
from .render import ProjectionKind, boundary_pixel_penalty, rasterize_edges_mask
from .rng import Rng


class ZeroLengthEdge(ValueError):
    """A wrapped edge has (numerically) zero length."""


@dataclass(frozen=True)
class PanVector:
    dx: float
    dy: float


@dataclass(frozen=True)
class RotationTriple:
    lam: float
    phi: float
    gam: float

    def __post_init__(self):
        object.__setattr__(self, "lam", normalize_angle(self.lam))
        object.__setattr__(self, "phi", normalize_angle(self.phi))
        object.__setattr__(self, "gam", normalize_angle(self.gam))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.lam, self.phi, self.gam)


def wrapped_edges(layout: TorusLayout, g: Graph) -> list[tuple[int, int]]:
    """Edges whose minimum-image drawing crosses a cell boundary."""
    pos = panned_positions(layout)
    out = []
    for u, v in g.edges:
        off, _, _ = best_wrapping(tuple(pos[u]), tuple(pos[v]), layout.cell_size)
        if off != (0, 0):
            out.append((u, v))
    return out


def wrapcost(layout: TorusLayout, wrapped: list[tuple[int, int]]) -> float:
    """sum(1 / length) over the wrapped links; lengths are minimum-image."""
    pos = panned_positions(layout)
    cell = layout.cell_size
    terms = []
    for u, v in wrapped:
        _, _, d = best_wrapping(tuple(pos[u]), tuple(pos[v]), cell)
        if d < 1e-12:
            raise ZeroLengthEdge(f"edge ({u}, {v}) has zero length")
        terms.append(1.0 / d)
    return math.fsum(terms)


def separable_wrapcost(layout: TorusLayout, g: Graph) -> float:
    """The objective the axis sweeps optimise: sum of 1/length over
    horizontally wrapped links plus the same over vertically wrapped
    links.  A corner-wrapped link appears in both terms, unlike in
    wrapcost() over the wrapped-edge set."""
    pos = panned_positions(layout)
    cell = layout.cell_size
    terms = []
    for u, v in g.edges:
        (ox, oy), _, d = best_wrapping(tuple(pos[u]), tuple(pos[v]), cell)
        if ox != 0 or oy != 0:
            if d < 1e-12:
                raise ZeroLengthEdge(f"edge ({u}, {v}) has zero length")
            if ox != 0:
                terms.append(1.0 / d)
            if oy != 0:
                terms.append(1.0 / d)
    return math.fsum(terms)


def _axis_wrapped(coords_u: np.ndarray, coords_v: np.ndarray,
                  cuts: np.ndarray, cell: float) -> np.ndarray:
    """(cuts x edges) bool: does the edge wrap across this axis when the
    boundary sits at the cut?  Mirrors the minimum-image choice."""
    cu = (coords_u[None, :] - cuts[:, None]) % cell
    cv = (coords_v[None, :] - cuts[:, None]) % cell
    dx = cv - cu
    return (dx >= cell / 2.0) | (dx < -cell / 2.0)


def _axis_candidates(coords: np.ndarray, cell: float) -> np.ndarray:
    """Midpoints between consecutive distinct sorted coordinates plus the
    wrap-around gap midpoint (|V| candidates, duplicates collapsed)."""
    uniq = np.unique(coords)
    if len(uniq) == 1:
        return np.array([(uniq[0] + cell / 2.0) % cell])
    mids = (uniq[:-1] + uniq[1:]) / 2.0
    wrap_mid = ((uniq[-1] + uniq[0] + cell) / 2.0) % cell
    return np.concatenate([mids, [wrap_mid]])


def _inverse_lengths(layout: TorusLayout, g: Graph) -> np.ndarray:
    # same math.hypot path as wrapcost so the sweep's sums match it bit
    # for bit
    pos = panned_positions(layout)
    cell = layout.cell_size
    out = np.empty(g.edge_count)
    for e, (u, v) in enumerate(g.edges):
        _, _, d = best_wrapping(tuple(pos[u]), tuple(pos[v]), cell)
        if d < 1e-12:
            raise ZeroLengthEdge(f"edge ({u}, {v}) has zero length")
        out[e] = 1.0 / d
    return out


def _best_axis_cut(coords_u, coords_v, inv_len, cuts, cell) -> float:
    """Cut with the exact (fsum) minimal wrapping cost; ties take the
    smallest coordinate."""
    wrapped = _axis_wrapped(coords_u, coords_v, cuts, cell)
    approx = wrapped @ inv_len
    near = np.nonzero(approx <= approx.min() + 1e-9)[0]
    best_cut = None
    best_cost = None
    for idx in near:
        cost = math.fsum(inv_len[j] for j in np.nonzero(wrapped[idx])[0])
        if (best_cost is None or cost < best_cost
                or (cost == best_cost and cuts[idx] < best_cut)):
            best_cut = float(cuts[idx])
            best_cost = cost
    return best_cut, best_cost


def autopan_torus_with_cost(layout: TorusLayout, g: Graph) -> tuple[PanVector, float]:
    """Pan minimising the axis-separable wrapping cost, then centring the
    layout inside the cell.  Also returns the achieved cost (the sum of
    the two per-axis sweep minima)."""
    if not isinstance(layout, TorusLayout):
        raise TopologyMismatch("autopan needs a torus layout")
    cell = layout.cell_size
    pos = panned_positions(layout)
    if g.edge_count == 0:
        return PanVector(0.0, 0.0), 0.0
    eu = np.array([u for u, _ in g.edges])
    ev = np.array([v for _, v in g.edges])
    inv_len = _inverse_lengths(layout, g)

    pan = []
    total = 0.0
    for axis in range(2):
        coords = pos[:, axis]
        cuts = _axis_candidates(coords, cell)
        best_cut, best_cost = _best_axis_cut(coords[eu], coords[ev], inv_len, cuts, cell)
        total += best_cost
        shifted = (coords - best_cut) % cell
        centre = cell / 2.0 - (shifted.min() + shifted.max()) / 2.0
        pan.append((-best_cut + centre) % cell)
    return PanVector(pan[0], pan[1]), total


def autopan_torus(layout: TorusLayout, g: Graph) -> PanVector:
    return autopan_torus_with_cost(layout, g)[0]


def apply_pan(layout: TorusLayout, pan: PanVector) -> TorusLayout:
    """Copy of the layout with the pan stored as its view record."""
    return TorusLayout(
        layout.positions.copy(), layout.cell_size, layout.ideal_unit,
        layout.converged, layout.iterations, layout.seed,
        view_pan=(pan.dx, pan.dy),
    )


# --- sphere auto-rotation -------------------------------------------------------


def split_edge_count_orthographic(layout: SphereLayout, g: Graph,
                                  rot: RotationTriple) -> int:
    """Edges whose endpoints land on different hemispheres (sign of the
    rotated view-axis coordinate)."""
    r = rotation_matrix(rot.as_tuple())
    z = layout.positions @ r.T[:, 2]
    front = z >= 0.0
    eu = np.array([u for u, _ in g.edges])
    ev = np.array([v for _, v in g.edges])
    return int((front[eu] != front[ev]).sum())


def _sample_triples(trials: int, seed: int, label: str):
    rng = Rng(seed, label)
    for _ in range(trials):
        lam = rng.uniform(-math.pi, math.pi)
        phi = rng.uniform(-math.pi, math.pi)
        gam = rng.uniform(-math.pi, math.pi)
        yield RotationTriple(lam, phi, gam)


def autorotate_orthographic(layout: SphereLayout, g: Graph,
                            trials: int = 1000, seed: int = 0) -> RotationTriple:
    """Best of `trials` random rotation triples by split-edge count;
    first minimum wins, deterministic by seed."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    eu = np.array([u for u, _ in g.edges], dtype=np.int64)
    ev = np.array([v for _, v in g.edges], dtype=np.int64)
    pos = layout.positions
    best = None
    for triple in _sample_triples(trials, seed, "autorotate-orthographic"):
        r = rotation_matrix(triple.as_tuple())
        z = pos @ r.T[:, 2]
        front = z >= 0.0
        cost = int((front[eu] != front[ev]).sum()) if len(eu) else 0
        if best is None or cost < best[0]:
            best = (cost, triple)
            if cost == 0:
                break
    return best[1]


def autorotate_boundary_pixels(layout: SphereLayout, g: Graph,
                               trials: int = 200, seed: int = 0,
                               wh: tuple[int, int] = (900, 317),
                               border_band: int = 6,
                               projection: str = EQUAL_EARTH) -> RotationTriple:
    """Best random rotation by edge pixels inside the projection's
    periphery band (Equal Earth in scope)."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    best = None
    for triple in _sample_triples(trials, seed, "autorotate-boundary"):
        kind = ProjectionKind(projection, triple.as_tuple())
        mask = rasterize_edges_mask(layout, g, kind, wh, border_band)
        cost = boundary_pixel_penalty(mask, projection)
        if best is None or cost < best[0]:
            best = (cost, triple)
    return best[1]
