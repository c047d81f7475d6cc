"""Layout quality measures: stress, crossings, length variance, incidence
angles, wrapping tallies and hull-based cluster distance.

All functions are pure; torus measures respect the minimum-image
convention and an applied view pan where it matters (wrapping counts,
segment decomposition).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict
from typing import Optional

import numpy as np

from .geometry import (
    DegenerateHull,
    best_wrapping,
    convex_hull,
    count_crossings_bruteforce,
    count_crossings_sweep,
    hull_distance,
    torus_edge_segments,
)
from .graphs import Clustering, DistanceMatrix, Graph
from .layout import FlatLayout, SphereLayout, TorusLayout, panned_positions

_TORUS_OFFSETS = np.array(
    [(ox, oy) for oy in (-1, 0, 1) for ox in (-1, 0, 1)], dtype=float
)


@dataclass
class MetricsReport:
    topology: str
    stress: float
    crossings: int
    link_length_variance: float
    angle_deviation: float
    wrap_lr: Optional[int] = None
    wrap_tb: Optional[int] = None
    wrap_corner: Optional[int] = None
    cluster_distance: Optional[float] = None

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    CSV_FIELDS = (
        "topology", "stress", "crossings", "link_length_variance",
        "angle_deviation", "wrap_lr", "wrap_tb", "wrap_corner",
        "cluster_distance",
    )

    def csv_values(self) -> list:
        d = self.to_dict()
        return [d[f] if d[f] is not None else "" for f in self.CSV_FIELDS]


class TopologyMismatch(TypeError):
    """Layout topology does not fit the requested measure."""


def _pair_arrays(dm: DistanceMatrix):
    n = dm.d.shape[0]
    iu, iv = np.triu_indices(n, k=1)
    return iu, iv, dm.d[iu, iv].astype(float)


def stress(layout, dm: DistanceMatrix, unit: Optional[float] = None) -> float:
    """Normalised stress; torus takes the best of nine wrappings per pair."""
    L = layout.ideal_unit if unit is None else unit
    iu, iv, hops = _pair_arrays(dm)
    ideal = L * hops
    if isinstance(layout, SphereLayout):
        pos = layout.positions
        dots = np.clip((pos[iu] * pos[iv]).sum(axis=1), -1.0, 1.0)
        d = np.arccos(dots)
        return float((((ideal - d) ** 2) / ideal ** 2).sum())
    pos = panned_positions(layout) if isinstance(layout, TorusLayout) else layout.positions
    delta = pos[iv] - pos[iu]
    if isinstance(layout, TorusLayout):
        cand = delta[:, None, :] + layout.cell_size * _TORUS_OFFSETS[None, :, :]
        d = np.hypot(cand[:, :, 0], cand[:, :, 1])
        resid = (ideal[:, None] - d) ** 2
        num = resid.min(axis=1)
    else:
        d = np.hypot(delta[:, 0], delta[:, 1])
        num = (ideal - d) ** 2
    return float((num / ideal ** 2).sum())


def edge_lengths(layout, g: Graph) -> np.ndarray:
    iu = np.array([u for u, _ in g.edges])
    iv = np.array([v for _, v in g.edges])
    if isinstance(layout, SphereLayout):
        pos = layout.positions
        dots = np.clip((pos[iu] * pos[iv]).sum(axis=1), -1.0, 1.0)
        return np.arccos(dots)
    pos = panned_positions(layout) if isinstance(layout, TorusLayout) else layout.positions
    delta = pos[iv] - pos[iu]
    if isinstance(layout, TorusLayout):
        cand = delta[:, None, :] + layout.cell_size * _TORUS_OFFSETS[None, :, :]
        return np.hypot(cand[:, :, 0], cand[:, :, 1]).min(axis=1)
    return np.hypot(delta[:, 0], delta[:, 1])


def link_length_variance(layout, g: Graph) -> float:
    """Mean squared deviation from 1 after scaling mean link length to 1."""
    if g.edge_count == 0:
        raise ValueError("needs at least one edge")
    lens = edge_lengths(layout, g)
    mean = lens.mean()
    if mean <= 0:
        return 0.0
    scaled = lens / mean
    return float(((1.0 - scaled) ** 2).mean())


def layout_segments(layout, g: Graph):
    """Drawable straight segments plus owning edge index and endpoints.

    Flat edges give one segment; torus edges are decomposed into their
    minimum-image pieces (2 for a single wrap, 3 for a corner wrap).
    """
    segments = []
    edge_of = []
    endpoints = list(g.edges)
    if isinstance(layout, TorusLayout):
        pos = panned_positions(layout)
        cell = layout.cell_size
        for e, (u, v) in enumerate(g.edges):
            off, _, _ = best_wrapping(tuple(pos[u]), tuple(pos[v]), cell)
            for piece in torus_edge_segments(tuple(pos[u]), tuple(pos[v]), off, cell):
                segments.append(piece)
                edge_of.append(e)
    elif isinstance(layout, FlatLayout):
        pos = layout.positions
        for e, (u, v) in enumerate(g.edges):
            segments.append((tuple(pos[u]), tuple(pos[v])))
            edge_of.append(e)
    else:
        raise TopologyMismatch("segment decomposition needs a flat or torus layout")
    return segments, edge_of, endpoints


def _sphere_crossings(layout: SphereLayout, g: Graph) -> int:
    """Proper crossings between minor great-circle arcs."""
    pos = layout.positions
    edges = g.edges
    normals = []
    for u, v in edges:
        n = np.cross(pos[u], pos[v])
        normals.append(n)
    count = 0
    eps = 1e-12
    for i in range(len(edges)):
        ui, vi = edges[i]
        a, b = pos[ui], pos[vi]
        n1 = normals[i]
        for j in range(i + 1, len(edges)):
            uj, vj = edges[j]
            if ui == uj or ui == vj or vi == uj or vi == vj:
                continue
            n2 = normals[j]
            t = np.cross(n1, n2)
            norm = np.linalg.norm(t)
            if norm < eps:
                continue
            t = t / norm
            c, d = pos[uj], pos[vj]
            for q in (t, -t):
                inside_i = (np.dot(np.cross(a, q), n1) > eps
                            and np.dot(np.cross(q, b), n1) > eps)
                inside_j = (np.dot(np.cross(c, q), n2) > eps
                            and np.dot(np.cross(q, d), n2) > eps)
                if inside_i and inside_j:
                    count += 1
                    break
    return count


def crossings(layout, g: Graph, method: str = "sweep") -> int:
    """Count of properly intersecting segment pairs (shared endpoints and
    same-edge pieces excluded)."""
    if isinstance(layout, SphereLayout):
        return _sphere_crossings(layout, g)
    segments, edge_of, endpoints = layout_segments(layout, g)
    if method == "sweep":
        return count_crossings_sweep(segments, edge_of, endpoints)
    if method == "brute":
        return count_crossings_bruteforce(segments, edge_of, endpoints)
    raise ValueError(f"unknown method {method!r}")


def _directions_at_nodes(layout, g: Graph):
    """Unit direction of every incident link, per node."""
    n = g.node_count
    dirs: list[list[float]] = [[] for _ in range(n)]
    if isinstance(layout, SphereLayout):
        pos = layout.positions
        for u, v in g.edges:
            for a, b in ((u, v), (v, u)):
                xa, xb = pos[a], pos[b]
                t = xb - np.dot(xa, xb) * xa
                tn = np.linalg.norm(t)
                if tn < 1e-12:
                    continue
                # deterministic tangent basis at xa
                up = np.array([0.0, 0.0, 1.0])
                if abs(xa[2]) > 0.9:
                    up = np.array([1.0, 0.0, 0.0])
                e1 = np.cross(up, xa)
                e1 /= np.linalg.norm(e1)
                e2 = np.cross(xa, e1)
                dirs[a].append(math.atan2(np.dot(t, e2), np.dot(t, e1)))
        return dirs
    torus = isinstance(layout, TorusLayout)
    pos = panned_positions(layout) if torus else layout.positions
    for u, v in g.edges:
        if torus:
            _, vec, d = best_wrapping(tuple(pos[u]), tuple(pos[v]), layout.cell_size)
        else:
            vec = (pos[v][0] - pos[u][0], pos[v][1] - pos[u][1])
            d = math.hypot(*vec)
        if d < 1e-12:
            continue
        ang = math.atan2(vec[1], vec[0])
        dirs[u].append(ang)
        # opposite direction as seen from v
        dirs[v].append(math.atan2(-vec[1], -vec[0]))
    return dirs


def incidence_angle_deviation(layout, g: Graph) -> float:
    """Mean normalised gap between each node's ideal incident angle
    (360/deg) and its actual minimum incident angle; degree<=1 nodes
    contribute zero."""
    dirs = _directions_at_nodes(layout, g)
    total = 0.0
    for angles in dirs:
        if len(angles) < 2:
            continue
        angles = sorted(angles)
        gaps = [b - a for a, b in zip(angles, angles[1:])]
        gaps.append(2.0 * math.pi - (angles[-1] - angles[0]))
        min_gap = min(gaps)
        ideal = 2.0 * math.pi / len(angles)
        total += abs(ideal - min_gap) / ideal
    return total / g.node_count


def wrapping_counts(layout: TorusLayout, g: Graph) -> tuple[int, int, int]:
    """(left-right, top-bottom, corner) wrapped edge tallies; corner
    wraps are not double counted in the axis tallies."""
    if not isinstance(layout, TorusLayout):
        raise TopologyMismatch("wrapping counts need a torus layout")
    pos = panned_positions(layout)
    lr = tb = corner = 0
    for u, v in g.edges:
        (ox, oy), _, _ = best_wrapping(tuple(pos[u]), tuple(pos[v]), layout.cell_size)
        if ox != 0 and oy != 0:
            corner += 1
        elif ox != 0:
            lr += 1
        elif oy != 0:
            tb += 1
    return lr, tb, corner


def cluster_hulls(layout, g: Graph, c: Clustering):
    """Convex hull per cluster; torus hulls pick tile copies near the
    cluster's running centroid so each cluster gets one coherent hull."""
    if isinstance(layout, SphereLayout):
        raise TopologyMismatch("cluster hulls are defined for flat and torus layouts")
    torus = isinstance(layout, TorusLayout)
    pos = panned_positions(layout) if torus else layout.positions
    hulls = []
    for k in range(c.cluster_count):
        members = c.members(k)
        pts: list[tuple[float, float]] = []
        if torus:
            cell = layout.cell_size
            cx, cy = 0.0, 0.0
            for rank, node in enumerate(members):
                if rank == 0:
                    chosen = (float(pos[node][0]), float(pos[node][1]))
                else:
                    _, vec, _ = best_wrapping((cx, cy), tuple(pos[node]), cell)
                    chosen = (cx + vec[0], cy + vec[1])
                pts.append(chosen)
                cx = (cx * rank + chosen[0]) / (rank + 1)
                cy = (cy * rank + chosen[1]) / (rank + 1)
        else:
            pts = [tuple(map(float, pos[node])) for node in members]
        if len(pts) > 1 and all(
            abs(p[0] - pts[0][0]) < 1e-12 and abs(p[1] - pts[0][1]) < 1e-12
            for p in pts
        ):
            raise DegenerateHull(f"cluster {k} collapsed to a single point")
        hulls.append(convex_hull(pts))
    return hulls


def cluster_distance(layout, g: Graph, c: Clustering) -> float:
    """Mean over cluster pairs of hull clearance: positive separation for
    disjoint hulls, negative penetration depth for overlapping ones."""
    if c.cluster_count < 2:
        raise ValueError("cluster distance needs at least two clusters")
    hulls = cluster_hulls(layout, g, c)
    total = 0.0
    pairs = 0
    for i in range(len(hulls)):
        for j in range(i + 1, len(hulls)):
            total += hull_distance(hulls[i], hulls[j])
            pairs += 1
    return total / pairs


def compute_report(layout, g: Graph, dm: DistanceMatrix,
                   c: Optional[Clustering] = None) -> MetricsReport:
    report = MetricsReport(
        topology=layout.topology,
        stress=stress(layout, dm),
        crossings=crossings(layout, g),
        link_length_variance=link_length_variance(layout, g),
        angle_deviation=incidence_angle_deviation(layout, g),
    )
    if isinstance(layout, TorusLayout):
        report.wrap_lr, report.wrap_tb, report.wrap_corner = wrapping_counts(layout, g)
    if c is not None and c.cluster_count >= 2 and not isinstance(layout, SphereLayout):
        report.cluster_distance = cluster_distance(layout, g, c)
    return report
