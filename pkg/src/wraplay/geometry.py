"""Planar geometry: minimum image, segment crossings, hulls, GJK/EPA.

Coordinates are plain floats; predicates use an epsilon of 1e-12 for
collinearity so touching endpoints never count as crossings.
"""

from __future__ import annotations

import math

import numpy as np

EPS = 1e-12

OFFSETS_LEX = tuple(
    (ox, oy) for oy in (-1, 0, 1) for ox in (-1, 0, 1)
)  # ordered by (dy, dx) for tie-breaking


class DegenerateHull(ValueError):
    """A multi-node cluster collapsed onto a single point."""


def wrap_coord(x: float, cell: float) -> float:
    """Map x into [0, cell), guarding the x == cell float edge case."""
    x -= math.floor(x / cell) * cell
    if x >= cell or x < 0.0:
        x = 0.0
    return x


def best_wrapping(
    xu: tuple[float, float],
    xv: tuple[float, float],
    cell: float,
    ideal: float = 0.0,
) -> tuple[tuple[int, int], tuple[float, float], float]:
    """Pick the tile copy of xv whose distance from xu is closest to `ideal`.

    Evaluates all nine adjacency offsets; with ideal=0 this is the
    minimum image.  Ties break to the smallest (dy, dx) offset.
    Returns (offset, vector from xu to the chosen copy, distance).
    """
    dx = xv[0] - xu[0]
    dy = xv[1] - xu[1]
    best = None
    for ox, oy in OFFSETS_LEX:
        cx = dx + ox * cell
        cy = dy + oy * cell
        d = math.hypot(cx, cy)
        score = abs(d - ideal)
        if best is None or score < best[0]:
            best = (score, (ox, oy), (cx, cy), d)
    return best[1], best[2], best[3]


def torus_edge_segments(
    pu: tuple[float, float],
    pv: tuple[float, float],
    offset: tuple[int, int],
    cell: float,
) -> list[tuple[tuple[float, float], tuple[float, float]]]:
    """Decompose the straight path from pu to the offset copy of pv into
    in-cell pieces: 1 for a direct edge, 2 for a single wrap, 3 for a
    corner wrap (2 if it passes exactly through a corner)."""
    ox, oy = offset
    q = (pv[0] + ox * cell, pv[1] + oy * cell)
    if ox == 0 and oy == 0:
        return [(pu, q)]
    ex = q[0] - pu[0]
    ey = q[1] - pu[1]
    cuts = [0.0, 1.0]
    tx = ty = None
    if ox != 0:
        bound = cell if ox > 0 else 0.0
        tx = (bound - pu[0]) / ex
        cuts.append(tx)
    if oy != 0:
        bound = cell if oy > 0 else 0.0
        ty = (bound - pu[1]) / ey
        cuts.append(ty)
    cuts = sorted(set(min(max(t, 0.0), 1.0) for t in cuts))
    pieces = []
    for a, b in zip(cuts, cuts[1:]):
        if b - a < 1e-12:
            continue
        mid = (a + b) / 2.0
        shift_x = -ox * cell if (tx is not None and mid > tx) else 0.0
        shift_y = -oy * cell if (ty is not None and mid > ty) else 0.0
        p0 = (pu[0] + a * ex + shift_x, pu[1] + a * ey + shift_y)
        p1 = (pu[0] + b * ex + shift_x, pu[1] + b * ey + shift_y)
        pieces.append((p0, p1))
    return pieces


# --- segment crossings -------------------------------------------------------


def _orient(ax, ay, bx, by, cx, cy) -> float:
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def segments_cross(p1, p2, q1, q2, eps: float = EPS) -> bool:
    """Proper (interior) intersection; touching or collinear contact is no."""
    d1 = _orient(q1[0], q1[1], q2[0], q2[1], p1[0], p1[1])
    d2 = _orient(q1[0], q1[1], q2[0], q2[1], p2[0], p2[1])
    if not ((d1 > eps and d2 < -eps) or (d1 < -eps and d2 > eps)):
        return False
    d3 = _orient(p1[0], p1[1], p2[0], p2[1], q1[0], q1[1])
    d4 = _orient(p1[0], p1[1], p2[0], p2[1], q2[0], q2[1])
    return (d3 > eps and d4 < -eps) or (d3 < -eps and d4 > eps)


def count_crossings_bruteforce(segments, edge_of, endpoints) -> int:
    """Quadratic reference counter.

    segments: list of ((x1,y1),(x2,y2)); edge_of[i]: owning edge index;
    endpoints[e]: (u, v) graph nodes of edge e.  Pairs from the same edge
    or from edges sharing a node are excluded.
    """
    count = 0
    n = len(segments)
    for i in range(n):
        ei = edge_of[i]
        ui, vi = endpoints[ei]
        for j in range(i + 1, n):
            ej = edge_of[j]
            if ei == ej:
                continue
            uj, vj = endpoints[ej]
            if ui == uj or ui == vj or vi == uj or vi == vj:
                continue
            if segments_cross(segments[i][0], segments[i][1],
                              segments[j][0], segments[j][1]):
                count += 1
    return count


def count_crossings_sweep(segments, edge_of, endpoints) -> int:
    """Sweep-and-prune counter: identical counts, near-linear candidates.

    Segments are sorted by their smaller x; each one is tested (with a
    vectorised predicate) only against segments whose x-interval overlaps
    its own.
    """
    n = len(segments)
    if n < 2:
        return 0
    seg = np.asarray([(p[0], p[1], q[0], q[1]) for p, q in segments], dtype=float)
    xmin = np.minimum(seg[:, 0], seg[:, 2])
    xmax = np.maximum(seg[:, 0], seg[:, 2])
    order = np.argsort(xmin, kind="stable")
    seg = seg[order]
    xmin = xmin[order]
    xmax = xmax[order]
    eid = np.asarray(edge_of, dtype=np.int64)[order]
    ends = np.asarray(endpoints, dtype=np.int64)
    su = ends[eid, 0]
    sv = ends[eid, 1]

    count = 0
    for i in range(n - 1):
        hi = np.searchsorted(xmin, xmax[i] + EPS, side="right")
        if hi <= i + 1:
            continue
        js = slice(i + 1, hi)
        keep = (eid[js] != eid[i]) \
            & (su[js] != su[i]) & (su[js] != sv[i]) \
            & (sv[js] != su[i]) & (sv[js] != sv[i])
        if not keep.any():
            continue
        p1x, p1y, p2x, p2y = seg[i]
        q = seg[js][keep]
        d1 = (q[:, 2] - q[:, 0]) * (p1y - q[:, 1]) - (q[:, 3] - q[:, 1]) * (p1x - q[:, 0])
        d2 = (q[:, 2] - q[:, 0]) * (p2y - q[:, 1]) - (q[:, 3] - q[:, 1]) * (p2x - q[:, 0])
        m = ((d1 > EPS) & (d2 < -EPS)) | ((d1 < -EPS) & (d2 > EPS))
        if not m.any():
            continue
        q = q[m]
        d3 = (p2x - p1x) * (q[:, 1] - p1y) - (p2y - p1y) * (q[:, 0] - p1x)
        d4 = (p2x - p1x) * (q[:, 3] - p1y) - (p2y - p1y) * (q[:, 2] - p1x)
        count += int((((d3 > EPS) & (d4 < -EPS)) | ((d3 < -EPS) & (d4 > EPS))).sum())
    return count


# --- convex hulls ------------------------------------------------------------


def convex_hull(points: list[tuple[float, float]]) -> list[tuple[float, float]]:
    """Monotone chain; returns CCW vertices without interior collinears.

    Degenerate inputs yield a point ([p]) or a segment ([p, q]).
    """
    pts = sorted(set(points))
    if len(pts) == 1:
        return pts
    if len(pts) == 2:
        return pts

    def half(iterable):
        chain = []
        for p in iterable:
            while len(chain) >= 2 and _orient(chain[-2][0], chain[-2][1],
                                              chain[-1][0], chain[-1][1],
                                              p[0], p[1]) <= EPS:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 2:  # all collinear
        return [pts[0], pts[-1]]
    return hull


# --- GJK / EPA ---------------------------------------------------------------


def _support(poly, dx, dy):
    best = poly[0]
    best_dot = best[0] * dx + best[1] * dy
    for p in poly[1:]:
        d = p[0] * dx + p[1] * dy
        if d > best_dot:
            best_dot = d
            best = p
    return best


def _minkowski_support(a, b, dx, dy):
    pa = _support(a, dx, dy)
    pb = _support(b, -dx, -dy)
    return (pa[0] - pb[0], pa[1] - pb[1])


def _closest_on_segment(a, b):
    """Closest point to the origin on segment ab, plus the supporting set."""
    abx = b[0] - a[0]
    aby = b[1] - a[1]
    denom = abx * abx + aby * aby
    if denom < EPS * EPS:
        return a, [a]
    t = -(a[0] * abx + a[1] * aby) / denom
    if t <= 0.0:
        return a, [a]
    if t >= 1.0:
        return b, [b]
    return (a[0] + t * abx, a[1] + t * aby), [a, b]


def _closest_on_simplex(simplex):
    """Closest point to the origin on a 1-3 point simplex.

    Returns (point, reduced simplex, contains_origin).
    """
    if len(simplex) == 1:
        return simplex[0], [simplex[0]], False
    if len(simplex) == 2:
        p, sup = _closest_on_segment(simplex[0], simplex[1])
        return p, sup, (p[0] * p[0] + p[1] * p[1] < EPS * EPS)
    a, b, c = simplex
    area = _orient(a[0], a[1], b[0], b[1], c[0], c[1])
    if abs(area) > EPS:
        # sign of each edge sub-area tells which side the origin is on
        wa = _orient(b[0], b[1], c[0], c[1], 0.0, 0.0)
        wb = _orient(c[0], c[1], a[0], a[1], 0.0, 0.0)
        wc = _orient(a[0], a[1], b[0], b[1], 0.0, 0.0)
        s = 1.0 if area > 0 else -1.0
        if wa * s >= -EPS and wb * s >= -EPS and wc * s >= -EPS:
            return (0.0, 0.0), [a, b, c], True
    # otherwise the closest point lies on one of the edges
    best = None
    for p, q in ((a, b), (b, c), (a, c)):
        pt, sup = _closest_on_segment(p, q)
        d2 = pt[0] * pt[0] + pt[1] * pt[1]
        if best is None or d2 < best[0]:
            best = (d2, pt, sup)
    return best[1], best[2], False


def gjk_distance(a, b, max_iter: int = 64):
    """Minimum distance between convex polygons a and b.

    Returns (distance, intersecting, simplex); distance is 0 when the
    hulls intersect, and `simplex` then spans the Minkowski difference
    region containing the origin (EPA's starting polytope).
    """
    v = _minkowski_support(a, b, 1.0, 0.0)
    simplex = [v]
    dist = math.hypot(*v)
    for _ in range(max_iter):
        p, simplex, contains = _closest_on_simplex(simplex)
        if contains:
            return 0.0, True, simplex
        dist = math.hypot(*p)
        if dist < EPS:
            return 0.0, True, simplex
        w = _minkowski_support(a, b, -p[0], -p[1])
        # no progress in the search direction -> p is the closest point
        progress = (p[0] * p[0] + p[1] * p[1]) - (p[0] * w[0] + p[1] * w[1])
        if progress <= 1e-10 * max(1.0, dist):
            return dist, False, simplex
        if any(abs(w[0] - s[0]) < EPS and abs(w[1] - s[1]) < EPS for s in simplex):
            return dist, False, simplex
        simplex.append(w)
    return dist, False, simplex


def _sat_penetration(a, b) -> float:
    """Exact minimum translation for convex polygons via edge normals.

    Fallback for EPA when the Minkowski difference is degenerate
    (collinear hulls); also a convenient independent formulation.
    """
    best = math.inf
    for poly in (a, b):
        n = len(poly)
        for i in range(n):
            p = poly[i]
            q = poly[(i + 1) % n]
            ex = q[0] - p[0]
            ey = q[1] - p[1]
            ln = math.hypot(ex, ey)
            if ln < EPS:
                continue
            nx, ny = -ey / ln, ex / ln
            pa = [v[0] * nx + v[1] * ny for v in a]
            pb = [v[0] * nx + v[1] * ny for v in b]
            overlap = min(max(pa), max(pb)) - max(min(pa), min(pb))
            if overlap < best:
                best = overlap
    if not math.isfinite(best):
        best = 0.0
    return max(best, 0.0)


def epa_penetration(a, b, simplex, max_iter: int = 128) -> float:
    """Expanding polytope depth for intersecting hulls.

    Grows the GJK termination simplex inside the Minkowski difference
    until the nearest boundary edge stops moving; the distance from the
    origin to that edge is the minimum separating translation.
    """
    pts = list(dict.fromkeys(simplex))
    if len(pts) < 3:
        return _sat_penetration(a, b)
    area = _orient(pts[0][0], pts[0][1], pts[1][0], pts[1][1], pts[2][0], pts[2][1])
    if abs(area) < EPS:
        return _sat_penetration(a, b)
    if area < 0:
        pts.reverse()

    poly = pts
    for _ in range(max_iter):
        # nearest edge to the origin (outward normal for CCW winding)
        best = None
        for i in range(len(poly)):
            p = poly[i]
            q = poly[(i + 1) % len(poly)]
            ex = q[0] - p[0]
            ey = q[1] - p[1]
            ln = math.hypot(ex, ey)
            if ln < EPS:
                continue
            nx, ny = ey / ln, -ex / ln
            d = p[0] * nx + p[1] * ny
            if d < 0.0:
                nx, ny, d = -nx, -ny, -d
            if best is None or d < best[0]:
                best = (d, i, nx, ny)
        if best is None:
            return _sat_penetration(a, b)
        d, i, nx, ny = best
        w = _minkowski_support(a, b, nx, ny)
        grow = (w[0] * nx + w[1] * ny) - d
        if grow < 1e-10:
            return d
        poly.insert(i + 1, w)
    return d


def hull_distance(a, b) -> float:
    """Signed clearance: +separation if disjoint, -penetration if not."""
    dist, intersecting, simplex = gjk_distance(a, b)
    if not intersecting:
        return dist
    return -epa_penetration(a, b, simplex)
