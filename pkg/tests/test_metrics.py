import math

import numpy as np
import pytest

from wraplay.corpus import CorpusSpec, generate_partition_graph
from wraplay.geometry import DegenerateHull
from wraplay.graphs import Clustering, Graph, shortest_paths
from wraplay.layout import (
    FlatLayout,
    LayoutParams,
    SphereLayout,
    TorusLayout,
    layout_torus_pairwise,
)
from wraplay.metrics import (
    MetricsReport,
    cluster_distance,
    cluster_hulls,
    compute_report,
    crossings,
    incidence_angle_deviation,
    layout_segments,
    link_length_variance,
    stress,
    wrapping_counts,
)
from wraplay.rng import Rng


def flat(points, unit=1.0):
    return FlatLayout(np.array(points, dtype=float), unit)


def torus(points, cell=1.0, unit=0.25):
    return TorusLayout(np.array(points, dtype=float), cell, unit)


def edge(*pairs):
    n = 1 + max(max(p) for p in pairs)
    return Graph(n, tuple(pairs))


def stress_nine_way_oracle(layout, dm):
    """Direct expansion of all nine offsets per pair (pure python)."""
    pos = layout.positions
    cell = layout.cell_size
    L = layout.ideal_unit
    n = pos.shape[0]
    total = 0.0
    for u in range(n):
        for v in range(u + 1, n):
            ideal = L * dm.d[u][v]
            best = math.inf
            for oy in (-1, 0, 1):
                for ox in (-1, 0, 1):
                    d = math.hypot(pos[v][0] + ox * cell - pos[u][0],
                                   pos[v][1] + oy * cell - pos[u][1])
                    best = min(best, (ideal - d) ** 2)
            total += best / ideal ** 2
    return total


def test_stress_two_nodes_exact():
    g = edge((0, 1))
    dm = shortest_paths(g)
    assert stress(flat([(0, 0), (1, 0)]), dm) == pytest.approx(0.0)
    assert stress(flat([(0, 0), (2, 0)]), dm) == pytest.approx(1.0)


def test_torus_stress_matches_nine_way_oracle():
    g, _ = generate_partition_graph(CorpusSpec("small", 0.30, seed=2))
    dm = shortest_paths(g)
    rng = Rng(5, "stressoracle")
    pos = [(rng.random(), rng.random()) for _ in range(g.node_count)]
    lay = torus(pos, cell=1.0, unit=1.0 / 3.0)
    assert stress(lay, dm) == pytest.approx(stress_nine_way_oracle(lay, dm), rel=1e-12)


def test_torus_stress_not_above_flat_stress_same_coords():
    g, _ = generate_partition_graph(CorpusSpec("small", 0.30, seed=3))
    dm = shortest_paths(g)
    rng = Rng(9, "coords")
    pts = [(rng.random(), rng.random()) for _ in range(g.node_count)]
    t = stress(torus(pts, unit=1.0 / 3.0), dm)
    f = stress(flat(pts, unit=1.0 / 3.0), dm)
    assert t <= f + 1e-12


def test_crossings_triangle_zero():
    g = edge((0, 1), (1, 2), (0, 2))
    lay = flat([(0, 0), (1, 0), (0.5, 1)])
    assert crossings(lay, g) == 0


def test_crossings_x_configuration():
    g = Graph(4, ((0, 1), (2, 3)))
    lay = flat([(0, 0), (1, 1), (0, 1), (1, 0)])
    assert crossings(lay, g) == 1
    assert crossings(lay, g, method="brute") == 1


def test_crossings_sweep_equals_brute_on_layouts():
    g, _ = generate_partition_graph(CorpusSpec("small", 0.30, seed=5))
    dm = shortest_paths(g)
    lay = layout_torus_pairwise(g, dm, LayoutParams(seed=1))
    assert crossings(lay, g, "sweep") == crossings(lay, g, "brute")


def test_torus_segments_census():
    g = edge((0, 1))
    lay = torus([(0.1, 0.5), (0.9, 0.5)])
    segs, edge_of, _ = layout_segments(lay, g)
    assert len(segs) == 2


def test_link_length_variance_uniform_zero():
    g = edge((0, 1), (1, 2))
    lay = flat([(0, 0), (1, 0), (2, 0)])
    assert link_length_variance(lay, g) == pytest.approx(0.0)


def test_link_length_variance_hand_case():
    # lengths 1 and 3 -> mean 2 -> scaled 0.5, 1.5 -> variance 0.25
    g = edge((0, 1), (1, 2))
    lay = flat([(0, 0), (1, 0), (4, 0)])
    assert link_length_variance(lay, g) == pytest.approx(0.25)


def test_link_length_variance_scale_invariant():
    g = edge((0, 1), (1, 2), (2, 3))
    rng = Rng(3, "llv")
    pts = [(rng.random(), rng.random()) for _ in range(4)]
    a = link_length_variance(flat(pts), g)
    b = link_length_variance(flat([(7 * x, 7 * y) for x, y in pts]), g)
    assert a == pytest.approx(b)


def test_angle_perfect_star_zero():
    g = Graph(5, ((0, 1), (0, 2), (0, 3), (0, 4)))
    lay = flat([(0, 0), (1, 0), (0, 1), (-1, 0), (0, -1)])
    assert incidence_angle_deviation(lay, g) == pytest.approx(0.0)


def test_angle_degree2_sixty_degrees():
    # centre node with two links 60 degrees apart; ideal is 180
    g = edge((0, 1), (1, 2))
    lay = flat([(1, 0), (0, 0), (math.cos(math.pi / 3), math.sin(math.pi / 3))])
    # only the centre node contributes: (180-60)/180 = 2/3, averaged over 3 nodes
    assert incidence_angle_deviation(lay, g) == pytest.approx((2 / 3) / 3)


def test_angle_rigid_motion_invariant():
    g = edge((0, 1), (1, 2), (0, 2), (2, 3))
    rng = Rng(4, "angles")
    pts = np.array([(rng.random(), rng.random()) for _ in range(4)])
    base = incidence_angle_deviation(flat(pts), g)
    th = 1.1
    rot = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
    moved = 3.0 * (pts @ rot.T) + np.array([5.0, -2.0])
    assert incidence_angle_deviation(flat(moved), g) == pytest.approx(base)


def test_angle_torus_minimum_image_directions():
    # neighbour across the seam: direction must point through the boundary
    g = edge((0, 1), (0, 2))
    lay = torus([(0.05, 0.5), (0.95, 0.5), (0.25, 0.5)])
    # at node 0 the two links leave in opposite directions: ideal 180, actual 180
    assert incidence_angle_deviation(lay, g) == pytest.approx(0.0)


def test_wrapping_counts_blob():
    g = edge((0, 1), (1, 2))
    lay = torus([(0.4, 0.5), (0.5, 0.5), (0.6, 0.5)])
    assert wrapping_counts(lay, g) == (0, 0, 0)


def test_wrapping_counts_lr():
    g = edge((0, 1))
    lay = torus([(0.05, 0.5), (0.95, 0.5)])
    assert wrapping_counts(lay, g) == (1, 0, 0)


def test_wrapping_counts_corner_and_three_segments():
    g = edge((0, 1))
    lay = torus([(0.06, 0.1), (0.9, 0.87)])
    assert wrapping_counts(lay, g) == (0, 0, 1)
    segs, _, _ = layout_segments(lay, g)
    assert len(segs) == 3


def test_cluster_distance_point_clusters():
    g = edge((0, 1))
    c = Clustering((0, 1), 2)
    lay = flat([(0.0, 0.0), (0.3, 0.0)])
    assert cluster_distance(lay, g, c) == pytest.approx(0.3)


def test_cluster_distance_overlapping_squares():
    g = Graph(8, ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)))
    c = Clustering((0, 0, 0, 0, 1, 1, 1, 1), 2)
    a = [(0, 0), (1, 0), (1, 1), (0, 1)]
    b = [(0.8, 0), (1.8, 0), (1.8, 1), (0.8, 1)]
    lay = flat(a + b)
    assert cluster_distance(lay, g, c) == pytest.approx(-0.2, abs=1e-9)


def test_cluster_distance_identical_hulls_negative():
    g = Graph(8, tuple((i, i + 1) for i in range(7)))
    c = Clustering((0, 0, 0, 0, 1, 1, 1, 1), 2)
    sq = [(0, 0), (1, 0), (1, 1), (0, 1)]
    lay = flat(sq + sq)
    val = cluster_distance(lay, g, c)
    assert val == pytest.approx(-1.0, abs=1e-9)


def test_cluster_distance_requires_two_clusters():
    g = edge((0, 1))
    with pytest.raises(ValueError):
        cluster_distance(flat([(0, 0), (1, 0)]), g, Clustering((0, 0), 1))


def test_degenerate_cluster_raises():
    g = edge((0, 1), (1, 2), (2, 3))
    c = Clustering((0, 0, 1, 1), 2)
    lay = flat([(0.5, 0.5), (0.5, 0.5), (1, 0), (1, 1)])
    with pytest.raises(DegenerateHull):
        cluster_distance(lay, g, c)


def test_torus_cluster_hull_spans_seam():
    # cluster straddles the x boundary; the hull must stay compact
    g = Graph(4, ((0, 1), (2, 3), (0, 2)))
    c = Clustering((0, 0, 1, 1), 2)
    lay = torus([(0.05, 0.5), (0.95, 0.5), (0.45, 0.2), (0.55, 0.2)])
    hulls = cluster_hulls(lay, g, c)
    xs = [p[0] for p in hulls[0]]
    assert max(xs) - min(xs) == pytest.approx(0.1)


def test_sphere_crossings_small_oracle():
    # two arcs crossing near the equator vs two that do not
    a = np.array([1.0, 0.0, 0.0])
    b = np.array([0.0, 1.0, 0.0])
    mid_up = np.array([1.0, 1.0, 0.4])
    mid_dn = np.array([1.0, 1.0, -0.4])
    for v in (mid_up, mid_dn):
        v /= np.linalg.norm(v)
    mid_up = mid_up / np.linalg.norm(mid_up)
    mid_dn = mid_dn / np.linalg.norm(mid_dn)
    g = Graph(4, ((0, 1), (2, 3)))
    lay = SphereLayout(np.array([a, b, mid_up, mid_dn]), math.pi)
    assert crossings(lay, g) == 1
    lay2 = SphereLayout(np.array([a, mid_up, b, mid_dn]), math.pi)
    g2 = Graph(4, ((0, 1), (2, 3)))
    assert crossings(lay2, g2) == 0


def test_report_fields_by_topology():
    g, clus = generate_partition_graph(CorpusSpec("small", 0.30, seed=13))
    dm = shortest_paths(g)
    lay = layout_torus_pairwise(g, dm, LayoutParams(seed=0))
    rep = compute_report(lay, g, dm, clus)
    assert rep.topology == "torus"
    assert rep.stress > 0
    assert rep.crossings >= 0
    assert rep.wrap_lr is not None
    assert rep.cluster_distance is not None
    row = rep.csv_values()
    assert len(row) == len(MetricsReport.CSV_FIELDS)
    assert rep.to_json().startswith('{"topology":"torus"')
