"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (run with -s or -v to see them).

The benchmark criteria share one set of layout runs over a 10-graph
mini-corpus (small class, modularity 0.30) with layout seeds 1-5.
"""

import math
import time

import numpy as np
import pytest

from wraplay.autopan import (
    apply_pan,
    autopan_torus_with_cost,
    autorotate_orthographic,
    separable_wrapcost,
    split_edge_count_orthographic,
    RotationTriple,
)
from wraplay.corpus import CorpusSpec, generate_legacy_graph, generate_partition_graph
from wraplay.geometry import best_wrapping, convex_hull, count_crossings_bruteforce, count_crossings_sweep, hull_distance
from wraplay.graphs import Graph, shortest_paths
from wraplay.layout import (
    LayoutParams,
    TorusLayout,
    layout_flat,
    layout_sphere,
    layout_to_json,
    layout_torus_allpairs,
    layout_torus_pairwise,
)
from wraplay.metrics import cluster_distance, crossings, layout_segments, stress
from wraplay.rng import Rng

SEEDS = (1, 2, 3, 4, 5)
RUNTIME_BUDGET_S = 600.0


def record(name: str, ok: bool, detail: str = ""):
    line = f"ACCEPTANCE {'PASS' if ok else 'FAIL'} | {name}"
    if detail:
        line += f" | {detail}"
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def mini_corpus():
    graphs = []
    for i in range(10):
        g, c = generate_partition_graph(CorpusSpec("small", 0.30, seed=100 + i))
        graphs.append((g, c, shortest_paths(g)))
    return graphs


@pytest.fixture(scope="module")
def layout_runs(mini_corpus):
    """All benchmark layout runs plus their metrics, and the wall clock."""
    t0 = time.perf_counter()
    runs = {}
    for gi, (g, c, dm) in enumerate(mini_corpus):
        for seed in SEEDS:
            p = LayoutParams(seed=seed)
            for algo, fn in (
                ("pairwise-torus", layout_torus_pairwise),
                ("pairwise-flat", layout_flat),
                ("allpairs-torus", layout_torus_allpairs),
            ):
                lay = fn(g, dm, p)
                entry = {
                    "layout": lay,
                    "converged": lay.converged,
                    "stress": stress(lay, dm),
                }
                if algo.startswith("pairwise"):
                    entry["crossings"] = crossings(lay, g)
                    entry["cluster_distance"] = cluster_distance(lay, g, c)
                runs[(gi, algo, seed)] = entry
    wall = time.perf_counter() - t0
    return runs, wall


def per_graph_means(runs, algo, field, n_graphs=10):
    out = []
    for gi in range(n_graphs):
        vals = [runs[(gi, algo, s)][field] for s in SEEDS]
        out.append(sum(vals) / len(vals))
    return out


def test_criterion_aesthetics_superiority(layout_runs):
    runs, wall = layout_runs
    tor_cross = per_graph_means(runs, "pairwise-torus", "crossings")
    fla_cross = per_graph_means(runs, "pairwise-flat", "crossings")
    tor_cd = per_graph_means(runs, "pairwise-torus", "cluster_distance")
    fla_cd = per_graph_means(runs, "pairwise-flat", "cluster_distance")
    fewer = sum(t < f for t, f in zip(tor_cross, fla_cross))
    wider = sum(t > f for t, f in zip(tor_cd, fla_cd))
    ok = fewer >= 8 and wider >= 8 and wall < RUNTIME_BUDGET_S
    record(
        "aesthetics superiority (pairwise torus vs flat)", ok,
        f"fewer crossings on {fewer}/10 graphs, larger cluster distance on "
        f"{wider}/10, benchmark wall clock {wall:.1f}s < {RUNTIME_BUDGET_S:.0f}s",
    )


def test_criterion_algorithm_comparison(layout_runs):
    runs, _ = layout_runs
    pw = [runs[(gi, "pairwise-torus", s)]["stress"] for gi in range(10) for s in SEEDS]
    ap = [runs[(gi, "allpairs-torus", s)]["stress"] for gi in range(10) for s in SEEDS]
    mean_pw = sum(pw) / len(pw)
    mean_ap = sum(ap) / len(ap)
    record(
        "algorithm comparison (pairwise <= all-pairs mean stress)",
        mean_pw <= mean_ap,
        f"pairwise {mean_pw:.2f} vs all-pairs {mean_ap:.2f}",
    )


def test_criterion_convergence(layout_runs):
    runs, _ = layout_runs
    flags = [
        runs[(gi, algo, s)]["converged"]
        for gi in range(10) for s in SEEDS
        for algo in ("pairwise-torus", "pairwise-flat")
    ]
    rate = sum(flags) / len(flags)
    record(
        "pairwise convergence within tau_max=200",
        rate >= 0.90,
        f"{100 * rate:.0f}% of {len(flags)} runs converged",
    )


def _oracle_axis_costs(positions, edges, cell):
    inv_len = []
    for u, v in edges:
        _, _, d = best_wrapping(tuple(positions[u]), tuple(positions[v]), cell)
        inv_len.append(1.0 / d)

    def axis(axis_i):
        coords = sorted(set(p[axis_i] for p in positions))
        cuts = [(a + b) / 2.0 for a, b in zip(coords, coords[1:])]
        cuts.append(((coords[-1] + coords[0] + cell) / 2.0) % cell)
        costs = []
        for b in cuts:
            terms = []
            for (u, v), il in zip(edges, inv_len):
                cu = (positions[u][axis_i] - b) % cell
                cv = (positions[v][axis_i] - b) % cell
                dx = cv - cu
                if dx >= cell / 2.0 or dx < -cell / 2.0:
                    terms.append(il)
            costs.append(math.fsum(terms))
        return costs

    return axis(0), axis(1)


def test_criterion_autopan_optimality():
    rng = Rng(2024, "autopan-acceptance")
    exact = 0
    not_worse = 0
    trials = 100
    for _ in range(trials):
        n = 18 + rng.below(10)
        m = n + rng.below(2 * n)
        edges = set()
        while len(edges) < m:
            u = rng.below(n)
            v = rng.below(n)
            if u != v:
                edges.add((min(u, v), max(u, v)))
        g = Graph(n, tuple(sorted(edges)))
        pos = np.array([[rng.random(), rng.random()] for _ in range(n)])
        lay = TorusLayout(pos, 1.0, 1.0 / 3.0)
        pan, claimed = autopan_torus_with_cost(lay, g)
        cx, cy = _oracle_axis_costs(pos, g.edges, 1.0)
        if claimed == min(cx) + min(cy):
            exact += 1
        if claimed <= separable_wrapcost(lay, g):
            not_worse += 1
    record(
        "auto-pan optimality on 100 random torus layouts",
        exact == trials and not_worse == trials,
        f"exact oracle match {exact}/100, never above pre-pan cost {not_worse}/100",
    )


@pytest.fixture(scope="module")
def sphere_study_graphs():
    """The cluster-task study set: five easy (modularity 0.40) plus five
    hard (0.30) small graphs."""
    graphs = []
    for i in range(5):
        g, c = generate_partition_graph(CorpusSpec("small", 0.40, seed=200 + i))
        graphs.append((g, c, shortest_paths(g)))
    for i in range(5):
        g, c = generate_partition_graph(CorpusSpec("small", 0.30, seed=100 + i))
        graphs.append((g, c, shortest_paths(g)))
    return graphs


def test_criterion_sphere_autorotate(sphere_study_graphs):
    reductions = []
    for gi, (g, c, dm) in enumerate(sphere_study_graphs):
        lay = layout_sphere(g, dm, LayoutParams(seed=1))
        best = autorotate_orthographic(lay, g, trials=1000, seed=gi)
        best_cost = split_edge_count_orthographic(lay, g, best)
        rng = Rng(7000 + gi, "baseline-rotations")
        base = [
            split_edge_count_orthographic(
                lay, g,
                RotationTriple(*(rng.uniform(-math.pi, math.pi) for _ in range(3))),
            )
            for _ in range(10)
        ]
        base_mean = sum(base) / len(base)
        reductions.append((base_mean - best_cost) / base_mean)
    mean_red = sum(reductions) / len(reductions)
    record(
        "sphere auto-rotate split-edge reduction >= 15%",
        mean_red >= 0.15,
        f"mean reduction {100 * mean_red:.1f}% over 10 layouts (1000 trials each)",
    )


# --- oracle equivalence suite -----------------------------------------------


def _crossings_allpairs_numpy(segments, edge_of, endpoints) -> int:
    """Independent quadratic counter (no pruning), vectorised."""
    n = len(segments)
    if n < 2:
        return 0
    seg = np.asarray([(p[0], p[1], q[0], q[1]) for p, q in segments])
    eid = np.asarray(edge_of)
    ends = np.asarray(endpoints)
    su, sv = ends[eid, 0], ends[eid, 1]
    eps = 1e-12
    total = 0
    for i in range(n - 1):
        j = slice(i + 1, n)
        keep = (eid[j] != eid[i]) & (su[j] != su[i]) & (su[j] != sv[i]) \
            & (sv[j] != su[i]) & (sv[j] != sv[i])
        if not keep.any():
            continue
        q = seg[j][keep]
        p1x, p1y, p2x, p2y = seg[i]
        d1 = (q[:, 2] - q[:, 0]) * (p1y - q[:, 1]) - (q[:, 3] - q[:, 1]) * (p1x - q[:, 0])
        d2 = (q[:, 2] - q[:, 0]) * (p2y - q[:, 1]) - (q[:, 3] - q[:, 1]) * (p2x - q[:, 0])
        d3 = (p2x - p1x) * (q[:, 1] - p1y) - (p2y - p1y) * (q[:, 0] - p1x)
        d4 = (p2x - p1x) * (q[:, 3] - p1y) - (p2y - p1y) * (q[:, 2] - p1x)
        m = (((d1 > eps) & (d2 < -eps)) | ((d1 < -eps) & (d2 > eps))) \
            & (((d3 > eps) & (d4 < -eps)) | ((d3 < -eps) & (d4 > eps)))
        total += int(m.sum())
    return total


def test_criterion_oracle_equivalence(mini_corpus, layout_runs):
    runs, _ = layout_runs
    checks = []

    # crossings: sweep == quadratic, on corpus-scale and small layouts
    big_ok = 0
    big_total = 0
    for gi in range(10):
        g, c, dm = mini_corpus[gi]
        for algo in ("pairwise-torus", "pairwise-flat"):
            lay = runs[(gi, algo, 1)]["layout"]
            segs, eo, ep = layout_segments(lay, g)
            big_total += 1
            if count_crossings_sweep(segs, eo, ep) == _crossings_allpairs_numpy(segs, eo, ep):
                big_ok += 1
    small_ok = 0
    for seed in range(3):
        g = generate_legacy_graph("legacy-large", "smallworld", seed=seed)
        dm = shortest_paths(g)
        lay = layout_torus_pairwise(g, dm, LayoutParams(seed=seed))
        segs, eo, ep = layout_segments(lay, g)
        if count_crossings_sweep(segs, eo, ep) == count_crossings_bruteforce(segs, eo, ep):
            small_ok += 1
    checks.append(("crossings", big_ok == big_total and small_ok == 3,
                   f"{big_ok}/{big_total} corpus layouts + {small_ok}/3 brute-force"))

    # best wrapping == nine-way exhaustive on 1e5 random pairs
    rng = Rng(42, "wrapping-oracle")
    bad = 0
    for _ in range(100_000):
        xu = (rng.random(), rng.random())
        xv = (rng.random(), rng.random())
        ideal = rng.random() * 1.2
        off, _, dist = best_wrapping(xu, xv, 1.0, ideal)
        best_s = None
        best_off = None
        for oy in (-1, 0, 1):
            for ox in (-1, 0, 1):
                d = math.hypot(xv[0] + ox - xu[0], xv[1] + oy - xu[1])
                s = abs(d - ideal)
                if best_s is None or s < best_s:
                    best_s = s
                    best_off = (ox, oy)
        if off != best_off or abs(abs(dist - ideal) - best_s) > 1e-12:
            bad += 1
    checks.append(("best_wrapping", bad == 0, f"{bad} mismatches in 100000 pairs"))

    # torus stress == nine-way expansion oracle
    g, c, dm = mini_corpus[0]
    rng = Rng(5, "stress-oracle")
    pos = np.array([[rng.random(), rng.random()] for _ in range(g.node_count)])
    lay = TorusLayout(pos, 1.0, 1.0 / 3.0)
    want = 0.0
    for u in range(g.node_count):
        for v in range(u + 1, g.node_count):
            ideal = lay.ideal_unit * dm.d[u][v]
            best = min(
                (ideal - math.hypot(pos[v][0] + ox - pos[u][0],
                                    pos[v][1] + oy - pos[u][1])) ** 2
                for oy in (-1, 0, 1) for ox in (-1, 0, 1)
            )
            want += best / ideal ** 2
    got = stress(lay, dm)
    checks.append(("torus stress", abs(got - want) <= 1e-9 * max(1.0, want),
                   f"|{got:.6f} - {want:.6f}|"))

    # cluster distance within 2% of the dense sampling oracle, 50 instances
    rng = Rng(13, "cluster-oracle")
    worst = 0.0
    ok_cd = 0
    for _ in range(50):
        a = convex_hull([(rng.random() * 2, rng.random() * 2) for _ in range(6)])
        b = convex_hull([
            (rng.random() * 2 + rng.random() * 1.5, rng.random() * 2)
            for _ in range(6)
        ])
        got = hull_distance(a, b)
        want = _sampling_hull_distance(a, b)
        tol = max(0.02 * abs(want), 5e-3)
        if abs(got - want) <= tol:
            ok_cd += 1
        if abs(want) > 1e-9:
            worst = max(worst, abs(got - want) / abs(want))
    checks.append(("cluster distance", ok_cd == 50,
                   f"{ok_cd}/50 within 2% (worst rel dev {100 * worst:.2f}%)"))

    # shortest paths == Floyd-Warshall on every test graph <= 40 nodes
    fw_ok = 0
    fw_total = 0
    for cls in ("legacy-small", "legacy-medium", "legacy-large"):
        for model in ("smallworld", "scalefree", "binomial"):
            g = generate_legacy_graph(cls, model, seed=1)
            if g.node_count <= 40:
                fw_total += 1
                if (shortest_paths(g).d == _floyd_warshall(g)).all():
                    fw_ok += 1
    checks.append(("shortest paths", fw_ok == fw_total, f"{fw_ok}/{fw_total} graphs"))

    ok = all(c[1] for c in checks)
    detail = "; ".join(f"{name}: {'ok' if good else 'FAIL'} ({d})"
                       for name, good, d in checks)
    record("oracle equivalence suite", ok, detail)


def _floyd_warshall(g: Graph) -> np.ndarray:
    n = g.node_count
    inf = float("inf")
    d = [[0.0 if i == j else inf for j in range(n)] for i in range(n)]
    for u, v in g.edges:
        d[u][v] = d[v][u] = 1.0
    for k in range(n):
        for i in range(n):
            dik = d[i][k]
            if dik == inf:
                continue
            row_k = d[k]
            row_i = d[i]
            for j in range(n):
                alt = dik + row_k[j]
                if alt < row_i[j]:
                    row_i[j] = alt
    return np.array(d)


def _sampling_hull_distance(a, b, per_edge=300, directions=2400):
    av = np.asarray(a, dtype=float)
    bv = np.asarray(b, dtype=float)
    th = 2 * math.pi * np.arange(directions) / directions
    dirs = np.stack([np.cos(th), np.sin(th)], axis=1)
    pa = dirs @ av.T
    pb = dirs @ bv.T
    gap = np.maximum(pb.min(axis=1) - pa.max(axis=1),
                     pa.min(axis=1) - pb.max(axis=1))
    best_sep = float(gap.max())
    if best_sep <= 0:
        return best_sep

    def boundary(poly):
        if len(poly) == 1:
            return poly
        pts = []
        m = len(poly)
        rng_edges = range(m) if m > 2 else [0]
        for i in rng_edges:
            p = poly[i]
            q = poly[(i + 1) % m]
            t = np.arange(per_edge) / per_edge
            pts.append(p[None, :] + t[:, None] * (q - p)[None, :])
        return np.concatenate(pts)

    sa = boundary(av)
    sb = boundary(bv)
    diff = sa[:, None, :] - sb[None, :, :]
    return float(np.sqrt((diff ** 2).sum(axis=2)).min())


def test_criterion_determinism(mini_corpus):
    g, c, dm = mini_corpus[0]
    legacy = generate_legacy_graph("legacy-medium", "scalefree", seed=3)
    dml = shortest_paths(legacy)
    ok = True
    details = []
    for name, graph, dmat, fn in (
        ("pairwise-torus", g, dm, layout_torus_pairwise),
        ("pairwise-flat", g, dm, layout_flat),
        ("allpairs-torus", g, dm, layout_torus_allpairs),
        ("sphere", g, dm, layout_sphere),
        ("pairwise-torus/legacy", legacy, dml, layout_torus_pairwise),
    ):
        for seed in (1, 5):
            a = layout_to_json(fn(graph, dmat, LayoutParams(seed=seed)))
            b = layout_to_json(fn(graph, dmat, LayoutParams(seed=seed)))
            if a != b:
                ok = False
                details.append(f"{name} seed {seed} differs")
    record("determinism (byte-identical layout JSON)", ok,
           "; ".join(details) if details else "10 (algo, seed) pairs identical")


def test_criterion_sphere_unit_norm(mini_corpus):
    worst = 0.0
    for gi, (g, c, dm) in enumerate(mini_corpus):
        lay = layout_sphere(g, dm, LayoutParams(seed=gi + 1))
        norms = np.linalg.norm(lay.positions, axis=1)
        worst = max(worst, float(np.abs(norms - 1.0).max()))
    record("sphere unit-norm invariant (1e-9)", worst < 1e-9,
           f"max |norm - 1| = {worst:.2e}")
