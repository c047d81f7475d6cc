"""Benchmark graph generators.

Two presets:

* ``generate_partition_graph`` -- clustered graphs in the planted
  partition style, controlled for size class, density 0.3 +/- 0.01 and
  modularity target, with 3-8 clusters.  Works by planning exact
  intra/inter edge counts per cluster block (so density and modularity
  land inside their bands by construction) and rejection-sampling the
  remaining randomness (connectivity, per-cluster quality).
* ``generate_legacy_graph`` -- the small 8/11/15-node corpus built from
  Watts-Strogatz, Barabasi-Albert and Erdos-Renyi samplers, rejection
  filtered to fixed edge ranges.

Everything is a pure function of (spec, seed): attempts derive their
randomness from numbered substreams of the caller's seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .graphs import Clustering, Graph, is_connected, modularity, per_cluster_modularity
from .rng import Rng


class GenerationExhausted(RuntimeError):
    """No attempt produced a graph inside all bands."""


SIZE_CLASSES = {
    # node range is narrowed so that density 0.3 lands inside the link band
    "small": {"nodes": (70, 79), "links": (710, 925)},
    "large": {"nodes": (126, 131), "links": (2310, 2590)},
}

DENSITY_TARGET = 0.3
DENSITY_TOL = 0.01
MODULARITY_TOL = 0.02
MIN_CLUSTER_MODULARITY = 0.23
CLUSTER_RANGE = (3, 8)
MODULARITY_LEVELS = (0.25, 0.30, 0.35, 0.40, 0.45)


@dataclass(frozen=True)
class CorpusSpec:
    size_class: str
    modularity_target: float
    seed: int
    max_attempts: int = 200

    def __post_init__(self):
        if self.size_class not in SIZE_CLASSES:
            raise ValueError(f"unknown size class {self.size_class!r}")
        if not 0.0 < self.modularity_target < 1.0:
            raise ValueError("modularity target must be in (0, 1)")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")


def _largest_remainder(total: int, weights: list[float]) -> list[int]:
    """Integer split of `total` proportional to `weights` (deterministic)."""
    wsum = sum(weights)
    raw = [total * w / wsum for w in weights]
    base = [int(math.floor(r)) for r in raw]
    short = total - sum(base)
    order = sorted(range(len(raw)), key=lambda i: (base[i] - raw[i], i))
    for i in order[:short]:
        base[i] += 1
    return base


def _plan_attempt(spec: CorpusSpec, rng: Rng):
    """Choose n, k, cluster sizes and exact per-block edge counts.

    Returns None when the draw is infeasible (e.g. clusters too small to
    host the required intra edges).
    """
    lo_n, hi_n = SIZE_CLASSES[spec.size_class]["nodes"]
    n = rng.randint(lo_n, hi_n)
    e_total = round(DENSITY_TARGET * n * (n - 1) / 2.0)

    k_lo, k_hi = CLUSTER_RANGE
    feasible = []
    for k in range(k_lo, k_hi + 1):
        s = n / k
        pairs_in = k * s * (s - 1) / 2.0
        # crude feasibility: required intra edges must fit with headroom
        need = (spec.modularity_target + 1.0 / k) * e_total
        if need <= 0.95 * pairs_in:
            feasible.append(k)
    if not feasible:
        return None
    k = feasible[rng.below(len(feasible))]

    # near-balanced sizes with a little jitter
    sizes = _largest_remainder(n, [1.0] * k)
    jitter = max(1, n // (6 * k))
    for _ in range(k):
        i = rng.below(k)
        j = rng.below(k)
        if i != j and sizes[i] - 1 >= 2 and sizes[i] - 1 >= sizes[j] - jitter:
            sizes[i] -= 1
            sizes[j] += 1

    pairs_in_c = [s * (s - 1) // 2 for s in sizes]
    pairs_in = sum(pairs_in_c)
    pairs_all = n * (n - 1) // 2
    if pairs_in == 0 or pairs_in == pairs_all:
        return None

    # solve the intra edge count so planned Q hits the target; the degree
    # share of each cluster depends on the split, so iterate a few times
    w = [s / n for s in sizes]
    e_in = None
    blocks_in = blocks_out = None
    for _ in range(8):
        frac = spec.modularity_target + sum(x * x for x in w)
        e_in = round(frac * e_total)
        e_out = e_total - e_in
        if e_in <= 0 or e_out <= 0 or e_in > pairs_in:
            return None
        blocks_in = _largest_remainder(e_in, [float(p) for p in pairs_in_c])
        pair_w = []
        pair_idx = []
        for a in range(k):
            for b in range(a + 1, k):
                pair_idx.append((a, b))
                pair_w.append(float(sizes[a] * sizes[b]))
        blocks_out = _largest_remainder(e_out, pair_w)
        deg = [2 * blocks_in[a] for a in range(k)]
        for (a, b), cnt in zip(pair_idx, blocks_out):
            deg[a] += cnt
            deg[b] += cnt
        w = [dg / (2.0 * e_total) for dg in deg]

    for a in range(k):
        if blocks_in[a] > pairs_in_c[a]:
            return None
    for (a, b), cnt in zip(pair_idx, blocks_out):
        if cnt > sizes[a] * sizes[b]:
            return None

    # the plan fixes block counts, so Q and the per-cluster measure are
    # exact before sampling; reject bad plans here instead of after wiring
    q_plan = e_in / e_total - sum(x * x for x in w)
    if abs(q_plan - spec.modularity_target) > MODULARITY_TOL:
        return None
    m2 = 2.0 * e_total
    for a in range(k):
        deg_a = w[a] * m2
        if deg_a <= 0 or (2.0 * blocks_in[a] / deg_a - deg_a / m2) <= MIN_CLUSTER_MODULARITY:
            return None
    lo_e, hi_e = SIZE_CLASSES[spec.size_class]["links"]
    if not lo_e <= e_total <= hi_e:
        return None
    dens = 2.0 * e_total / (n * (n - 1))
    if abs(dens - DENSITY_TARGET) > DENSITY_TOL:
        return None
    return n, k, sizes, blocks_in, pair_idx, blocks_out


def _sample_block(rng: Rng, pairs: list[tuple[int, int]], count: int):
    chosen = rng.sample_indices(len(pairs), count)
    return [pairs[i] for i in chosen]


def generate_partition_graph(spec: CorpusSpec) -> tuple[Graph, Clustering]:
    """Connected clustered graph meeting all corpus bands.

    Deterministic for a fixed spec; raises GenerationExhausted after
    ``spec.max_attempts`` failed attempts.
    """
    for attempt in range(spec.max_attempts):
        rng = Rng(spec.seed, f"partition-attempt-{attempt}")
        plan = _plan_attempt(spec, rng)
        if plan is None:
            continue
        n, k, sizes, blocks_in, pair_idx, blocks_out = plan

        starts = [0] * k
        for c in range(1, k):
            starts[c] = starts[c - 1] + sizes[c - 1]
        assignment = []
        for c in range(k):
            assignment.extend([c] * sizes[c])

        edges: list[tuple[int, int]] = []
        for c in range(k):
            members = range(starts[c], starts[c] + sizes[c])
            pool = [(u, v) for i, u in enumerate(members) for v in list(members)[i + 1:]]
            edges.extend(_sample_block(rng, pool, blocks_in[c]))
        for (a, b), cnt in zip(pair_idx, blocks_out):
            ma = range(starts[a], starts[a] + sizes[a])
            mb = range(starts[b], starts[b] + sizes[b])
            pool = [(u, v) for u in ma for v in mb]
            edges.extend(_sample_block(rng, pool, cnt))

        g = Graph(n, tuple(edges))
        c = Clustering(tuple(assignment), k)
        if not is_connected(g):
            continue
        # block counts make these exact, but verify rather than trust
        if abs(modularity(g, c) - spec.modularity_target) > MODULARITY_TOL:
            continue
        if min(per_cluster_modularity(g, c)) <= MIN_CLUSTER_MODULARITY:
            continue
        return g, c
    raise GenerationExhausted(
        f"no valid graph in {spec.max_attempts} attempts for {spec}"
    )


# --- legacy small corpus ---------------------------------------------------

LEGACY_CLASSES = {
    "legacy-small": {"nodes": 8, "links": (12, 18)},
    "legacy-medium": {"nodes": 11, "links": (18, 28)},
    "legacy-large": {"nodes": 15, "links": (26, 36)},
}

LEGACY_MODELS = ("smallworld", "scalefree", "binomial")


def _watts_strogatz(rng: Rng, n: int, k: int, p: float) -> Graph:
    edges = set()
    for u in range(n):
        for step in range(1, k // 2 + 1):
            v = (u + step) % n
            edges.add((min(u, v), max(u, v)))
    out = []
    for u, v in sorted(edges):
        if rng.random() < p:
            # rewire the far endpoint, keeping the graph simple
            choices = [
                w for w in range(n)
                if w != u and (min(u, w), max(u, w)) not in edges
            ]
            if choices:
                w = choices[rng.below(len(choices))]
                edges.discard((min(u, v), max(u, v)))
                edges.add((min(u, w), max(u, w)))
    return Graph(n, tuple(sorted(edges)))


def _barabasi_albert(rng: Rng, n: int, m: int) -> Graph:
    # seed star on m+1 nodes, then preferential attachment
    targets_pool = []
    edges = []
    for i in range(1, m + 1):
        edges.append((0, i))
        targets_pool.extend([0, i])
    for u in range(m + 1, n):
        chosen: set[int] = set()
        while len(chosen) < m:
            chosen.add(targets_pool[rng.below(len(targets_pool))])
        for v in sorted(chosen):
            edges.append((v, u))
            targets_pool.extend([u, v])
    return Graph(n, tuple(edges))


def _erdos_renyi_gnm(rng: Rng, n: int, m: int) -> Graph:
    pool = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = rng.sample_indices(len(pool), m)
    return Graph(n, tuple(pool[i] for i in chosen))


def generate_legacy_graph(size_class: str, model: str, seed: int,
                          max_attempts: int = 200) -> Graph:
    """One small study-style graph, edge count inside the class band."""
    if size_class not in LEGACY_CLASSES:
        raise ValueError(f"unknown legacy class {size_class!r}")
    if model not in LEGACY_MODELS:
        raise ValueError(f"unknown model {model!r}")
    n = LEGACY_CLASSES[size_class]["nodes"]
    lo, hi = LEGACY_CLASSES[size_class]["links"]
    for attempt in range(max_attempts):
        rng = Rng(seed, f"legacy-{size_class}-{model}-{attempt}")
        if model == "smallworld":
            g = _watts_strogatz(rng, n, 4, 0.3)
        elif model == "scalefree":
            m = 2 + rng.below(2)
            g = _barabasi_albert(rng, n, m)
        else:
            g = _erdos_renyi_gnm(rng, n, rng.randint(lo, hi))
        if lo <= g.edge_count <= hi and is_connected(g):
            return g
    raise GenerationExhausted(
        f"no valid legacy graph in {max_attempts} attempts"
    )
