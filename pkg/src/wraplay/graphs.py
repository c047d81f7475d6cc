"""Graph model, shortest paths and partition quality measures.

Graphs are undirected, simple and connected; nodes are the integers
``0..node_count-1``.  The JSON interchange format shared with the CLI
and the viewer is::

    {"nodes": [{"id": 0, "label": "a", "cluster": 0}, ...],
     "links": [{"source": 0, "target": 1}, ...]}

``label`` and ``cluster`` are optional per node.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np


class GraphError(ValueError):
    """Invalid graph structure or file."""


class DisconnectedGraph(GraphError):
    """A pair of nodes has no connecting path."""


@dataclass(frozen=True)
class Graph:
    node_count: int
    edges: tuple[tuple[int, int], ...]
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if self.node_count < 1:
            raise GraphError("graph needs at least one node")
        seen = set()
        norm = []
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"self-loop at node {u}")
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise GraphError(f"edge ({u}, {v}) out of range")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise GraphError(f"duplicate edge {key}")
            seen.add(key)
            norm.append(key)
        object.__setattr__(self, "edges", tuple(norm))
        if self.labels is not None:
            if len(self.labels) != self.node_count:
                raise GraphError("labels length must equal node_count")
            object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.node_count)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def degrees(self) -> list[int]:
        deg = [0] * self.node_count
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def label_of(self, u: int) -> str:
        return self.labels[u] if self.labels is not None else str(u)


@dataclass(frozen=True)
class Clustering:
    assignment: tuple[int, ...]
    cluster_count: int

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(self.assignment))
        if self.cluster_count < 1:
            raise GraphError("need at least one cluster")
        present = set(self.assignment)
        if present != set(range(self.cluster_count)):
            raise GraphError(
                "cluster ids must be contiguous from 0 and every cluster non-empty"
            )

    def members(self, c: int) -> list[int]:
        return [i for i, a in enumerate(self.assignment) if a == c]


@dataclass(frozen=True)
class DistanceMatrix:
    """All-pairs hop counts plus the extremes the annealing schedule needs."""

    d: np.ndarray
    d_max: int = field(init=False)
    d_min: int = field(init=False)

    def __post_init__(self):
        n = self.d.shape[0]
        off = self.d[~np.eye(n, dtype=bool)]
        object.__setattr__(self, "d_max", int(off.max()) if off.size else 0)
        object.__setattr__(self, "d_min", int(off.min()) if off.size else 0)

    @property
    def diameter(self) -> int:
        return self.d_max


def shortest_paths(g: Graph) -> DistanceMatrix:
    """BFS hop counts for all node pairs.

    Raises DisconnectedGraph when some pair is unreachable.
    """
    n = g.node_count
    adj = g.adjacency()
    d = np.full((n, n), -1, dtype=np.int64)
    for s in range(n):
        d[s, s] = 0
        q = deque([s])
        row = d[s]
        while q:
            u = q.popleft()
            du = row[u]
            for v in adj[u]:
                if row[v] < 0:
                    row[v] = du + 1
                    q.append(v)
    if (d < 0).any():
        raise DisconnectedGraph("graph is not connected")
    return DistanceMatrix(d)


def is_connected(g: Graph) -> bool:
    n = g.node_count
    adj = g.adjacency()
    seen = bytearray(n)
    seen[0] = 1
    q = deque([0])
    count = 1
    while q:
        u = q.popleft()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = 1
                count += 1
                q.append(v)
    return count == n


def graph_diameter(g: Graph) -> int:
    return shortest_paths(g).diameter


def density(g: Graph) -> float:
    """2|E| / (|V| (|V|-1)), the filled fraction of possible links."""
    n = g.node_count
    if n < 2:
        raise GraphError("density needs at least two nodes")
    return 2.0 * g.edge_count / (n * (n - 1))


def modularity(g: Graph, c: Clustering) -> float:
    """Newman's Q = sum_c (e_c/m - (deg_c/2m)^2) for the given partition."""
    if len(c.assignment) != g.node_count:
        raise GraphError("clustering does not cover the graph")
    m = g.edge_count
    if m == 0:
        return 0.0
    intra = [0] * c.cluster_count
    deg = [0] * c.cluster_count
    for u, v in g.edges:
        cu, cv = c.assignment[u], c.assignment[v]
        deg[cu] += 1
        deg[cv] += 1
        if cu == cv:
            intra[cu] += 1
    q = 0.0
    for k in range(c.cluster_count):
        q += intra[k] / m - (deg[k] / (2.0 * m)) ** 2
    return q


def per_cluster_modularity(g: Graph, c: Clustering) -> list[float]:
    """Size-normalised modularity of each individual cluster.

    For cluster c with internal edge count e_c and total member degree
    deg_c this is ``2 e_c / deg_c - deg_c / 2m``: the fraction of the
    cluster's link ends that stay internal minus the fraction expected
    by chance.  For balanced partitions it coincides with Q, which makes
    it comparable against the corpus modularity bands.
    """
    m = g.edge_count
    intra = [0] * c.cluster_count
    deg = [0] * c.cluster_count
    for u, v in g.edges:
        cu, cv = c.assignment[u], c.assignment[v]
        deg[cu] += 1
        deg[cv] += 1
        if cu == cv:
            intra[cu] += 1
    out = []
    for k in range(c.cluster_count):
        if deg[k] == 0:
            out.append(0.0)
        else:
            out.append(2.0 * intra[k] / deg[k] - deg[k] / (2.0 * m))
    return out


def graph_to_json(g: Graph, c: Optional[Clustering] = None) -> str:
    nodes = []
    for i in range(g.node_count):
        node: dict = {"id": i}
        if g.labels is not None:
            node["label"] = g.labels[i]
        if c is not None:
            node["cluster"] = c.assignment[i]
        nodes.append(node)
    links = [{"source": u, "target": v} for u, v in g.edges]
    return json.dumps({"nodes": nodes, "links": links}, indent=None, separators=(",", ":"))


def graph_from_json(text: str) -> tuple[Graph, Optional[Clustering]]:
    """Parse the interchange format; rejects disconnected graphs."""
    try:
        doc = json.loads(text)
        raw_nodes = doc["nodes"]
        raw_links = doc["links"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise GraphError(f"malformed graph JSON: {exc}") from exc

    ids = [n["id"] for n in raw_nodes]
    if sorted(ids) != list(range(len(ids))):
        raise GraphError("node ids must be 0..n-1")
    n = len(ids)
    labels = None
    if any("label" in nd for nd in raw_nodes):
        by_id = {nd["id"]: str(nd.get("label", nd["id"])) for nd in raw_nodes}
        labels = tuple(by_id[i] for i in range(n))
    edges = tuple((int(l["source"]), int(l["target"])) for l in raw_links)
    g = Graph(node_count=n, edges=edges, labels=labels)
    if not is_connected(g):
        raise DisconnectedGraph("input graph is not connected")

    clustering = None
    if all("cluster" in nd for nd in raw_nodes):
        by_id = {nd["id"]: int(nd["cluster"]) for nd in raw_nodes}
        assignment = tuple(by_id[i] for i in range(n))
        clustering = Clustering(assignment, max(assignment) + 1)
    return g, clustering


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def complete_bipartite_graph(a: int, b: int) -> Graph:
    return Graph(a + b, tuple((i, a + j) for i in range(a) for j in range(b)))


def star_graph(n: int) -> Graph:
    """Hub 0 plus n-1 leaves."""
    return Graph(n, tuple((0, i) for i in range(1, n)))
