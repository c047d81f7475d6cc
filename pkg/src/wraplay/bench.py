"""Benchmark harness: lay out every corpus graph with every requested
algorithm and seed, collect metric rows and per-class means.

Rows are sorted before writing so reruns are byte-identical; job
failures become rows with an error column instead of aborting the run.
"""

from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .graphs import graph_from_json, shortest_paths
from .layout import (
    FlatLayout,
    LayoutParams,
    SphereLayout,
    TorusLayout,
    _centre_jitter_init,
    _sphere_init,
    ideal_unit,
    layout_flat,
    layout_flat_allpairs,
    layout_sphere,
    layout_torus_allpairs,
    layout_torus_pairwise,
)
from .metrics import MetricsReport, compute_report, stress

ALGOS = {
    "pairwise-torus": layout_torus_pairwise,
    "pairwise-flat": layout_flat,
    "allpairs-torus": layout_torus_allpairs,
    "allpairs-flat": layout_flat_allpairs,
    "pairwise-sphere": layout_sphere,
}

CSV_FIELDS = (
    "graph", "algo", "seed", "converged", "iterations", "descended",
) + MetricsReport.CSV_FIELDS + ("error",)


@dataclass
class BenchRow:
    graph: str
    algo: str
    seed: int
    converged: Optional[bool] = None
    iterations: Optional[int] = None
    descended: Optional[bool] = None
    report: Optional[MetricsReport] = None
    error: str = ""

    def csv_values(self) -> list:
        head = [
            self.graph, self.algo, self.seed,
            "" if self.converged is None else int(self.converged),
            "" if self.iterations is None else self.iterations,
            "" if self.descended is None else int(self.descended),
        ]
        body = self.report.csv_values() if self.report else [""] * len(MetricsReport.CSV_FIELDS)
        return head + body + [self.error]


def _initial_stress(algo: str, g, dm, p: LayoutParams) -> float:
    if algo == "pairwise-sphere":
        init = SphereLayout(_sphere_init(g.node_count, p), np.pi / dm.diameter)
    elif algo.endswith("torus"):
        init = TorusLayout(_centre_jitter_init(g.node_count, p), p.cell_size,
                           ideal_unit(dm, p))
    else:
        init = FlatLayout(_centre_jitter_init(g.node_count, p), ideal_unit(dm, p))
    return stress(init, dm)


def _run_job(job) -> BenchRow:
    path, algo, seed, params_kwargs = job
    name = Path(path).name
    try:
        g, clustering = graph_from_json(Path(path).read_text())
        dm = shortest_paths(g)
        p = LayoutParams(seed=seed, **params_kwargs)
        layout = ALGOS[algo](g, dm, p)
        report = compute_report(layout, g, dm, clustering)
        # never let a non-descending run pass silently
        descended = bool(report.stress <= _initial_stress(algo, g, dm, p))
        return BenchRow(name, algo, seed, layout.converged, layout.iterations,
                        descended, report)
    except Exception as exc:  # recorded per row, run continues
        return BenchRow(name, algo, seed, error=f"{type(exc).__name__}: {exc}")


def worker_count() -> int:
    cap = os.environ.get("WRAPLAY_THREADS")
    if cap is not None:
        return max(1, int(cap))
    return 1


def run_bench(corpus_dir, seeds, algos, params_kwargs=None, workers=None):
    """Returns (rows, summary, wall_clock_s)."""
    params_kwargs = params_kwargs or {}
    for algo in algos:
        if algo not in ALGOS:
            raise ValueError(f"unknown algorithm {algo!r}")
    paths = sorted(
        str(p) for p in Path(corpus_dir).glob("*.json")
        if p.name != "manifest.json" and not p.name.endswith(".manifest.json")
    )
    if not paths:
        raise FileNotFoundError(f"no graph files in {corpus_dir}")
    jobs = [
        (path, algo, seed, params_kwargs)
        for path in paths for algo in algos for seed in seeds
    ]
    t0 = time.perf_counter()
    n_workers = worker_count() if workers is None else workers
    if n_workers > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            rows = list(pool.map(_run_job, jobs))
    else:
        rows = [_run_job(j) for j in jobs]
    wall = time.perf_counter() - t0
    rows.sort(key=lambda r: (r.graph, r.algo, r.seed))
    return rows, summarise(rows), wall


def _class_of(graph_name: str) -> str:
    stem = graph_name.rsplit(".", 1)[0]
    return stem.rsplit("-", 1)[0]


def summarise(rows: list[BenchRow]) -> dict:
    """Per (graph class, algo) means of every numeric metric."""
    groups: dict = {}
    for row in rows:
        if row.report is None:
            continue
        key = (_class_of(row.graph), row.algo)
        groups.setdefault(key, []).append(row)
    summary = {}
    for (cls, algo), members in sorted(groups.items()):
        entry = {"runs": len(members),
                 "converged": sum(bool(r.converged) for r in members),
                 "descended": sum(bool(r.descended) for r in members)}
        for metric in ("stress", "crossings", "link_length_variance",
                       "angle_deviation", "cluster_distance"):
            vals = [getattr(r.report, metric) for r in members
                    if getattr(r.report, metric) is not None]
            if vals:
                entry[f"mean_{metric}"] = sum(vals) / len(vals)
        summary.setdefault(cls, {})[algo] = entry
    return summary


def rows_to_csv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for row in rows:
        writer.writerow(row.csv_values())
    return buf.getvalue()


def summary_to_json(summary: dict) -> str:
    return json.dumps(summary, indent=2, sort_keys=True)
