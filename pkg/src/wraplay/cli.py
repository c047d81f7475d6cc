"""Command line interface.

Subcommands: corpus, layout, autopan, metrics, render, bench.  Every
artifact-producing invocation writes a manifest (inputs/outputs with
sha256 digests, parameters, per-stage wall clock) next to its outputs.

Exit codes: 0 success, 2 invalid specification or malformed input,
3 disconnected graph.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from . import __version__
from .autopan import (
    apply_pan,
    autopan_torus,
    autorotate_boundary_pixels,
    autorotate_orthographic,
)
from .bench import ALGOS as BENCH_ALGOS
from .bench import run_bench, rows_to_csv, summary_to_json
from .corpus import (
    CorpusSpec,
    GenerationExhausted,
    LEGACY_CLASSES,
    LEGACY_MODELS,
    SIZE_CLASSES,
    generate_legacy_graph,
    generate_partition_graph,
)
from .graphs import DisconnectedGraph, GraphError, graph_from_json, graph_to_json, shortest_paths
from .layout import (
    LayoutParams,
    LayoutFormatError,
    SphereLayout,
    TorusLayout,
    layout_from_json,
    layout_to_json,
)
from .metrics import MetricsReport, TopologyMismatch, compute_report
from .projections import EQUAL_EARTH, ORTHOGRAPHIC
from .render import ProjectionKind, RenderSpec, rasterize_edges_mask, render

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_DISCONNECTED = 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_BAD_INPUT):
        super().__init__(message)
        self.code = code


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_manifest(out_dir: Path, name: str, argv, seeds, params,
                    inputs, outputs, stages):
    manifest = {
        "tool": f"wraplay {__version__}",
        "command": list(argv),
        "seeds": seeds,
        "params": params,
        "inputs": [{"path": str(p), "sha256": _sha256(Path(p))} for p in inputs],
        "outputs": [{"path": str(p), "sha256": _sha256(Path(p))} for p in outputs],
        "wall_clock_s": stages,
    }
    path = out_dir / name
    path.write_text(json.dumps(manifest, indent=2) + "\n")
    return path


def _load_graph(path: str):
    p = Path(path)
    if not p.exists():
        raise CliError(f"no such file: {path}")
    try:
        return graph_from_json(p.read_text())
    except DisconnectedGraph as exc:
        raise CliError(str(exc), EXIT_DISCONNECTED) from exc
    except GraphError as exc:
        raise CliError(str(exc)) from exc


def _load_layout(path: str):
    p = Path(path)
    if not p.exists():
        raise CliError(f"no such file: {path}")
    try:
        return layout_from_json(p.read_text())
    except LayoutFormatError as exc:
        raise CliError(str(exc)) from exc


def _layout_params(args) -> LayoutParams:
    try:
        return LayoutParams(
            cell_size=args.cell_size, tau=args.tau,
            epsilon_exp=args.epsilon, epsilon_conv=args.epsilon_conv,
            delta_stop=args.delta, tau_max=args.tau_max, seed=args.seed,
        )
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _add_layout_param_flags(sub):
    sub.add_argument("--cell-size", type=float, default=1.0)
    sub.add_argument("--tau", type=int, default=80)
    sub.add_argument("--epsilon", type=float, default=0.1,
                     help="exponential-phase cap (default 0.1)")
    sub.add_argument("--epsilon-conv", type=float, default=0.001,
                     help="1/t-phase cap (default 0.001)")
    sub.add_argument("--delta", type=float, default=0.03,
                     help="movement threshold for convergence (default 0.03)")
    sub.add_argument("--tau-max", type=int, default=200)
    sub.add_argument("--seed", type=int, default=0)


# --- subcommands ---------------------------------------------------------------


def cmd_corpus(args, argv) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    outputs = []
    try:
        for idx in range(args.count):
            seed = args.seed + idx
            if args.size_class in SIZE_CLASSES:
                if args.modularity is None:
                    raise CliError("--modularity is required for partition classes")
                spec = CorpusSpec(args.size_class, args.modularity, seed=seed,
                                  max_attempts=args.max_attempts)
                g, c = generate_partition_graph(spec)
                name = f"{args.size_class}-q{args.modularity:.2f}-{idx:03d}.json"
                text = graph_to_json(g, c)
            else:
                g = generate_legacy_graph(args.size_class, args.model, seed=seed,
                                          max_attempts=args.max_attempts)
                name = f"{args.size_class}-{args.model}-{idx:03d}.json"
                text = graph_to_json(g)
            path = out_dir / name
            path.write_text(text + "\n")
            outputs.append(path)
    except (ValueError, GenerationExhausted) as exc:
        raise CliError(str(exc)) from exc
    _write_manifest(
        out_dir, "manifest.json", argv,
        seeds=list(range(args.seed, args.seed + args.count)),
        params={"class": args.size_class, "modularity": args.modularity,
                "model": args.model, "count": args.count},
        inputs=[], outputs=outputs,
        stages={"generate": time.perf_counter() - t0},
    )
    print(f"wrote {len(outputs)} graph(s) to {out_dir}")
    return EXIT_OK


_LAYOUT_FUNCS = {
    ("torus", "pairwise"): "pairwise-torus",
    ("torus", "allpairs"): "allpairs-torus",
    ("flat", "pairwise"): "pairwise-flat",
    ("flat", "allpairs"): "allpairs-flat",
    ("sphere", "pairwise"): "pairwise-sphere",
}


def cmd_layout(args, argv) -> int:
    g, _ = _load_graph(args.graph)
    params = _layout_params(args)
    key = (args.topology, args.algo)
    if key not in _LAYOUT_FUNCS:
        raise CliError(f"unsupported combination: {args.topology}/{args.algo}")
    t0 = time.perf_counter()
    dm = shortest_paths(g)
    layout = BENCH_ALGOS[_LAYOUT_FUNCS[key]](g, dm, params)
    wall = time.perf_counter() - t0
    out = Path(args.out)
    out.write_text(layout_to_json(layout) + "\n")
    _write_manifest(
        out.parent, out.name + ".manifest.json", argv,
        seeds=[args.seed],
        params={"topology": args.topology, "algo": args.algo,
                "cell_size": args.cell_size, "tau": args.tau,
                "epsilon": args.epsilon, "epsilon_conv": args.epsilon_conv,
                "delta": args.delta, "tau_max": args.tau_max},
        inputs=[args.graph], outputs=[out],
        stages={"layout": wall},
    )
    if not layout.converged:
        print(f"warning: did not converge within {args.tau_max} iterations",
              file=sys.stderr)
    print(f"wrote {out}")
    return EXIT_OK


def cmd_autopan(args, argv) -> int:
    layout = _load_layout(args.layout)
    g, _ = _load_graph(args.graph)
    t0 = time.perf_counter()
    if isinstance(layout, TorusLayout):
        pan = autopan_torus(layout, g)
        layout = apply_pan(layout, pan)
        record = {"pan": [pan.dx, pan.dy]}
    elif isinstance(layout, SphereLayout):
        if args.method == "boundary":
            rot = autorotate_boundary_pixels(
                layout, g, trials=args.trials, seed=args.seed,
                wh=(args.width, args.height), border_band=args.band,
            )
        else:
            rot = autorotate_orthographic(layout, g, trials=args.trials,
                                          seed=args.seed)
        layout.view_rotation = rot.as_tuple()
        record = {"rotate": list(rot.as_tuple())}
    else:
        raise CliError("autopan applies to torus or sphere layouts")
    wall = time.perf_counter() - t0
    out = Path(args.out)
    out.write_text(layout_to_json(layout) + "\n")
    _write_manifest(
        out.parent, out.name + ".manifest.json", argv,
        seeds=[args.seed], params={"method": args.method, "trials": args.trials,
                                   "view": record},
        inputs=[args.layout, args.graph], outputs=[out],
        stages={"autopan": wall},
    )
    print(f"wrote {out}")
    return EXIT_OK


def cmd_metrics(args, argv) -> int:
    layout = _load_layout(args.layout)
    g, clustering = _load_graph(args.graph)
    dm = shortest_paths(g)
    try:
        report = compute_report(layout, g, dm, clustering)
    except (TopologyMismatch, ValueError) as exc:
        raise CliError(str(exc)) from exc
    text = report.to_json()
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    if args.csv:
        csv_path = Path(args.csv)
        row = ",".join(
            [Path(args.graph).name, Path(args.layout).name]
            + [str(v) for v in report.csv_values()]
        )
        header = "graph,layout," + ",".join(MetricsReport.CSV_FIELDS)
        if csv_path.exists():
            csv_path.write_text(csv_path.read_text() + row + "\n")
        else:
            csv_path.write_text(header + "\n" + row + "\n")
    return EXIT_OK


def cmd_render(args, argv) -> int:
    layout = _load_layout(args.layout)
    g, clustering = _load_graph(args.graph)
    if (args.width is None) != (args.height is None):
        raise CliError("--width and --height must be given together")
    try:
        spec = RenderSpec(
            mode=args.mode, projection=args.projection,
            viewport=(args.width, args.height) if args.width else None,
            boundary_labels=not args.no_boundary_labels,
            node_radius=args.node_radius, stroke=args.stroke,
        )
        svg = render(layout, g, spec,
                     clustering if args.color_clusters else None)
    except (ValueError, TopologyMismatch) as exc:
        raise CliError(str(exc)) from exc
    t0 = time.perf_counter()
    out = Path(args.out)
    out.write_text(svg + "\n")
    outputs = [out]
    if args.mask_out:
        if not isinstance(layout, SphereLayout):
            raise CliError("--mask-out needs a sphere layout")
        kind = ProjectionKind(args.projection or EQUAL_EARTH, layout.view_rotation)
        w, h = spec.resolved_viewport()
        mask = rasterize_edges_mask(layout, g, kind, (w, h), args.band)
        Path(args.mask_out).write_bytes(mask.to_pbm())
        outputs.append(Path(args.mask_out))
    _write_manifest(
        out.parent, out.name + ".manifest.json", argv,
        seeds=[], params={"mode": args.mode, "projection": args.projection},
        inputs=[args.layout, args.graph], outputs=outputs,
        stages={"render": time.perf_counter() - t0},
    )
    print(f"wrote {out}")
    return EXIT_OK


def cmd_bench(args, argv) -> int:
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    for a in algos:
        if a not in BENCH_ALGOS:
            raise CliError(f"unknown algorithm {a!r}; known: {sorted(BENCH_ALGOS)}")
    seeds = list(range(args.seed, args.seed + args.seeds))
    try:
        rows, summary, wall = run_bench(args.corpus, seeds, algos,
                                        params_kwargs={}, workers=args.workers)
    except (FileNotFoundError, ValueError) as exc:
        raise CliError(str(exc)) from exc
    out_csv = Path(args.out_csv)
    out_csv.write_text(rows_to_csv(rows))
    outputs = [out_csv]
    if args.summary:
        Path(args.summary).write_text(summary_to_json(summary) + "\n")
        outputs.append(Path(args.summary))
    _write_manifest(
        out_csv.parent, out_csv.name + ".manifest.json", argv,
        seeds=seeds, params={"algos": algos, "corpus": str(args.corpus)},
        inputs=sorted(
            str(p) for p in Path(args.corpus).glob("*.json")
            if p.name != "manifest.json" and not p.name.endswith(".manifest.json")
        ),
        outputs=outputs,
        stages={"bench": wall},
    )
    failures = sum(1 for r in rows if r.error)
    print(f"wrote {len(rows)} rows to {out_csv}"
          + (f" ({failures} failed)" if failures else ""))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wraplay",
        description="Graph layout on plane, torus and sphere: corpus "
                    "generation, layout, auto-panning, metrics, rendering "
                    "and benchmarking.",
    )
    parser.add_argument("--version", action="version",
                        version=f"wraplay {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    c = subs.add_parser("corpus", help="generate benchmark graphs")
    c.add_argument("--class", dest="size_class", required=True,
                   choices=sorted(SIZE_CLASSES) + sorted(LEGACY_CLASSES))
    c.add_argument("--modularity", type=float, default=None)
    c.add_argument("--model", choices=LEGACY_MODELS, default="smallworld")
    c.add_argument("--count", type=int, default=1)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--max-attempts", type=int, default=200)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_corpus)

    l = subs.add_parser("layout", help="compute a layout")
    l.add_argument("graph")
    l.add_argument("--topology", required=True, choices=("torus", "flat", "sphere"))
    l.add_argument("--algo", default="pairwise", choices=("pairwise", "allpairs"))
    _add_layout_param_flags(l)
    l.add_argument("--out", required=True)
    l.set_defaults(func=cmd_layout)

    a = subs.add_parser("autopan", help="minimise boundary splits")
    a.add_argument("layout")
    a.add_argument("--graph", required=True)
    a.add_argument("--method", choices=("sweep", "split", "boundary"),
                   default="split",
                   help="torus always sweeps; sphere: split hemisphere "
                        "count or boundary pixel penalty")
    a.add_argument("--trials", type=int, default=1000)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--width", type=int, default=900)
    a.add_argument("--height", type=int, default=317)
    a.add_argument("--band", type=int, default=6)
    a.add_argument("--out", required=True)
    a.set_defaults(func=cmd_autopan)

    m = subs.add_parser("metrics", help="quality metrics for a layout")
    m.add_argument("layout")
    m.add_argument("--graph", required=True)
    m.add_argument("--out", default=None)
    m.add_argument("--csv", default=None, help="append a CSV row here")
    m.set_defaults(func=cmd_metrics)

    r = subs.add_parser("render", help="render a layout to SVG")
    r.add_argument("layout")
    r.add_argument("--graph", required=True)
    r.add_argument("--mode", required=True,
                   choices=("flat", "torus-nocontext", "torus-partial",
                            "torus-full", "sphere"))
    r.add_argument("--projection", choices=(EQUAL_EARTH, ORTHOGRAPHIC),
                   default=None)
    r.add_argument("--width", type=int, default=None)
    r.add_argument("--height", type=int, default=None)
    r.add_argument("--node-radius", type=float, default=4.0)
    r.add_argument("--stroke", type=float, default=1.0)
    r.add_argument("--no-boundary-labels", action="store_true")
    r.add_argument("--color-clusters", action="store_true")
    r.add_argument("--mask-out", default=None, help="also write a PBM edge mask")
    r.add_argument("--band", type=int, default=6)
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_render)

    b = subs.add_parser("bench", help="benchmark algorithms over a corpus")
    b.add_argument("--corpus", required=True)
    b.add_argument("--seeds", type=int, default=20,
                   help="number of seeds per graph (default 20)")
    b.add_argument("--seed", type=int, default=1, help="first seed")
    b.add_argument("--algos", default="pairwise-torus,pairwise-flat")
    b.add_argument("--workers", type=int, default=None,
                   help="defaults to WRAPLAY_THREADS or 1")
    b.add_argument("--out-csv", required=True)
    b.add_argument("--summary", default=None)
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, ["wraplay"] + argv)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
