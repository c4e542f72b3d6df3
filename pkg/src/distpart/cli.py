"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import csv
import io as _stdio
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import io
from .baselines import label_propagation, seeded_label_propagation
from .benchgen import BenchmarkConfig, generate_benchmark
from .datasets import available, load_builtin
from .graph import Graph, euclidean_edge_weights
from .metrics import modularity, nmi
from .partition import (
    UNASSIGNED,
    SeedSet,
    compute_distance_vectors,
    assign_communities,
    select_seeds_by_proximity,
    select_seeds_top_degree,
    singletons_for_unassigned,
)

log = logging.getLogger("distpart")

METHODS = ("dv", "lp", "lp-seeded")
# per-method random streams inside one sweep realization
_METHOD_STREAMS = {"lp": 10, "lp-seeded": 11}

SWEEP_COLUMNS = ["method", "realization", "rng_seed", "Q", "nmi"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _rng_seed(value: str) -> int:
    try:
        v = int(value, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {value!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("must be an unsigned 64-bit integer")
    return v


def _resolve_seed(seed: int | None) -> int:
    if seed is None:
        seed = int(np.random.SeedSequence().generate_state(1, np.uint64)[0])
        log.info("no --rng-seed given; using %d", seed)
    return seed


def derive_seed(base: int, *keys: int) -> int:
    return int(np.random.SeedSequence([int(base), *keys]).generate_state(1, np.uint64)[0])


def method_rng(seed: int, method: str) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(_METHOD_STREAMS[method],))
    return np.random.Generator(np.random.PCG64(ss))


# graph loading ---------------------------------------------------------------

def _load_graph(args) -> Graph:
    if args.dataset:
        return load_builtin(args.dataset).graph
    if not args.edges:
        raise UsageError("give --edges FILE or --dataset NAME")
    return io.read_graph(args.edges, args.coords)


def _metric_graph(g: Graph, metric: str | None) -> tuple[Graph, str]:
    """Pick the metric and, for spatial, make sure edges carry lengths."""
    if metric is None:
        metric = "spatial" if g.coordinates is not None else "topological"
    if metric == "spatial" and not g.weighted:
        if g.coordinates is None:
            raise ValueError("--metric spatial needs node coordinates (--coords) or edge weights")
        g = euclidean_edge_weights(g)
    return g, metric


def _parse_seeds(spec: str, g: Graph) -> SeedSet:
    kind, _, arg = spec.partition(":")
    if kind == "top-degree":
        try:
            k = int(arg)
        except ValueError:
            raise UsageError(f"bad seed count in {spec!r}") from None
        return select_seeds_top_degree(g, k)
    if kind == "file":
        return io.read_seeds(arg, g)
    if kind == "proximity":
        return select_seeds_by_proximity(g, io.read_points(arg))
    raise UsageError(f"--seeds must be top-degree:<k>, file:<path> or proximity:<path>, got {spec!r}")


def _scores(g: Graph, labels: np.ndarray) -> float | None:
    if g.edge_count == 0:
        return None
    return modularity(g, singletons_for_unassigned(labels))


# subcommands -----------------------------------------------------------------

def cmd_partition(args) -> int:
    g = _load_graph(args)
    mg, metric = _metric_graph(g, args.metric)
    seeds = None
    if args.method in ("dv", "lp-seeded"):
        if not args.seeds:
            raise UsageError(f"--method {args.method} needs --seeds")
        seeds = _parse_seeds(args.seeds, g)
    summary = {"method": args.method}
    if args.method == "dv":
        labels = assign_communities(mg, compute_distance_vectors(mg, seeds, metric))
        summary["metric"] = metric
    else:
        seed = _resolve_seed(args.rng_seed)
        rng = np.random.default_rng(seed)
        summary["rng_seed"] = seed
        if args.method == "lp":
            labels = label_propagation(g, rng, args.max_sweeps)
        else:
            labels = seeded_label_propagation(g, seeds, rng, args.max_sweeps)
    if seeds is not None:
        summary["seeds"] = [str(g.external_id(c)) for c in seeds.seeds]
    io.write_labels(g, labels, args.output)

    sizes = {}
    for lab in sorted(set(labels.tolist()) - {UNASSIGNED}):
        sizes[str(lab)] = int((labels == lab).sum())
    summary.update(
        node_count=g.node_count,
        community_count=len(sizes),
        community_sizes=sizes,
        unassigned=int((labels == UNASSIGNED).sum()),
        Q=_scores(g, labels),
    )
    print(io.dumps_json(summary))
    return 0


def write_benchmark(bench, outdir) -> None:
    outdir = io.ensure_dir(outdir)
    g = bench.graph
    io.write_edge_list(g, outdir / "graph.edges")
    io.write_coordinates(g, outdir / "graph.coords.csv")
    io.write_labels(g, bench.gold_labels, outdir / "gold.csv")
    io.write_means(bench.means, outdir / "means.csv")
    resolved = bench.config.to_dict()
    (outdir / "config.json").write_text(io.dumps_json(resolved) + "\n", encoding="utf-8")


def cmd_generate(args) -> int:
    cfg = BenchmarkConfig.from_json(args.config, args.rng_seed)
    bench = generate_benchmark(cfg)
    write_benchmark(bench, args.output_dir)
    print(io.dumps_json({
        "node_count": bench.graph.node_count,
        "edge_count": bench.graph.edge_count,
        "communities": len(bench.means),
        "dropped_nodes": len(bench.dropped_nodes),
        "rng_seed": cfg.rng_seed,
    }))
    return 0


def cmd_eval(args) -> int:
    g = _load_graph(args)
    a = io.align_labels(g, io.read_labels(args.labels), args.labels)
    out = {"Q": modularity(g, singletons_for_unassigned(a))}
    if args.reference:
        b = io.align_labels(g, io.read_labels(args.reference), args.reference)
        out["nmi"] = nmi(a, b)
    print(io.dumps_json(out))
    return 0


def _run_realization(cfg: BenchmarkConfig, methods, metric, max_sweeps, export_dir):
    """Score every in-repo method on one realization.

    Returns ``{method: (Q, nmi) or error message}`` plus the benchmark graph.
    """
    bench = generate_benchmark(cfg)
    g = bench.graph
    if export_dir is not None:
        write_benchmark(bench, export_dir)
    results = {}
    try:
        seeds = select_seeds_by_proximity(g, bench.means)
    except ValueError as exc:
        seeds = exc
    for method in methods:
        if method.startswith("external:"):
            continue
        try:
            if method in ("dv", "lp-seeded") and isinstance(seeds, Exception):
                raise seeds
            if method == "dv":
                mg, kind = _metric_graph(g, metric)
                labels = assign_communities(mg, compute_distance_vectors(mg, seeds, kind))
            elif method == "lp":
                labels = label_propagation(g, method_rng(cfg.rng_seed, "lp"), max_sweeps)
            else:
                labels = seeded_label_propagation(
                    g, seeds, method_rng(cfg.rng_seed, "lp-seeded"), max_sweeps)
            results[method] = (modularity(g, singletons_for_unassigned(labels)),
                               nmi(labels, bench.gold_labels))
        except ValueError as exc:
            results[method] = str(exc)
    return results, g, bench.gold_labels


def _score_external(directory: str, r: int, g: Graph, gold: np.ndarray):
    path = Path(directory) / f"{r}.csv"
    try:
        labels = io.align_labels(g, io.read_labels(path), path)
    except (OSError, ValueError) as exc:
        return str(exc)
    return (modularity(g, singletons_for_unassigned(labels)), nmi(labels, gold))


def cmd_sweep(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    if not methods:
        raise UsageError("--methods is empty")
    for m in methods:
        if m not in METHODS and not (m.startswith("external:") and len(m) > 9):
            raise UsageError(f"unknown method {m!r}; use {', '.join(METHODS)} or external:<dir>")
    if len(set(methods)) != len(methods):
        raise UsageError("--methods lists a method twice")
    if args.realizations < 1:
        raise UsageError("--realizations must be positive")
    base = BenchmarkConfig.from_json(args.config, args.rng_seed)
    configs = [replace(base, rng_seed=derive_seed(base.rng_seed, r))
               for r in range(args.realizations)]
    exports = [None if args.export_dir is None else Path(args.export_dir) / str(r)
               for r in range(args.realizations)]
    job_args = [(c, methods, args.metric, args.max_sweeps, e) for c, e in zip(configs, exports)]

    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            outcomes = list(pool.map(_run_realization, *zip(*job_args)))
    else:
        outcomes = [_run_realization(*a) for a in job_args]

    rows = []
    for r, (cfg, (results, g, gold)) in enumerate(zip(configs, outcomes)):
        for m in methods:
            res = _score_external(m[9:], r, g, gold) if m.startswith("external:") else results[m]
            if isinstance(res, str):
                log.warning("realization %d, method %s: %s", r, m, res)
                rows.append([m, r, cfg.rng_seed, "error", "error"])
            else:
                rows.append([m, r, cfg.rng_seed, io.fmt(res[0]), io.fmt(res[1])])

    for m in methods:
        ok = np.array([[float(x[3]), float(x[4])] for x in rows if x[0] == m and x[3] != "error"])
        if len(ok):
            mean, std = ok.mean(axis=0), ok.std(axis=0)
            rows.append([m, "mean", "", io.fmt(mean[0]), io.fmt(mean[1])])
            rows.append([m, "std", "", io.fmt(std[0]), io.fmt(std[1])])
        else:
            rows.append([m, "mean", "", "error", "error"])
            rows.append([m, "std", "", "error", "error"])

    buf = _stdio.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    w.writerows(rows)
    if args.output == "-":
        sys.stdout.write(buf.getvalue())
    else:
        Path(args.output).write_text(buf.getvalue(), encoding="utf-8")
    return 0


def cmd_dataset_export(args) -> int:
    ds = load_builtin(args.name)
    outdir = io.ensure_dir(args.output_dir)
    io.write_edge_list(ds.graph, outdir / f"{ds.name}.edges", header=ds.provenance)
    if ds.graph.coordinates is not None:
        io.write_coordinates(ds.graph, outdir / f"{ds.name}.coords.csv")
    if ds.ground_truth is not None:
        io.write_labels(ds.graph, ds.ground_truth, outdir / f"{ds.name}.labels.csv")
    return 0


# parser ----------------------------------------------------------------------

def _add_graph_args(p):
    p.add_argument("--edges", help="edge-list file")
    p.add_argument("--coords", help="coordinates CSV (id,x,y)")
    p.add_argument("--dataset", choices=available(), help="use a bundled dataset")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="distpart", description="Seed-based distance-vector community detection.")
    parser.add_argument("-q", "--quiet", action="store_true", help="only log warnings")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("partition", help="partition a graph and write a label file")
    _add_graph_args(p)
    p.add_argument("--seeds", help="top-degree:<k> | file:<path> | proximity:<path>")
    p.add_argument("--method", choices=METHODS, default="dv")
    p.add_argument("--metric", choices=("topological", "spatial"),
                   help="default: spatial when coordinates are given")
    p.add_argument("--output", "-o", required=True, help="label CSV to write")
    p.add_argument("--rng-seed", type=_rng_seed)
    p.add_argument("--max-sweeps", type=int, default=100)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("generate", help="generate a spatial benchmark")
    p.add_argument("--config", required=True, help="JSON benchmark config")
    p.add_argument("--output-dir", required=True)
    p.add_argument("--rng-seed", type=_rng_seed, help="overrides the config's rng_seed")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("eval", help="score a label file")
    _add_graph_args(p)
    p.add_argument("--labels", required=True, help="label CSV to score")
    p.add_argument("--reference", help="reference label CSV for NMI")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="score methods over benchmark realizations")
    p.add_argument("--config", required=True)
    p.add_argument("--methods", default="dv,lp,lp-seeded",
                   help="comma list of dv, lp, lp-seeded, external:<dir>")
    p.add_argument("--realizations", "-R", type=int, default=10)
    p.add_argument("--output", "-o", required=True, help="CSV path, or - for stdout")
    p.add_argument("--metric", choices=("topological", "spatial"), default=None)
    p.add_argument("--rng-seed", type=_rng_seed, help="overrides the config's rng_seed")
    p.add_argument("--max-sweeps", type=int, default=100)
    p.add_argument("--jobs", "-j", type=int, default=1, help="worker processes")
    p.add_argument("--export-dir", help="also write each realization to <dir>/<r>/")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("dataset", help="bundled datasets")
    dsub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    e = dsub.add_parser("export", help="write a dataset as edge list + labels")
    e.add_argument("name", choices=available())
    e.add_argument("--output-dir", required=True)
    e.set_defaults(func=cmd_dataset_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    if getattr(args, "max_sweeps", 1) < 1:
        parser.error("--max-sweeps must be positive")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"distpart: error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError, IndexError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"distpart: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
