"""Command line entry point: ``pcon run|sweep|scale|gen|oracle|nmi``."""
from __future__ import annotations

import argparse
import configparser
import logging
import sys

import numpy as np

from . import bench
from .diffusion import DEFAULT_ALPHA, DEFAULT_T, DEFAULT_WALK_STEPS, DiffusionParams
from .evaluation import brute_force_optimum, nmi, read_communities, score_detected_cluster, write_communities
from .generators import GenSpec, generate
from .graph import GraphFormatError, largest_connected_component, load_graph, write_edge_list

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_PARAMS = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _source_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group()
    src.add_argument("--graph", metavar="PATH", help="SNAP edge list or binary cache")
    src.add_argument("--gen", metavar="SPEC", help="generator spec, e.g. er:n=1000,p=0.01")
    p.add_argument("--truth", metavar="PATH", help="ground-truth community file")


def _diffusion_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--eps", type=float, default=None, help="default 1/m")
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--iters", type=int, default=None, help="truncated-walk steps")
    p.add_argument("--seeds", type=int, default=None, help="seed vertices per diffusion run (default 50)")
    p.add_argument("--rng-seed", type=int, default=None)
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--workers", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pcon", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one method on a graph")
    _source_args(p)
    p.add_argument("--method", required=True, choices=bench.METHODS)
    p.add_argument("--repeat", type=int, default=1, help="number of consecutive rng seeds")
    _diffusion_args(p)

    p = sub.add_parser("sweep", help="eps sweep {10/m .. 10^6/m} for a diffusion")
    _source_args(p)
    p.add_argument("--method", choices=bench.DIFFUSION_METHODS)
    p.add_argument("--factors", help="comma-separated eps multipliers of 1/m")
    p.add_argument("--config", metavar="PATH", help="INI-style [sweep] section; flags override it")
    _diffusion_args(p)

    p = sub.add_parser("scale", help="log-log runtime scaling fit")
    p.add_argument("--model", default="er")
    p.add_argument("--sizes", required=True, help="comma-separated vertex counts")
    p.add_argument("--method", required=True, choices=bench.GLOBAL_METHODS)
    p.add_argument("--degree", type=float, default=10.0)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("gen", help="write a synthetic graph as an edge list")
    p.add_argument("--gen", required=True, metavar="SPEC")
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--out", required=True, metavar="PATH")
    p.add_argument("--truth-out", metavar="PATH", help="community file (planted model only)")
    p.add_argument("--lcc", action="store_true", help="keep only the largest component")

    p = sub.add_parser("oracle", help="exhaustive minimum conductance (n <= 20)")
    p.add_argument("--graph", required=True, metavar="PATH")

    p = sub.add_parser("nmi", help="NMI between two partitions, or of a cluster against ground truth")
    p.add_argument("--graph", metavar="PATH", help="graph defining the vertex set")
    p.add_argument("--a", required=True, metavar="PATH", help="partition file, or cluster id list with --cluster")
    p.add_argument("--b", required=True, metavar="PATH", help="partition / ground-truth file")
    p.add_argument("--cluster", action="store_true", help="treat --a as a single detected cluster")
    return parser


def _load_config(path) -> dict:
    cfg = configparser.ConfigParser()
    if not cfg.read(path):
        raise OSError(f"cannot read config {path}")
    return dict(cfg["sweep"]) if cfg.has_section("sweep") else {}


def _params(args, cfg=None) -> DiffusionParams:
    cfg = cfg or {}

    def pick(name, default, cast):
        value = getattr(args, name, None)
        if value is None and name in cfg:
            value = cast(cfg[name])
        return default if value is None else value

    return DiffusionParams(alpha=pick("alpha", DEFAULT_ALPHA, float), eps=pick("eps", None, float),
                           t=pick("t", DEFAULT_T, float), n_iters=pick("iters", DEFAULT_WALK_STEPS, int))


def _gen_spec(args, seed):
    return GenSpec.parse(args.gen, seed=seed) if args.gen else None


def _print_records(records, out):
    bench.emit_csv(records, out if out else sys.stdout)


def cmd_run(args) -> int:
    if not (args.graph or args.gen):
        raise UsageError("run needs --graph or --gen")
    base = args.rng_seed or 0
    gen = _gen_spec(args, base)
    records = bench.run(args.method, graph_path=args.graph, gen=gen, params=_params(args),
                        rng_seeds=range(base, base + args.repeat), n_seed_vertices=args.seeds or 50,
                        truth_path=args.truth, workers=args.workers or 1)
    _print_records(records, args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _load_config(args.config) if args.config else {}
    method = args.method or cfg.get("method")
    if method not in bench.DIFFUSION_METHODS:
        raise UsageError("sweep needs --method ppr, hk or trw")
    graph = args.graph or cfg.get("graph")
    gen_text = args.gen or cfg.get("gen")
    if not (graph or gen_text):
        raise UsageError("sweep needs --graph or --gen")
    seed = args.rng_seed if args.rng_seed is not None else int(cfg.get("rng_seed", 0))
    factors_text = args.factors or cfg.get("factors")
    factors = [float(f) for f in factors_text.split(",")] if factors_text else bench.EPS_FACTORS
    gen = GenSpec.parse(gen_text, seed=seed) if gen_text and not graph else None
    g, truth, name = bench.load_source(graph if not gen else None, gen, args.truth or cfg.get("truth"))
    seeds = args.seeds or int(cfg.get("seeds", 50))
    records = bench.eps_sweep(g, name, method, factors, _params(args, cfg), seed, seeds, truth)
    _print_records(records, args.out or cfg.get("out"))
    return EXIT_OK


def cmd_scale(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",")]
    records, report = bench.scaling_bench(args.model, sizes, args.method, args.degree, args.rng_seed, args.repeats)
    if args.out:
        bench.emit_csv(records, args.out)
    for size, t in zip(report.sizes, report.times):
        print(f"m+n={size}\ttime_s={t:.6g}")
    print(f"slope={report.slope:.4f}\tr2={report.r2:.4f}")
    return EXIT_OK


def cmd_gen(args) -> int:
    spec = GenSpec.parse(args.gen, seed=args.rng_seed)
    g, truth = generate(spec)
    relabel = None
    if args.lcc:
        g, relabel = largest_connected_component(g)
        if truth is not None:
            truth = truth[relabel.original]
    with open(args.out, "w") as fh:
        fh.write(f"# {spec} seed={spec.seed} n={g.n} m={g.m}\n")
        write_edge_list(g, fh, relabel)
    if args.truth_out:
        if truth is None:
            raise ValueError("only the planted model has ground truth")
        write_communities(args.truth_out, truth, relabel)
    print(f"wrote n={g.n} m={g.m} to {args.out}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    g, relabel = load_graph(args.graph)
    res = brute_force_optimum(g)
    print(f"phi*={res.phi_star}\t({float(res.phi_star):.17g})")
    print("S*=" + " ".join(str(relabel.to_original(u)) for u in res.best_set))
    print(f"g_max={res.g_best}\tS~=" + " ".join(str(relabel.to_original(u)) for u in res.g_set))
    return EXIT_OK


def cmd_nmi(args) -> int:
    relabel = None
    if args.graph:
        g, relabel = load_graph(args.graph)
    b = read_communities(args.b, relabel)
    if args.cluster:
        with open(args.a) as fh:
            ids = [int(tok) for line in fh if not line.startswith("#") for tok in line.split()]
        members = [relabel.to_dense(v) for v in ids] if relabel else ids
        score = score_detected_cluster(np.asarray(members), b)
    else:
        a = read_communities(args.a, relabel, n=len(b))
        keep = (a >= 0) & (b >= 0)
        score = nmi(a[keep], b[keep])
    print(f"{score:.17g}")
    return EXIT_OK


COMMANDS = {"run": cmd_run, "sweep": cmd_sweep, "scale": cmd_scale, "gen": cmd_gen,
            "oracle": cmd_oracle, "nmi": cmd_nmi}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"pcon: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, GraphFormatError) as exc:
        print(f"pcon: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"pcon: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_PARAMS


if __name__ == "__main__":
    sys.exit(main())
