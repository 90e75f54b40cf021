"""Experiment harness: timed runs, epsilon sweeps, scaling fits and CSV output."""
from __future__ import annotations

import csv
import logging
import time
import tracemalloc
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .diffusion import DiffusionParams, local_cluster
from .evaluation import score_detected_cluster
from .generators import GenSpec, generate, make_rng
from .graph import Graph, from_edges, largest_connected_component, load_graph
from .peel import ClusterResult, DegenerateSweepWarning
from .spectral import asc_sweep
from .structural import pcon_core, pcon_de

log = logging.getLogger(__name__)

GLOBAL_METHODS = ("pcon_core", "pcon_de", "asc_sweep")
DIFFUSION_METHODS = ("trw", "ppr", "hk")
METHODS = GLOBAL_METHODS + DIFFUSION_METHODS
CSV_HEADER = ["dataset", "method", "params", "seed", "time_s", "mem_bytes", "conductance", "size", "volume", "nmi"]
EPS_FACTORS = (10, 100, 1_000, 10_000, 100_000, 1_000_000)


@dataclass
class RunRecord:
    dataset: str
    method: str
    params: str
    seed: int
    wall_time_seconds: float
    peak_extra_memory_bytes: int
    conductance: float
    cluster_size: float
    cluster_volume: float
    nmi: float | None = None
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))


@dataclass
class LinearityReport:
    sizes: list
    times: list
    slope: float
    r2: float


def format_params(params: dict) -> str:
    return ",".join(f"{k}={v}" for k, v in params.items())


_warm = False


def warmup() -> None:
    """Run every kernel once on a toy graph so timings exclude JIT compilation."""
    global _warm
    if _warm:
        return
    g = from_edges([0, 0, 1, 2, 3, 3, 4], [1, 2, 2, 3, 4, 5, 5])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateSweepWarning)
        for method in METHODS:
            _run_method(g, method, DiffusionParams(eps=1e-3, alpha=0.1, t=1.0), [0], 0)
    _warm = True


def _run_method(g: Graph, method: str, params: DiffusionParams, seed_vertices, rng_seed: int):
    if method == "pcon_core":
        return [pcon_core(g)]
    if method == "pcon_de":
        return [pcon_de(g)]
    if method == "asc_sweep":
        return [asc_sweep(g, seed=rng_seed)]
    if method in DIFFUSION_METHODS:
        return [local_cluster(g, method, int(q), params) for q in seed_vertices]
    raise ValueError(f"unknown method {method!r}")


def method_params(g: Graph, method: str, params: DiffusionParams) -> dict:
    eps = params.resolved_eps(g)
    if method == "ppr":
        return {"alpha": params.alpha, "eps": eps}
    if method == "hk":
        return {"t": params.t, "eps": eps}
    if method == "trw":
        return {"eps": eps, "n_iters": params.n_iters}
    return {}


def measure(g: Graph, method: str, params: DiffusionParams = DiffusionParams(), seed_vertices=(0,),
            rng_seed: int = 0, memory: bool = True) -> tuple[list[ClusterResult], float, int]:
    """Results, mean wall time per cluster, and peak traced allocation of one cluster.

    The graph is built before tracing starts, so it is excluded from the
    memory figure. Memory covers allocations made from Python (all kernel
    work arrays are allocated there).
    """
    warmup()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateSweepWarning)
        start = time.perf_counter()
        results = _run_method(g, method, params, seed_vertices, rng_seed)
        elapsed = (time.perf_counter() - start) / max(1, len(results))
        peak = 0
        if memory:
            tracemalloc.start()
            try:
                _run_method(g, method, params, list(seed_vertices)[:1], rng_seed)
                _, peak = tracemalloc.get_traced_memory()
            finally:
                tracemalloc.stop()
    return results, elapsed, peak


def load_source(graph_path=None, gen: GenSpec | None = None, truth_path=None):
    """Graph (LCC), ground-truth labels or None, and a dataset name."""
    from .evaluation import read_communities

    if (graph_path is None) == (gen is None):
        raise ValueError("give exactly one of a graph path or a generator spec")
    if graph_path is not None:
        g, relabel = load_graph(graph_path)
        g, relabel = largest_connected_component(g, relabel)
        truth = read_communities(truth_path, relabel) if truth_path else None
        return g, truth, Path(graph_path).name
    g, truth = generate(gen)
    g, relabel = largest_connected_component(g)
    if truth is not None:
        truth = truth[relabel.original]
    if truth_path:
        truth = read_communities(truth_path, relabel)
    return g, truth, f"{gen}@{gen.seed}"


def run_on_graph(g: Graph, dataset: str, method: str, params: DiffusionParams = DiffusionParams(),
                 rng_seed: int = 0, n_seed_vertices: int = 50, truth=None, memory: bool = True) -> RunRecord:
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    if method in DIFFUSION_METHODS:
        k = min(n_seed_vertices, g.n)
        seed_vertices = np.sort(make_rng(rng_seed).choice(g.n, size=k, replace=False))
    else:
        seed_vertices = [0]
    results, elapsed, peak = measure(g, method, params, seed_vertices, rng_seed, memory)
    phi = float(np.mean([r.conductance_float for r in results]))
    score = None
    if truth is not None:
        score = float(np.mean([score_detected_cluster(r.members, truth) for r in results]))
    p = method_params(g, method, params)
    if method in DIFFUSION_METHODS:
        p["seed_vertices"] = len(seed_vertices)
    return RunRecord(dataset=dataset, method=method, params=format_params(p), seed=rng_seed,
                     wall_time_seconds=elapsed, peak_extra_memory_bytes=int(peak), conductance=phi,
                     cluster_size=float(np.mean([r.size for r in results])),
                     cluster_volume=float(np.mean([r.volume for r in results])), nmi=score)


def _cell(args):
    graph_path, gen, truth_path, method, params, rng_seed, n_seed_vertices = args
    if gen is not None:
        gen = GenSpec(gen.model, gen.n, gen.params, rng_seed)
    g, truth, name = load_source(graph_path, gen, truth_path)
    return run_on_graph(g, name, method, params, rng_seed, n_seed_vertices, truth)


def run(method: str, graph_path=None, gen: GenSpec | None = None, params: DiffusionParams = DiffusionParams(),
        rng_seeds=(0,), n_seed_vertices: int = 50, truth_path=None, workers: int = 1) -> list[RunRecord]:
    """One record per rng seed. For generated graphs the seed also drives generation."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    if n_seed_vertices < 1:
        raise ValueError("need at least one seed vertex")
    cells = [(graph_path, gen, truth_path, method, params, s, n_seed_vertices) for s in rng_seeds]
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_cell, cells))
    return [_cell(c) for c in cells]


def eps_sweep(g: Graph, dataset: str, method: str, factors=EPS_FACTORS, params: DiffusionParams = DiffusionParams(),
              rng_seed: int = 0, n_seed_vertices: int = 50, truth=None) -> list[RunRecord]:
    """One record per eps = factor / m, same seed vertices throughout."""
    if method not in DIFFUSION_METHODS:
        raise ValueError("eps sweeps apply to diffusion methods only")
    records = []
    for factor in factors:
        p = DiffusionParams(alpha=params.alpha, eps=factor / g.m, t=params.t, n_iters=params.n_iters)
        records.append(run_on_graph(g, dataset, method, p, rng_seed, n_seed_vertices, truth))
    return records


def fit_loglog(sizes, times) -> tuple[float, float]:
    x = np.log(np.asarray(sizes, dtype=float))
    y = np.log(np.asarray(times, dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - float((resid ** 2).sum()) / ss_tot if ss_tot > 0 else 0.0
    return float(slope), r2


def scaling_bench(model: str, sizes, method: str, avg_degree: float = 10.0, rng_seed: int = 0,
                  repeats: int = 3) -> tuple[list[RunRecord], LinearityReport]:
    """Time ``method`` on growing graphs and fit log(time) against log(m + n).

    Each size is timed ``repeats`` times and the minimum is kept.
    """
    sizes = [int(s) for s in sizes]
    if len(sizes) < 3:
        raise ValueError("scaling needs at least three sizes")
    if min(sizes) < 1000:
        raise ValueError("scaling sizes must be at least 1000 vertices")
    model = model.upper()
    records, work, times = [], [], []
    for n in sizes:
        if model == "ER":
            spec = GenSpec("ER", n, {"d": avg_degree}, rng_seed)
        elif model in ("BA", "PLC"):
            spec = GenSpec(model, n, {"k": max(1, int(round(avg_degree / 2)))}, rng_seed)
        elif model == "WS":
            spec = GenSpec("WS", n, {"k": 2 * max(1, int(round(avg_degree / 2))), "beta": 0.1}, rng_seed)
        else:
            raise ValueError(f"scaling not defined for model {model!r}")
        g, _, name = load_source(gen=spec)
        best = np.inf
        for _ in range(repeats):
            _, elapsed, _ = measure(g, method, rng_seed=rng_seed, memory=False)
            best = min(best, elapsed)
        _, _, peak = measure(g, method, rng_seed=rng_seed, memory=True)
        res = _run_method(g, method, DiffusionParams(), [0], rng_seed)[0] if method in GLOBAL_METHODS else None
        log.info("%s n=%d m=%d %.4fs", method, g.n, g.m, best)
        records.append(RunRecord(dataset=name, method=method, params="", seed=rng_seed, wall_time_seconds=best,
                                 peak_extra_memory_bytes=int(peak),
                                 conductance=res.conductance_float if res else float("nan"),
                                 cluster_size=res.size if res else 0, cluster_volume=res.volume if res else 0))
        work.append(g.n + g.m)
        times.append(best)
    slope, r2 = fit_loglog(work, times)
    return records, LinearityReport(sizes=work, times=times, slope=slope, r2=r2)


# ------------------------------------------------------------------- CSV

def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def emit_csv(records, path) -> None:
    """Write the stable CSV schema; ``path`` may also be an open text stream."""
    if hasattr(path, "write"):
        _write_rows(records, path)
        return
    with open(path, "w", newline="") as fh:
        _write_rows(records, fh)


def _write_rows(records, fh) -> None:
    writer = csv.writer(fh)
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow([r.dataset, r.method, r.params, r.seed, _fmt(r.wall_time_seconds),
                         r.peak_extra_memory_bytes, _fmt(r.conductance), _fmt(r.cluster_size),
                         _fmt(r.cluster_volume), _fmt(r.nmi)])


def read_csv(path) -> list[RunRecord]:
    out = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        for row in reader:
            out.append(RunRecord(dataset=row["dataset"], method=row["method"], params=row["params"],
                                 seed=int(row["seed"]), wall_time_seconds=float(row["time_s"]),
                                 peak_extra_memory_bytes=int(row["mem_bytes"]),
                                 conductance=float(row["conductance"]), cluster_size=float(row["size"]),
                                 cluster_volume=float(row["volume"]),
                                 nmi=float(row["nmi"]) if row["nmi"] else None, timestamp=""))
    return out
