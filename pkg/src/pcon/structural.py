"""Degeneracy-ordering and degree-ratio peeling."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graph import Graph
from .peel import MAX_G, MIN_CONDUCTANCE, ClusterResult, ScoreOrdering, peel_sweep


@dataclass(frozen=True)
class DegeneracyOrdering:
    order: np.ndarray          # u_1 .. u_n
    core_numbers: np.ndarray   # indexed by vertex id
    removal_degree: np.ndarray  # residual degree of order[i] when removed


def _min_ratio_peel(g: Graph, weights: np.ndarray):
    n = g.n
    cap = n + g.m + 1
    heap_num = np.empty(cap, dtype=np.int64)
    heap_den = np.empty(cap, dtype=np.int64)
    heap_vtx = np.empty(cap, dtype=np.int64)
    live = np.empty(n, dtype=np.int64)
    alive = np.empty(n, dtype=np.bool_)
    order = np.empty(n, dtype=np.int64)
    level = np.empty(n, dtype=np.int64)
    pops = _kernels.ratio_peel_kernel(g.indptr, g.indices, weights, live, alive,
                                      heap_num, heap_den, heap_vtx, order, level)
    return order, level, pops


def degeneracy_ordering(g: Graph) -> DegeneracyOrdering:
    """Repeated min-degree removal.

    Among vertices of equal residual degree the one that reached that degree
    first is removed first; the initial buckets are in id order. So the path
    0-1-2 gives (0, 2, 1).
    """
    n = g.n
    buckets = int(g.degrees.max()) + 1 if n else 1
    live = np.empty(n, dtype=np.int64)
    head = np.empty(buckets, dtype=np.int64)
    tail = np.empty(buckets, dtype=np.int64)
    nxt = np.empty(n, dtype=np.int64)
    prv = np.empty(n, dtype=np.int64)
    order = np.empty(n, dtype=np.int64)
    level = np.empty(n, dtype=np.int64)
    _kernels.degeneracy_kernel(g.indptr, g.indices, live, head, tail, nxt, prv, order, level)
    core = np.empty(n, dtype=np.int64)
    core[order] = np.maximum.accumulate(level) if g.n else level
    return DegeneracyOrdering(order=order, core_numbers=core, removal_degree=level)


def degree_ratio_ordering(g: Graph) -> ScoreOrdering:
    """Greedy removal order by smallest d_S(u) / d(u), ties to the smaller id."""
    weights = np.maximum(g.degrees, 1)
    order, _, _ = _min_ratio_peel(g, weights)
    return ScoreOrdering(order, method="pcon_de")


def pcon_core(g: Graph) -> ClusterResult:
    """Sweep the degeneracy ordering from its tail end."""
    dego = degeneracy_ordering(g)
    removal = ScoreOrdering(dego.order[::-1].copy(), method="pcon_core")
    return peel_sweep(g, removal, MIN_CONDUCTANCE)


def pcon_de(g: Graph) -> ClusterResult:
    """Min-degree-ratio peeling keeping the max-g state with vol <= m.

    Conductance of the result is at most 1/2 + phi*/2.
    """
    return peel_sweep(g, degree_ratio_ordering(g), MAX_G)
