"""Conductance, the peeling sweep, and the result types shared by all methods."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .graph import Graph, induced_degree

MIN_CONDUCTANCE = "min_conductance"
MAX_G = "max_g"


class DegenerateSweepWarning(UserWarning):
    """No sweep state with vol <= m improved on phi = 1."""


def _as_members(g: Graph, s) -> np.ndarray:
    members = np.unique(np.asarray(list(s) if isinstance(s, (set, frozenset)) else s, dtype=np.int64))
    if len(members) == 0:
        raise ValueError("vertex set must be nonempty")
    if members[0] < 0 or members[-1] >= g.n:
        raise ValueError("vertex id out of range")
    return members


def cut_and_volume(g: Graph, s) -> tuple[int, int]:
    members = _as_members(g, s)
    mask = np.zeros(g.n, dtype=bool)
    mask[members] = True
    vol = int(g.degrees[members].sum())
    src = np.repeat(np.arange(g.n), g.degrees)
    internal = int(np.count_nonzero(mask[src] & mask[g.indices]))
    return vol - internal, vol


def conductance(g: Graph, s) -> Fraction:
    """|E(S, V-S)| / min(vol S, 2m - vol S), with phi(V) = 1."""
    cut, vol = cut_and_volume(g, s)
    den = min(vol, g.total_volume - vol)
    if den == 0:
        if vol == g.total_volume:
            return Fraction(1)
        raise ValueError("conductance undefined for a zero-volume set")
    return Fraction(cut, den)


def g_value(g: Graph, s) -> Fraction:
    """Internal degree sum over twice the volume."""
    cut, vol = cut_and_volume(g, s)
    if vol == 0:
        raise ValueError("g undefined for a zero-volume set")
    return Fraction(vol - cut, 2 * vol)


@dataclass(frozen=True)
class ScoreOrdering:
    """Removal order: ``order[0]`` is peeled first."""

    order: np.ndarray
    method: str = ""

    def __post_init__(self):
        order = np.asarray(self.order, dtype=np.int64)
        object.__setattr__(self, "order", order)

    def validate(self, n: int) -> None:
        if len(self.order) != n or np.any(np.bincount(self.order, minlength=n) != 1):
            raise ValueError("ordering is not a permutation of the vertex set")


@dataclass
class ClusterResult:
    members: np.ndarray
    cut: int
    volume: int
    denominator: int
    method: str = ""
    params: dict = field(default_factory=dict)
    degenerate: bool = False
    wall_time: float = 0.0
    peak_memory: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def conductance(self) -> Fraction:
        return Fraction(self.cut, self.denominator)

    @property
    def conductance_float(self) -> float:
        return self.cut / self.denominator

    @property
    def g_value(self) -> Fraction:
        return Fraction(self.volume - self.cut, 2 * self.volume)

    @property
    def size(self) -> int:
        return len(self.members)

    def __repr__(self):
        return (f"ClusterResult(method={self.method!r}, size={self.size}, "
                f"phi={self.cut}/{self.denominator}~{self.conductance_float:.6g})")


class PeelState:
    """Step-by-step peeling with incremental cut, volume and live degrees.

    The compiled sweep does the same bookkeeping in one pass; this class is
    the inspectable version used by tests and for replay.
    """

    def __init__(self, g: Graph):
        self.graph = g
        self.in_set = np.ones(g.n, dtype=bool)
        self.live_degree = g.degrees.copy()
        self.cut = 0
        self.vol = g.total_volume
        self.size = g.n

    def remove(self, u: int) -> None:
        if not self.in_set[u]:
            raise ValueError(f"vertex {u} already removed")
        g = self.graph
        self.in_set[u] = False
        self.cut += 2 * int(self.live_degree[u]) - int(g.degrees[u])
        self.vol -= int(g.degrees[u])
        self.size -= 1
        nbrs = g.neighbors(u)
        live = nbrs[self.in_set[nbrs]]
        self.live_degree[live] -= 1

    def members(self) -> np.ndarray:
        return np.flatnonzero(self.in_set)


def recompute_check(g: Graph, state: PeelState) -> bool:
    """True iff the incremental fields match a from-scratch recount."""
    members = set(int(u) for u in state.members())
    vol = sum(g.degree(u) for u in members)
    live_ok = all(state.live_degree[u] == induced_degree(g, members, u) for u in members)
    cut = sum(g.degree(u) - induced_degree(g, members, u) for u in members)
    return live_ok and state.vol == vol and state.cut == cut


def peel_sweep(g: Graph, ordering: ScoreOrdering, objective: str = MIN_CONDUCTANCE,
               method: str | None = None, params: dict | None = None) -> ClusterResult:
    """Peel vertices in ``ordering`` and return the best remaining set with vol <= m.

    The incumbent starts as V with phi = 1 and is replaced only on strict
    improvement, so the earliest optimum wins. If nothing improves, the first
    feasible state is returned and flagged degenerate.
    """
    if objective not in (MIN_CONDUCTANCE, MAX_G):
        raise ValueError(f"unknown objective {objective!r}")
    ordering.validate(g.n)
    if g.n < 2:
        raise ValueError("peeling needs at least two vertices")
    order = ordering.order
    live = np.empty(g.n, dtype=np.int64)
    alive = np.empty(g.n, dtype=np.bool_)
    best_pos, _, _, first_feasible, touches = _kernels.peel_sweep_kernel(
        g.indptr, g.indices, g.degrees, order, objective == MAX_G, live, alive)
    degenerate = best_pos < 0
    if degenerate:
        if first_feasible < 0:
            raise ValueError("no sweep state has 0 < vol <= m")
        best_pos = first_feasible
        warnings.warn("no peeling state improved on phi = 1", DegenerateSweepWarning, stacklevel=2)
    members = np.sort(order[best_pos + 1:])
    cut, vol = cut_and_volume(g, members)
    return ClusterResult(members=members, cut=cut, volume=vol, denominator=min(vol, g.total_volume - vol),
                         method=method or ordering.method, params=dict(params or {}),
                         degenerate=degenerate, extra={"touches": int(touches)})


def prefix_sweep(g: Graph, seq, method: str = "", params: dict | None = None) -> ClusterResult:
    """Best prefix of ``seq`` by conductance, returned on its vol <= m side.

    A winning prefix heavier than m is swapped for its complement, which has
    the same conductance.
    """
    seq = np.asarray(seq, dtype=np.int64)
    if len(seq) == 0:
        raise ValueError("sweep sequence is empty")
    if len(np.unique(seq)) != len(seq):
        raise ValueError("sweep sequence repeats a vertex")
    in_set = np.zeros(g.n, dtype=np.bool_)
    best_len, _, best_vol = _kernels.prefix_sweep_kernel(g.indptr, g.indices, g.degrees, seq, in_set)
    if best_len == 0:
        raise ValueError("no prefix of the sweep has positive volume")
    members = np.sort(seq[:best_len])
    complemented = False
    if best_vol > g.m:
        mask = np.ones(g.n, dtype=bool)
        mask[members] = False
        members = np.flatnonzero(mask)
        complemented = True
    degenerate = len(members) == 0
    if degenerate:
        # the whole graph won (phi = 1); fall back to the first prefix
        members = seq[:1].copy()
    cut, vol = cut_and_volume(g, members)
    den = min(vol, g.total_volume - vol)
    return ClusterResult(members=members, cut=cut, volume=vol, denominator=den, method=method,
                         params=dict(params or {}), degenerate=degenerate or cut == den,
                         extra={"prefix_length": int(best_len), "complemented": complemented})
