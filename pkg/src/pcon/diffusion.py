"""Seeded diffusions (truncated walk, PPR push, heat-kernel relax) and their sweep."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import poisson

from . import _kernels
from .graph import Graph
from .peel import ClusterResult, prefix_sweep

DEFAULT_ALPHA = 0.01
DEFAULT_T = 10.0
DEFAULT_WALK_STEPS = 10
MAX_HK_LEVELS = 1000


@dataclass(frozen=True)
class DiffusionParams:
    alpha: float = DEFAULT_ALPHA
    eps: float | None = None   # None means 1/m
    t: float = DEFAULT_T
    n_iters: int = DEFAULT_WALK_STEPS

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if self.eps is not None and self.eps <= 0:
            raise ValueError("eps must be positive")
        if self.t <= 0:
            raise ValueError("t must be positive")
        if self.n_iters < 0:
            raise ValueError("n_iters must be non-negative")

    def resolved_eps(self, g: Graph) -> float:
        return 1.0 / g.m if self.eps is None else self.eps


@dataclass
class SparseDist:
    vertices: np.ndarray
    mass: np.ndarray
    kind: str
    seed_vertex: int
    params: dict = field(default_factory=dict)
    residual: np.ndarray | None = None  # dense, when the method keeps one

    @property
    def support(self) -> int:
        return len(self.vertices)

    @property
    def total(self) -> float:
        return float(self.mass.sum())

    def dense(self, n: int) -> np.ndarray:
        out = np.zeros(n)
        out[self.vertices] = self.mass
        return out


def _sparse(dense: np.ndarray, kind, q, params, residual=None) -> SparseDist:
    idx = np.flatnonzero(dense)
    return SparseDist(idx, dense[idx].copy(), kind, int(q), params, residual)


def _check_seed(g: Graph, q: int):
    if not 0 <= q < g.n:
        raise ValueError(f"seed vertex {q} out of range")
    if g.degrees[q] == 0:
        raise ValueError(f"seed vertex {q} is isolated")


def truncate(s: np.ndarray, degrees: np.ndarray, eps: float) -> np.ndarray:
    """Zero every entry below d(u) * eps."""
    return np.where(s >= degrees * eps, s, 0.0)


def truncated_random_walk(g: Graph, q: int, eps: float, n_iters: int = DEFAULT_WALK_STEPS) -> SparseDist:
    """Z_0 = chi_q, Z_i = Tr(Z_{i-1} P), returns Z_N."""
    _check_seed(g, q)
    z = np.zeros(g.n)
    z[q] = 1.0
    support = np.array([q], dtype=np.int64)
    out = np.zeros(g.n)
    out_support = np.empty(g.n, dtype=np.int64)
    for _ in range(n_iters):
        size = _kernels.walk_step_kernel(g.indptr, g.indices, g.degrees, z, support, out, out_support)
        touched = out_support[:size]
        z[support] = 0.0
        vals = out[touched]
        keep = vals >= g.degrees[touched] * eps
        z[touched[keep]] = vals[keep]
        out[touched] = 0.0
        support = np.sort(touched[keep])
        if len(support) == 0:
            break
    return _sparse(z, "trw", q, {"eps": eps, "n_iters": n_iters})


def ppr_push(g: Graph, q: int, alpha: float = DEFAULT_ALPHA, eps: float | None = None) -> SparseDist:
    """Push approximation of the alpha-discount walk's stopping distribution.

    At return every residual satisfies r(u) < eps * d(u), and
    sum(p) + sum(r) == 1 up to rounding.
    """
    _check_seed(g, q)
    DiffusionParams(alpha=alpha, eps=eps)
    eps = 1.0 / g.m if eps is None else eps
    p = np.zeros(g.n)
    r = np.zeros(g.n)
    queue = np.empty(g.n, dtype=np.int64)
    in_queue = np.zeros(g.n, dtype=np.bool_)
    pushes = _kernels.ppr_push_kernel(g.indptr, g.indices, g.degrees, q, alpha, eps, p, r, queue, in_queue)
    dist = _sparse(p, "ppr", q, {"alpha": alpha, "eps": eps}, residual=r)
    dist.params["pushes"] = int(pushes)
    return dist


def poisson_levels(t: float, eps: float) -> int:
    """Smallest N with P[Poisson(t) > N] < eps / 2."""
    n = 0
    while poisson.sf(n, t) >= eps / 2:
        n += 1
        if n >= MAX_HK_LEVELS:
            break
    return max(n, 1)


def _psi(t: float, levels: int) -> np.ndarray:
    # psi_j = sum_{m=0}^{N-j} j! / (m + j)! t^m, via psi_j = 1 + t/(j+1) psi_{j+1}
    psi = np.empty(levels + 1)
    psi[levels] = 1.0
    for j in range(levels - 1, -1, -1):
        psi[j] = 1.0 + t / (j + 1) * psi[j + 1]
    return psi


def hk_relax(g: Graph, q: int, t: float = DEFAULT_T, eps: float | None = None) -> SparseDist:
    """Heat-kernel diffusion sum_k e^-t t^k / k! P^k from ``q``.

    Taylor series truncated at N levels (Poisson tail below eps/2); residual
    at level j is pushed only when at least e^t eps d(u) / (N psi_j(t)).
    """
    _check_seed(g, q)
    DiffusionParams(t=t, eps=eps)
    eps = 1.0 / g.m if eps is None else eps
    levels = poisson_levels(t, eps)
    psi = _psi(t, levels)
    thresholds = math.exp(t) * eps / (levels * psi[:levels])
    x = np.zeros(g.n)
    r_cur = np.zeros(g.n)
    r_next = np.zeros(g.n)
    frontier = np.empty(g.n, dtype=np.int64)
    next_frontier = np.empty(g.n, dtype=np.int64)
    pushes, dropped = _kernels.hk_relax_kernel(g.indptr, g.indices, g.degrees, q, float(t), thresholds,
                                                x, r_cur, r_next, frontier, next_frontier)
    x *= math.exp(-t)
    dist = _sparse(x, "hk", q, {"t": t, "eps": eps, "levels": levels})
    dist.params.update(pushes=int(pushes), dropped=float(dropped) * math.exp(-t))
    return dist


def heat_kernel_series(g: Graph, q: int, t: float, terms: int = 50) -> np.ndarray:
    """Dense reference: sum_{k < terms} eta(k) chi_q P^k."""
    P = g.to_scipy().multiply(1.0 / g.degrees[:, None]).tocsr()
    z = np.zeros(g.n)
    z[q] = 1.0
    out = np.zeros(g.n)
    weight = math.exp(-t)
    for k in range(terms):
        out += weight * z
        z = P.T @ z
        weight *= t / (k + 1)
    return out


def diffusion_sweep(g: Graph, dist: SparseDist, method: str | None = None) -> ClusterResult:
    """Sweep prefixes of descending pi(u)/d(u) over the support (ties by id)."""
    if dist.support == 0:
        raise ValueError("diffusion has empty support")
    y = dist.mass / g.degrees[dist.vertices]
    seq = dist.vertices[np.lexsort((dist.vertices, -y))]
    params = {k: v for k, v in dist.params.items() if k in ("alpha", "eps", "t", "n_iters")}
    params["seed_vertex"] = dist.seed_vertex
    res = prefix_sweep(g, seq, method=method or dist.kind, params=params)
    res.extra["support"] = dist.support
    return res


def local_cluster(g: Graph, method: str, q: int, params: DiffusionParams = DiffusionParams()) -> ClusterResult:
    eps = params.resolved_eps(g)
    if method == "ppr":
        dist = ppr_push(g, q, params.alpha, eps)
    elif method == "hk":
        dist = hk_relax(g, q, params.t, eps)
    elif method == "trw":
        dist = truncated_random_walk(g, q, eps, params.n_iters)
    else:
        raise ValueError(f"unknown diffusion {method!r}")
    if dist.support == 0:
        # truncation wiped everything out: report the seed alone
        dist = SparseDist(np.array([q]), np.array([1.0]), dist.kind, q, dist.params)
    return diffusion_sweep(g, dist, method)
