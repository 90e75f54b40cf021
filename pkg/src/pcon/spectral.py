"""Approximate Fiedler vector by deflated power iteration, and its sweep."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import connected_components

from . import _kernels
from .graph import Graph
from .peel import ClusterResult, prefix_sweep


@dataclass(frozen=True)
class SpectralVector:
    vector: np.ndarray        # unit, orthogonal to d^{1/2}; normalised-Laplacian coordinates
    sweep_values: np.ndarray  # D^{-1/2} vector, sorted for the sweep
    lambda2_estimate: float
    iterations: int
    residual: float


def normalized_laplacian_rayleigh(g: Graph, x: np.ndarray) -> float:
    """x^T L x / x^T x for L = I - D^-1/2 A D^-1/2."""
    inv_sqrt = 1.0 / np.sqrt(g.degrees)
    y = np.empty(g.n)
    _kernels.lazy_walk_matvec(g.indptr, g.indices, inv_sqrt, x, y)
    # y = (x + N x) / 2  =>  L x = x - N x = 2 (x - y)
    return float(2.0 * (x @ (x - y)) / (x @ x))


def approx_fiedler(g: Graph, eps: float = 1e-6, max_iters: int = 1000, seed: int = 0) -> SpectralVector:
    """Power iteration on (I + D^-1/2 A D^-1/2) / 2 with the top vector deflated.

    Stops when the change between successive unit iterates drops below
    ``eps`` or after ``max_iters`` steps.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if g.n < 2 or g.m == 0:
        raise ValueError("need a graph with at least one edge")
    if connected_components(g.to_scipy(), directed=False)[0] != 1:
        raise ValueError("graph is disconnected; lambda2 = 0")
    sqrt_d = np.sqrt(g.degrees.astype(np.float64))
    top = sqrt_d / np.linalg.norm(sqrt_d)
    inv_sqrt = 1.0 / sqrt_d

    rng = np.random.Generator(np.random.Philox(seed))
    x = rng.standard_normal(g.n)
    x -= (top @ x) * top
    x /= np.linalg.norm(x)
    y = np.empty(g.n)
    change = np.inf
    it = 0
    while it < max_iters:
        it += 1
        _kernels.lazy_walk_matvec(g.indptr, g.indices, inv_sqrt, x, y)
        y -= (top @ y) * top
        norm = np.linalg.norm(y)
        if norm == 0.0:
            break  # x sat in the zero eigenspace of the lazy walk
        y /= norm
        change = float(np.linalg.norm(y - x))
        x, y = y, x
        if change < eps:
            break
    lam = normalized_laplacian_rayleigh(g, x)
    return SpectralVector(vector=x.copy(), sweep_values=x * inv_sqrt, lambda2_estimate=min(2.0, max(0.0, lam)),
                          iterations=it, residual=change)


def spectral_sweep(g: Graph, x, method: str = "asc_sweep", params: dict | None = None) -> ClusterResult:
    """Sweep prefixes of ascending ``x`` (ties by id); result on its vol <= m side.

    ``x`` may be a :class:`SpectralVector` or a plain per-vertex array; a
    plain array is used as is.
    """
    values = x.sweep_values if isinstance(x, SpectralVector) else np.asarray(x, dtype=np.float64)
    if len(values) != g.n:
        raise ValueError("vector length does not match the graph")
    seq = np.lexsort((np.arange(g.n), values))
    return prefix_sweep(g, seq, method=method, params=params)


def asc_sweep(g: Graph, eps: float = 1e-6, max_iters: int = 1000, seed: int = 0) -> ClusterResult:
    vec = approx_fiedler(g, eps=eps, max_iters=max_iters, seed=seed)
    res = spectral_sweep(g, vec, params={"eps": eps, "max_iters": max_iters, "seed": seed})
    res.extra.update(lambda2_estimate=vec.lambda2_estimate, iterations=vec.iterations)
    return res
