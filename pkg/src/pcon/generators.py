"""Synthetic graph models: ER, BA, WS, Holme-Kim powerlaw-cluster, planted partition.

Randomness comes from numpy's counter-based Philox bit generator keyed by
the GenSpec seed, so a (model, params, seed) triple always yields the same
edge set.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, from_edges

MODELS = ("ER", "BA", "WS", "PLC", "PLANTED")


@dataclass(frozen=True)
class GenSpec:
    model: str
    n: int
    params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "model", self.model.upper())
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}; choose from {MODELS}")
        if self.n < 2:
            raise ValueError("n must be at least 2")

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> "GenSpec":
        """``model:key=value,key=value``, e.g. ``er:n=1000,p=0.01``."""
        model, _, rest = text.partition(":")
        params = {}
        for item in filter(None, rest.split(",")):
            key, eq, value = item.partition("=")
            if not eq:
                raise ValueError(f"bad generator parameter {item!r}")
            params[key.strip().lower()] = float(value) if any(c in value for c in ".eE") else int(value)
        if "n" not in params:
            raise ValueError("generator spec needs n=")
        n = int(params.pop("n"))
        seed = int(params.pop("seed", seed))
        return cls(model, n, params, seed)

    def __str__(self):
        items = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.model.lower()}:n={self.n}" + (f",{items}" if items else "")


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def _sample_pairs(rng, count, draw):
    """Draw ``count`` distinct unordered pairs using ``draw(size) -> (u, v)``."""
    keys = np.empty(0, dtype=np.int64)
    lo_all = np.empty(0, dtype=np.int64)
    hi_all = np.empty(0, dtype=np.int64)
    while len(keys) < count:
        need = count - len(keys)
        u, v = draw(int(need * 1.1) + 16)
        ok = u != v
        lo = np.minimum(u[ok], v[ok])
        hi = np.maximum(u[ok], v[ok])
        lo_all = np.concatenate([lo_all, lo])
        hi_all = np.concatenate([hi_all, hi])
        key = lo_all * (1 << 31) + hi_all
        _, first = np.unique(key, return_index=True)
        first.sort()  # keep draw order so truncation is unbiased
        lo_all, hi_all = lo_all[first], hi_all[first]
        keys = key[first]
    return lo_all[:count], hi_all[:count]


def erdos_renyi(n: int, p: float, rng) -> Graph:
    """G(n, p): edge count ~ Binomial(C(n,2), p), then a uniform edge set of that size."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    pairs = n * (n - 1) // 2
    count = int(rng.binomial(pairs, p))
    if count > pairs // 4:
        iu, ju = np.triu_indices(n, 1)
        chosen = rng.choice(pairs, size=count, replace=False)
        return from_edges(iu[chosen], ju[chosen], n=n)
    u, v = _sample_pairs(rng, count, lambda k: (rng.integers(0, n, k), rng.integers(0, n, k)))
    return from_edges(u, v, n=n)


def barabasi_albert(n: int, k: int, rng) -> Graph:
    """Preferential attachment: each new vertex links to k distinct targets."""
    if not 1 <= k < n:
        raise ValueError("BA needs 1 <= k < n")
    src, dst = [], []
    repeated: list[int] = []
    targets = list(range(k))
    for new in range(k, n):
        for t in targets:
            src.append(new)
            dst.append(t)
        repeated.extend(targets)
        repeated.extend([new] * k)
        targets = _distinct_sample(repeated, k, rng)
    return from_edges(src, dst, n=n)


def watts_strogatz(n: int, k: int, beta: float, rng) -> Graph:
    """Ring lattice with k nearest neighbours, each edge rewired with prob beta."""
    if k % 2 or not 0 < k < n:
        raise ValueError("WS needs even k with 0 < k < n")
    if not 0.0 <= beta <= 1.0:
        raise ValueError("beta must lie in [0, 1]")
    adj = [set() for _ in range(n)]
    for u in range(n):
        for j in range(1, k // 2 + 1):
            v = (u + j) % n
            adj[u].add(v)
            adj[v].add(u)
    for j in range(1, k // 2 + 1):
        for u in range(n):
            v = (u + j) % n
            if rng.random() < beta and v in adj[u] and len(adj[u]) < n - 1:
                w = int(rng.integers(n))
                while w == u or w in adj[u]:
                    w = int(rng.integers(n))
                adj[u].discard(v)
                adj[v].discard(u)
                adj[u].add(w)
                adj[w].add(u)
    src = [u for u in range(n) for v in adj[u] if u < v]
    dst = [v for u in range(n) for v in adj[u] if u < v]
    return from_edges(src, dst, n=n)


def _distinct_sample(pool: list[int], k: int, rng) -> list[int]:
    chosen: set[int] = set()
    while len(chosen) < k:
        chosen.add(pool[int(rng.integers(len(pool)))])
    return sorted(chosen)


def powerlaw_cluster(n: int, k: int, p_triangle: float, rng) -> Graph:
    """Holme-Kim: preferential attachment plus triad formation with prob p_triangle."""
    if not 1 <= k < n:
        raise ValueError("PLC needs 1 <= k < n")
    if not 0.0 <= p_triangle <= 1.0:
        raise ValueError("triangle probability must lie in [0, 1]")
    adj = [set() for _ in range(n)]
    repeated: list[int] = list(range(k))
    for new in range(k, n):
        targets = _distinct_sample(repeated, k, rng)
        target = targets.pop()
        adj[new].add(target)
        adj[target].add(new)
        repeated.append(target)
        count = 1
        while count < k:
            if rng.random() < p_triangle:
                closing = [w for w in sorted(adj[target]) if w != new and w not in adj[new]]
                if closing:
                    w = closing[int(rng.integers(len(closing)))]
                    adj[new].add(w)
                    adj[w].add(new)
                    repeated.append(w)
                    count += 1
                    continue
            target = targets.pop()
            adj[new].add(target)
            adj[target].add(new)
            repeated.append(target)
            count += 1
        repeated.extend([new] * k)
    src = [u for u in range(n) for v in adj[u] if u < v]
    dst = [v for u in range(n) for v in adj[u] if u < v]
    return from_edges(src, dst, n=n)


def planted_partition(n: int, communities: int, k_in: float, mu: float, rng) -> tuple[Graph, np.ndarray]:
    """Equal-size communities; expected internal degree k_in, external k_in mu / (1 - mu).

    Each vertex then has expected degree k_in / (1 - mu) with expected
    fraction mu of its edges leaving its community.
    """
    if not 0.0 <= mu < 1.0:
        raise ValueError("mu must lie in [0, 1)")
    if not 1 <= communities <= n // 2:
        raise ValueError("need 1 <= communities <= n/2")
    labels = (np.arange(n) * communities) // n
    sizes = np.bincount(labels, minlength=communities)
    starts = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    src, dst = [], []
    for c in range(communities):
        s = int(sizes[c])
        p_in = min(1.0, k_in / (s - 1))
        block = erdos_renyi(s, p_in, rng).edges() + starts[c]
        src.append(block[:, 0])
        dst.append(block[:, 1])
    k_out = k_in * mu / (1.0 - mu)
    if communities > 1 and k_out > 0:
        cross_pairs = (n * n - int((sizes.astype(np.int64) ** 2).sum())) // 2
        p_out = min(1.0, k_out / (n - n / communities))
        count = int(rng.binomial(cross_pairs, p_out))

        def draw(k):
            u = rng.integers(0, n, k)
            v = rng.integers(0, n, k)
            v = np.where(labels[u] == labels[v], u, v)  # same-community draws become self-loops, dropped
            return u, v

        u, v = _sample_pairs(rng, count, draw)
        src.append(u)
        dst.append(v)
    g = from_edges(np.concatenate(src), np.concatenate(dst), n=n)
    return g, labels


def generate(spec: GenSpec) -> tuple[Graph, np.ndarray | None]:
    """Build the graph for ``spec``; ground-truth labels only for PLANTED."""
    rng = make_rng(spec.seed)
    p = spec.params
    n = spec.n
    if spec.model == "ER":
        if "p" in p:
            prob = float(p["p"])
        elif "m" in p:
            prob = float(p["m"]) / (n * (n - 1) / 2)
        elif "d" in p:
            prob = float(p["d"]) / (n - 1)
        else:
            raise ValueError("ER needs p=, m= or d=")
        return erdos_renyi(n, prob, rng), None
    if spec.model == "BA":
        return barabasi_albert(n, int(p.get("k", 3)), rng), None
    if spec.model == "WS":
        return watts_strogatz(n, int(p.get("k", 4)), float(p.get("beta", 0.1)), rng), None
    if spec.model == "PLC":
        return powerlaw_cluster(n, int(p.get("k", 3)), float(p.get("pt", 0.3)), rng), None
    return planted_partition(n, int(p.get("c", 2)), float(p.get("k_in", 8)), float(p.get("mu", 0.1)), rng)
