"""Independent reference implementations used as test oracles."""
import itertools
import math
from fractions import Fraction

import numpy as np

from pcon.graph import from_edges

BARBELL = [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]
# Nine vertices v1..v9 as ids 0..8; {v1..v4} is the phi* = 1/9 cluster.
BRIDGED_CYCLE = [(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (4, 6), (6, 7), (6, 8), (7, 8)]
# a valid degeneracy ordering worked out by hand, different tie-breaks from ours
BRIDGED_HAND_ORDER = [5, 7, 8, 6, 4, 0, 1, 2, 3]


def graph_of(edges, n=None):
    u = [a for a, _ in edges]
    v = [b for _, b in edges]
    return from_edges(u, v, n=n)


def complete(n):
    return graph_of(list(itertools.combinations(range(n), 2)))


def random_connected(rng, n, extra_p):
    """Random spanning tree plus each other pair with probability extra_p."""
    perm = rng.permutation(n)
    edges = [(int(perm[i]), int(perm[rng.integers(i)])) for i in range(1, n)]
    for a, b in itertools.combinations(range(n), 2):
        if rng.random() < extra_p:
            edges.append((a, b))
    return graph_of(edges, n=n)


def random_graph(rng, n, p):
    """Plain G(n, p); may be disconnected or have isolated vertices."""
    edges = [(a, b) for a, b in itertools.combinations(range(n), 2) if rng.random() < p]
    return graph_of(edges, n=n)


def adjacency_sets(g):
    return [set(int(v) for v in g.neighbors(u)) for u in range(g.n)]


def phi_bruteforce(g, members):
    """Definition-level conductance with Python sets."""
    s = set(int(u) for u in members)
    adj = adjacency_sets(g)
    cut = sum(1 for u in s for v in adj[u] if v not in s)
    vol = sum(len(adj[u]) for u in s)
    den = min(vol, 2 * g.m - vol)
    if den == 0:
        return Fraction(1)
    return Fraction(cut, den)


def naive_degeneracy(g):
    """O(n^2) repeated min-degree removal.

    Among equal degrees the vertex that reached its degree at the earliest
    step goes first; within one step (and at the start) the smaller id wins.
    """
    n = g.n
    deg = g.degrees.astype(np.int64).copy()
    since = np.zeros(n, dtype=np.int64)
    alive = np.ones(n, dtype=bool)
    ids = np.arange(n, dtype=np.int64)
    big = n + 1
    order = []
    for step in range(1, n + 1):
        key = np.where(alive, (deg * big + since) * big + ids, np.iinfo(np.int64).max)
        u = int(np.argmin(key))
        order.append(u)
        alive[u] = False
        nb = g.neighbors(u)
        nb = nb[alive[nb]]
        deg[nb] -= 1
        since[nb] = step
    return order


def is_degeneracy_ordering(g, order):
    """Every u_i has minimum degree in the subgraph induced by u_i..u_n.

    Residual degrees are recounted from the adjacency arrays at every step.
    """
    n = g.n
    if sorted(int(u) for u in order) != list(range(n)):
        return False
    remaining = np.ones(n, dtype=bool)
    owner = np.repeat(np.arange(n), g.degrees)
    for u in order:
        hits = remaining[g.indices] & remaining[owner]
        residual = np.bincount(owner[hits], minlength=n)
        if residual[u] != residual[remaining].min():
            return False
        remaining[u] = False
    return True


def connected_graphs(n):
    """Every connected labelled graph on n vertices (n <= 6 is practical)."""
    pairs = list(itertools.combinations(range(n), 2))
    full = (1 << n) - 1
    for mask in range(1 << len(pairs)):
        adj = [0] * n
        edges = []
        for k, (a, b) in enumerate(pairs):
            if (mask >> k) & 1:
                adj[a] |= 1 << b
                adj[b] |= 1 << a
                edges.append((a, b))
        seen = frontier = 1
        while frontier:
            nxt = 0
            for u in range(n):
                if (frontier >> u) & 1:
                    nxt |= adj[u]
            frontier = nxt & ~seen
            seen |= nxt
        if seen == full:
            yield graph_of(edges, n=n)


def numpy_gnp(rng, n, p):
    """G(n, p) by thresholding a uniform upper triangle."""
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(len(iu)) < p
    return from_edges(iu[keep], ju[keep], n=n)


def best_suffix_exhaustive(g, order, objective="min_conductance"):
    """Evaluate every remaining set S_i along ``order`` from scratch.

    Returns the member set the peeling rule should pick (strict improvement
    over an incumbent V with phi = 1; first feasible state if none improves).
    """
    m = g.m
    remaining = list(order)
    best, best_val = None, Fraction(1) if objective == "min_conductance" else Fraction(0)
    first_feasible = None
    for i in range(len(order) - 1):
        rest = remaining[i + 1:]
        vol = int(g.degrees[rest].sum())
        if vol == 0 or vol > m:
            continue
        if first_feasible is None:
            first_feasible = sorted(rest)
        phi = phi_bruteforce(g, rest)
        if objective == "min_conductance":
            if phi < best_val:
                best, best_val = sorted(rest), phi
        else:
            val = (1 - phi) / 2
            if val > best_val:
                best, best_val = sorted(rest), val
    return best if best is not None else first_feasible


def normalized_laplacian(g):
    A = np.zeros((g.n, g.n))
    for a, b in g.edges():
        A[a, b] = A[b, a] = 1.0
    d = A.sum(axis=1)
    s = 1.0 / np.sqrt(d)
    return np.eye(g.n) - s[:, None] * A * s[None, :]


def exact_fiedler(g):
    """(lambda2, D^-1/2 x2) from a dense eigensolve."""
    vals, vecs = np.linalg.eigh(normalized_laplacian(g))
    return vals[1], vecs[:, 1] / np.sqrt(g.degrees)


def all_sweep_best(g, values):
    """Min conductance over every sweep cut of ascending ``values`` (ties by id)."""
    seq = sorted(range(g.n), key=lambda u: (values[u], u))
    return min(phi_bruteforce(g, seq[:i]) for i in range(1, g.n + 1))


def heat_kernel_dense(g, q, t, terms=50):
    """sum_{k < terms} e^-t t^k / k! (chi_q P^k) with dense matrix powers."""
    A = np.zeros((g.n, g.n))
    for a, b in g.edges():
        A[a, b] = A[b, a] = 1.0
    P = A / A.sum(axis=1)[:, None]
    row = np.zeros(g.n)
    row[q] = 1.0
    out = np.zeros(g.n)
    for k in range(terms):
        out += math.exp(-t) * t**k / math.factorial(k) * row
        row = row @ P
    return out
