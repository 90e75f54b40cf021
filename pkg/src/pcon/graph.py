"""Immutable CSR graph storage, SNAP edge-list ingestion and LCC extraction."""
from __future__ import annotations

import io
import struct
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components


class GraphFormatError(ValueError):
    """Raised for malformed edge-list input."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph in offset/target layout.

    ``indices[indptr[u]:indptr[u + 1]]`` holds the neighbours of ``u`` in
    strictly ascending order.
    """

    indptr: np.ndarray
    indices: np.ndarray
    degrees: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "degrees", np.diff(self.indptr).astype(np.int64))
        for arr in (self.indptr, self.indices, self.degrees):
            arr.flags.writeable = False

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    @property
    def total_volume(self) -> int:
        return 2 * self.m

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def degree(self, u: int) -> int:
        return int(self.degrees[u])

    def volume(self, members) -> int:
        return int(self.degrees[np.asarray(members, dtype=np.int64)].sum())

    def edges(self) -> np.ndarray:
        """Each undirected edge once, as rows ``(u, v)`` with ``u < v``."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        keep = src < self.indices
        return np.column_stack([src[keep], self.indices[keep]])

    def to_scipy(self) -> csr_matrix:
        data = np.ones(len(self.indices), dtype=np.float64)
        return csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True, eq=False)
class RelabelMap:
    """Bijection between original vertex ids and dense ids ``0..n-1``."""

    original: np.ndarray  # original[dense_id] -> original id

    def __post_init__(self):
        lookup = {int(o): i for i, o in enumerate(self.original)}
        if len(lookup) != len(self.original):
            raise ValueError("relabel map is not injective")
        object.__setattr__(self, "_lookup", lookup)

    def __len__(self):
        return len(self.original)

    @classmethod
    def identity(cls, n: int) -> "RelabelMap":
        return cls(np.arange(n, dtype=np.int64))

    def to_dense(self, original_id: int) -> int:
        return self._lookup[int(original_id)]

    def to_original(self, dense_id: int) -> int:
        return int(self.original[dense_id])

    def has(self, original_id: int) -> bool:
        return int(original_id) in self._lookup

    def restrict(self, dense_ids: np.ndarray) -> "RelabelMap":
        return RelabelMap(self.original[np.asarray(dense_ids, dtype=np.int64)])


def from_edges(src, dst, n: int | None = None) -> Graph:
    """Build a simple undirected graph from dense-id endpoint arrays.

    Self-loops are dropped and duplicates (in either orientation) collapse.
    """
    src = np.asarray(src, dtype=np.int64).ravel()
    dst = np.asarray(dst, dtype=np.int64).ravel()
    if src.shape != dst.shape:
        raise ValueError("endpoint arrays differ in length")
    if n is None:
        n = int(max(src.max(initial=-1), dst.max(initial=-1))) + 1
    if len(src) and (min(src.min(), dst.min()) < 0 or max(src.max(), dst.max()) >= n):
        raise ValueError("vertex id out of range")
    keep = src != dst
    lo = np.minimum(src[keep], dst[keep])
    hi = np.maximum(src[keep], dst[keep])
    key = np.unique(lo * n + hi)
    lo, hi = key // n, key % n
    rows = np.concatenate([lo, hi])
    cols = np.concatenate([hi, lo])
    order = np.lexsort((cols, rows))
    rows, cols = rows[order], cols[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
    return Graph(indptr, cols.astype(np.int64))


def parse_edge_list(stream: TextIO | Iterable[str]) -> tuple[Graph, RelabelMap]:
    """Read a SNAP-style edge list.

    Lines starting with ``#`` and blank lines are skipped. Ids are relabelled
    densely in ascending order of original id.
    """
    us, vs = [], []
    for lineno, line in enumerate(stream, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 2:
            raise GraphFormatError(f"line {lineno}: expected two vertex ids, got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer vertex id in {line!r}") from None
        if u < 0 or v < 0:
            raise GraphFormatError(f"line {lineno}: negative vertex id in {line!r}")
        us.append(u)
        vs.append(v)
    u = np.asarray(us, dtype=np.int64)
    v = np.asarray(vs, dtype=np.int64)
    keep = u != v
    u, v = u[keep], v[keep]
    if len(u) == 0:
        raise GraphFormatError("edge list contains no edges")
    original, inverse = np.unique(np.concatenate([u, v]), return_inverse=True)
    g = from_edges(inverse[: len(u)], inverse[len(u):], n=len(original))
    return g, RelabelMap(original)


def read_edge_list(path) -> tuple[Graph, RelabelMap]:
    with open(path) as fh:
        return parse_edge_list(fh)


def write_edge_list(g: Graph, stream: TextIO, relabel: RelabelMap | None = None) -> None:
    edges = g.edges()
    if relabel is not None:
        edges = relabel.original[edges]
    buf = io.StringIO()
    np.savetxt(buf, edges, fmt="%d", delimiter=" ")
    stream.write(buf.getvalue())


def induced_subgraph(g: Graph, vertices) -> Graph:
    """Subgraph on ``vertices`` (sorted dense ids), relabelled to ``0..k-1``."""
    vertices = np.asarray(vertices, dtype=np.int64)
    new_id = np.full(g.n, -1, dtype=np.int64)
    new_id[vertices] = np.arange(len(vertices))
    e = g.edges()
    a, b = new_id[e[:, 0]], new_id[e[:, 1]]
    keep = (a >= 0) & (b >= 0)
    return from_edges(a[keep], b[keep], n=len(vertices))


def largest_connected_component(g: Graph, relabel: RelabelMap | None = None) -> tuple[Graph, RelabelMap]:
    """Induced subgraph on the largest component.

    Equal-size components are ranked by their smallest original id. Isolated
    vertices never win unless the graph has no edges (then it is an error).
    """
    if relabel is None:
        relabel = RelabelMap.identity(g.n)
    if g.m == 0:
        raise ValueError("graph has no edges")
    ncomp, labels = connected_components(g.to_scipy(), directed=False)
    sizes = np.bincount(labels, minlength=ncomp)
    min_orig = np.full(ncomp, np.iinfo(np.int64).max, dtype=np.int64)
    np.minimum.at(min_orig, labels, relabel.original)
    best = min(range(ncomp), key=lambda c: (-sizes[c], min_orig[c]))
    vertices = np.flatnonzero(labels == best)
    if len(vertices) == g.n:
        return g, relabel
    return induced_subgraph(g, vertices), relabel.restrict(vertices)


def induced_degree(g: Graph, s, u: int) -> int:
    """``|N(u) ∩ s|``; reference implementation used by the test oracles."""
    members = s if isinstance(s, (set, frozenset)) else set(int(x) for x in s)
    if u not in members:
        raise ValueError(f"vertex {u} is not in the subset")
    return sum(1 for v in g.neighbors(u) if int(v) in members)


# Binary cache: magic, version, n, m, indptr[n+1], indices[2m], original_ids[n]
# all little-endian int64 after the 8-byte magic and uint32 version.
_MAGIC = b"PCONCSR\x00"
_VERSION = 1


def save_cache(path, g: Graph, relabel: RelabelMap | None = None) -> None:
    if relabel is None:
        relabel = RelabelMap.identity(g.n)
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<IQQ", _VERSION, g.n, g.m))
        for arr in (g.indptr, g.indices, relabel.original):
            fh.write(np.ascontiguousarray(arr, dtype="<i8").tobytes())


def load_cache(path) -> tuple[Graph, RelabelMap]:
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:8] != _MAGIC:
        raise GraphFormatError("not a pcon graph cache")
    version, n, m = struct.unpack_from("<IQQ", data, 8)
    if version != _VERSION:
        raise GraphFormatError(f"unsupported cache version {version}")
    body = np.frombuffer(data, dtype="<i8", offset=8 + struct.calcsize("<IQQ"))
    if len(body) != (n + 1) + 2 * m + n:
        raise GraphFormatError("truncated graph cache")
    indptr = body[: n + 1].astype(np.int64)
    indices = body[n + 1: n + 1 + 2 * m].astype(np.int64)
    original = body[n + 1 + 2 * m:].astype(np.int64)
    return Graph(indptr, indices), RelabelMap(original)


def load_graph(path) -> tuple[Graph, RelabelMap]:
    """Load a cache file if it carries the magic header, else parse text."""
    with open(path, "rb") as fh:
        head = fh.read(8)
    if head == _MAGIC:
        return load_cache(path)
    return read_edge_list(path)
