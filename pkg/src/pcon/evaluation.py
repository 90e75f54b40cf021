"""NMI scoring, ground-truth files and the exhaustive minimum-conductance oracle."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .graph import Graph, RelabelMap

ORACLE_MAX_N = 20


@dataclass(frozen=True)
class OracleResult:
    best_set: np.ndarray   # S*: min conductance among vol <= m
    phi_star: Fraction
    g_set: np.ndarray      # argmax g over proper nonempty subsets
    g_best: Fraction


def _mask_members(mask: int, n: int) -> np.ndarray:
    return np.array([u for u in range(n) if (mask >> u) & 1], dtype=np.int64)


def brute_force_optimum(g: Graph) -> OracleResult:
    """Enumerate all 2^n - 2 proper nonempty subsets (n <= 20)."""
    n = g.n
    if n > ORACLE_MAX_N:
        raise ValueError(f"oracle refuses n={n} > {ORACLE_MAX_N}")
    if n < 2:
        raise ValueError("oracle needs at least two vertices")
    adjmask = np.zeros(n, dtype=np.int64)
    for u in range(n):
        for v in g.neighbors(u):
            adjmask[u] |= 1 << int(v)
    phi_mask, phi_cut, phi_vol, g_mask, g_num, g_den = _kernels.brute_force_kernel(adjmask, g.degrees, g.m)
    if phi_mask < 0:
        raise ValueError("no proper subset with 0 < vol <= m")
    return OracleResult(best_set=_mask_members(phi_mask, n), phi_star=Fraction(int(phi_cut), int(phi_vol)),
                        g_set=_mask_members(g_mask, n), g_best=Fraction(int(g_num), int(g_den)))


# -------------------------------------------------------------------- NMI

def _entropy(counts: np.ndarray, total: int) -> float:
    p = counts[counts > 0] / total
    return float(-(p * np.log(p)).sum())


def nmi(labels_a, labels_b) -> float:
    """I(A;B) / sqrt(H(A) H(B)) with natural logs; 0 if either side is trivial."""
    a = np.asarray(labels_a)
    b = np.asarray(labels_b)
    if a.shape != b.shape:
        raise ValueError("partitions cover different vertex sets")
    total = len(a)
    if total == 0:
        raise ValueError("empty partition")
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    joint = np.zeros((ai.max() + 1, bi.max() + 1), dtype=np.int64)
    np.add.at(joint, (ai, bi), 1)
    ha = _entropy(joint.sum(axis=1), total)
    hb = _entropy(joint.sum(axis=0), total)
    if ha == 0.0 or hb == 0.0:
        return 0.0
    nz = joint > 0
    pij = joint[nz] / total
    expected = np.outer(joint.sum(axis=1), joint.sum(axis=0))[nz] / total**2
    mi = float((pij * np.log(pij / expected)).sum())
    return min(1.0, max(0.0, mi / np.sqrt(ha * hb)))


def best_jaccard_community(members, truth) -> int:
    """Ground-truth label whose community overlaps ``members`` best (Jaccard)."""
    truth = np.asarray(truth)
    if len(truth) == 0:
        raise ValueError("empty ground truth")
    labels, sizes = np.unique(truth, return_counts=True)
    inter = np.zeros(len(labels), dtype=np.int64)
    hit_labels, hit_counts = np.unique(truth[np.asarray(members, dtype=np.int64)], return_counts=True)
    inter[np.searchsorted(labels, hit_labels)] = hit_counts
    jaccard = inter / (sizes + len(members) - inter)
    return labels[int(np.argmax(jaccard))]


def score_detected_cluster(members, truth) -> float:
    """Binary NMI of {S, V-S} against the best-Jaccard community and its complement."""
    members = np.asarray(members, dtype=np.int64)
    if len(members) == 0:
        raise ValueError("detected cluster is empty")
    truth = np.asarray(truth)
    label = best_jaccard_community(members, truth)
    detected = np.zeros(len(truth), dtype=np.int8)
    detected[members] = 1
    return nmi(detected, (truth == label).astype(np.int8))


# ------------------------------------------------------ ground-truth files

def read_communities(path, relabel: RelabelMap | None = None, n: int | None = None) -> np.ndarray:
    """Parse a community file into a dense label per vertex.

    Accepts either one community per line (SNAP ``*.cmty`` style) or
    ``vertex community`` pairs; a file whose lines all have two tokens is
    read as pairs. Vertices absent from ``relabel`` are ignored; overlapping
    memberships keep the first community seen. Unlabelled vertices get -1.
    """
    with open(path) as fh:
        rows = [line.split() for line in fh if line.strip() and not line.startswith("#")]
    if not rows:
        raise ValueError(f"{path}: no communities")
    if n is None:
        n = len(relabel) if relabel is not None else None
    pairs = all(len(r) == 2 for r in rows)
    entries = []
    if pairs:
        names = {}
        for vertex, community in rows:
            entries.append((int(vertex), names.setdefault(community, len(names))))
    else:
        for label, row in enumerate(rows):
            entries.extend((int(v), label) for v in row)
    if relabel is not None:
        entries = [(relabel.to_dense(v), c) for v, c in entries if relabel.has(v)]
    if n is None:
        n = max(v for v, _ in entries) + 1
    labels = np.full(n, -1, dtype=np.int64)
    for v, c in entries:
        if labels[v] < 0:
            labels[v] = c
    return labels


def write_communities(path, labels, relabel: RelabelMap | None = None) -> None:
    """One community per line, space-separated original ids."""
    labels = np.asarray(labels)
    with open(path, "w") as fh:
        for c in np.unique(labels[labels >= 0]):
            ids = np.flatnonzero(labels == c)
            if relabel is not None:
                ids = relabel.original[ids]
            fh.write(" ".join(str(int(v)) for v in ids) + "\n")
