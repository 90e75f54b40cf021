"""Hot loops. Each runs under numba or as plain Python (see ``_accel``).

All conductance comparisons are exact integer cross-multiplications.
"""
import numpy as np

from ._accel import njit


# ---------------------------------------------------------------- peel sweep

@njit
def peel_sweep_kernel(indptr, indices, degrees, order, maximize_g, live, alive):
    """Remove ``order`` front to back and track the best remaining set.

    Returns ``(best_pos, best_num, best_den, first_feasible, touches)``.
    ``best_pos`` is the index in ``order`` after whose removal the best set
    remains, or -1 when no state beat the whole-graph incumbent.
    """
    n = len(order)
    total = indptr[n]
    m = total // 2
    for u in range(n):
        live[u] = degrees[u]
        alive[u] = True
    cut = 0
    vol = total
    best_pos = -1
    # incumbent V: phi(V) = 1, which is g = 0 on the g = (1 - phi) / 2 scale
    best_num = 0 if maximize_g else 1
    best_den = 1
    first_feasible = -1
    touches = 0
    for i in range(n - 1):
        u = order[i]
        alive[u] = False
        cut += 2 * live[u] - degrees[u]
        vol -= degrees[u]
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            touches += 1
            if alive[v]:
                live[v] -= 1
        if vol > m or vol == 0:
            continue
        if first_feasible < 0:
            first_feasible = i
        if maximize_g:
            num = vol - cut
            den = 2 * vol
            if num * best_den > best_num * den:
                best_pos, best_num, best_den = i, num, den
        else:
            if cut * best_den < best_num * vol:
                best_pos, best_num, best_den = i, cut, vol
    return best_pos, best_num, best_den, first_feasible, touches


@njit
def prefix_sweep_kernel(indptr, indices, degrees, seq, in_set):
    """Add ``seq`` one vertex at a time; best prefix by conductance.

    Uses ``min(vol, 2m - vol)`` as denominator, with phi(V) = 1. Returns
    ``(best_len, best_cut, best_vol)``; earliest prefix wins ties.
    """
    total = indptr[len(indptr) - 1]
    cut = 0
    vol = 0
    best_len = 0
    best_cut = 0
    best_vol = 0
    best_num = 2
    best_den = 1
    for i in range(len(seq)):
        u = seq[i]
        inside = 0
        for k in range(indptr[u], indptr[u + 1]):
            if in_set[indices[k]]:
                inside += 1
        in_set[u] = True
        cut += degrees[u] - 2 * inside
        vol += degrees[u]
        den = min(vol, total - vol)
        if den == 0:
            if vol == 0:
                continue
            num = 1
            den = 1
        else:
            num = cut
        if num * best_den < best_num * den:
            best_num, best_den = num, den
            best_len, best_cut, best_vol = i + 1, cut, vol
    for i in range(len(seq)):
        in_set[seq[i]] = False
    return best_len, best_cut, best_vol


# ----------------------------------------------- min-ratio peeling (heap)

@njit
def _less(num, den, vtx, a, b):
    lhs = num[a] * den[b]
    rhs = num[b] * den[a]
    if lhs != rhs:
        return lhs < rhs
    return vtx[a] < vtx[b]


@njit
def _heap_push(num, den, vtx, size, key_num, key_den, v):
    i = size
    num[i] = key_num
    den[i] = key_den
    vtx[i] = v
    while i > 0:
        parent = (i - 1) // 2
        if _less(num, den, vtx, i, parent):
            num[i], num[parent] = num[parent], num[i]
            den[i], den[parent] = den[parent], den[i]
            vtx[i], vtx[parent] = vtx[parent], vtx[i]
            i = parent
        else:
            break
    return size + 1


@njit
def _heap_pop(num, den, vtx, size):
    top_num, top_den, top_v = num[0], den[0], vtx[0]
    size -= 1
    num[0], den[0], vtx[0] = num[size], den[size], vtx[size]
    i = 0
    while True:
        left = 2 * i + 1
        if left >= size:
            break
        child = left
        right = left + 1
        if right < size and _less(num, den, vtx, right, left):
            child = right
        if _less(num, den, vtx, child, i):
            num[i], num[child] = num[child], num[i]
            den[i], den[child] = den[child], den[i]
            vtx[i], vtx[child] = vtx[child], vtx[i]
            i = child
        else:
            break
    return top_num, top_den, top_v, size


@njit
def ratio_peel_kernel(indptr, indices, weights, live, alive, heap_num, heap_den, heap_vtx, order, level):
    """Repeatedly remove the live vertex minimising ``live[u] / weights[u]``.

    With ``weights = max(d(u), 1)`` this is min-degree-ratio peeling. Ties
    go to the smaller id. Stale heap entries are skipped on pop. ``level[i]`` receives the key
    numerator of the i-th removed vertex. Returns the number of heap pops.
    """
    n = len(indptr) - 1
    size = 0
    for u in range(n):
        live[u] = indptr[u + 1] - indptr[u]
        alive[u] = True
        size = _heap_push(heap_num, heap_den, heap_vtx, size, live[u], weights[u], u)
    pops = 0
    i = 0
    while i < n:
        key_num, key_den, u, size = _heap_pop(heap_num, heap_den, heap_vtx, size)
        pops += 1
        if not alive[u] or key_num != live[u]:
            continue
        alive[u] = False
        order[i] = u
        level[i] = key_num
        i += 1
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if alive[v]:
                live[v] -= 1
                size = _heap_push(heap_num, heap_den, heap_vtx, size, live[v], weights[v], v)
    return pops


@njit
def degeneracy_kernel(indptr, indices, live, head, tail, nxt, prv, order, level):
    """Min-degree peeling with one FIFO bucket per residual degree.

    Buckets start in id order; a vertex whose degree drops is appended to
    the tail of its new bucket. The pointer to the lowest nonempty bucket
    falls by at most one per removal, so the whole run is O(m + n).
    """
    n = len(indptr) - 1
    for b in range(len(head)):
        head[b] = -1
        tail[b] = -1
    for u in range(n):
        live[u] = indptr[u + 1] - indptr[u]
        b = live[u]
        nxt[u] = -1
        prv[u] = tail[b]
        if tail[b] >= 0:
            nxt[tail[b]] = u
        else:
            head[b] = u
        tail[b] = u
    cur = 0
    for i in range(n):
        while head[cur] < 0:
            cur += 1
        u = head[cur]
        head[cur] = nxt[u]
        if nxt[u] >= 0:
            prv[nxt[u]] = -1
        else:
            tail[cur] = -1
        order[i] = u
        level[i] = cur
        live[u] = -1
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            b = live[v]
            if b < 0:
                continue
            # unlink v from bucket b
            if prv[v] >= 0:
                nxt[prv[v]] = nxt[v]
            else:
                head[b] = nxt[v]
            if nxt[v] >= 0:
                prv[nxt[v]] = prv[v]
            else:
                tail[b] = prv[v]
            b -= 1
            live[v] = b
            nxt[v] = -1
            prv[v] = tail[b]
            if tail[b] >= 0:
                nxt[tail[b]] = v
            else:
                head[b] = v
            tail[b] = v
        if cur > 0:
            cur -= 1
    return n


# ------------------------------------------------------------- diffusions

@njit
def ppr_push_kernel(indptr, indices, degrees, q, alpha, eps, p, r, queue, in_queue):
    """Non-lazy push for the alpha-discount walk, FIFO order.

    On return every ``r[u] < eps * d(u)``. Returns the number of pushes.
    """
    n = len(indptr) - 1
    r[q] = 1.0
    head = 0
    tail = 0
    count = 0
    if r[q] >= eps * degrees[q]:
        queue[tail] = q
        tail = (tail + 1) % n
        count = 1
        in_queue[q] = True
    pushes = 0
    while count > 0:
        u = queue[head]
        head = (head + 1) % n
        count -= 1
        in_queue[u] = False
        ru = r[u]
        if ru < eps * degrees[u]:
            continue
        pushes += 1
        p[u] += alpha * ru
        r[u] = 0.0
        share = (1.0 - alpha) * ru / degrees[u]
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            r[v] += share
            if not in_queue[v] and r[v] >= eps * degrees[v]:
                queue[tail] = v
                tail = (tail + 1) % n
                count += 1
                in_queue[v] = True
    return pushes


@njit
def hk_relax_kernel(indptr, indices, degrees, q, t, thresholds, x, r_cur, r_next, frontier, next_frontier):
    """Level-synchronous heat-kernel relaxation.

    Level ``j`` residual above ``thresholds[j] * d(u)`` is moved into ``x``
    and spread to level ``j + 1`` with weight ``t / (j + 1)``; the last level
    is absorbed into ``x`` directly. ``x`` is the unscaled ``exp(tP)`` mass.
    Returns ``(pushes, dropped_mass)``.
    """
    levels = len(thresholds)
    r_cur[q] = 1.0
    frontier[0] = q
    size = 1
    pushes = 0
    dropped = 0.0
    for j in range(levels):
        next_size = 0
        coef = t / (j + 1)
        last = j + 1 == levels
        for idx in range(size):
            u = frontier[idx]
            ru = r_cur[u]
            r_cur[u] = 0.0
            if ru < thresholds[j] * degrees[u]:
                dropped += ru
                continue
            pushes += 1
            x[u] += ru
            share = coef * ru / degrees[u]
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if last:
                    x[v] += share
                else:
                    if r_next[v] == 0.0:
                        next_frontier[next_size] = v
                        next_size += 1
                    r_next[v] += share
        if last:
            break
        for idx in range(next_size):
            v = next_frontier[idx]
            r_cur[v] = r_next[v]
            r_next[v] = 0.0
            frontier[idx] = v
        size = next_size
        if size == 0:
            break
    return pushes, dropped


@njit
def walk_step_kernel(indptr, indices, degrees, z, support, out, out_support):
    """``out = z P`` restricted to the support of ``z``; returns new support size."""
    size = 0
    for idx in range(len(support)):
        u = support[idx]
        share = z[u] / degrees[u]
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if out[v] == 0.0:
                out_support[size] = v
                size += 1
            out[v] += share
    return size


# --------------------------------------------------------------- spectral

@njit
def lazy_walk_matvec(indptr, indices, inv_sqrt_deg, x, y):
    """``y = (x + D^-1/2 A D^-1/2 x) / 2``."""
    n = len(indptr) - 1
    for u in range(n):
        acc = 0.0
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            acc += x[v] * inv_sqrt_deg[v]
        y[u] = 0.5 * (x[u] + acc * inv_sqrt_deg[u])


# ----------------------------------------------------------------- oracle

@njit
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit
def brute_force_kernel(adjmask, degrees, m):
    """Enumerate all proper nonempty subsets of an ``n <= 20`` graph.

    Returns ``(phi_mask, phi_cut, phi_vol, g_mask, g_num, g_den)``: the
    minimum-conductance subset with vol <= m and the maximum-g subset.
    First in mask order wins ties.
    """
    n = len(degrees)
    full = (1 << n) - 1
    phi_mask = -1
    phi_cut = 1
    phi_vol = 0
    g_mask = -1
    g_num = -1
    g_den = 1
    for mask in range(1, full):
        vol = 0
        internal = 0
        for u in range(n):
            if (mask >> u) & 1:
                vol += degrees[u]
                internal += _popcount(adjmask[u] & mask)
        if vol == 0:
            continue
        if internal * g_den > g_num * (2 * vol):
            g_mask, g_num, g_den = mask, internal, 2 * vol
        if vol <= m:
            cut = vol - internal
            if phi_mask < 0 or cut * phi_vol < phi_cut * vol:
                phi_mask, phi_cut, phi_vol = mask, cut, vol
    return phi_mask, phi_cut, phi_vol, g_mask, g_num, g_den
