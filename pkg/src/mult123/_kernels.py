"""Hot loops: colour refinement for canonical forms and the labelling search.

Everything here sticks to the numba-compatible numpy subset so that the same
source runs compiled or interpreted (see :mod:`mult123._accel`).
"""

from __future__ import annotations

import numpy as np

from ._accel import njit

# search modes
MODE_P = 0
MODE_M = 1
MODE_S = 2
MODE_FOREST = 3
MODE_S1_MATCHING = 4

# search outcomes
PAUSED = 0
FOUND = 1
EXHAUSTED = 2

# state slots
ST_DEPTH = 0
ST_LOGTOP = 1


# ---------------------------------------------------------------------------
# canonical forms


@njit
def _row_less(key, a, b):
    for j in range(key.shape[1]):
        if key[a, j] != key[b, j]:
            return key[a, j] < key[b, j]
    return False


@njit
def _n_distinct(col):
    n = col.shape[0]
    seen = np.zeros(n + 1, np.bool_)
    c = 0
    for v in range(n):
        if not seen[col[v]]:
            seen[col[v]] = True
            c += 1
    return c


@njit
def refine_colours(adj, colours):
    """Coarsest equitable refinement of ``colours``.

    Colours are positional: a cell with colour ``p`` and size ``s`` covers
    positions ``p..p+s-1``. The result depends only on the isomorphism class
    of ``(adj, colours)``, so it can drive a canonical-labelling search.
    """
    n = adj.shape[0]
    col = colours.copy()
    key = np.zeros((n, n + 1), np.int64)
    new = np.zeros(n, np.int64)
    ncol = _n_distinct(col)
    while True:
        for v in range(n):
            key[v, 0] = col[v]
            for c in range(n):
                key[v, c + 1] = 0
            for w in range(n):
                if adj[v, w]:
                    key[v, col[w] + 1] += 1
        for v in range(n):
            r = 0
            for w in range(n):
                if _row_less(key, w, v):
                    r += 1
            new[v] = r
        nnew = _n_distinct(new)
        for v in range(n):
            col[v] = new[v]
        if nnew == ncol:
            return col
        ncol = nnew


@njit
def certificate(adj, colours):
    """Pack the adjacency matrix relabelled by a discrete colouring.

    Bits follow graph6 order ``x(0,1), x(0,2), x(1,2), x(0,3), ...`` with the
    first pair in the most significant position. Valid for ``n <= 11``.
    """
    n = adj.shape[0]
    inv = np.zeros(n, np.int64)
    for v in range(n):
        inv[colours[v]] = v
    code = 0
    for j in range(1, n):
        for i in range(j):
            code = (code << 1) | np.int64(adj[inv[i], inv[j]])
    return code


# ---------------------------------------------------------------------------
# labelling search


@njit
def _same_class(mode, a, b, cnt, pkey, ssum, k):
    if mode == MODE_M:
        for lab in range(1, k + 1):
            if cnt[a, lab] != cnt[b, lab]:
                return False
        return True
    if mode == MODE_S:
        return ssum[a] == ssum[b]
    for p in range(pkey.shape[1]):
        if pkey[a, p] != pkey[b, p]:
            return False
    return True


@njit
def _is_unit(pkey, a):
    for p in range(pkey.shape[1]):
        if pkey[a, p] != 0:
            return False
    return True


@njit
def _find(parent, x):
    while parent[x] != x:
        x = parent[x]
    return x


@njit
def _push(log_kind, log_a, st, kind, a):
    top = st[ST_LOGTOP]
    log_kind[top] = kind
    log_a[top] = a
    st[ST_LOGTOP] = top + 1


@njit
def _check_vertex(x, skip, i, mode, k, complete_at, indptr, indices, cnt, pkey, ssum,
                  parent, rank, s1deg, log_kind, log_a, st):
    """Compare a just-completed vertex with its completed neighbours."""
    for t in range(indptr[x], indptr[x + 1]):
        y = indices[t]
        if y == skip or complete_at[y] > i:
            continue
        if not _same_class(mode, x, y, cnt, pkey, ssum, k):
            continue
        if mode <= MODE_S:
            return False
        if mode == MODE_FOREST:
            rx = _find(parent, x)
            ry = _find(parent, y)
            if rx == ry:
                return False
            if rank[rx] < rank[ry]:
                rx, ry = ry, rx
            parent[ry] = rx
            _push(log_kind, log_a, st, 0, ry)
            if rank[rx] == rank[ry]:
                rank[rx] += 1
                _push(log_kind, log_a, st, 1, rx)
        else:
            if not _is_unit(pkey, x):
                return False
            s1deg[x] += 1
            _push(log_kind, log_a, st, 2, x)
            s1deg[y] += 1
            _push(log_kind, log_a, st, 2, y)
            if s1deg[x] > 1 or s1deg[y] > 1:
                return False
    return True


@njit
def _apply(i, lab, eu, ev, k, mode, pexp, complete_at, indptr, indices, cnt, pkey, ssum,
           parent, rank, s1deg, log_kind, log_a, log_start, st):
    u = eu[i]
    v = ev[i]
    cnt[u, lab] += 1
    cnt[v, lab] += 1
    for p in range(pkey.shape[1]):
        pkey[u, p] += pexp[lab, p]
        pkey[v, p] += pexp[lab, p]
    ssum[u] += lab
    ssum[v] += lab
    log_start[i] = st[ST_LOGTOP]
    ok = True
    if complete_at[u] == i:
        ok = _check_vertex(u, -1, i, mode, k, complete_at, indptr, indices, cnt, pkey, ssum,
                           parent, rank, s1deg, log_kind, log_a, st)
    if ok and complete_at[v] == i:
        skip = u if complete_at[u] == i else -1
        ok = _check_vertex(v, skip, i, mode, k, complete_at, indptr, indices, cnt, pkey, ssum,
                           parent, rank, s1deg, log_kind, log_a, st)
    return ok


@njit
def _undo(i, lab, eu, ev, pexp, cnt, pkey, ssum, parent, rank, s1deg, log_kind, log_a,
          log_start, st):
    top = st[ST_LOGTOP]
    while top > log_start[i]:
        top -= 1
        kind = log_kind[top]
        a = log_a[top]
        if kind == 0:
            parent[a] = a
        elif kind == 1:
            rank[a] -= 1
        else:
            s1deg[a] -= 1
    st[ST_LOGTOP] = top
    u = eu[i]
    v = ev[i]
    cnt[u, lab] -= 1
    cnt[v, lab] -= 1
    for p in range(pkey.shape[1]):
        pkey[u, p] -= pexp[lab, p]
        pkey[v, p] -= pexp[lab, p]
    ssum[u] -= lab
    ssum[v] -= lab


@njit
def labelling_search(eu, ev, complete_at, indptr, indices, k, mode, pexp, fixed,
                     labels, cnt, pkey, ssum, parent, rank, s1deg,
                     log_kind, log_a, log_start, st, max_nodes):
    """Resumable depth-first search for a labelling with no forbidden pattern.

    Edges are assigned in array order. A vertex is checked against its
    already-completed neighbours at the moment its last incident edge is
    labelled. All search state lives in the passed arrays, so a call that
    returns ``PAUSED`` (node budget spent) can be resumed by calling again.
    ``fixed[i] > 0`` pins edge ``i`` to that label.

    Returns ``(outcome, nodes_used)``.
    """
    m = eu.shape[0]
    nodes = 0
    i = st[ST_DEPTH]
    while True:
        if i >= m:
            st[ST_DEPTH] = i
            return FOUND, nodes
        if i < 0:
            st[ST_DEPTH] = i
            return EXHAUSTED, nodes
        if nodes >= max_nodes:
            st[ST_DEPTH] = i
            return PAUSED, nodes
        cur = labels[i]
        if cur > 0:
            _undo(i, cur, eu, ev, pexp, cnt, pkey, ssum, parent, rank, s1deg, log_kind, log_a,
                  log_start, st)
        if fixed[i] > 0:
            nxt = fixed[i] if cur == 0 else k + 1
        else:
            nxt = cur + 1
        if nxt > k:
            labels[i] = 0
            i -= 1
            continue
        labels[i] = nxt
        nodes += 1
        if _apply(i, nxt, eu, ev, k, mode, pexp, complete_at, indptr, indices, cnt, pkey, ssum,
                  parent, rank, s1deg, log_kind, log_a, log_start, st):
            i += 1


# ---------------------------------------------------------------------------
# class-forest check for incremental 2-labellings


@njit
def classes_acyclic(seeds, indptr, indices, present, key, mark, stamp, queue):
    """True iff the class component of every seed is a tree.

    A class component is a connected piece of the subgraph induced on present
    vertices with equal ``key``. ``mark`` holds visit stamps (caller bumps
    ``stamp`` between calls); ``queue`` is scratch of length ``n``.
    """
    for s_i in range(seeds.shape[0]):
        s = seeds[s_i]
        if not present[s] or mark[s] == stamp:
            continue
        mark[s] = stamp
        head = 0
        tail = 1
        queue[0] = s
        ends = 0
        kx = key[s]
        while head < tail:
            x = queue[head]
            head += 1
            for t in range(indptr[x], indptr[x + 1]):
                y = indices[t]
                if not present[y] or key[y] != kx:
                    continue
                ends += 1
                if mark[y] != stamp:
                    mark[y] = stamp
                    queue[tail] = y
                    tail += 1
        if ends // 2 != tail - 1:
            return False
    return True
