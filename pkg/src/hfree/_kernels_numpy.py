"""Pure numpy/Python twins of the compiled kernels.

Same names, same signatures, same outputs as _kernels_numba; no compilation
required.  Hosts are boolean adjacency matrices and the inner loops are
vectorised row operations, so this backend is typically one to two orders
of magnitude slower on large instances.  It exists for environments
without a working compiler toolchain and as an independent cross-check.
"""

from __future__ import annotations

import itertools

import numpy as np


def _unpack_plans(k: int, p: int, nbr_ptr: np.ndarray, nbr_flat: np.ndarray):
    plans = []
    for pi in range(p):
        pos = []
        for i in range(k):
            s, e = nbr_ptr[pi * k + i], nbr_ptr[pi * k + i + 1]
            pos.append(tuple(int(x) for x in nbr_flat[s:e]))
        plans.append(tuple(pos))
    return plans


def _exists_plan(adj: np.ndarray, free: np.ndarray, slots: list[int], nbrs, i: int, k: int) -> bool:
    sl = nbrs[i]
    if sl:
        cand = adj[slots[sl[0]]].copy()
        for s in sl[1:]:
            cand &= adj[slots[s]]
        cand &= free
    else:
        cand = free.copy()
    if i == k - 1:
        return bool(cand.any())
    for x in np.flatnonzero(cand):
        slots.append(int(x))
        free[x] = False
        if _exists_plan(adj, free, slots, nbrs, i + 1, k):
            free[x] = True
            slots.pop()
            return True
        free[x] = True
        slots.pop()
    return False


def _exists_anchored_dense(adj: np.ndarray, n: int, u: int, v: int, k: int, plans) -> bool:
    if k == 0:
        return True
    free = np.ones(n, dtype=bool)
    free[u] = free[v] = False
    for nbrs in plans:
        if _exists_plan(adj, free, [u, v], nbrs, 0, k):
            return True
    return False


def run_process(n, eu, ev, order, k, p, nbr_ptr, nbr_flat):
    plans = _unpack_plans(k, p, nbr_ptr, nbr_flat)
    adj = np.zeros((n, n), dtype=bool)
    accepted = np.zeros(eu.shape[0], dtype=bool)
    for idx in order:
        u, v = int(eu[idx]), int(ev[idx])
        if not _exists_anchored_dense(adj, n, u, v, k, plans):
            accepted[idx] = True
            adj[u, v] = adj[v, u] = True
    return accepted


def run_process_watched(n, eu, ev, order, k, p, nbr_ptr, nbr_flat, wu, wv):
    plans = _unpack_plans(k, p, nbr_ptr, nbr_flat)
    adj = np.zeros((n, n), dtype=bool)
    accepted = np.zeros(eu.shape[0], dtype=bool)
    blocked_rank = -1
    for t, idx in enumerate(order):
        u, v = int(eu[idx]), int(ev[idx])
        if not _exists_anchored_dense(adj, n, u, v, k, plans):
            accepted[idx] = True
            adj[u, v] = adj[v, u] = True
            if blocked_rank < 0 and _exists_anchored_dense(adj, n, int(wu), int(wv), k, plans):
                blocked_rank = t
    return accepted, np.int64(blocked_rank)


# ---------------------------------------------------------------------------
# Small-subgraph counts
# ---------------------------------------------------------------------------


def _bool_adj(n, eu, ev, mask=None):
    adj = np.zeros((n, n), dtype=bool)
    if mask is None:
        adj[eu, ev] = True
        adj[ev, eu] = True
    else:
        adj[eu[mask], ev[mask]] = True
        adj[ev[mask], eu[mask]] = True
    return adj


def cycle_counts(n, eu, ev):
    adj = _bool_adj(n, eu, ev)
    a1 = adj.astype(np.int64)
    a2 = a1 @ a1
    tri2 = int((a2 * a1).sum())  # ordered adjacent pairs weighted by codegree
    c3 = tri2 // 6
    off = a2.copy()
    np.fill_diagonal(off, 0)
    c4 = int((off * (off - 1) // 2).sum()) // 4
    if c3 != 0:
        return np.int64(c3), np.int64(c4), np.int64(-1)
    walks5 = int(((a2 @ a2) * a1).sum())  # trace of A^5
    return np.int64(c3), np.int64(c4), np.int64(walks5 // 10)


def open_pair_count(n, eu, ev, present, beta, t0):
    adj = _bool_adj(n, eu, ev, mask=present)
    cand = ~present & (beta >= t0)
    idx = np.flatnonzero(cand)
    count = 0
    chunk = 65536
    for lo in range(0, idx.shape[0], chunk):
        sl = idx[lo : lo + chunk]
        hits = (adj[eu[sl]] & adj[ev[sl]]).any(axis=1)
        count += int((~hits).sum())
    return np.int64(count)


# ---------------------------------------------------------------------------
# Exhaustive oracle helpers
# ---------------------------------------------------------------------------


def oracle_perm_sum(m, copy_ptr, copy_masks):
    masks = [
        [int(copy_masks[t]) for t in range(int(copy_ptr[e]), int(copy_ptr[e + 1]))]
        for e in range(m)
    ]
    total = 0
    nperm = 0
    for perm in itertools.permutations(range(m)):
        acc = 0
        cnt = 0
        for e in perm:
            blocked = False
            for cm in masks[e]:
                if cm & acc == cm:
                    blocked = True
                    break
            if not blocked:
                acc |= 1 << e
                cnt += 1
        total += cnt
        nperm += 1
    return np.int64(total), np.int64(nperm)


def extremal_max(m, copy_masks):
    best = 0
    total = 1 << m
    masks = copy_masks.astype(np.uint64)
    chunk = 1 << 16
    for lo in range(0, total, chunk):
        hi = min(lo + chunk, total)
        s = np.arange(lo, hi, dtype=np.uint64)
        pc = np.bitwise_count(s).astype(np.int64)
        live = pc > best
        if not live.any():
            continue
        sl = s[live]
        has_copy = np.zeros(sl.shape[0], dtype=bool)
        for cm in masks:
            has_copy |= (sl & cm) == cm
        ok = ~has_copy
        if ok.any():
            best = int(pc[live][ok].max())
    return np.int64(best)
