"""Compiled kernels: process traversal, cycle counts, exhaustive oracles.

Hosts are packed bit matrices (one row of ceil(n/64) uint64 words per
vertex).  The anchored existence search mirrors embedding.EmbeddingPlan:
for each plan, place the anchor on (u,v) and extend position by position,
each position's candidates being the AND of its placed neighbours' rows.

All functions here have pure numpy twins in _kernels_numpy with identical
signatures and identical outputs; the backend module picks one set.
"""

from __future__ import annotations

import numpy as np
from numba import njit

ONE = np.uint64(1)
ZERO = np.uint64(0)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


@njit(cache=True)
def _popcount(x):
    x = x - ((x >> ONE) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return np.int64((x * _H01) >> np.uint64(56))


@njit(cache=True)
def _tail_mask(n):
    r = n & 63
    if r == 0:
        return ~ZERO
    return (ONE << np.uint64(r)) - ONE


@njit(cache=True)
def _set_edge(adj, u, v):
    adj[u, v >> 6] |= ONE << np.uint64(v & 63)
    adj[v, u >> 6] |= ONE << np.uint64(u & 63)


@njit(cache=True)
def _exists_anchored(adj, words, tail, u, v, k, p, nbr_ptr, nbr_flat, slots, used, cand, cw, cb):
    """Is there a copy of the pattern through (u,v) in the bit-matrix host?"""
    if k == 0:
        return True
    for pi in range(p):
        slots[0] = u
        slots[1] = v
        for w in range(words):
            used[w] = ZERO
        used[u >> 6] |= ONE << np.uint64(u & 63)
        used[v >> 6] |= ONE << np.uint64(v & 63)
        i = 0
        entering = True
        alive = True
        while alive:
            if entering:
                s = nbr_ptr[pi * k + i]
                e = nbr_ptr[pi * k + i + 1]
                if s == e:
                    for w in range(words):
                        cand[i, w] = ~used[w]
                    cand[i, words - 1] &= tail
                else:
                    r0 = slots[nbr_flat[s]]
                    for w in range(words):
                        cand[i, w] = adj[r0, w]
                    for t in range(s + 1, e):
                        rt = slots[nbr_flat[t]]
                        for w in range(words):
                            cand[i, w] &= adj[rt, w]
                    for w in range(words):
                        cand[i, w] &= ~used[w]
                if i == k - 1:
                    hit = False
                    for w in range(words):
                        if cand[i, w] != ZERO:
                            hit = True
                            break
                    if hit:
                        return True
                    i -= 1
                    if i < 0:
                        alive = False
                    else:
                        x = slots[2 + i]
                        used[x >> 6] &= ~(ONE << np.uint64(x & 63))
                        entering = False
                    continue
                cw[i] = 0
                cb[i] = cand[i, 0]
                entering = False
                continue
            w = cw[i]
            bits = cb[i]
            while bits == ZERO and w + 1 < words:
                w += 1
                bits = cand[i, w]
            if bits == ZERO:
                i -= 1
                if i < 0:
                    alive = False
                else:
                    x = slots[2 + i]
                    used[x >> 6] &= ~(ONE << np.uint64(x & 63))
                continue
            b = bits & (~bits + ONE)
            cb[i] = bits ^ b
            cw[i] = w
            x = w * 64 + _popcount(b - ONE)
            slots[2 + i] = x
            used[x >> 6] |= ONE << np.uint64(x & 63)
            i += 1
            entering = True
    return False


@njit(cache=True)
def run_process(n, eu, ev, order, k, p, nbr_ptr, nbr_flat):
    """Traverse edges in birthtime order, accepting unless a copy completes."""
    m = order.shape[0]
    words = (n + 63) // 64
    adj = np.zeros((n, words), dtype=np.uint64)
    accepted = np.zeros(eu.shape[0], dtype=np.bool_)
    kk = max(k, 1)
    slots = np.empty(kk + 2, dtype=np.int64)
    used = np.empty(words, dtype=np.uint64)
    cand = np.empty((kk, words), dtype=np.uint64)
    cw = np.empty(kk, dtype=np.int64)
    cb = np.empty(kk, dtype=np.uint64)
    tail = _tail_mask(n)
    for t in range(m):
        idx = order[t]
        u = eu[idx]
        v = ev[idx]
        if not _exists_anchored(adj, words, tail, u, v, k, p, nbr_ptr, nbr_flat, slots, used, cand, cw, cb):
            accepted[idx] = True
            _set_edge(adj, u, v)
    return accepted


@njit(cache=True)
def run_process_watched(n, eu, ev, order, k, p, nbr_ptr, nbr_flat, wu, wv):
    """run_process plus the rank at which the watched pair (wu,wv) first gets blocked.

    The watched pair must not appear in ``order``.  Returns (accepted,
    blocked_rank) where blocked_rank is the index into ``order`` of the
    acceptance that first completes a copy through (wu,wv), or -1.
    """
    m = order.shape[0]
    words = (n + 63) // 64
    adj = np.zeros((n, words), dtype=np.uint64)
    accepted = np.zeros(eu.shape[0], dtype=np.bool_)
    kk = max(k, 1)
    slots = np.empty(kk + 2, dtype=np.int64)
    used = np.empty(words, dtype=np.uint64)
    cand = np.empty((kk, words), dtype=np.uint64)
    cw = np.empty(kk, dtype=np.int64)
    cb = np.empty(kk, dtype=np.uint64)
    tail = _tail_mask(n)
    blocked_rank = np.int64(-1)
    for t in range(m):
        idx = order[t]
        u = eu[idx]
        v = ev[idx]
        if not _exists_anchored(adj, words, tail, u, v, k, p, nbr_ptr, nbr_flat, slots, used, cand, cw, cb):
            accepted[idx] = True
            _set_edge(adj, u, v)
            if blocked_rank < 0 and _exists_anchored(
                adj, words, tail, wu, wv, k, p, nbr_ptr, nbr_flat, slots, used, cand, cw, cb
            ):
                blocked_rank = t
    return accepted, blocked_rank


# ---------------------------------------------------------------------------
# Small-subgraph counts for trimmed graphs
# ---------------------------------------------------------------------------


@njit(cache=True)
def cycle_counts(n, eu, ev):
    """(triangles, 4-cycles, 5-cycles) of the graph with the given edges.

    The 5-cycle count uses the closed-5-walk identity, which is only valid
    on triangle-free input; -1 is returned for it otherwise.
    """
    words = (n + 63) // 64
    adj = np.zeros((n, words), dtype=np.uint64)
    me = eu.shape[0]
    deg = np.zeros(n, dtype=np.int64)
    for i in range(me):
        _set_edge(adj, eu[i], ev[i])
        deg[eu[i]] += 1
        deg[ev[i]] += 1
    a2 = np.zeros((n, n), dtype=np.int16)
    tri2 = np.int64(0)
    quad = np.int64(0)
    for u in range(n):
        for v in range(u + 1, n):
            cd = np.int64(0)
            for w in range(words):
                x = adj[u, w] & adj[v, w]
                if x != ZERO:
                    cd += _popcount(x)
            if cd > 0:
                a2[u, v] = np.int16(cd)
                a2[v, u] = np.int16(cd)
                if adj[u, v >> 6] & (ONE << np.uint64(v & 63)) != ZERO:
                    tri2 += cd
                quad += cd * (cd - 1) // 2
    c3 = tri2 // 3
    c4 = quad // 2
    c5 = np.int64(-1)
    if c3 == 0:
        # adjacency lists for the 5-cycle pass
        off = np.zeros(n + 1, dtype=np.int64)
        for v in range(n):
            off[v + 1] = off[v] + deg[v]
        fill = off[:n].copy()
        nlist = np.empty(2 * me, dtype=np.int32)
        for i in range(me):
            u = eu[i]
            v = ev[i]
            nlist[fill[u]] = v
            fill[u] += 1
            nlist[fill[v]] = u
            fill[v] += 1
        tot = np.int64(0)
        for i in range(me):
            u = eu[i]
            v = ev[i]
            for xi in range(off[u], off[u + 1]):
                row = a2[nlist[xi]]
                for zi in range(off[v], off[v + 1]):
                    tot += row[nlist[zi]]
        c5 = tot // 5
    return c3, c4, c5


@njit(cache=True)
def open_pair_count(n, eu, ev, present, beta, t0):
    """Count untraversed pairs (beta >= t0, not present) with no common neighbour.

    ``present`` marks the edges of the (triangle-free) graph at time t0;
    an open pair could still be accepted without closing a triangle.
    """
    words = (n + 63) // 64
    adj = np.zeros((n, words), dtype=np.uint64)
    m = eu.shape[0]
    for i in range(m):
        if present[i]:
            _set_edge(adj, eu[i], ev[i])
    count = np.int64(0)
    for i in range(m):
        if present[i] or beta[i] < t0:
            continue
        u = eu[i]
        v = ev[i]
        hit = False
        for w in range(words):
            if adj[u, w] & adj[v, w] != ZERO:
                hit = True
                break
        if not hit:
            count += 1
    return count


# ---------------------------------------------------------------------------
# Exhaustive oracle helpers
# ---------------------------------------------------------------------------


@njit(cache=True)
def _eval_perm(perm, copy_ptr, copy_masks):
    acc = ZERO
    cnt = np.int64(0)
    for j in range(perm.shape[0]):
        e = perm[j]
        blocked = False
        for t in range(copy_ptr[e], copy_ptr[e + 1]):
            cm = copy_masks[t]
            if cm & acc == cm:
                blocked = True
                break
        if not blocked:
            acc |= ONE << np.uint64(e)
            cnt += 1
    return cnt


@njit(cache=True)
def oracle_perm_sum(m, copy_ptr, copy_masks):
    """Sum of accepted-edge counts over all m! traversal orders (Heap's algorithm)."""
    perm = np.arange(m, dtype=np.int64)
    c = np.zeros(m, dtype=np.int64)
    total = np.int64(_eval_perm(perm, copy_ptr, copy_masks))
    nperm = np.int64(1)
    i = 0
    while i < m:
        if c[i] < i:
            if i % 2 == 0:
                tmp = perm[0]
                perm[0] = perm[i]
                perm[i] = tmp
            else:
                tmp = perm[c[i]]
                perm[c[i]] = perm[i]
                perm[i] = tmp
            total += _eval_perm(perm, copy_ptr, copy_masks)
            nperm += 1
            c[i] += 1
            i = 0
        else:
            c[i] = 0
            i += 1
    return total, nperm


@njit(cache=True)
def extremal_max(m, copy_masks):
    """Maximum edges of a pattern-free subgraph: scan all 2^m edge subsets."""
    best = np.int64(0)
    nm = copy_masks.shape[0]
    total = np.int64(1) << np.int64(m)
    s = np.int64(0)
    while s < total:
        su = np.uint64(s)
        pc = _popcount(su)
        if pc > best:
            ok = True
            for t in range(nm):
                cm = copy_masks[t]
                if cm & su == cm:
                    ok = False
                    break
            if ok:
                best = pc
        s += 1
    return best
