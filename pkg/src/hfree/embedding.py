"""Anchored subgraph embedding: plans, reference search, whole-graph matcher.

A copy of the pattern H through a candidate edge f = (u,v) is an injective
map of V(H) into the host that sends one pattern edge onto f and every
other pattern edge onto a host edge.  The search anchors a pattern edge
(a,b) on (u,v) and extends vertex by vertex; each new pattern vertex is
constrained by all of its already-placed pattern neighbours, so every
pattern edge is checked exactly once.

Plans are precomputed per pattern: one plan per orbit of ordered pattern
edges under the automorphism group (any copy through f is found through
some orbit representative, because composing an embedding with an
automorphism moves the anchor within its orbit).  Plans that turn out
structurally identical are merged.  The same plan arrays drive the pure
Python search here and both compiled and vectorised process kernels.

``contains_copy_full`` is an unanchored brute-force matcher kept
deliberately independent of the plan machinery; it serves as an oracle in
tests and inside maximality verification.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ParameterError
from .graphs import EvolvingGraph
from .patterns import PatternGraph, ordered_edge_orbits


@dataclass(frozen=True)
class EmbeddingPlan:
    """Flattened anchored-search schedule for one pattern."""

    pattern: PatternGraph
    positions: int  # vertices to place beyond the anchor pair
    anchors: tuple[tuple[int, int], ...]
    # per plan, per position: slot indices (0=anchor tail, 1=anchor head,
    # 2+i = position i) of the already-placed pattern neighbours
    nbr_slots: tuple[tuple[tuple[int, ...], ...], ...]
    # per plan: non-anchor pattern edges as slot pairs, for copy reconstruction
    edge_slots: tuple[tuple[tuple[int, int], ...], ...]
    nbr_ptr: np.ndarray
    nbr_flat: np.ndarray

    @property
    def num_plans(self) -> int:
        return len(self.anchors)


def _greedy_order(h: PatternGraph, a: int, b: int) -> list[int]:
    """Place remaining pattern vertices, preferring many already-placed neighbours."""
    placed = [a, b]
    remaining = [x for x in range(h.num_vertices) if x not in (a, b)]
    deg = h.degree_sequence()
    order = []
    while remaining:
        best = max(
            remaining,
            key=lambda x: (sum(1 for y in placed if y in h.neighbors(x)), deg[x], -x),
        )
        order.append(best)
        placed.append(best)
        remaining.remove(best)
    return order


def _plan_for_anchor(h: PatternGraph, a: int, b: int):
    order = _greedy_order(h, a, b)
    slot_of = {a: 0, b: 1}
    for i, x in enumerate(order):
        slot_of[x] = 2 + i
    nbrs = []
    for i, x in enumerate(order):
        earlier = tuple(sorted(slot_of[y] for y in h.neighbors(x) if slot_of[y] < 2 + i))
        nbrs.append(earlier)
    anchor = (min(a, b), max(a, b))
    e_slots = tuple(
        sorted(
            tuple(sorted((slot_of[u], slot_of[v])))
            for u, v in h.edges
            if (u, v) != anchor
        )
    )
    return tuple(nbrs), e_slots


@lru_cache(maxsize=128)
def build_plan(h: PatternGraph) -> EmbeddingPlan:
    if h.num_vertices < 2 or h.num_edges < 1:
        raise ParameterError("embedding needs a pattern with at least one edge")
    k = h.num_vertices - 2
    seen = {}
    anchors, nbr_all, edges_all = [], [], []
    for (a, b), _size in ordered_edge_orbits(h):
        nbrs, e_slots = _plan_for_anchor(h, a, b)
        key = (nbrs, frozenset(e_slots))
        if key in seen:
            continue
        seen[key] = True
        anchors.append((a, b))
        nbr_all.append(nbrs)
        edges_all.append(e_slots)
    p = len(anchors)
    ptr = np.zeros(p * k + 1, dtype=np.int64)
    flat = []
    for pi in range(p):
        for i in range(k):
            flat.extend(nbr_all[pi][i])
            ptr[pi * k + i + 1] = len(flat)
    return EmbeddingPlan(
        pattern=h,
        positions=k,
        anchors=tuple(anchors),
        nbr_slots=tuple(nbr_all),
        edge_slots=tuple(edges_all),
        nbr_ptr=ptr,
        nbr_flat=np.asarray(flat, dtype=np.int64),
    )


# ---------------------------------------------------------------------------
# Reference search on adjacency sets
# ---------------------------------------------------------------------------


def _assignments(g: EvolvingGraph, plan: EmbeddingPlan, pi: int, u: int, v: int):
    """Yield slot tuples (u, v, x_0, ..., x_{K-1}) for one plan, ascending order."""
    k = plan.positions
    slots = [u, v] + [-1] * k
    used = {u, v}
    nbrs = plan.nbr_slots[pi]

    def rec(i: int):
        if i == k:
            yield tuple(slots)
            return
        if nbrs[i]:
            sets = [g.neighbors(slots[s]) for s in nbrs[i]]
            cands = set.intersection(*sets) - used
        else:
            cands = set(range(g.n)) - used
        for x in sorted(cands):
            slots[2 + i] = x
            used.add(x)
            yield from rec(i + 1)
            used.discard(x)
            slots[2 + i] = -1

    yield from rec(0)


def _copy_edges(plan: EmbeddingPlan, pi: int, slots: tuple[int, ...]) -> frozenset[tuple[int, int]]:
    out = []
    for si, sj in plan.edge_slots[pi]:
        x, y = slots[si], slots[sj]
        out.append((x, y) if x < y else (y, x))
    return frozenset(out)


def iter_completions(g: EvolvingGraph, u: int, v: int, h: PatternGraph, forbidden_edge=None):
    """Yield the distinct copies of h through (u,v), each as a frozenset of host edges.

    The pair (u,v) itself plays the anchor; it need not be an edge of g and
    is never part of the yielded edge sets.  ``forbidden_edge`` excludes one
    host edge from use (so copies through (u,v) avoiding that edge are the
    only ones reported).
    """
    plan = build_plan(h)
    fkey = None
    if forbidden_edge is not None:
        a, b = forbidden_edge
        fkey = (a, b) if a < b else (b, a)
    seen: set[frozenset] = set()
    for pi in range(plan.num_plans):
        for slots in _assignments(g, plan, pi, u, v):
            copy = _copy_edges(plan, pi, slots)
            if fkey is not None and fkey in copy:
                continue
            if copy in seen:
                continue
            seen.add(copy)
            yield copy


def find_completion(g: EvolvingGraph, u: int, v: int, h: PatternGraph, forbidden_edge=None):
    """First copy of h through (u,v), or None."""
    for copy in iter_completions(g, u, v, h, forbidden_edge=forbidden_edge):
        return copy
    return None


# ---------------------------------------------------------------------------
# Independent whole-graph matcher (oracle style, no plan machinery)
# ---------------------------------------------------------------------------


def contains_copy_full(g: EvolvingGraph, h: PatternGraph) -> bool:
    """True when the host contains any copy of h, by direct backtracking."""
    n, hv = g.n, h.num_vertices
    if hv > n:
        return False
    hadj = [h.neighbors(x) for x in range(hv)]
    # order pattern vertices: first by degree, then keep each connected to
    # the placed prefix when possible
    order = sorted(range(hv), key=lambda x: -len(hadj[x]))
    for i in range(1, hv):
        if not any(order[j] in hadj[order[i]] for j in range(i)):
            for t in range(i + 1, hv):
                if any(order[j] in hadj[order[t]] for j in range(i)):
                    order[i], order[t] = order[t], order[i]
                    break
    pos = {x: i for i, x in enumerate(order)}
    image = [-1] * hv
    used = [False] * n

    def rec(i: int) -> bool:
        if i == hv:
            return True
        x = order[i]
        earlier = [y for y in hadj[x] if pos[y] < i]
        if earlier:
            base = min((g.neighbors(image[y]) for y in earlier), key=len)
            cands = [c for c in base if all(c in g.neighbors(image[y]) for y in earlier)]
        else:
            cands = range(n)
        for c in cands:
            if used[c]:
                continue
            image[x] = c
            used[c] = True
            if rec(i + 1):
                return True
            used[c] = False
            image[x] = -1
        return False

    return rec(0)
