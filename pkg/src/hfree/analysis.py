"""Structural analysis of the constrained process: witness trees and audits.

This module turns the survival argument for a withheld edge f into concrete,
checkable objects over a sampled host graph:

* asymptotic parameter bundle (density boost, sampling density, window
  factor, tree depth, per-edge copy density) with explicit overrides,
* the survival tree rooted at f, alternating edge and copy levels,
* the good-tree audit (no copy meets f, copies pairwise edge-disjoint,
  near-full outdegrees) and the per-edge extension-count band,
* exhaustive search for bad sequences of overlapping copies,
* deterministic pruning to a fixed outdegree and bottom-up evaluation of
  the recursive blocked-edge event,
* exact conflict-graph statistics over the copies through one edge.

Everything here is deterministic given its inputs; randomness lives in the
samplers and the estimator harness.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Mapping

import numpy as np

from .embedding import iter_completions
from .errors import CapabilityError, DataError, NodeCapExceeded, ParameterError
from .graphs import EvolvingGraph, edge_count, edge_id
from .patterns import PatternGraph, automorphism_count

Edge = tuple[int, int]

_PARAM_FIELDS = ("boost", "rho", "window_factor", "tree_depth", "copy_density")


def _norm_edge(e) -> Edge:
    u, v = e
    if u == v:
        raise ParameterError(f"loop ({u},{v}) is not an edge")
    return (u, v) if u < v else (v, u)


# ---------------------------------------------------------------------------
# Asymptotic parameters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AsymptoticParams:
    """Parameter bundle for a host scale n and a fixed pattern.

    Effective values live in the named fields; ``formula`` keeps the values
    the defining expressions give, and ``overrides`` records which fields a
    caller replaced (the formulas are hopeless at desk scale, so experiments
    override freely and the provenance matters).
    """

    n: int
    pattern: str
    pattern_vertices: int
    pattern_edges: int
    boost: float
    rho: float
    window_factor: int
    tree_depth: int
    copy_density: float
    formula: Mapping[str, float]
    overrides: Mapping[str, float]

    @property
    def critical_exponent(self) -> float:
        """Exponent (v-2)/(e-1) governing the sampling density."""
        return (self.pattern_vertices - 2) / (self.pattern_edges - 1)

    @property
    def window(self) -> float:
        """Small-birthtime window window_factor * n^(-critical_exponent)."""
        return self.window_factor * float(self.n) ** (-self.critical_exponent)

    @property
    def expected_level_width(self) -> float:
        """Nominal per-edge extension count copy_density * boost^(e-1)."""
        return self.copy_density * self.boost ** (self.pattern_edges - 1)

    @property
    def band_halfwidth(self) -> float:
        """Half the width of the extension-count band, boost^(e/2-1/3)/2."""
        return self.boost ** (self.pattern_edges / 2 - 1 / 3) / 2


def extension_count_complete(n: int, h: PatternGraph) -> int:
    """Copies of the pattern through one fixed edge of the complete graph.

    Closed form: C(n-2, v-2) * 2 * e * (v-2)! / |Aut|, evaluated exactly.
    """
    v, e = h.num_vertices, h.num_edges
    if n < v:
        return 0
    count = Fraction(
        math.comb(n - 2, v - 2) * 2 * e * math.factorial(v - 2),
        automorphism_count(h),
    )
    if count.denominator != 1:
        raise DataError(f"non-integer copy count {count} for {h.label()}")
    return int(count)


def asymptotic_params(
    n: int,
    h: PatternGraph,
    *,
    boost: float | None = None,
    rho: float | None = None,
    window_factor: int | None = None,
    tree_depth: int | None = None,
    copy_density: float | None = None,
) -> AsymptoticParams:
    """Evaluate the parameter formulas at n, applying any overrides.

    Formulas: boost = n^(1/sqrt(ln n)); rho = boost * n^(-(v-2)/(e-1));
    window_factor = floor((ln n)^(1/(8e))); tree_depth = 2*floor((ln n)^(1/4))+1;
    copy_density = (copies through one edge of K_n) * n^(-(v-2)).

    pre: n >= 3.  The resulting rho must be a usable sampling density; if the
    formula value exceeds 1 and no rho override is given, this errors with
    guidance rather than returning an unusable bundle.
    """
    if n < 3:
        raise ParameterError("need n >= 3")
    v, e = h.num_vertices, h.num_edges
    ln_n = math.log(n)
    f_boost = float(n) ** (1.0 / math.sqrt(ln_n))
    f_rho = f_boost * float(n) ** (-(v - 2) / (e - 1))
    f_window = math.floor(ln_n ** (1.0 / (8 * e)))
    f_depth = 2 * math.floor(ln_n**0.25) + 1
    f_density = extension_count_complete(n, h) * float(n) ** (-(v - 2))
    formula = {
        "boost": f_boost,
        "rho": f_rho,
        "window_factor": f_window,
        "tree_depth": f_depth,
        "copy_density": f_density,
    }
    given = {
        "boost": boost,
        "rho": rho,
        "window_factor": window_factor,
        "tree_depth": tree_depth,
        "copy_density": copy_density,
    }
    overrides = {k: val for k, val in given.items() if val is not None}
    eff = {k: overrides.get(k, formula[k]) for k in _PARAM_FIELDS}
    if eff["rho"] > 1.0:
        raise ParameterError(
            f"formula density rho = {eff['rho']:.4g} exceeds 1 at n = {n}; "
            "pass an explicit rho override (the formulas only make sense at "
            "astronomically large n)"
        )
    return AsymptoticParams(
        n=n,
        pattern=h.label(),
        pattern_vertices=v,
        pattern_edges=e,
        boost=float(eff["boost"]),
        rho=float(eff["rho"]),
        window_factor=int(eff["window_factor"]),
        tree_depth=int(eff["tree_depth"]),
        copy_density=float(eff["copy_density"]),
        formula=formula,
        overrides=overrides,
    )


def default_prune_target(params: AsymptoticParams) -> int:
    """Outdegree the regularized tree keeps at every expanded edge node."""
    width = params.copy_density * params.boost ** (params.pattern_edges - 1)
    return math.floor(width) - math.floor(
        params.boost ** (params.pattern_edges / 2 - 1 / 3)
    )


# ---------------------------------------------------------------------------
# Survival trees
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class SurvivalTree:
    """Rooted tree alternating edge nodes (even depth) and copy nodes (odd).

    The root carries the withheld edge.  Children of an expanded edge node g
    are the copies through g found in the host, minus those containing the
    grandparent's edge; children of a copy node are exactly its edges.  Node
    identity is positional: two nodes may carry equal labels, and audits
    treat them as distinct.

    ``lambda_count[v]`` caches the pre-exclusion extension count of an
    expanded edge node (-1 where no expansion was attempted, i.e. bottom
    leaves and nodes beyond a partial build).
    """

    n: int
    depth_target: int
    root_edge: Edge
    parent: list[int] = field(default_factory=list)
    depth: list[int] = field(default_factory=list)
    children: list[list[int]] = field(default_factory=list)
    edge_label: list[Edge | None] = field(default_factory=list)
    copy_label: list[frozenset | None] = field(default_factory=list)
    lambda_count: list[int] = field(default_factory=list)

    @property
    def num_nodes(self) -> int:
        return len(self.parent)

    def is_edge_node(self, v: int) -> bool:
        return self.depth[v] % 2 == 0

    def add_node(
        self,
        parent: int,
        edge: Edge | None = None,
        copy: frozenset | None = None,
    ) -> int:
        idx = len(self.parent)
        self.parent.append(parent)
        self.depth.append(0 if parent < 0 else self.depth[parent] + 1)
        self.children.append([])
        self.edge_label.append(edge)
        self.copy_label.append(copy)
        self.lambda_count.append(-1)
        if parent >= 0:
            self.children[parent].append(idx)
        return idx

    def edge_nodes(self) -> Iterable[int]:
        return (v for v in range(self.num_nodes) if self.is_edge_node(v))

    def copy_nodes(self) -> Iterable[int]:
        return (v for v in range(self.num_nodes) if not self.is_edge_node(v))


class _ExtensionCache:
    """Memoized copies-through-an-edge lookup against a fixed host."""

    def __init__(self, host: EvolvingGraph, h: PatternGraph):
        self.host = host
        self.h = h
        self._cache: dict[Edge, tuple[frozenset, ...]] = {}

    def __call__(self, g: Edge) -> tuple[frozenset, ...]:
        hit = self._cache.get(g)
        if hit is None:
            copies = set(iter_completions(self.host, g[0], g[1], self.h))
            # sorted edge tuples give a stable, order-independent listing
            hit = tuple(sorted(copies, key=lambda c: tuple(sorted(c))))
            self._cache[g] = hit
        return hit


def build_tree(
    f: Edge,
    d: int,
    host: EvolvingGraph,
    h: PatternGraph,
    *,
    node_cap: int = 1_000_000,
) -> SurvivalTree:
    """Build the survival tree of height 2d for the withheld edge f.

    Level 1 holds every copy through f present in the host; deeper copy
    children of an edge node drop the copies containing the grandparent's
    edge.  Expansion stops at depth 2d.  A tree larger than ``node_cap``
    nodes raises NodeCapExceeded carrying the partial structure.

    pre: d >= 1; f has both endpoints in the host's vertex range.
    """
    if d < 1:
        raise ParameterError("need depth d >= 1")
    f = _norm_edge(f)
    if not (0 <= f[0] < host.n and 0 <= f[1] < host.n):
        raise ParameterError(f"edge {f} outside vertex range of n = {host.n}")
    lam = _ExtensionCache(host, h)
    t = SurvivalTree(n=host.n, depth_target=d, root_edge=f)
    t.add_node(-1, edge=f)
    queue: deque[int] = deque([0])
    while queue:
        v = queue.popleft()
        g = t.edge_label[v]
        copies = lam(g)
        t.lambda_count[v] = len(copies)
        if t.depth[v] >= 2:
            banned = t.edge_label[t.parent[t.parent[v]]]
            copies = tuple(c for c in copies if banned not in c)
        for c in copies:
            if t.num_nodes + 1 + len(c) > node_cap:
                raise NodeCapExceeded(
                    f"survival tree exceeded {node_cap} nodes", partial=t
                )
            o = t.add_node(v, copy=c)
            for g2 in sorted(c):
                w = t.add_node(o, edge=g2)
                if t.depth[w] < 2 * d:
                    queue.append(w)
    return t


# ---------------------------------------------------------------------------
# Good-tree audit and the extension-count band
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GoodTreeReport:
    """Outcome of the three structural checks on a survival tree.

    The first check fails when some copy label contains the root edge, the
    second when two copy nodes (positionally distinct, labels may repeat)
    share an edge, the third when some expandable edge node lost more
    children to the grandparent exclusion than the threshold allows.
    """

    p1_ok: bool
    p2_ok: bool
    p3_ok: bool
    p3_threshold: int
    max_deficit: int
    max_deficit_node: int | None
    deficit_histogram: Mapping[int, int]
    p1_witness: tuple[int, frozenset] | None = None
    p2_witness: tuple[int, int, Edge] | None = None

    @property
    def ok(self) -> bool:
        return self.p1_ok and self.p2_ok and self.p3_ok


def check_good(
    t: SurvivalTree,
    host: EvolvingGraph,
    h: PatternGraph,
    *,
    threshold: int | None = None,
) -> GoodTreeReport:
    """Audit a survival tree built over ``host``.

    The outdegree deficit of an edge node is its host extension count minus
    its actual child count; every edge node above the bottom level is
    audited, childless ones included.  ``threshold`` defaults to the
    pattern's edge count (a measured stand-in for "bounded slack").
    """
    if threshold is None:
        threshold = h.num_edges
    f = t.root_edge
    p1_ok, p1_wit = True, None
    p2_ok, p2_wit = True, None
    first_claim: dict[Edge, int] = {}
    for v in t.copy_nodes():
        label = t.copy_label[v]
        if p1_ok and f in label:
            p1_ok, p1_wit = False, (v, label)
        for g in sorted(label):
            prev = first_claim.get(g)
            if prev is None:
                first_claim[g] = v
            elif p2_ok:
                p2_ok, p2_wit = False, (prev, v, g)
    lam = _ExtensionCache(host, h)
    p3_ok = True
    max_deficit, argmax = 0, None
    hist: dict[int, int] = {}
    cutoff = 2 * t.depth_target
    for v in t.edge_nodes():
        if t.depth[v] >= cutoff:
            continue
        deficit = len(lam(t.edge_label[v])) - len(t.children[v])
        hist[deficit] = hist.get(deficit, 0) + 1
        if deficit > max_deficit or argmax is None:
            max_deficit, argmax = deficit, v
        if deficit > threshold:
            p3_ok = False
    return GoodTreeReport(
        p1_ok=p1_ok,
        p2_ok=p2_ok,
        p3_ok=p3_ok,
        p3_threshold=threshold,
        max_deficit=max_deficit,
        max_deficit_node=argmax,
        deficit_histogram=hist,
        p1_witness=p1_wit,
        p2_witness=p2_wit,
    )


@dataclass(frozen=True)
class ExtensionBandReport:
    """Per-edge extension counts of the host against the two-sided band."""

    ok: bool
    low: float
    high: float
    counts: np.ndarray
    violations: tuple[tuple[Edge, int], ...]

    def histogram(self) -> dict[int, int]:
        vals, freq = np.unique(self.counts, return_counts=True)
        return {int(a): int(b) for a, b in zip(vals, freq)}


def check_E1(
    host: EvolvingGraph, h: PatternGraph, params: AsymptoticParams
) -> ExtensionBandReport:
    """Check every potential edge's extension count against the band.

    The band is expected_level_width +- band_halfwidth and the count is
    taken over all n-choose-2 vertex pairs, presence in the host not
    required.  At most 20 out-of-band witnesses are kept.
    """
    n = host.n
    lam = _ExtensionCache(host, h)
    counts = np.zeros(edge_count(n), dtype=np.int64)
    low = params.expected_level_width - params.band_halfwidth
    high = params.expected_level_width + params.band_halfwidth
    violations: list[tuple[Edge, int]] = []
    for u in range(n - 1):
        for v in range(u + 1, n):
            c = len(lam((u, v)))
            counts[edge_id(n, u, v)] = c
            if not (low <= c <= high) and len(violations) < 20:
                violations.append(((u, v), c))
    return ExtensionBandReport(
        ok=not violations,
        low=low,
        high=high,
        counts=counts,
        violations=tuple(violations),
    )

# ---------------------------------------------------------------------------
# Bad sequences
# ---------------------------------------------------------------------------


def canonical_label(edges: Iterable[Edge]) -> str:
    """Isomorphism-invariant label of a small graph given by its edges.

    Brute-force minimization over vertex relabelings; fine for the handful
    of vertices an overlap subgraph can touch.
    """
    es = [_norm_edge(e) for e in edges]
    verts = sorted({v for e in es for v in e})
    k = len(verts)
    if k > 10:
        raise CapabilityError(f"canonical form limited to 10 vertices, got {k}")
    index = {v: i for i, v in enumerate(verts)}
    base = [(index[u], index[v]) for u, v in es]
    best = None
    for perm in permutations(range(k)):
        relabeled = tuple(
            sorted((perm[u], perm[v]) if perm[u] < perm[v] else (perm[v], perm[u])
                   for u, v in base)
        )
        if best is None or relabeled < best:
            best = relabeled
    pairs = ",".join(f"{u}{v}" for u, v in best or ())
    return f"v{k}:{pairs}"


@dataclass(frozen=True)
class BadSequence:
    """A chain of copies whose last member folds back onto the earlier ones.

    Every copy is anchored on an edge of the running union (the withheld
    edge plus all earlier copies); each copy before the last meets the union
    in exactly two vertices and no edge, and the last meets it in at least
    three vertices and at most e-2 edges.  ``overlap_edges`` is the anchor
    of the last copy together with the edges it shares with the union, and
    ``overlap_type`` its isomorphism label ("vertex-only" when the last copy
    shares vertices but no edges).
    """

    copies: tuple[frozenset, ...]
    anchors: tuple[Edge, ...]
    shared_vertices: int
    shared_edges: int
    overlap_edges: frozenset
    overlap_type: str


class BadSequenceList(list):
    """Search result; ``complete`` is False when the node cap cut it short."""

    def __init__(self, *args):
        super().__init__(*args)
        self.complete: bool = True
        self.explored: int = 0


def _copy_vertices(edges: frozenset) -> frozenset:
    return frozenset(v for e in edges for v in e)


def find_bad_sequences(
    host: EvolvingGraph,
    f: Edge,
    h: PatternGraph,
    max_len: int | None = None,
    cap: int = 1_000_000,
) -> BadSequenceList:
    """Exhaustively list the bad sequences realized in ``host`` plus f.

    Copies are drawn from the host with the withheld edge adjoined (the
    last copy may legitimately use f or earlier-copy edges, and in sparse
    hosts f itself need not be present).  The search extends prefixes only
    through copies meeting the union in exactly two vertices and no edge,
    which keeps it shallow on sparse hosts.  ``max_len`` defaults to twice
    the tree depth the parameter formulas give at the host's n.  After
    ``cap`` candidate inspections the partial result is returned with
    ``complete = False``.
    """
    f = _norm_edge(f)
    if max_len is None:
        max_len = 2 * (2 * math.floor(math.log(host.n) ** 0.25) + 1)
    out = BadSequenceList()
    if max_len < 2:
        return out
    pool = host.copy()
    if not pool.has_edge(*f):
        pool.add_edge(*f)
    lam = _ExtensionCache(pool, h)
    e_max = h.num_edges - 2
    seq: list[frozenset] = []
    anchors: list[Edge] = []

    def candidates(union_edges: frozenset) -> list[tuple[frozenset, Edge]]:
        seen: dict[frozenset, Edge] = {}
        for g in sorted(union_edges):
            for c in lam(g):
                if c not in seen:
                    seen[c] = g
        return sorted(seen.items(), key=lambda it: tuple(sorted(it[0])))

    def walk(union_edges: frozenset, union_verts: frozenset) -> bool:
        # returns False once the cap is hit so callers unwind immediately
        for c, g in candidates(union_edges):
            out.explored += 1
            if out.explored > cap:
                out.complete = False
                return False
            shared_e = len(c & union_edges)
            shared_v = len(_copy_vertices(c) & union_verts)
            if seq and shared_v >= 3 and shared_e <= e_max:
                overlap = frozenset([g]) | (c & union_edges)
                out.append(
                    BadSequence(
                        copies=tuple(seq) + (c,),
                        anchors=tuple(anchors) + (g,),
                        shared_vertices=shared_v,
                        shared_edges=shared_e,
                        overlap_edges=overlap,
                        overlap_type=(
                            canonical_label(overlap) if shared_e else "vertex-only"
                        ),
                    )
                )
            if shared_v == 2 and shared_e == 0 and len(seq) < max_len - 1:
                seq.append(c)
                anchors.append(g)
                alive = walk(union_edges | c, union_verts | _copy_vertices(c))
                seq.pop()
                anchors.pop()
                if not alive:
                    return False
        return True

    walk(frozenset([f]), frozenset(f))
    return out


# ---------------------------------------------------------------------------
# Regularized pruning and the blocked-edge recursion
# ---------------------------------------------------------------------------


def prune_to_RT(t: SurvivalTree, target: int) -> SurvivalTree:
    """Trim every expanded edge node to exactly ``target`` copy children.

    Kept children are the ones with lexicographically smallest copy labels,
    original order preserved; copy nodes keep all their edge children.
    Edge nodes that were already childless stay leaves.  An edge node with
    some but fewer than ``target`` children is an error naming the node.

    pre: target >= 0.
    """
    if target < 0:
        raise ParameterError("need target >= 0")
    out = SurvivalTree(n=t.n, depth_target=t.depth_target, root_edge=t.root_edge)

    def kept_children(v: int) -> list[int]:
        kids = t.children[v]
        if not t.is_edge_node(v) or not kids:
            return list(kids)
        if len(kids) < target:
            raise ParameterError(
                f"edge node {v} has {len(kids)} copy children, need {target}"
            )
        ranked = sorted(kids, key=lambda c: tuple(sorted(t.copy_label[c])))
        keep = set(ranked[:target])
        return [c for c in kids if c in keep]

    stack = [(0, -1)]
    while stack:
        v, new_parent = stack.pop()
        idx = out.add_node(new_parent, edge=t.edge_label[v], copy=t.copy_label[v])
        out.lambda_count[idx] = t.lambda_count[v]
        for c in reversed(kept_children(v)):
            stack.append((c, idx))
    return out


def eval_B(t: SurvivalTree, b) -> np.ndarray:
    """Evaluate the blocked-edge event bottom-up at every node.

    At an edge node the event holds iff some copy child witnesses it: every
    edge of the copy was born before the parent edge and its own event
    fails.  Bottom edge nodes (and childless ones generally) evaluate
    False.  The returned array carries the event per edge node and the
    inner all-edges-early conjunction per copy node.

    pre: b covers the tree's vertex range; the tree is fully built (every
    copy node has one child per edge of its label).
    """
    if b.n != t.n:
        raise DataError(f"birthtimes for n = {b.n}, tree over n = {t.n}")
    beta = b.beta
    vals = np.zeros(t.num_nodes, dtype=bool)
    for v in range(t.num_nodes - 1, -1, -1):
        kids = t.children[v]
        if t.is_edge_node(v):
            vals[v] = any(vals[c] for c in kids)
        else:
            if len(kids) != len(t.copy_label[v]):
                raise DataError(
                    f"copy node {v} has {len(kids)} children for "
                    f"{len(t.copy_label[v])} edges; tree looks partial"
                )
            cut = beta[edge_id(t.n, *t.edge_label[t.parent[v]])]
            vals[v] = all(
                beta[edge_id(t.n, *t.edge_label[c])] < cut and not vals[c]
                for c in kids
            )
    return vals


# ---------------------------------------------------------------------------
# Conflict-graph statistics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConflictStats:
    """Overlap statistics of the copies through one edge.

    The conflict graph has one vertex per copy and an edge where two copies
    share a host edge.  ``independent`` and ``induced_matching`` are exact
    search results and are None in degree-only mode.
    """

    lambda_size: int
    independent: int | None
    induced_matching: int | None
    max_degree: int
    bound: int | None

    @property
    def ok(self) -> bool | None:
        if self.bound is None:
            return None
        return self.lambda_size <= self.bound


_SEARCH_BUDGET = 5_000_000


def _max_independent_set(adj: list[int], cand: int, budget: list[int]) -> int:
    if cand == 0:
        return 0
    budget[0] -= 1
    if budget[0] < 0:
        raise CapabilityError("independent-set search budget exhausted")
    # branch on a maximum-degree candidate vertex
    best_v, best_deg = -1, -1
    m = cand
    while m:
        v = (m & -m).bit_length() - 1
        m &= m - 1
        deg = bin(adj[v] & cand).count("1")
        if deg > best_deg:
            best_v, best_deg = v, deg
    if best_deg == 0:
        return bin(cand).count("1")
    bit = 1 << best_v
    with_v = 1 + _max_independent_set(adj, cand & ~(bit | adj[best_v]), budget)
    without_v = _max_independent_set(adj, cand & ~bit, budget)
    return max(with_v, without_v)


def _max_induced_matching(adj: list[int], cand: int, budget: list[int]) -> int:
    if cand == 0:
        return 0
    budget[0] -= 1
    if budget[0] < 0:
        raise CapabilityError("induced-matching search budget exhausted")
    u = (cand & -cand).bit_length() - 1
    # either u stays unmatched, or it pairs with one candidate neighbor and
    # both closed neighborhoods leave the graph
    best = _max_induced_matching(adj, cand & ~(1 << u), budget)
    nbrs = adj[u] & cand
    while nbrs:
        v = (nbrs & -nbrs).bit_length() - 1
        nbrs &= nbrs - 1
        keep = cand & ~(adj[u] | adj[v] | (1 << u) | (1 << v))
        best = max(best, 1 + _max_induced_matching(adj, keep, budget))
    return best


def conflict_graph_stats(lam, *, limit: int = 60, degree_only: bool = False) -> ConflictStats:
    """Exact conflict-graph statistics for a family of copies.

    Accepts an ExtensionSet or any iterable of edge sets.  Families larger
    than ``limit`` refuse the exact searches; pass degree_only=True to get
    the maximum degree alone at any size.
    """
    copies = list(lam.copies) if hasattr(lam, "copies") else [frozenset(c) for c in lam]
    m = len(copies)
    adj = [0] * m
    for i in range(m):
        for j in range(i + 1, m):
            if copies[i] & copies[j]:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    w3 = max((bin(a).count("1") for a in adj), default=0)
    if degree_only:
        return ConflictStats(m, None, None, w3, None)
    if m > limit:
        raise CapabilityError(
            f"{m} copies exceed the exact-search limit {limit}; "
            "pass degree_only=True for the degree statistic alone"
        )
    full = (1 << m) - 1
    budget = [_SEARCH_BUDGET]
    w1 = _max_independent_set(adj, full, budget)
    w2 = _max_induced_matching(adj, full, budget)
    bound = w1 + 2 * w2 * w3
    if m > bound:
        raise DataError(
            f"conflict bound violated: {m} copies, bound {bound}; "
            "this indicates a search bug"
        )
    return ConflictStats(m, w1, w2, w3, bound)
