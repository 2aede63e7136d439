"""The random maximal H-free graph process.

Edges of the complete graph on n vertices are traversed in increasing
order of their birthtimes; an edge is accepted exactly when adding it to
the accepted set creates no copy of the pattern.  The result of a full
traversal is the maximal H-free graph M.  Acceptance of an edge depends
only on earlier-born edges, so any prefix of the traversal is itself a
valid partial run (this is what makes two-phase sampling and the watched
variant below work).

``run_process`` drives the selected kernel backend over a Birthtimes
draw.  ``first_blocking_time`` runs the traversal with one designated
edge withheld and reports the time at which that edge first becomes
blocked; the withheld edge belongs to M exactly when its own birthtime
precedes that time.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from math import inf

import numpy as np

from .backend import kernels
from .embedding import build_plan, contains_copy_full, find_completion, iter_completions
from .errors import DataError, ParameterError
from .graphs import Birthtimes, EvolvingGraph, edge_arrays, edge_id
from .patterns import PatternGraph, require_admissible

Edge = tuple[int, int]


def creates_copy(
    g: EvolvingGraph, f: Edge, h: PatternGraph, *, with_witness: bool = False
):
    """Would adding the absent edge f complete a copy of the pattern?

    With ``with_witness`` returns (flag, copy) where copy is one full witness
    edge set including f, or None.
    """
    u, v = f
    if g.has_edge(u, v):
        raise ParameterError(f"edge ({u},{v}) is already present")
    comp = find_completion(g, u, v, h)
    if not with_witness:
        return comp is not None
    if comp is None:
        return False, None
    return True, frozenset(comp) | {(min(u, v), max(u, v))}


def plan_arrays(h: PatternGraph):
    """Kernel view of the embedding plan: (positions, plans, nbr_ptr, nbr_flat)."""
    plan = build_plan(h)
    return plan.positions, plan.num_plans, plan.nbr_ptr, plan.nbr_flat


@dataclass
class ProcessTrace:
    """Everything a finished traversal knows, indexed by edge id."""

    pattern: PatternGraph
    n: int
    beta: np.ndarray
    order: np.ndarray  # edge ids, traversal order
    accepted: np.ndarray  # bool per edge id
    witnesses: dict[int, frozenset[Edge]] | None = None
    _graph: EvolvingGraph | None = field(default=None, repr=False)

    @property
    def num_edges(self) -> int:
        return int(self.beta.shape[0])

    @property
    def num_accepted(self) -> int:
        return int(self.accepted.sum())

    def accepted_edge_ids(self) -> np.ndarray:
        return np.flatnonzero(self.accepted)

    def accepted_edges(self) -> list[Edge]:
        eu, ev = edge_arrays(self.n)
        ids = self.accepted_edge_ids()
        return list(zip(eu[ids].tolist(), ev[ids].tolist()))

    def graph(self) -> EvolvingGraph:
        if self._graph is None:
            g = EvolvingGraph(self.n)
            for u, v in self.accepted_edges():
                g.add_edge(u, v)
            self._graph = g
        return self._graph

    def write_csv(self, path: str) -> None:
        eu, ev = edge_arrays(self.n)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["rank", "u", "v", "beta", "accepted"])
            for rank, eid in enumerate(self.order.tolist()):
                w.writerow(
                    [
                        rank,
                        int(eu[eid]),
                        int(ev[eid]),
                        f"{self.beta[eid]:.17g}",
                        int(self.accepted[eid]),
                    ]
                )


def run_process(
    h: PatternGraph,
    bt: Birthtimes,
    *,
    record_witnesses: bool = False,
    allow_inadmissible: bool = False,
) -> ProcessTrace:
    """Traverse all edges in birthtime order, keeping the H-free ones.

    With ``record_witnesses`` every rejection is replayed in pure Python to
    recover one blocking copy; the replay independently re-decides each edge
    and must agree with the kernel.  ``allow_inadmissible`` skips the
    regular/strictly-2-balanced gate for deliberate small-pattern runs.
    """
    if not allow_inadmissible:
        require_admissible(h)
    k, p, ptr, flat = plan_arrays(h)
    eu, ev = edge_arrays(bt.n)
    order = bt.traversal_order()
    accepted = kernels.run_process(bt.n, eu, ev, order, k, p, ptr, flat)
    trace = ProcessTrace(pattern=h, n=bt.n, beta=bt.beta, order=order, accepted=accepted)
    if record_witnesses:
        trace.witnesses = _replay_witnesses(h, trace, eu, ev)
    return trace


def _replay_witnesses(h, trace, eu, ev) -> dict[int, frozenset[Edge]]:
    g = EvolvingGraph(trace.n)
    witnesses: dict[int, frozenset[Edge]] = {}
    for eid in trace.order.tolist():
        u, v = int(eu[eid]), int(ev[eid])
        copy = find_completion(g, u, v, h)
        if copy is None:
            if not trace.accepted[eid]:
                raise DataError(f"kernel rejected edge ({u},{v}) but no blocking copy exists")
            g.add_edge(u, v)
        else:
            if trace.accepted[eid]:
                raise DataError(f"kernel accepted edge ({u},{v}) despite blocking copy {copy}")
            witnesses[eid] = copy  # the e_H - 1 accepted edges; f itself is implied
    return witnesses


@dataclass(frozen=True)
class ExtensionSet:
    """All copies of the pattern through one edge, as sets of other edges."""

    edge: Edge
    copies: tuple[frozenset[Edge], ...]

    @property
    def count(self) -> int:
        return len(self.copies)


def enumerate_extensions(g: EvolvingGraph, f: Edge, h: PatternGraph) -> ExtensionSet:
    """Copies completed by f whose remaining edges all lie in g (never f itself)."""
    u, v = f
    if u == v:
        raise ParameterError("extension edge endpoints must differ")
    f = (min(u, v), max(u, v))
    copies = tuple(iter_completions(g, f[0], f[1], h, forbidden_edge=f))
    return ExtensionSet(edge=f, copies=copies)


@dataclass(frozen=True)
class MaximalityReport:
    is_pattern_free: bool
    every_nonedge_blocked: bool
    counterexample: Edge | None

    @property
    def ok(self) -> bool:
        return self.is_pattern_free and self.every_nonedge_blocked


def maximality_report(g: EvolvingGraph, h: PatternGraph) -> MaximalityReport:
    """Certify that g is H-free and that no edge can be added while staying so.

    The pattern-free check is an unanchored full search; once it passes, any
    copy in g plus a new edge must pass through that edge, so the per-nonedge
    anchored check is complete.
    """
    if contains_copy_full(g, h):
        return MaximalityReport(False, False, None)
    for u in range(g.n):
        nbrs = g.neighbors(u)
        for v in range(u + 1, g.n):
            if v in nbrs:
                continue
            if not creates_copy(g, (u, v), h):
                return MaximalityReport(True, False, (u, v))
    return MaximalityReport(True, True, None)


def verify_maximal(g: EvolvingGraph, h: PatternGraph) -> bool:
    return maximality_report(g, h).ok


@dataclass(frozen=True)
class BlockingTime:
    """When a withheld edge first becomes blocked in the traversal without it."""

    edge: Edge
    t_star: float  # birthtime of the acceptance that blocked it, inf if never
    rank: int  # rank of that acceptance in the reduced traversal, -1 if never

    def withheld_edge_kept(self, beta_f: float) -> bool:
        return beta_f < self.t_star


def first_blocking_time(h: PatternGraph, bt: Birthtimes, f: Edge) -> BlockingTime:
    require_admissible(h)
    u, v = min(f), max(f)
    fid = edge_id(bt.n, u, v)
    k, p, ptr, flat = plan_arrays(h)
    eu, ev = edge_arrays(bt.n)
    order = bt.traversal_order()
    order = order[order != fid]
    _, rank = kernels.run_process_watched(
        bt.n, eu, ev, order, k, p, ptr, flat, np.int64(u), np.int64(v)
    )
    rank = int(rank)
    if rank < 0:
        return BlockingTime(edge=(u, v), t_star=inf, rank=-1)
    return BlockingTime(edge=(u, v), t_star=float(bt.beta[order[rank]]), rank=rank)
