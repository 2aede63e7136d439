"""Edge indexing, birthtimes and the evolving host graph.

Edges of the complete graph on n vertices are numbered row-major over the
upper triangle: (0,1), (0,2), ..., (0,n-1), (1,2), ...  Birthtimes are iid
uniform floats on [0,1]; the traversal order is the argsort of the
birthtime vector with ties broken by edge id (stable sort), so a trace is
a pure function of (n, beta).

The two-phase sampler draws, for a threshold rho, each edge independently
in-phase with probability rho; in-phase values are uniform on [0, rho) and
out-of-phase values uniform on (rho, 1].  Marginally every edge is still
uniform on [0,1], and the in-phase set is exactly the host graph whose
edges have birthtime below rho.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError, ParameterError

# Above this many vertices the packed bit matrix is not built automatically.
DENSE_VERTEX_LIMIT = 4096


def edge_count(n: int) -> int:
    return n * (n - 1) // 2


def edge_id(n: int, u: int, v: int) -> int:
    """Row-major upper-triangle index of edge (u,v)."""
    if u == v:
        raise ParameterError("self-loops have no edge id")
    if u > v:
        u, v = v, u
    if not (0 <= u < v < n):
        raise ParameterError(f"edge ({u},{v}) outside the complete graph on {n} vertices")
    return u * (2 * n - u - 1) // 2 + (v - u - 1)


def edge_arrays(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Endpoint arrays (eu, ev) aligned with edge ids."""
    eu, ev = np.triu_indices(n, k=1)
    return eu.astype(np.int64), ev.astype(np.int64)


def edge_endpoints(n: int, idx: int) -> tuple[int, int]:
    if not (0 <= idx < edge_count(n)):
        raise ParameterError(f"edge id {idx} outside 0..{edge_count(n) - 1}")
    u = 0
    row = n - 1
    rest = idx
    while rest >= row:
        rest -= row
        u += 1
        row -= 1
    return u, u + 1 + rest


# ---------------------------------------------------------------------------
# RNG derivation
# ---------------------------------------------------------------------------


def rng_from(seed) -> np.random.Generator:
    """Build a generator from an int seed, a SeedSequence, or pass a Generator through."""
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.default_rng(seed)
    if not isinstance(seed, (int, np.integer)) or seed < 0:
        raise ParameterError(f"seed must be a non-negative integer, got {seed!r}")
    return np.random.default_rng(np.random.SeedSequence(int(seed)))


def replicate_rng(master_seed: int, replicate: int, stream: int = 0) -> np.random.Generator:
    """Independent stream for one replicate of one experiment.

    Streams are a pure function of (master_seed, replicate, stream), so
    results do not depend on scheduling or worker count.
    """
    if master_seed < 0 or replicate < 0 or stream < 0:
        raise ParameterError("master_seed, replicate and stream must be non-negative")
    return np.random.default_rng(
        np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(replicate), int(stream)))
    )


# ---------------------------------------------------------------------------
# Birthtimes
# ---------------------------------------------------------------------------


@dataclass
class Birthtimes:
    """Birthtime vector for all edges of the complete graph on n vertices."""

    n: int
    beta: np.ndarray
    rho: float | None = None
    in_phase: np.ndarray | None = None
    _order: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        m = edge_count(self.n)
        self.beta = np.asarray(self.beta, dtype=np.float64)
        if self.beta.shape != (m,):
            raise DataError(f"expected {m} birthtimes for n={self.n}, got shape {self.beta.shape}")
        if self.in_phase is not None:
            self.in_phase = np.asarray(self.in_phase, dtype=bool)
            if self.in_phase.shape != (m,):
                raise DataError("in_phase must align with the edge list")
        if self.rho is not None and not (0.0 < self.rho <= 1.0):
            raise ParameterError(f"rho must lie in (0,1], got {self.rho}")

    @property
    def num_edges(self) -> int:
        return self.beta.shape[0]

    def validate_distinct(self) -> None:
        if np.unique(self.beta).shape[0] != self.beta.shape[0]:
            raise DataError("birthtimes must be pairwise distinct")

    def traversal_order(self) -> np.ndarray:
        """Edge ids sorted by birthtime, ties broken by edge id."""
        if self._order is None:
            self._order = np.argsort(self.beta, kind="stable")
        return self._order

    def with_edge_value(self, u: int, v: int, value: float, in_phase: bool | None = None) -> "Birthtimes":
        """Copy with one edge's birthtime replaced (used for conditioning on an edge)."""
        if not (0.0 <= value < 1.0):
            raise ParameterError(f"birthtime must lie in [0,1), got {value}")
        beta = self.beta.copy()
        beta[edge_id(self.n, u, v)] = value
        phase = None if self.in_phase is None else self.in_phase.copy()
        if phase is not None and in_phase is not None:
            phase[edge_id(self.n, u, v)] = in_phase
        return Birthtimes(self.n, beta, rho=self.rho, in_phase=phase)


def sample_birthtimes(n: int, seed) -> Birthtimes:
    """iid uniform birthtimes on [0,1) for every edge of K_n."""
    if n < 2:
        raise ParameterError(f"need n >= 2, got {n}")
    rng = rng_from(seed)
    beta = rng.random(edge_count(n))
    return Birthtimes(n, beta)


def sample_two_phase(n: int, rho: float, seed) -> Birthtimes:
    """Two-phase birthtimes: in-phase edges (prob rho) uniform on [0,rho), others on (rho,1].

    Marginally each value is uniform on [0,1]; membership in the rho-snapshot
    is exactly the event beta <= rho.
    """
    if n < 2:
        raise ParameterError(f"need n >= 2, got {n}")
    if not (0.0 < rho <= 1.0):
        raise ParameterError(f"rho must lie in (0,1], got {rho}")
    rng = rng_from(seed)
    m = edge_count(n)
    in_phase = rng.random(m) < rho
    u = rng.random(m)
    # 1-u maps [0,1) onto (0,1], keeping out-of-phase values strictly above rho
    beta = np.where(in_phase, rho * u, rho + (1.0 - rho) * (1.0 - u))
    return Birthtimes(n, beta, rho=rho, in_phase=in_phase)


def dump_birthtimes_csv(b: Birthtimes, path) -> None:
    """Debug dump: one row per edge with endpoints, birthtime and phase."""
    eu, ev = edge_arrays(b.n)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        header = ["edge_id", "u", "v", "beta"]
        if b.in_phase is not None:
            header.append("in_phase")
        w.writerow(header)
        for i in range(b.num_edges):
            row = [i, int(eu[i]), int(ev[i]), repr(float(b.beta[i]))]
            if b.in_phase is not None:
                row.append(int(b.in_phase[i]))
            w.writerow(row)


# ---------------------------------------------------------------------------
# Evolving host graph
# ---------------------------------------------------------------------------


class EvolvingGraph:
    """Growing simple graph with set adjacency and an optional packed bit matrix.

    The bit matrix (one uint64 row of ceil(n/64) words per vertex) is kept
    for n up to DENSE_VERTEX_LIMIT; the compiled kernels require it, the
    pure-Python paths only use the adjacency sets.
    """

    __slots__ = ("n", "words", "bits", "_adj", "_edges")

    def __init__(self, n: int, dense: bool | None = None):
        if n < 1:
            raise ParameterError(f"need n >= 1, got {n}")
        self.n = n
        use_dense = dense if dense is not None else (n <= DENSE_VERTEX_LIMIT)
        self.words = (n + 63) // 64 if use_dense else 0
        self.bits = np.zeros((n, self.words), dtype=np.uint64) if use_dense else None
        self._adj: list[set[int]] = [set() for _ in range(n)]
        self._edges: set[tuple[int, int]] = set()

    @classmethod
    def from_edges(cls, n: int, edges, dense: bool | None = None) -> "EvolvingGraph":
        g = cls(n, dense=dense)
        for u, v in edges:
            g.add_edge(int(u), int(v))
        return g

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in self._edges

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ParameterError("self-loops are not allowed")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ParameterError(f"edge ({u},{v}) outside vertex range")
        key = (u, v) if u < v else (v, u)
        if key in self._edges:
            return
        self._edges.add(key)
        self._adj[u].add(v)
        self._adj[v].add(u)
        if self.bits is not None:
            self.bits[u, v >> 6] |= np.uint64(1) << np.uint64(v & 63)
            self.bits[v, u >> 6] |= np.uint64(1) << np.uint64(u & 63)

    def neighbors(self, v: int) -> set[int]:
        """Adjacency set of v; treat as read-only."""
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def edges(self) -> set[tuple[int, int]]:
        """Edge set as canonical (u<v) tuples; treat as read-only."""
        return self._edges

    def edge_ids(self) -> np.ndarray:
        out = np.fromiter(
            (edge_id(self.n, u, v) for u, v in self._edges), dtype=np.int64, count=len(self._edges)
        )
        out.sort()
        return out

    def copy(self) -> "EvolvingGraph":
        g = EvolvingGraph(self.n, dense=self.bits is not None)
        for u, v in self._edges:
            g.add_edge(u, v)
        return g
