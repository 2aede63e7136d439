"""Forbidden-pattern graphs and the admissibility gate.

A pattern is a small simple graph H on vertices 0..v-1.  The process
machinery only has guarantees for patterns that are regular and strictly
2-balanced, so this module provides the gate that checks both, with an
explicit witness subgraph when the density condition fails.

Density conventions (all exact rationals):

    two_density(H)       = (e_H - 1) / (v_H - 2)
    strictly 2-balanced  = every proper subgraph F with v_F >= 3 has
                           (e_F - 1) / (v_F - 2) < two_density(H)
    epsilon_gap(H)       = min over those F of
                           (v_F - 2) - (e_F - 1) * (v_H - 2) / (e_H - 1)

For a fixed vertex subset the induced subgraph maximises edge count, so the
subgraph search only needs induced subgraphs on proper vertex subsets of
size 3..v_H-1 plus the one-edge-deleted spanning subgraph; a brute-force
oracle over all subgraphs backs this up in the tests.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import CapabilityError, ParameterError

# Structural checks (degree sequence, 2-balance subset search) stay cheap up
# to 16 vertices, which covers Q4; permutation-search tools have a lower cap.
MAX_PATTERN_VERTICES = 16

# Brute-force permutation search over vertex maps is only viable for small
# patterns; larger ones get a capability error instead of an open-ended run.
MAX_AUTOMORPHISM_VERTICES = 10

# Listing every automorphism is only used to speed up embedding plans; past
# this many we fall back to counting-only traversal.
_AUT_LIST_CAP = 50_000


def _canon_edges(edges) -> tuple[tuple[int, int], ...]:
    out = []
    for e in edges:
        u, v = int(e[0]), int(e[1])
        if u == v:
            raise ParameterError(f"pattern has a self-loop at vertex {u}")
        out.append((min(u, v), max(u, v)))
    canon = tuple(sorted(set(out)))
    if len(canon) != len(out):
        raise ParameterError("pattern has a repeated edge")
    return canon


@dataclass(frozen=True)
class PatternGraph:
    """Immutable simple graph used as the forbidden pattern."""

    num_vertices: int
    edges: tuple[tuple[int, int], ...]
    name: str = ""

    def __post_init__(self):
        n = self.num_vertices
        if n < 1:
            raise ParameterError("pattern needs at least one vertex")
        if n > MAX_PATTERN_VERTICES:
            raise CapabilityError(
                f"patterns are limited to {MAX_PATTERN_VERTICES} vertices, got {n}"
            )
        object.__setattr__(self, "edges", _canon_edges(self.edges))
        for u, v in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ParameterError(f"edge ({u},{v}) references a vertex outside 0..{n - 1}")

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> frozenset[int]:
        return frozenset(b if a == v else a for a, b in self.edges if v in (a, b))

    def degree_sequence(self) -> tuple[int, ...]:
        deg = [0] * self.num_vertices
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(deg)

    def is_regular(self) -> bool:
        degs = set(self.degree_sequence())
        return len(degs) == 1

    def label(self) -> str:
        return self.name or f"H(v={self.num_vertices},e={self.num_edges})"

    def __str__(self) -> str:
        return self.label()


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------


def cycle(r: int) -> PatternGraph:
    if r < 3:
        raise ParameterError(f"cycle length must be >= 3, got {r}")
    edges = [(i, (i + 1) % r) for i in range(r)]
    return PatternGraph(r, edges, name=f"C{r}")


def complete(r: int) -> PatternGraph:
    if r < 2:
        raise ParameterError(f"complete graph needs >= 2 vertices, got {r}")
    edges = list(itertools.combinations(range(r), 2))
    return PatternGraph(r, edges, name=f"K{r}")


def complete_bipartite(a: int, b: int) -> PatternGraph:
    if a < 1 or b < 1:
        raise ParameterError("both sides of a complete bipartite pattern must be >= 1")
    edges = [(i, a + j) for i in range(a) for j in range(b)]
    return PatternGraph(a + b, edges, name=f"K{a},{b}")


def hypercube(d: int) -> PatternGraph:
    if d < 1:
        raise ParameterError(f"hypercube dimension must be >= 1, got {d}")
    n = 1 << d
    if n > MAX_PATTERN_VERTICES:
        raise CapabilityError(f"Q{d} has {n} vertices, above the {MAX_PATTERN_VERTICES} cap")
    edges = [(x, x ^ (1 << i)) for x in range(n) for i in range(d) if x < (x ^ (1 << i))]
    return PatternGraph(n, edges, name=f"Q{d}")


def star(leaves: int) -> PatternGraph:
    if leaves < 1:
        raise ParameterError(f"star needs >= 1 leaf, got {leaves}")
    edges = [(0, i) for i in range(1, leaves + 1)]
    return PatternGraph(leaves + 1, edges, name=f"K1,{leaves}")


_CATALOG = {
    "cycle": (cycle, 1),
    "complete": (complete, 1),
    "complete_bipartite": (complete_bipartite, 2),
    "hypercube": (hypercube, 1),
    "star": (star, 1),
}


def make_catalog(name: str, *params: int) -> PatternGraph:
    """Build a catalog pattern: cycle, complete, complete_bipartite, hypercube, star."""
    key = name.strip().lower()
    if key not in _CATALOG:
        raise ParameterError(f"unknown catalog family {name!r}; choose from {sorted(_CATALOG)}")
    fn, arity = _CATALOG[key]
    if len(params) != arity:
        raise ParameterError(f"catalog family {name!r} takes {arity} parameter(s), got {len(params)}")
    return fn(*params)


_NAME_RES = [
    (re.compile(r"^C(\d+)$"), lambda m: cycle(int(m.group(1)))),
    (re.compile(r"^K(\d+)$"), lambda m: complete(int(m.group(1)))),
    (re.compile(r"^K_?\{?(\d+),(\d+)\}?$"), lambda m: _k_ab(int(m.group(1)), int(m.group(2)))),
    (re.compile(r"^Q(\d+)$"), lambda m: hypercube(int(m.group(1)))),
]


def _k_ab(a: int, b: int) -> PatternGraph:
    if a == 1:
        return star(b)
    if b == 1:
        return star(a)
    return complete_bipartite(a, b)


def parse_pattern(text: str) -> PatternGraph:
    """Parse a pattern from a short name (K3, C4, K3,3, Q3, K1,4) or a file path."""
    s = text.strip()
    p = Path(s)
    if p.is_file():
        return pattern_from_file(p)
    for rx, build in _NAME_RES:
        m = rx.match(s)
        if m:
            return build(m)
    raise ParameterError(
        f"cannot parse pattern {text!r}: expected K<r>, C<r>, K<a>,<b>, Q<d> or a pattern file path"
    )


def pattern_from_file(path) -> PatternGraph:
    """Read a pattern file: first line is the vertex count, then one 'u v' pair per line."""
    lines = [ln.strip() for ln in Path(path).read_text().splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParameterError(f"pattern file {path} is empty")
    try:
        n = int(lines[0])
    except ValueError as exc:
        raise ParameterError(f"pattern file {path}: first line must be the vertex count") from exc
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ParameterError(f"pattern file {path}: bad edge line {ln!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return PatternGraph(n, edges, name=Path(path).stem)


# ---------------------------------------------------------------------------
# Density and balance
# ---------------------------------------------------------------------------


def two_density(h: PatternGraph) -> Fraction:
    """(e_H - 1) / (v_H - 2), exact."""
    if h.num_vertices < 3:
        raise ParameterError("two_density needs at least 3 vertices")
    return Fraction(h.num_edges - 1, h.num_vertices - 2)


def _induced_edge_count(h: PatternGraph, subset: tuple[int, ...]) -> int:
    s = set(subset)
    return sum(1 for u, v in h.edges if u in s and v in s)


def _balance_candidates(h: PatternGraph):
    """Yield (v_F, e_F, witness vertex subset or None) for the reduced search.

    Induced subgraphs on proper vertex subsets of size 3..v_H-1, plus the
    spanning subgraph with one edge removed (witness subset None means
    'all vertices, any single edge deleted').
    """
    n = h.num_vertices
    for size in range(3, n):
        for subset in itertools.combinations(range(n), size):
            yield size, _induced_edge_count(h, subset), subset
    if h.num_edges >= 1:
        yield n, h.num_edges - 1, None


@dataclass(frozen=True)
class BalanceReport:
    """Outcome of the admissibility gate for one pattern."""

    pattern: PatternGraph
    is_regular: bool
    two_density: Fraction | None
    is_strictly_two_balanced: bool
    epsilon_gap: Fraction | None
    witness_vertices: tuple[int, ...] | None
    witness_edges: tuple[tuple[int, int], ...] | None
    reason: str | None
    is_admissible: bool


def balance_report(h: PatternGraph) -> BalanceReport:
    """Check regularity and strict 2-balance; admissible means both hold.

    Patterns with fewer than 3 vertices or 3 edges are never admissible.
    When the density condition fails, the witness is a densest offending
    subgraph (as a vertex subset with its induced edges).
    """
    regular = h.is_regular()
    if h.num_vertices < 3 or h.num_edges < 3:
        return BalanceReport(
            pattern=h,
            is_regular=regular,
            two_density=None if h.num_vertices < 3 else two_density(h),
            is_strictly_two_balanced=False,
            epsilon_gap=None,
            witness_vertices=None,
            witness_edges=None,
            reason=f"pattern needs v >= 3 and e >= 3, got v={h.num_vertices}, e={h.num_edges}",
            is_admissible=False,
        )

    dens = two_density(h)
    gap, witness = _epsilon_search(h)
    balanced = gap > 0
    wit_vertices = wit_edges = None
    reason = None
    if not balanced:
        wit_vertices, wit_edges = witness
        reason = (
            f"subgraph on vertices {wit_vertices} has density "
            f"{Fraction(len(wit_edges) - 1, len(wit_vertices) - 2)} >= {dens}"
        )
    elif not regular:
        reason = f"degree sequence {h.degree_sequence()} is not regular"
    return BalanceReport(
        pattern=h,
        is_regular=regular,
        two_density=dens,
        is_strictly_two_balanced=balanced,
        epsilon_gap=gap,
        witness_vertices=wit_vertices,
        witness_edges=wit_edges,
        reason=reason,
        is_admissible=regular and balanced,
    )


def _epsilon_search(h: PatternGraph):
    """Minimise (v_F - 2) - (e_F - 1)(v_H - 2)/(e_H - 1) over the reduced family.

    Returns (min gap, witness) where the witness is the minimising subgraph
    as (vertex tuple, induced edge tuple).  A non-positive gap means the
    pattern is not strictly 2-balanced and the witness certifies it.
    """
    ratio = Fraction(h.num_vertices - 2, h.num_edges - 1)
    best: Fraction | None = None
    best_sub: tuple | None = None
    for v_f, e_f, subset in _balance_candidates(h):
        val = (v_f - 2) - (e_f - 1) * ratio
        if best is None or val < best:
            best = val
            best_sub = subset
    if best is None:
        # v_H == 3 leaves only the spanning candidate, which always exists
        raise ParameterError("pattern has no proper subgraph candidates")
    if best_sub is None:
        vertices = tuple(range(h.num_vertices))
        edges = h.edges[1:]
    else:
        vertices = best_sub
        s = set(best_sub)
        edges = tuple((u, v) for u, v in h.edges if u in s and v in s)
    return best, (vertices, edges)


def is_strictly_two_balanced(h: PatternGraph) -> bool:
    if h.num_vertices < 3 or h.num_edges < 3:
        return False
    gap, _ = _epsilon_search(h)
    return gap > 0


def epsilon_gap(h: PatternGraph) -> Fraction:
    """The density slack of the strictest proper subgraph; errors if not positive."""
    if h.num_vertices < 3 or h.num_edges < 3:
        raise ParameterError("epsilon_gap needs v >= 3 and e >= 3")
    gap, witness = _epsilon_search(h)
    if gap <= 0:
        raise ParameterError(
            f"pattern {h.label()} is not strictly 2-balanced (witness vertices {witness[0]})"
        )
    return gap


def require_admissible(h: PatternGraph) -> BalanceReport:
    rep = balance_report(h)
    if not rep.is_admissible:
        raise ParameterError(f"pattern {h.label()} is not admissible: {rep.reason}")
    return rep


# ---------------------------------------------------------------------------
# Automorphisms
# ---------------------------------------------------------------------------


def _adjacency_sets(h: PatternGraph) -> list[set[int]]:
    adj = [set() for _ in range(h.num_vertices)]
    for u, v in h.edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def _automorphism_backtrack(h: PatternGraph, collect: list | None, cap: int | None) -> int:
    """Count automorphisms by backtracking; optionally collect them as tuples.

    The partial map must preserve adjacency and non-adjacency among mapped
    vertices, and can only send a vertex to one of equal degree.
    """
    n = h.num_vertices
    if n > MAX_AUTOMORPHISM_VERTICES:
        raise CapabilityError(
            f"automorphism search is limited to {MAX_AUTOMORPHISM_VERTICES} vertices, got {n}"
        )
    adj = _adjacency_sets(h)
    deg = h.degree_sequence()
    image = [-1] * n
    used = [False] * n
    count = 0

    def extend(i: int) -> None:
        nonlocal count
        if i == n:
            count += 1
            if collect is not None:
                collect.append(tuple(image))
                if cap is not None and len(collect) > cap:
                    raise CapabilityError("automorphism list exceeds cap")
            return
        for target in range(n):
            if used[target] or deg[target] != deg[i]:
                continue
            ok = True
            for j in range(i):
                if (j in adj[i]) != (image[j] in adj[target]):
                    ok = False
                    break
            if ok:
                image[i] = target
                used[target] = True
                extend(i + 1)
                used[target] = False
                image[i] = -1

    extend(0)
    return count


def automorphism_count(h: PatternGraph) -> int:
    """Order of the automorphism group, by exhaustive backtracking."""
    return _automorphism_backtrack(h, collect=None, cap=None)


def automorphisms(h: PatternGraph) -> list[tuple[int, ...]]:
    """All automorphisms as vertex maps; capped to keep memory bounded."""
    out: list[tuple[int, ...]] = []
    _automorphism_backtrack(h, collect=out, cap=_AUT_LIST_CAP)
    return out


def ordered_edge_orbits(h: PatternGraph) -> list[tuple[tuple[int, int], int]]:
    """Representatives of ordered-edge orbits under the automorphism group.

    Returns (ordered edge, orbit size) pairs covering all 2*e_H ordered
    edges.  Falls back to one orbit per ordered edge when the group is too
    large to list; that is always correct, just less economical.
    """
    ordered = [(u, v) for u, v in h.edges] + [(v, u) for u, v in h.edges]
    try:
        auts = automorphisms(h)
    except CapabilityError:
        return [(e, 1) for e in ordered]
    seen: set[tuple[int, int]] = set()
    orbits = []
    for e in ordered:
        if e in seen:
            continue
        orbit = {(sigma[e[0]], sigma[e[1]]) for sigma in auts}
        seen |= orbit
        orbits.append((e, len(orbit)))
    return orbits
