"""Exhaustive ground truth for tiny instances.

Everything here recomputes from first principles: copies of the pattern
are enumerated by brute-force placement over vertex subsets, never through
the embedding plans used by the process kernels.  Two independent exact
methods for the expected final size are provided and must agree:

* permutation: evaluate the process under every one of the m! traversal
  orders and average.  Feasible through m = 10 edges (n = 5).
* recursion: the conditional future of the process depends only on the
  pair (accepted set, untraversed set).  Summing final sizes over all
  orders of the untraversed set gives an integer-valued recursion; the
  expectation is that integer over m!.

Both return exact rationals.  ``exact_extremal`` scans all edge subsets
for the largest pattern-free one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import numpy as np

from .backend import kernels
from .errors import CapabilityError, ParameterError
from .graphs import edge_count, edge_id
from .patterns import PatternGraph

_PERM_EDGE_CAP = 10  # 10! orders is fine, 11! is not
_RECURSION_EDGE_CAP = 15
_EXTREMAL_EDGE_CAP = 21  # 2^21 subset scan; n = 7 hosts and below


def copy_family(n: int, h: PatternGraph) -> list[int]:
    """Bitmasks over edge ids of every copy of the pattern inside K_n."""
    if h.num_vertices > n:
        return []
    masks = set()
    for sub in itertools.combinations(range(n), h.num_vertices):
        for perm in itertools.permutations(sub):
            mk = 0
            for a, b in h.edges:
                u, v = perm[a], perm[b]
                mk |= 1 << edge_id(n, min(u, v), max(u, v))
            masks.add(mk)
    return sorted(masks)


def blocking_masks(n: int, h: PatternGraph) -> list[list[int]]:
    """Per edge id: masks of the other edges of each copy through it."""
    per_edge: list[list[int]] = [[] for _ in range(edge_count(n))]
    for mk in copy_family(n, h):
        bits = mk
        while bits:
            b = bits & -bits
            per_edge[b.bit_length() - 1].append(mk ^ b)
            bits ^= b
    return per_edge


@dataclass(frozen=True)
class ExactResult:
    n: int
    num_edges: int
    num_copies: int
    expectation: Fraction
    method: str
    work: int  # permutations evaluated, or memo states visited

    @property
    def expectation_float(self) -> float:
        return float(self.expectation)


def _flatten(per_edge: list[list[int]]):
    ptr = np.zeros(len(per_edge) + 1, dtype=np.int64)
    flat: list[int] = []
    for e, ms in enumerate(per_edge):
        flat.extend(ms)
        ptr[e + 1] = len(flat)
    return ptr, np.array(flat, dtype=np.uint64)


def _expectation_permutation(n: int, h: PatternGraph) -> ExactResult:
    m = edge_count(n)
    if m > _PERM_EDGE_CAP:
        raise CapabilityError(
            f"permutation oracle needs m <= {_PERM_EDGE_CAP} edges, K_{n} has {m}"
        )
    per_edge = blocking_masks(n, h)
    ptr, flat = _flatten(per_edge)
    total, nperm = kernels.oracle_perm_sum(m, ptr, flat)
    assert int(nperm) == factorial(m)
    return ExactResult(
        n=n,
        num_edges=m,
        num_copies=len(copy_family(n, h)),
        expectation=Fraction(int(total), int(nperm)),
        method="full-permutation",
        work=int(nperm),
    )


def _expectation_recursion(n: int, h: PatternGraph) -> ExactResult:
    m = edge_count(n)
    if m > _RECURSION_EDGE_CAP:
        raise CapabilityError(
            f"recursion oracle needs m <= {_RECURSION_EDGE_CAP} edges, K_{n} has {m}"
        )
    per_edge = blocking_masks(n, h)
    memo: dict[tuple[int, int], int] = {}

    def visit(acc: int, rem: int) -> int:
        # sum of final sizes over all orders of rem, given accepted set acc
        if rem == 0:
            return acc.bit_count()
        key = (acc, rem)
        got = memo.get(key)
        if got is not None:
            return got
        total = 0
        bits = rem
        while bits:
            b = bits & -bits
            bits ^= b
            e = b.bit_length() - 1
            nxt = acc
            blocked = False
            for cm in per_edge[e]:
                if cm & acc == cm:
                    blocked = True
                    break
            if not blocked:
                nxt |= b
            total += visit(nxt, rem ^ b)
        memo[key] = total
        return total

    full = (1 << m) - 1
    total = visit(0, full)
    return ExactResult(
        n=n,
        num_edges=m,
        num_copies=len(copy_family(n, h)),
        expectation=Fraction(total, factorial(m)),
        method="state-recursion",
        work=len(memo),
    )


def exact_expectation(h: PatternGraph, n: int, method: str = "auto") -> ExactResult:
    """Exact E[|M|] for the process on K_n, as a Fraction."""
    if n < 2:
        raise ParameterError("need n >= 2")
    if method == "auto":
        method = "full-permutation" if edge_count(n) <= _PERM_EDGE_CAP else "state-recursion"
    if method in ("permutation", "full-permutation"):
        return _expectation_permutation(n, h)
    if method in ("recursion", "state-recursion"):
        return _expectation_recursion(n, h)
    raise ParameterError(f"unknown oracle method {method!r}")


def exact_extremal(h: PatternGraph, n: int) -> int:
    """Largest number of edges of a pattern-free graph on n vertices."""
    if n < 1:
        raise ParameterError("need n >= 1")
    m = edge_count(n)
    if m > _EXTREMAL_EDGE_CAP:
        raise CapabilityError(
            f"extremal scan needs m <= {_EXTREMAL_EDGE_CAP} edges, K_{n} has {m}"
        )
    fam = copy_family(n, h)
    if not fam:
        return m
    masks = np.array(fam, dtype=np.uint64)
    return int(kernels.extremal_max(m, masks))
