"""Monte Carlo harness and numeric evaluators for the process's quantities.

Replicated experiments (final edge counts, conditional inclusion of a
withheld edge, trimmed-graph statistics, tree-vs-pruned-tree comparisons)
all derive their randomness from ``replicate_rng(seed, replicate, stream)``,
so a result is a pure function of its config and seed no matter how the
replicates are scheduled.  The numeric evaluators (survival lower bound,
nested moment identity) involve no simulation at all.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, partial
from typing import Iterable, Sequence

import numpy as np

from .analysis import AsymptoticParams, build_tree, default_prune_target, eval_B, prune_to_RT
from .backend import kernels
from .errors import NumericRangeError, ParameterError
from .graphs import Birthtimes, EvolvingGraph, edge_arrays, edge_count, edge_id, replicate_rng
from .patterns import PatternGraph, require_admissible
from .process import first_blocking_time, plan_arrays

_TRIANGLE = ((0, 1), (0, 2), (1, 2))


def _run_replicates(fn, reps: int, workers: int) -> list:
    """Run fn over replicate indices, optionally on a process pool.

    Replicate i depends only on (seed, i), so the pooled result is
    index-for-index identical to the sequential one.
    """
    if workers <= 1:
        return [fn(i) for i in range(reps)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        chunk = max(1, reps // (workers * 4))
        return list(pool.map(fn, range(reps), chunksize=chunk))


@lru_cache(maxsize=8)
def _shared_arrays(n: int, h: PatternGraph):
    """Endpoint and plan arrays reused across replicates; treat as read-only."""
    k, p, ptr, flat = plan_arrays(h)
    eu, ev = edge_arrays(n)
    return eu, ev, k, p, ptr, flat


# ---------------------------------------------------------------------------
# Expected final size
# ---------------------------------------------------------------------------


def _edges_replicate(n: int, h: PatternGraph, seed: int, i: int) -> int:
    eu, ev, k, p, ptr, flat = _shared_arrays(n, h)
    order = np.argsort(replicate_rng(seed, i).random(eu.shape[0]), kind="stable")
    return int(kernels.run_process(n, eu, ev, order, k, p, ptr, flat).sum())


@dataclass(frozen=True)
class RunStats:
    """Replicated final-edge-count experiment.

    ``counts[i]`` is the accepted-edge count of replicate i, generated from
    ``replicate_rng(seed, i)``; the moments are recomputed from the stored
    counts on access.
    """

    n: int
    pattern: str
    counts: np.ndarray
    seed: int
    wall_clock: float

    @property
    def reps(self) -> int:
        return int(self.counts.shape[0])

    @property
    def mean(self) -> float:
        return float(self.counts.mean())

    @property
    def variance(self) -> float:
        if self.reps < 2:
            return 0.0
        return float(self.counts.var(ddof=1))

    @property
    def stderr(self) -> float:
        if self.reps < 2:
            return 0.0
        return math.sqrt(self.variance / self.reps)


def estimate_expected_edges(
    n: int, h: PatternGraph, reps: int, seed: int, *, workers: int = 1
) -> RunStats:
    """Mean final edge count over independent replicates.

    pre: reps >= 1.  workers > 1 fans the replicates out over processes;
    the result does not depend on the worker count.
    """
    if reps < 1:
        raise ParameterError("need reps >= 1")
    require_admissible(h)
    started = time.perf_counter()
    vals = _run_replicates(partial(_edges_replicate, n, h, seed), reps, workers)
    counts = np.array(vals, dtype=np.int64)
    return RunStats(
        n=n,
        pattern=h.label(),
        counts=counts,
        seed=seed,
        wall_clock=time.perf_counter() - started,
    )


# ---------------------------------------------------------------------------
# Log-log exponent fit
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    intercept: float
    stderr: float

    @property
    def band(self) -> tuple[float, float]:
        """95 percent normal band for the slope."""
        return (self.slope - 1.96 * self.stderr, self.slope + 1.96 * self.stderr)


def fit_exponent(sweep: Iterable[tuple[float, float]]) -> ExponentFit:
    """Least-squares slope of ln(mean) against ln(n).

    pre: at least 3 points, all n and means positive.
    """
    pts = [(float(n), float(mean)) for n, mean in sweep]
    if len(pts) < 3:
        raise ParameterError("need at least 3 sweep points")
    if any(n <= 0 or mean <= 0 for n, mean in pts):
        raise ParameterError("sweep points must have positive n and positive mean")
    x = np.log([n for n, _ in pts])
    y = np.log([mean for _, mean in pts])
    sxx = float(((x - x.mean()) ** 2).sum())
    if sxx == 0.0:
        raise ParameterError("all sweep points share one n; slope is undefined")
    slope = float(((x - x.mean()) * (y - y.mean())).sum() / sxx)
    intercept = float(y.mean() - slope * x.mean())
    resid = y - (intercept + slope * x)
    dof = len(pts) - 2
    se = math.sqrt(max(float((resid**2).sum()), 0.0) / dof / sxx)
    return ExponentFit(slope=slope, intercept=intercept, stderr=se)


@dataclass(frozen=True)
class SweepResult:
    """Edge-count runs across a range of n plus the fitted exponent."""

    runs: tuple[tuple[int, RunStats], ...]
    fit: ExponentFit


def run_sweep(
    ns: Sequence[int], h: PatternGraph, reps: int, seed: int, *, workers: int = 1
) -> SweepResult:
    """estimate_expected_edges at each n, then fit the log-log slope.

    Each n gets its own derived master seed, so adding or removing sizes
    never changes the other sizes' results.
    """
    runs = []
    for n in ns:
        sub = int(np.random.SeedSequence(entropy=int(seed), spawn_key=(int(n),)).generate_state(1)[0])
        runs.append((int(n), estimate_expected_edges(int(n), h, reps, sub, workers=workers)))
    fit = fit_exponent((n, rs.mean) for n, rs in runs)
    return SweepResult(runs=tuple(runs), fit=fit)


# ---------------------------------------------------------------------------
# Conditional inclusion of a withheld edge
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InclusionEstimate:
    """Estimated chance a withheld early edge ends up in the final graph.

    Replicate i keeps the edge iff u_f * threshold beats that replicate's
    first blocking time; u_f comes from stream 1 and the host birthtimes
    from stream 0, so calls at different thresholds on one seed are matched
    pair by pair.
    """

    n: int
    pattern: str
    multiplier: float
    threshold: float
    kept: np.ndarray
    seed: int
    wall_clock: float

    @property
    def reps(self) -> int:
        return int(self.kept.shape[0])

    @property
    def estimate(self) -> float:
        return float(self.kept.mean())

    @property
    def stderr(self) -> float:
        p = self.estimate
        return math.sqrt(p * (1.0 - p) / self.reps)

    @property
    def ci(self) -> tuple[float, float]:
        half = 1.96 * self.stderr
        return (self.estimate - half, self.estimate + half)


def _inclusion_replicate(n: int, h: PatternGraph, threshold: float, seed: int, i: int) -> bool:
    beta = replicate_rng(seed, i, stream=0).random(edge_count(n))
    u_f = float(replicate_rng(seed, i, stream=1).random())
    t_star = first_blocking_time(h, Birthtimes(n=n, beta=beta), (0, 1)).t_star
    return bool(u_f * threshold < t_star)


def estimate_conditional_inclusion(
    n: int, h: PatternGraph, x: float, reps: int, seed: int, *, workers: int = 1
) -> InclusionEstimate:
    """Estimate the inclusion probability given a birthtime below the window.

    The window is x * n^(-(v-2)/(e-1)).  Conditioning is by construction:
    the withheld edge's birthtime is sampled uniformly inside the window
    while everything else is sampled unconditionally; the edge is kept iff
    its birthtime beats the first time the rest of the process blocks it.

    pre: reps >= 1 and the window is at most 1.
    """
    if reps < 1:
        raise ParameterError("need reps >= 1")
    require_admissible(h)
    threshold = x * float(n) ** (-(h.num_vertices - 2) / (h.num_edges - 1))
    if threshold > 1.0:
        raise ParameterError(
            f"window {threshold:.4g} exceeds 1; lower the multiplier x = {x}"
        )
    started = time.perf_counter()
    vals = _run_replicates(
        partial(_inclusion_replicate, n, h, threshold, seed), reps, workers
    )
    kept = np.array(vals, dtype=bool)
    return InclusionEstimate(
        n=n,
        pattern=h.label(),
        multiplier=float(x),
        threshold=float(threshold),
        kept=kept,
        seed=seed,
        wall_clock=time.perf_counter() - started,
    )


# ---------------------------------------------------------------------------
# Trimmed-graph statistics (triangle process)
# ---------------------------------------------------------------------------


def path_and_cycle_counts(g: EvolvingGraph) -> tuple[int, int, int, int]:
    """(2-edge paths, triangles, 4-cycles, 5-cycles) of a graph.

    The 5-cycle count is only available on triangle-free input; -1 is
    reported when triangles are present.
    """
    ids = g.edge_ids()
    eu_all, ev_all = edge_arrays(g.n)
    eu, ev = eu_all[ids], ev_all[ids]
    deg = np.bincount(np.concatenate([eu, ev]), minlength=g.n)
    p2 = int((deg * (deg - 1) // 2).sum())
    c3, c4, c5 = kernels.cycle_counts(g.n, eu, ev)
    return p2, int(c3), int(c4), int(c5)


@dataclass(frozen=True)
class TrimmedStats:
    """Early-birthtime restriction of the triangle process, replicated.

    Arrays are per replicate; ``reference`` is the nominal path count
    (n choose 2) * ln(window_factor) the early graph concentrates around.
    """

    n: int
    window_factor: float
    threshold: float
    seed: int
    wall_clock: float
    edges: np.ndarray
    paths2: np.ndarray
    cycles3: np.ndarray
    cycles4: np.ndarray
    cycles5: np.ndarray
    open_pairs: np.ndarray
    reference: float

    @property
    def reps(self) -> int:
        return int(self.paths2.shape[0])

    def mean_stderr(self, arr: np.ndarray) -> tuple[float, float]:
        mean = float(arr.mean())
        if arr.shape[0] < 2:
            return mean, 0.0
        return mean, math.sqrt(float(arr.var(ddof=1)) / arr.shape[0])


def _trimmed_replicate(
    n: int, h: PatternGraph, t0: float, seed: int, i: int
) -> tuple[int, int, int, int, int, int]:
    eu, ev, k, p, ptr, flat = _shared_arrays(n, h)
    beta = replicate_rng(seed, i).random(eu.shape[0])
    order = np.argsort(beta, kind="stable")
    accepted = kernels.run_process(n, eu, ev, order, k, p, ptr, flat)
    trimmed = accepted & (beta < t0)
    ids = np.flatnonzero(trimmed)
    deg = np.bincount(np.concatenate([eu[ids], ev[ids]]), minlength=n)
    c3, c4, c5 = kernels.cycle_counts(n, eu[ids], ev[ids])
    open_pairs = int(kernels.open_pair_count(n, eu, ev, trimmed, beta, t0))
    return (
        int(ids.size),
        int((deg * (deg - 1) // 2).sum()),
        int(c3),
        int(c4),
        int(c5),
        open_pairs,
    )


def trimmed_stats(
    n: int, h: PatternGraph, c: float, reps: int, seed: int, *, workers: int = 1
) -> TrimmedStats:
    """Statistics of the final graph restricted to birthtimes below c/sqrt(n).

    Each replicate runs the triangle process, keeps the accepted edges born
    before the threshold, and counts 2-edge paths, short cycles, and the
    vertex pairs still unblocked at the threshold.

    pre: h is the triangle; c/sqrt(n) <= 1 (equality keeps everything).
    """
    if (h.num_vertices, h.edges) != (3, _TRIANGLE):
        raise ParameterError("trimmed statistics are defined for the triangle pattern")
    if reps < 1:
        raise ParameterError("need reps >= 1")
    t0 = c * n**-0.5
    if t0 > 1.0:
        raise ParameterError(f"threshold c/sqrt(n) = {t0:.4g} exceeds 1")
    started = time.perf_counter()
    rows = _run_replicates(partial(_trimmed_replicate, n, h, t0, seed), reps, workers)
    table = np.array(rows, dtype=np.int64).reshape(reps, 6)
    reference = edge_count(n) * math.log(c) if c > 0 else float("-inf")
    return TrimmedStats(
        n=n,
        window_factor=float(c),
        threshold=float(t0),
        seed=seed,
        wall_clock=time.perf_counter() - started,
        edges=table[:, 0],
        paths2=table[:, 1],
        cycles3=table[:, 2],
        cycles4=table[:, 3],
        cycles5=table[:, 4],
        open_pairs=table[:, 5],
        reference=reference,
    )

# ---------------------------------------------------------------------------
# Survival lower bound, evaluated numerically
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundStep:
    """One summand of the survival bound at index i.

    ``tau`` is the per-index threshold; a non-positive value certifies
    nothing and is recorded but never used.  ``factor`` is the product-form
    term (1 - ln i / (100 l m))^(l m) with l m the nominal level width.
    ``branch`` names the smaller certified value at this index.
    """

    i: int
    tau: float
    factor: float
    branch: str


@dataclass(frozen=True)
class SurvivalBound:
    """Numeric lower bound for the root survival probability."""

    window_factor: int
    tree_depth: int
    level_width: float
    steps: tuple[BoundStep, ...]
    tau_bound: float | None
    product_bound: float
    implied: float


def survival_bound_recursion(params: AsymptoticParams, h: PatternGraph) -> SurvivalBound:
    """Evaluate the two-case survival lower bound, index by index.

    For each i from ceil(c/2) to c-1 the chain offers either the threshold
    tau(i) = ((100 lam)^-1 ln i)^(1/(e-1)) / (i+1) - 2^(1-D), halved, or the
    averaged product term; the implied bound is the smaller of the two
    certified values (indices whose tau is non-positive contribute nothing
    on the threshold side).  Pure arithmetic, no simulation.

    pre: window_factor >= 2, tree_depth >= 2, boost > window_factor.
    errors: NumericRangeError when the product form leaves (0, 1] or the
    exponentiation overflows.
    """
    c, D = params.window_factor, params.tree_depth
    e = h.num_edges
    lam = params.copy_density
    if c < 2:
        raise ParameterError("need window_factor >= 2 (the index range is empty below)")
    if D < 2:
        raise ParameterError("need tree_depth >= 2")
    if params.boost <= c:
        raise ParameterError("need boost > window_factor for the bound to make sense")
    width = lam * params.boost ** (e - 1)
    if width <= 0:
        raise ParameterError("level width must be positive")
    tail = 2.0 ** (1 - D)
    steps: list[BoundStep] = []
    total = 0.0
    taus: list[float] = []
    for i in range(math.ceil(c / 2), c):
        ln_i = math.log(i)
        tau = (ln_i / (100.0 * lam)) ** (1.0 / (e - 1)) / (i + 1) - tail
        x = ln_i / (100.0 * width)
        if x >= 1.0:
            raise NumericRangeError(
                f"product factor 1 - ln {i}/(100*width) = {1 - x:.4g} is not positive"
            )
        factor = math.exp(width * math.log1p(-x))
        if not math.isfinite(factor):
            raise NumericRangeError(f"product factor overflowed at i = {i}")
        total += factor
        if tau > 0:
            taus.append(tau)
        branch = "tau" if 0 < tau / 2 < factor / c else "product"
        steps.append(BoundStep(i=i, tau=tau, factor=factor, branch=branch))
    product_bound = total / c
    tau_bound = min(taus) / 2 if taus else None
    implied = product_bound if tau_bound is None else min(tau_bound, product_bound)
    return SurvivalBound(
        window_factor=c,
        tree_depth=D,
        level_width=width,
        steps=tuple(steps),
        tau_bound=tau_bound,
        product_bound=product_bound,
        implied=implied,
    )


# ---------------------------------------------------------------------------
# Nested uniform moment identity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MomentCheck:
    closed: Fraction
    estimate: float
    stderr: float
    samples: int
    seed: int

    @property
    def z(self) -> float:
        if self.stderr == 0.0:
            return 0.0 if self.estimate == float(self.closed) else math.inf
        return (self.estimate - float(self.closed)) / self.stderr


def nested_uniform_moment_check(
    e: int, t: int, samples: int, seed: int
) -> MomentCheck:
    """Closed form vs Monte Carlo for the ordered uniform product moment.

    The ordered integral of the product of (e-1)-th powers over a
    decreasing chain of t uniforms equals 1 / prod_{i=1..t} (i(e-1)+1).
    Substituting each variable as a fraction of its predecessor turns the
    sample into a product of independent uniform powers, which is what the
    estimator draws.

    pre: e >= 2, t >= 1, samples >= 1.
    """
    if e < 2:
        raise ParameterError("need a pattern edge count e >= 2")
    if t < 1 or samples < 1:
        raise ParameterError("need t >= 1 and samples >= 1")
    denom = 1
    for i in range(1, t + 1):
        denom *= i * (e - 1) + 1
    closed = Fraction(1, denom)
    rng = replicate_rng(seed, 0)
    u = rng.random((samples, t))
    exponents = (e - 1) * np.arange(t, 0, -1, dtype=np.float64)
    y = np.prod(u**exponents, axis=1)
    est = float(y.mean())
    se = float(y.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return MomentCheck(closed=closed, estimate=est, stderr=se, samples=samples, seed=seed)


# ---------------------------------------------------------------------------
# Full tree vs pruned tree
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TreeComparison:
    """Paired survival frequencies of the full and the pruned tree.

    ``skipped`` counts replicates whose sampled tree could not be pruned to
    the target.  The ratio interval divides the two normal intervals end
    against end, which is conservative.
    """

    n: int
    pattern: str
    depth: int
    target: int | str
    survive_full: np.ndarray
    survive_pruned: np.ndarray
    skipped: int
    seed: int
    wall_clock: float

    @property
    def used(self) -> int:
        return int(self.survive_full.shape[0])

    @property
    def p_full(self) -> float:
        return float(self.survive_full.mean()) if self.used else math.nan

    @property
    def p_pruned(self) -> float:
        return float(self.survive_pruned.mean()) if self.used else math.nan

    @property
    def ratio(self) -> float:
        if not self.used or self.p_full == 0.0:
            return math.nan
        return self.p_pruned / self.p_full

    def _ci(self, p: float) -> tuple[float, float]:
        half = 1.96 * math.sqrt(max(p * (1.0 - p), 0.0) / self.used)
        return (max(p - half, 0.0), min(p + half, 1.0))

    @property
    def ratio_ci(self) -> tuple[float, float]:
        lo_f, hi_f = self._ci(self.p_full)
        lo_p, hi_p = self._ci(self.p_pruned)
        if hi_f == 0.0:
            return (math.nan, math.nan)
        return (lo_p / hi_f, hi_p / lo_f if lo_f > 0 else math.inf)


def compare_T_RT(
    n: int,
    h: PatternGraph,
    params: AsymptoticParams,
    depth: int,
    reps: int,
    seed: int,
    *,
    target: int | str | None = None,
    node_cap: int = 1_000_000,
) -> TreeComparison:
    """Survival frequency of the withheld edge on full vs pruned trees.

    Each replicate samples one set of birthtimes, forces the withheld
    edge's birthtime inside the window, builds the tree over the early
    graph, and evaluates the blocked-edge event on the tree and on its
    pruning; both readings share the replicate's randomness.  ``target``
    defaults to the parameter bundle's nominal outdegree; the string
    "full" skips pruning entirely (the pruned tree is the tree itself).
    Replicates whose tree cannot be pruned to the target are skipped and
    counted.  depth 0 short-circuits: the event never holds at height 0.

    pre: reps >= 1, depth >= 0, params.rho <= 1, window at most rho.
    """
    if reps < 1:
        raise ParameterError("need reps >= 1")
    if depth < 0:
        raise ParameterError("need depth >= 0")
    if target is None:
        target = default_prune_target(params)
    started = time.perf_counter()
    if depth == 0:
        ones = np.ones(reps, dtype=bool)
        return TreeComparison(
            n=n,
            pattern=h.label(),
            depth=depth,
            target=target,
            survive_full=ones,
            survive_pruned=ones.copy(),
            skipped=0,
            seed=seed,
            wall_clock=time.perf_counter() - started,
        )
    window = min(params.window, params.rho)
    if window <= 0:
        raise ParameterError("window must be positive")
    m = edge_count(n)
    eu, ev = edge_arrays(n)
    f = (0, 1)
    fid = edge_id(n, 0, 1)
    full_vals: list[bool] = []
    pruned_vals: list[bool] = []
    skipped = 0
    for i in range(reps):
        beta = replicate_rng(seed, i, stream=0).random(m)
        beta[fid] = float(replicate_rng(seed, i, stream=1).random()) * window
        host = EvolvingGraph(n)
        for eidx in np.flatnonzero(beta <= params.rho):
            host.add_edge(int(eu[eidx]), int(ev[eidx]))
        tree = build_tree(f, depth, host, h, node_cap=node_cap)
        if target == "full":
            pruned = tree
        else:
            try:
                pruned = prune_to_RT(tree, int(target))
            except ParameterError:
                skipped += 1
                continue
        bt = Birthtimes(n=n, beta=beta)
        full_vals.append(not bool(eval_B(tree, bt)[0]))
        pruned_vals.append(not bool(eval_B(pruned, bt)[0]))
    return TreeComparison(
        n=n,
        pattern=h.label(),
        depth=depth,
        target=target,
        survive_full=np.array(full_vals, dtype=bool),
        survive_pruned=np.array(pruned_vals, dtype=bool),
        skipped=skipped,
        seed=seed,
        wall_clock=time.perf_counter() - started,
    )
