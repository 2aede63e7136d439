"""Random maximal H-free graph process: simulation, enumeration, verification.

The process traverses the edges of the complete graph on n vertices in the
increasing order of i.i.d. uniform birthtimes and keeps an edge exactly when
adding it creates no copy of a fixed pattern graph H.  This package
simulates that process at scale, enumerates small cases exactly, and checks
the structural conditions (extension counts, survival trees, blocking
events) that drive its analysis.
"""

from .analysis import (
    AsymptoticParams,
    BadSequence,
    ConflictStats,
    ExtensionBandReport,
    GoodTreeReport,
    SurvivalTree,
    asymptotic_params,
    build_tree,
    canonical_label,
    check_E1,
    check_good,
    conflict_graph_stats,
    default_prune_target,
    eval_B,
    extension_count_complete,
    find_bad_sequences,
    prune_to_RT,
)
from .backend import BACKEND
from .errors import (
    CapabilityError,
    DataError,
    HFreeError,
    NodeCapExceeded,
    NumericRangeError,
    ParameterError,
)
from .estimators import (
    InclusionEstimate,
    MomentCheck,
    RunStats,
    SurvivalBound,
    SweepResult,
    TreeComparison,
    TrimmedStats,
    compare_T_RT,
    estimate_conditional_inclusion,
    estimate_expected_edges,
    fit_exponent,
    nested_uniform_moment_check,
    run_sweep,
    survival_bound_recursion,
    trimmed_stats,
)
from .graphs import (
    Birthtimes,
    EvolvingGraph,
    edge_arrays,
    edge_count,
    edge_id,
    replicate_rng,
    sample_birthtimes,
)
from .oracle import ExactResult, exact_expectation, exact_extremal
from .patterns import (
    BalanceReport,
    PatternGraph,
    balance_report,
    epsilon_gap,
    make_catalog,
    parse_pattern,
    pattern_from_file,
    require_admissible,
    two_density,
)
from .process import (
    BlockingTime,
    ProcessTrace,
    enumerate_extensions,
    first_blocking_time,
    maximality_report,
    run_process,
    verify_maximal,
)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticParams",
    "BACKEND",
    "BadSequence",
    "BalanceReport",
    "Birthtimes",
    "BlockingTime",
    "CapabilityError",
    "ConflictStats",
    "DataError",
    "EvolvingGraph",
    "ExactResult",
    "ExtensionBandReport",
    "GoodTreeReport",
    "HFreeError",
    "InclusionEstimate",
    "MomentCheck",
    "NodeCapExceeded",
    "NumericRangeError",
    "ParameterError",
    "PatternGraph",
    "ProcessTrace",
    "RunStats",
    "SurvivalBound",
    "SurvivalTree",
    "SweepResult",
    "TreeComparison",
    "TrimmedStats",
    "asymptotic_params",
    "balance_report",
    "build_tree",
    "canonical_label",
    "check_E1",
    "check_good",
    "compare_T_RT",
    "conflict_graph_stats",
    "default_prune_target",
    "edge_arrays",
    "edge_count",
    "edge_id",
    "enumerate_extensions",
    "epsilon_gap",
    "estimate_conditional_inclusion",
    "estimate_expected_edges",
    "eval_B",
    "exact_expectation",
    "exact_extremal",
    "extension_count_complete",
    "find_bad_sequences",
    "first_blocking_time",
    "fit_exponent",
    "make_catalog",
    "maximality_report",
    "nested_uniform_moment_check",
    "parse_pattern",
    "pattern_from_file",
    "prune_to_RT",
    "replicate_rng",
    "require_admissible",
    "run_process",
    "run_sweep",
    "sample_birthtimes",
    "survival_bound_recursion",
    "trimmed_stats",
    "two_density",
    "verify_maximal",
    "__version__",
]
