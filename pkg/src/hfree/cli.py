"""Experiment front-end: flag parsing, dispatch, structured artifacts.

Every subcommand parses its flags into an ExperimentConfig, runs the
corresponding library call, writes a JSON summary (plus CSVs where the
output is tabular), and prints a short human-readable line.  The JSON
artifact embeds the full config and all seeds, so re-running the embedded
config reproduces the file byte for byte; wall-clock times are deliberately
left out of artifacts for that reason.

Exit codes: 0 success, 2 usage or parameter errors, 3 capability limits
(size caps, numeric range), 4 internal faults.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import re
import sys
from collections import Counter
from collections.abc import Mapping
from dataclasses import dataclass, fields, is_dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .analysis import (
    asymptotic_params,
    build_tree,
    check_E1,
    check_good,
    eval_B,
    find_bad_sequences,
)
from .errors import (
    CapabilityError,
    DataError,
    HFreeError,
    NodeCapExceeded,
    NumericRangeError,
    ParameterError,
)
from .estimators import (
    estimate_conditional_inclusion,
    run_sweep,
    survival_bound_recursion,
    trimmed_stats,
)
from .graphs import Birthtimes, EvolvingGraph, edge_arrays, edge_count, edge_id, replicate_rng
from .oracle import exact_expectation, exact_extremal
from .patterns import automorphism_count, balance_report, parse_pattern, pattern_from_file
from .process import run_process, verify_maximal

SCHEMA_VERSION = "1"
OUTPUT_DIR_ENV = "HFREE_OUTPUT_DIR"


# ---------------------------------------------------------------------------
# Config and serialization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    """One parsed invocation, embedded verbatim in every artifact it writes."""

    subcommand: str
    options: dict[str, Any]

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "ExperimentConfig":
        opts = {k: v for k, v in vars(args).items() if not k.startswith("_")}
        return cls(subcommand=opts.pop("subcommand"), options=opts)

    def to_dict(self) -> dict[str, Any]:
        return {"subcommand": self.subcommand, "options": _jsonable(self.options)}

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha1(blob).hexdigest()[:8]


def _jsonable(x: Any) -> Any:
    """Recursively convert to plain JSON types; rationals become "p/q"."""
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (float, np.floating)):
        v = float(x)
        return v if math.isfinite(v) else repr(v)
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, Mapping):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (frozenset, set)):
        return sorted((_jsonable(v) for v in x), key=lambda v: (isinstance(v, list), str(v)))
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if is_dataclass(x) and not isinstance(x, type):
        return {f.name: _jsonable(getattr(x, f.name)) for f in fields(x)}
    return str(x)


def _slug(text: str) -> str:
    return re.sub(r"-+", "-", "".join(ch if ch.isalnum() else "-" for ch in text)).strip("-")


def _resolve_out_dir(explicit: str | None) -> Path:
    root = explicit or os.environ.get(OUTPUT_DIR_ENV) or "."
    path = Path(root)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_artifact(path: Path, config: ExperimentConfig, results: dict[str, Any]) -> None:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": config.subcommand,
        "config": config.to_dict(),
        "results": _jsonable(results),
    }
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in row])


def _load_pattern(text: str):
    p = Path(text)
    if p.is_file():
        return pattern_from_file(p)
    return parse_pattern(text)


def _default_workers() -> int:
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# Argument helpers
# ---------------------------------------------------------------------------


class _CliParser(argparse.ArgumentParser):
    """Parser whose usage failures end with one machine-readable stderr line."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(json.dumps({"error": "usage", "detail": message}), file=sys.stderr)
        raise SystemExit(2)


def _int_list(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return vals


def _float_list(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("expected at least one number")
    return vals


def _edge_arg(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected an edge as u,v, got {text!r}")
    try:
        u, v = int(parts[0]), int(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an edge as u,v, got {text!r}")
    return u, v


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _cmd_simulate(args: argparse.Namespace, config: ExperimentConfig) -> int:
    h = _load_pattern(args.pattern)
    out = _resolve_out_dir(args.out_dir)
    beta = replicate_rng(args.seed, 0).random(edge_count(args.n))
    trace = run_process(h, Birthtimes(n=args.n, beta=beta))
    maximal = verify_maximal(trace.graph(), h) if args.check_maximal else None
    stem = f"simulate-{_slug(h.label())}-{config.digest()}"
    csv_path = out / f"{stem}.csv"
    trace.write_csv(str(csv_path))
    results = {
        "n": args.n,
        "pattern": h.label(),
        "final_edges": trace.num_accepted,
        "traversed_edges": trace.num_edges,
        "maximal": maximal,
        "trace_csv": csv_path.name,
    }
    json_path = out / f"{stem}.json"
    _write_artifact(json_path, config, results)
    print(f"final graph: {trace.num_accepted} edges (n={args.n}, pattern {h.label()})")
    if maximal is not None:
        print(f"maximality check: {'ok' if maximal else 'FAILED'}")
    print(f"wrote {json_path} and {csv_path}")
    return 0


def _cmd_sweep(args: argparse.Namespace, config: ExperimentConfig) -> int:
    h = _load_pattern(args.pattern)
    out = _resolve_out_dir(args.out_dir)
    sweep = run_sweep(args.n, h, args.reps, args.seed, workers=args.workers)
    per_n = [
        {
            "n": n,
            "derived_seed": rs.seed,
            "reps": rs.reps,
            "mean": rs.mean,
            "variance": rs.variance,
            "stderr": rs.stderr,
        }
        for n, rs in sweep.runs
    ]
    fit = sweep.fit
    results = {
        "pattern": h.label(),
        "per_n": per_n,
        "fit": {
            "slope": fit.slope,
            "intercept": fit.intercept,
            "stderr": fit.stderr,
            "band": list(fit.band),
        },
    }
    stem = f"sweep-{_slug(h.label())}-{config.digest()}"
    json_path = out / f"{stem}.json"
    _write_artifact(json_path, config, results)
    csv_path = out / f"{stem}.csv"
    _write_csv(
        csv_path,
        ["n", "derived_seed", "reps", "mean", "variance", "stderr"],
        [[r["n"], r["derived_seed"], r["reps"], r["mean"], r["variance"], r["stderr"]] for r in per_n],
    )
    written = [json_path, csv_path]
    if args.per_replicate:
        rep_path = out / f"{stem}-replicates.csv"
        rows = [
            [n, i, int(c)]
            for n, rs in sweep.runs
            for i, c in enumerate(rs.counts.tolist())
        ]
        _write_csv(rep_path, ["n", "replicate", "edges"], rows)
        written.append(rep_path)
    lo, hi = fit.band
    print(f"fitted exponent {fit.slope:.4f} (95% band {lo:.4f}..{hi:.4f})")
    print("wrote " + " and ".join(str(p) for p in written))
    return 0


def _cmd_survival(args: argparse.Namespace, config: ExperimentConfig) -> int:
    h = _load_pattern(args.pattern)
    out = _resolve_out_dir(args.out_dir)
    estimates = [
        estimate_conditional_inclusion(args.n, h, x, args.reps, args.seed, workers=args.workers)
        for x in args.x
    ]
    per_x = [
        {
            "multiplier": est.multiplier,
            "threshold": est.threshold,
            "reps": est.reps,
            "estimate": est.estimate,
            "stderr": est.stderr,
            "ci": list(est.ci),
            "scaled_estimate": est.multiplier * est.estimate,
        }
        for est in estimates
    ]
    results = {"n": args.n, "pattern": h.label(), "per_multiplier": per_x}
    stem = f"survival-{_slug(h.label())}-{config.digest()}"
    json_path = out / f"{stem}.json"
    _write_artifact(json_path, config, results)
    csv_path = out / f"{stem}.csv"
    _write_csv(
        csv_path,
        ["multiplier", "threshold", "reps", "estimate", "stderr", "ci_low", "ci_high", "scaled_estimate"],
        [
            [r["multiplier"], r["threshold"], r["reps"], r["estimate"], r["stderr"], r["ci"][0], r["ci"][1], r["scaled_estimate"]]
            for r in per_x
        ],
    )
    written = [json_path, csv_path]
    if args.per_replicate:
        rep_path = out / f"{stem}-replicates.csv"
        rows = [
            [est.multiplier, i, int(kept)]
            for est in estimates
            for i, kept in enumerate(est.kept.tolist())
        ]
        _write_csv(rep_path, ["multiplier", "replicate", "kept"], rows)
        written.append(rep_path)
    for r in per_x:
        print(
            f"x={r['multiplier']:g}: estimate {r['estimate']:.4f} "
            f"(se {r['stderr']:.4f}), scaled {r['scaled_estimate']:.4f}"
        )
    print("wrote " + " and ".join(str(p) for p in written))
    return 0


def _cmd_trimmed(args: argparse.Namespace, config: ExperimentConfig) -> int:
    h = _load_pattern(args.pattern)
    out = _resolve_out_dir(args.out_dir)
    ts = trimmed_stats(args.n, h, args.window_factor, args.reps, args.seed, workers=args.workers)
    names = ("edges", "paths2", "cycles3", "cycles4", "cycles5", "open_pairs")
    stats = {}
    for name in names:
        mean, se = ts.mean_stderr(getattr(ts, name))
        stats[name] = {"mean": mean, "stderr": se}
    results = {
        "n": ts.n,
        "pattern": h.label(),
        "window_factor": ts.window_factor,
        "threshold": ts.threshold,
        "reps": ts.reps,
        "reference_paths2": ts.reference,
        "stats": stats,
    }
    stem = f"trimmed-{_slug(h.label())}-{config.digest()}"
    json_path = out / f"{stem}.json"
    _write_artifact(json_path, config, results)
    csv_path = out / f"{stem}.csv"
    header = ["n", "window_factor", "threshold", "reps", "reference_paths2"]
    row: list[Any] = [ts.n, ts.window_factor, ts.threshold, ts.reps, ts.reference]
    for name in names:
        header += [f"{name}_mean", f"{name}_stderr"]
        row += [stats[name]["mean"], stats[name]["stderr"]]
    _write_csv(csv_path, header, [row])
    written = [json_path, csv_path]
    if args.per_replicate:
        rep_path = out / f"{stem}-replicates.csv"
        rows = [
            [i] + [int(getattr(ts, name)[i]) for name in names]
            for i in range(ts.reps)
        ]
        _write_csv(rep_path, ["replicate", *names], rows)
        written.append(rep_path)
    ratio = stats["paths2"]["mean"] / ts.reference if ts.reference else math.nan
    print(
        f"paths2 mean {stats['paths2']['mean']:.1f} vs reference {ts.reference:.1f} "
        f"(ratio {ratio:.3f}) over {ts.reps} replicates"
    )
    print("wrote " + " and ".join(str(p) for p in written))
    return 0


def _cmd_tree_audit(args: argparse.Namespace, config: ExperimentConfig) -> int:
    h = _load_pattern(args.pattern)
    out = _resolve_out_dir(args.out_dir)
    params = asymptotic_params(
        args.n,
        h,
        boost=args.boost,
        rho=args.rho,
        window_factor=args.window_factor,
        tree_depth=args.tree_depth,
        copy_density=args.copy_density,
    )
    f = args.edge
    fid = edge_id(args.n, *f)
    m = edge_count(args.n)
    beta = replicate_rng(args.seed, 0, stream=0).random(m)
    window = min(params.window, params.rho)
    beta[fid] = float(replicate_rng(args.seed, 0, stream=1).random()) * window
    eu, ev = edge_arrays(args.n)
    host = EvolvingGraph(args.n)
    for eidx in np.flatnonzero(beta <= params.rho):
        host.add_edge(int(eu[eidx]), int(ev[eidx]))
    tree = build_tree(f, args.depth, host, h, node_cap=args.node_cap)
    good = check_good(tree, host, h, threshold=args.p3_threshold)
    band = check_E1(host, h, params)
    bad = find_bad_sequences(host, f, h, cap=args.sequence_cap)
    by_type = Counter(s.overlap_type for s in bad)
    blocked = bool(eval_B(tree, Birthtimes(n=args.n, beta=beta))[0])
    results = {
        "n": args.n,
        "pattern": h.label(),
        "edge": list(f),
        "depth": args.depth,
        "params": params,
        "host_edges": host.num_edges,
        "forced_edge_birthtime": float(beta[fid]),
        "tree": {
            "nodes": tree.num_nodes,
            "edge_nodes": sum(1 for _ in tree.edge_nodes()),
            "copy_nodes": sum(1 for _ in tree.copy_nodes()),
        },
        "good": good,
        "extension_band": {
            "ok": band.ok,
            "low": band.low,
            "high": band.high,
            "violations": band.violations,
            "histogram": band.histogram(),
        },
        "bad_sequences": {
            "count": len(bad),
            "complete": bad.complete,
            "explored": bad.explored,
            "by_overlap_type": dict(by_type),
            "max_length": max((len(s.copies) for s in bad), default=0),
            "examples": list(bad[:5]),
        },
        "root_blocked": blocked,
    }
    if args.report:
        json_path = Path(args.report)
        if json_path.parent != Path(""):
            json_path.parent.mkdir(parents=True, exist_ok=True)
    else:
        json_path = out / f"tree-audit-{_slug(h.label())}-{config.digest()}.json"
    _write_artifact(json_path, config, results)
    print(f"P1 root edge unused by copies: {'ok' if good.p1_ok else 'FAIL'}")
    print(f"P2 copy labels edge-disjoint: {'ok' if good.p2_ok else 'FAIL'}")
    print(
        f"P3 outdegree deficits <= {good.p3_threshold}: "
        f"{'ok' if good.p3_ok else 'FAIL'} (max deficit {good.max_deficit})"
    )
    print(
        f"extension band [{band.low:.2f}, {band.high:.2f}]: "
        f"{'ok' if band.ok else f'FAIL ({len(band.violations)} witnesses kept)'}"
    )
    suffix = "" if bad.complete else " (truncated at cap)"
    print(f"bad sequences: {len(bad)}{suffix}")
    print(f"root blocked: {blocked}")
    print(f"wrote {json_path}")
    return 0


def _cmd_bound_calc(args: argparse.Namespace, config: ExperimentConfig) -> int:
    h = _load_pattern(args.pattern)
    out = _resolve_out_dir(args.out_dir)
    # rho plays no part in the bound; pin it so the formula guard cannot trip
    params = asymptotic_params(
        args.n,
        h,
        boost=args.boost,
        rho=1.0,
        window_factor=args.window_factor,
        tree_depth=args.tree_depth,
        copy_density=args.copy_density,
    )
    sb = survival_bound_recursion(params, h)
    results = {
        "n": args.n,
        "pattern": h.label(),
        "boost": params.boost,
        "copy_density": params.copy_density,
        "window_factor": sb.window_factor,
        "tree_depth": sb.tree_depth,
        "level_width": sb.level_width,
        "steps": list(sb.steps),
        "tau_bound": sb.tau_bound,
        "product_bound": sb.product_bound,
        "implied": sb.implied,
    }
    stem = f"bound-calc-{_slug(h.label())}-{config.digest()}"
    json_path = out / f"{stem}.json"
    _write_artifact(json_path, config, results)
    csv_path = out / f"{stem}.csv"
    _write_csv(
        csv_path,
        ["i", "tau", "factor", "branch"],
        [[s.i, s.tau, s.factor, s.branch] for s in sb.steps],
    )
    tau_txt = "none" if sb.tau_bound is None else f"{sb.tau_bound:.6g}"
    print(
        f"implied survival lower bound {sb.implied:.6g} "
        f"(threshold branch {tau_txt}, product branch {sb.product_bound:.6g})"
    )
    print(f"wrote {json_path} and {csv_path}")
    return 0


def _cmd_oracle(args: argparse.Namespace, config: ExperimentConfig) -> int:
    h = _load_pattern(args.pattern)
    out = _resolve_out_dir(args.out_dir)
    if args.mode == "expectation":
        res = exact_expectation(h, args.n, method=args.method)
        frac = res.expectation
        print(
            f"E[final edges] = {frac.numerator}/{frac.denominator} "
            f"= {float(frac):.12g}  ({res.method}, n={args.n}, pattern {h.label()})"
        )
        results = {
            "mode": "expectation",
            "n": args.n,
            "pattern": h.label(),
            "method": res.method,
            "num_copies": res.num_copies,
            "work": res.work,
            "expectation": frac,
            "expectation_decimal": float(frac),
        }
    else:
        if args.method != "auto":
            raise ParameterError("--method applies to --mode expectation only")
        val = exact_extremal(h, args.n)
        print(f"extremal edge count = {val}  (n={args.n}, pattern {h.label()})")
        results = {
            "mode": "extremal",
            "n": args.n,
            "pattern": h.label(),
            "value": val,
        }
    json_path = out / f"oracle-{_slug(h.label())}-{config.digest()}.json"
    _write_artifact(json_path, config, results)
    print(f"wrote {json_path}")
    return 0


def _cmd_pattern_check(args: argparse.Namespace, config: ExperimentConfig) -> int:
    h = _load_pattern(args.pattern)
    out = _resolve_out_dir(args.out_dir)
    rep = balance_report(h)
    witness = None
    if rep.witness_vertices is not None:
        witness = {
            "vertices": list(rep.witness_vertices),
            "edges": [list(e) for e in rep.witness_edges],
        }
    results = {
        "pattern": h.label(),
        "vertices": h.num_vertices,
        "edge_count": h.num_edges,
        "edges": [list(e) for e in h.edges],
        "is_regular": rep.is_regular,
        "two_density": rep.two_density,
        "is_strictly_two_balanced": rep.is_strictly_two_balanced,
        "epsilon_gap": rep.epsilon_gap,
        "is_admissible": rep.is_admissible,
        "reason": rep.reason,
        "witness": witness,
        "automorphisms": automorphism_count(h),
    }
    json_path = out / f"pattern-check-{_slug(h.label())}-{config.digest()}.json"
    _write_artifact(json_path, config, results)
    print(json.dumps(_jsonable(results), indent=2, sort_keys=True))
    return 0


# ---------------------------------------------------------------------------
# Parser assembly
# ---------------------------------------------------------------------------


def _add_pattern(sp, *, default: str | None = None) -> None:
    sp.add_argument(
        "--pattern",
        required=default is None,
        default=default,
        help="catalog name (K3, C4, K4, K_{3,3}, Q3, K_{1,4}, ...) or an edge-list file",
    )


def _add_out_dir(sp) -> None:
    sp.add_argument(
        "--out-dir",
        default=None,
        help=f"artifact directory (default: ${OUTPUT_DIR_ENV} or the working directory)",
    )


def _add_workers(sp) -> None:
    sp.add_argument(
        "--workers",
        type=int,
        default=_default_workers(),
        help="parallel replicate processes; results are identical for any value",
    )


def _build_parser() -> _CliParser:
    parser = _CliParser(
        prog="hfree",
        description="Simulation, enumeration and audit toolkit for the random maximal pattern-free graph process.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_CliParser)

    sp = sub.add_parser("simulate", help="run the process once; write trace CSV + summary JSON")
    _add_pattern(sp)
    sp.add_argument("--n", type=int, required=True, help="number of vertices")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--check-maximal", action="store_true", help="verify no further edge fits (slow for large n)")
    _add_out_dir(sp)
    sp.set_defaults(_handler=_cmd_simulate)

    sp = sub.add_parser("sweep", help="final-size means across n plus fitted log-log exponent")
    _add_pattern(sp)
    sp.add_argument("--n", type=_int_list, required=True, metavar="N1,N2,...", help="comma-separated sizes")
    sp.add_argument("--reps", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--per-replicate", action="store_true", help="also write one CSV row per replicate")
    _add_workers(sp)
    _add_out_dir(sp)
    sp.set_defaults(_handler=_cmd_sweep)

    sp = sub.add_parser(
        "survival",
        help="conditional inclusion probability of a withheld small-birthtime edge",
    )
    _add_pattern(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument(
        "--x",
        type=_float_list,
        default=(2.0, 4.0, 8.0),
        metavar="X1,X2,...",
        help="window multipliers; one shared seed gives matched replicates across them",
    )
    sp.add_argument("--reps", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--per-replicate", action="store_true", help="also write one CSV row per replicate")
    _add_workers(sp)
    _add_out_dir(sp)
    sp.set_defaults(_handler=_cmd_survival)

    sp = sub.add_parser("trimmed", help="statistics of the triangle process cut at c/sqrt(n)")
    _add_pattern(sp, default="K3")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--window-factor", type=float, default=4.0, metavar="C", help="birthtime cutoff multiplier c")
    sp.add_argument("--reps", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--per-replicate", action="store_true", help="also write one CSV row per replicate")
    _add_workers(sp)
    _add_out_dir(sp)
    sp.set_defaults(_handler=_cmd_trimmed)

    sp = sub.add_parser(
        "tree-audit",
        help="build one survival tree over a sampled host and audit its structure",
    )
    _add_pattern(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--rho", type=float, required=True, help="host density: edges with birthtime <= rho")
    sp.add_argument("--depth", type=int, required=True, help="tree half-depth d")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--edge", type=_edge_arg, default=(0, 1), metavar="U,V", help="root edge (default 0,1)")
    sp.add_argument("--boost", type=float, default=None, help="override the boost factor")
    sp.add_argument("--window-factor", type=int, default=None, help="override the window multiplier")
    sp.add_argument("--tree-depth", type=int, default=None, help="override the nominal tree depth parameter")
    sp.add_argument("--copy-density", type=float, default=None, help="override the per-edge copy density")
    sp.add_argument("--p3-threshold", type=int, default=None, help="max tolerated outdegree deficit")
    sp.add_argument("--sequence-cap", type=int, default=1_000_000, help="bad-sequence search budget")
    sp.add_argument("--node-cap", type=int, default=1_000_000, help="tree size cap")
    sp.add_argument("--report", default=None, metavar="OUT.JSON", help="explicit report path")
    _add_out_dir(sp)
    sp.set_defaults(_handler=_cmd_tree_audit)

    sp = sub.add_parser("bound-calc", help="evaluate the survival lower-bound chain")
    _add_pattern(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--boost", type=float, default=None, help="override the boost factor")
    sp.add_argument("--window-factor", type=int, default=None, help="override the window multiplier")
    sp.add_argument("--tree-depth", type=int, default=None, help="override the tree depth parameter")
    sp.add_argument("--copy-density", type=float, default=None, help="override the per-edge copy density")
    _add_out_dir(sp)
    sp.set_defaults(_handler=_cmd_bound_calc)

    sp = sub.add_parser("oracle", help="exact brute-force values at tiny n")
    sp.add_argument("--mode", choices=("expectation", "extremal"), required=True)
    _add_pattern(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument(
        "--method",
        choices=("auto", "full-permutation", "state-recursion"),
        default="auto",
        help="expectation only: force one enumeration strategy",
    )
    _add_out_dir(sp)
    sp.set_defaults(_handler=_cmd_oracle)

    sp = sub.add_parser("pattern-check", help="regularity / strict balance report for a pattern")
    _add_pattern(sp)
    _add_out_dir(sp)
    sp.set_defaults(_handler=_cmd_pattern_check)

    return parser


def _fail(kind: str, exc: BaseException) -> None:
    print(
        json.dumps({"error": kind, "type": type(exc).__name__, "detail": str(exc)}),
        file=sys.stderr,
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    config = ExperimentConfig.from_args(args)
    try:
        return args._handler(args, config)
    except (ParameterError, DataError) as exc:
        _fail("parameter", exc)
        return 2
    except (CapabilityError, NodeCapExceeded, NumericRangeError) as exc:
        _fail("capability", exc)
        return 3
    except HFreeError as exc:
        _fail("internal", exc)
        return 4
    except Exception as exc:
        _fail("internal", exc)
        return 4


if __name__ == "__main__":
    sys.exit(main())
