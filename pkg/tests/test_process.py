import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hfree.analysis import canonical_label, extension_count_complete
from hfree.embedding import contains_copy_full
from hfree.errors import ParameterError
from hfree.graphs import Birthtimes, EvolvingGraph, edge_arrays, edge_id, sample_birthtimes
from hfree.patterns import parse_pattern
from hfree.process import (
    creates_copy,
    enumerate_extensions,
    first_blocking_time,
    maximality_report,
    run_process,
    verify_maximal,
)

K3 = parse_pattern("K3")
C4 = parse_pattern("C4")
K4 = parse_pattern("K4")


@pytest.mark.parametrize("h", [K3, C4, K4], ids=lambda h: h.label())
@pytest.mark.parametrize("seed", [0, 1])
def test_final_graph_is_pattern_free_and_maximal(h, seed):
    trace = run_process(h, sample_birthtimes(18, seed))
    g = trace.graph()
    assert not contains_copy_full(g, h)
    assert verify_maximal(g, h)


def test_rejects_inadmissible_pattern_by_default():
    star = parse_pattern("K_{1,3}")
    with pytest.raises(ParameterError):
        run_process(star, sample_birthtimes(8, 0))


def test_prefix_replay_agrees_with_kernel():
    # acceptance of an edge depends only on earlier-born edges, so replaying
    # the prefix below any cutoff must reproduce the restricted final graph
    h = K3
    bt = sample_birthtimes(14, 3)
    trace = run_process(h, bt)
    for cutoff in (0.2, 0.5, 1.0):
        g = EvolvingGraph(bt.n)
        eu, ev = edge_arrays(bt.n)
        for eid in trace.order.tolist():
            if bt.beta[eid] > cutoff:
                break
            u, v = int(eu[eid]), int(ev[eid])
            if not creates_copy(g, (u, v), h):
                g.add_edge(u, v)
        expect = {
            (int(eu[i]), int(ev[i]))
            for i in np.flatnonzero(trace.accepted & (bt.beta <= cutoff))
        }
        assert g.edges() == expect


def test_witness_replay_structure():
    h = K3
    bt = sample_birthtimes(12, 5)
    trace = run_process(h, bt, record_witnesses=True)
    rejected = np.flatnonzero(~trace.accepted)
    assert set(trace.witnesses) == set(rejected.tolist())
    eu, ev = edge_arrays(bt.n)
    for eid, completion in trace.witnesses.items():
        anchor = (int(eu[eid]), int(ev[eid]))
        # witnesses hold the already-accepted edges only, the anchor is implied
        assert anchor not in completion
        assert len(completion) == h.num_edges - 1
        copy_nodes = {anchor[0], anchor[1]}
        for e in completion:
            other = np.flatnonzero((eu == e[0]) & (ev == e[1]))[0]
            assert trace.accepted[other]
            assert bt.beta[other] < bt.beta[eid]
            copy_nodes.update(e)
        assert canonical_label(completion | {anchor}) == canonical_label(h.edges)
        assert len(copy_nodes) == h.num_vertices


def test_enumerate_extensions_on_complete_host():
    for n, h in ((6, K3), (6, C4), (7, K4)):
        g = EvolvingGraph.from_edges(
            n, [(u, v) for u in range(n) for v in range(u + 1, n)]
        )
        ext = enumerate_extensions(g, (0, 1), h)
        assert ext.count == extension_count_complete(n, h)
        for c in ext.copies:
            assert (0, 1) not in c


def test_maximality_report_counterexample():
    g = EvolvingGraph.from_edges(6, [(0, 1)])
    rep = maximality_report(g, K3)
    assert rep.is_pattern_free
    assert not rep.every_nonedge_blocked
    assert rep.counterexample is not None
    g2 = EvolvingGraph.from_edges(3, [(0, 1), (0, 2), (1, 2)])
    rep2 = maximality_report(g2, K3)
    assert not rep2.is_pattern_free


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=25, deadline=None)
def test_withheld_edge_membership_boundary(seed):
    # f lands in the final graph exactly when its birthtime beats the first
    # blocking time of the traversal run without it
    h = K3
    n = 10
    bt = sample_birthtimes(n, seed)
    blocking = first_blocking_time(h, bt, (0, 1))
    for beta_f in (0.0, 0.25, 0.5, 0.75, 0.999):
        forced = bt.with_edge_value(0, 1, beta_f)
        trace = run_process(h, forced)
        in_m = bool(trace.graph().has_edge(0, 1))
        assert in_m == blocking.withheld_edge_kept(beta_f)
        assert in_m == (beta_f < blocking.t_star)


def test_first_blocking_time_small_host():
    bt = sample_birthtimes(3, 2)
    # with f = (0,1) withheld, the other two edges are always accepted;
    # f is blocked the moment the later of them arrives
    blocking = first_blocking_time(K3, bt, (0, 1))
    others = [bt.beta[edge_id(3, 0, 2)], bt.beta[edge_id(3, 1, 2)]]
    assert blocking.t_star == pytest.approx(max(others))
    assert blocking.rank == 1
    assert blocking.withheld_edge_kept(min(others) / 2)
    assert not blocking.withheld_edge_kept(max(others) + 1e-9)
    # a pattern needing more vertices than the host can never block
    unblocked = first_blocking_time(C4, bt, (0, 1))
    assert math.isinf(unblocked.t_star)
    assert unblocked.rank == -1
    assert unblocked.withheld_edge_kept(0.999)


def test_trace_csv(tmp_path):
    trace = run_process(K3, sample_birthtimes(7, 1))
    path = tmp_path / "trace.csv"
    trace.write_csv(str(path))
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "rank,u,v,beta,accepted"
    assert len(lines) == 1 + trace.num_edges
