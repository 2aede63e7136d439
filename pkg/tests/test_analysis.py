import math

import numpy as np
import pytest

from hfree.analysis import (
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
from hfree.errors import CapabilityError, DataError, NodeCapExceeded, ParameterError
from hfree.graphs import Birthtimes, EvolvingGraph, edge_count, edge_id
from hfree.patterns import parse_pattern
from hfree.process import enumerate_extensions

K3 = parse_pattern("K3")
C4 = parse_pattern("C4")
K4 = parse_pattern("K4")

F = (0, 1)


def complete_host(n: int) -> EvolvingGraph:
    return EvolvingGraph.from_edges(
        n, [(u, v) for u in range(n) for v in range(u + 1, n)]
    )


def two_triangle_host() -> EvolvingGraph:
    # triangles 012 and 013 hang off the withheld edge (0,1), sharing nothing else
    return EvolvingGraph.from_edges(4, [(0, 2), (1, 2), (0, 3), (1, 3)])


def booked_host() -> EvolvingGraph:
    # same, plus the edge (2,3) tying the two triangles together
    return EvolvingGraph.from_edges(4, [(0, 2), (1, 2), (0, 3), (1, 3), (2, 3)])


def beta_from(n: int, assignments: dict) -> Birthtimes:
    beta = np.full(edge_count(n), 0.99)
    for (u, v), t in assignments.items():
        beta[edge_id(n, u, v)] = t
    return Birthtimes(n=n, beta=beta)


# ---------------------------------------------------------------------------
# extension counts and parameters
# ---------------------------------------------------------------------------


def test_extension_count_closed_form():
    for n in range(3, 9):
        assert extension_count_complete(n, K3) == n - 2
    assert extension_count_complete(4, C4) == 2
    assert extension_count_complete(5, K4) == 3
    assert extension_count_complete(3, C4) == 0


@pytest.mark.parametrize("h", [K3, C4, K4], ids=lambda h: h.label())
def test_extension_count_matches_enumeration(h):
    n = 7
    got = enumerate_extensions(complete_host(n), F, h).count
    assert got == extension_count_complete(n, h)


def test_asymptotic_params_large_n_defaults():
    p = asymptotic_params(1000, K3)
    assert p.overrides == {}
    assert 0.0 < p.rho < 1.0
    assert p.tree_depth == 3
    assert p.window_factor == 1
    assert p.critical_exponent == pytest.approx(0.5)
    assert p.window == pytest.approx(1000.0**-0.5)
    assert p.copy_density == pytest.approx(998 / 1000)


def test_asymptotic_params_small_n_needs_rho_override():
    with pytest.raises(ParameterError):
        asymptotic_params(10, K3)
    p = asymptotic_params(10, K3, rho=0.5)
    assert p.rho == 0.5
    assert p.overrides == {"rho": 0.5}
    assert p.formula["rho"] > 1.0
    with pytest.raises(ParameterError):
        asymptotic_params(2, K3)


def test_derived_widths_and_prune_target():
    p = asymptotic_params(100, K3, boost=4.0, rho=0.5, copy_density=0.5)
    assert p.expected_level_width == pytest.approx(0.5 * 16)
    assert p.band_halfwidth == pytest.approx(4.0 ** (3 / 2 - 1 / 3) / 2)
    assert default_prune_target(p) == 8 - math.floor(4.0 ** (3 / 2 - 1 / 3))


# ---------------------------------------------------------------------------
# tree construction
# ---------------------------------------------------------------------------


def test_tree_depth_one_shape():
    n = 6
    t = build_tree(F, 1, complete_host(n), K3)
    lam = n - 2
    # root, one copy node per copy, e-1 completion edges under each
    assert t.num_nodes == 1 + lam * (1 + (K3.num_edges - 1))
    assert t.root_edge == F
    assert t.lambda_count[0] == lam
    assert len(t.children[0]) == lam
    for v in t.copy_nodes():
        assert t.depth[v] == 1
        assert len(t.children[v]) == K3.num_edges - 1
    for v in t.edge_nodes():
        if t.depth[v] == 2:
            assert t.children[v] == []
            assert t.lambda_count[v] == -1


def test_tree_grandparent_exclusion():
    n = 5
    t = build_tree(F, 2, complete_host(n), K3)
    for v in t.edge_nodes():
        if t.depth[v] != 2:
            continue
        assert t.lambda_count[v] == n - 2
        # one copy through this edge goes back through the root edge
        assert len(t.children[v]) == n - 3
        for c in t.children[v]:
            assert F not in t.copy_label[c]


def test_tree_rejects_bad_input():
    host = complete_host(5)
    with pytest.raises(ParameterError):
        build_tree(F, 0, host, K3)
    with pytest.raises(ParameterError):
        build_tree((2, 2), 1, host, K3)
    with pytest.raises(ParameterError):
        build_tree((0, 9), 1, host, K3)


def test_tree_node_cap():
    with pytest.raises(NodeCapExceeded) as ei:
        build_tree(F, 2, complete_host(6), K3, node_cap=30)
    partial = ei.value.partial
    assert partial is not None
    assert partial.num_nodes <= 30


# ---------------------------------------------------------------------------
# audits
# ---------------------------------------------------------------------------


def test_good_tree_on_disjoint_triangles():
    host = two_triangle_host()
    t = build_tree(F, 2, host, K3)
    rep = check_good(t, host, K3)
    assert rep.ok
    assert rep.p1_witness is None and rep.p2_witness is None
    # without f in the host no copy through a deeper edge exists at all
    assert rep.max_deficit == 0
    assert rep.deficit_histogram == {0: 5}


def test_good_tree_deficit_from_exclusion():
    # with f itself a host edge, each depth-2 node has one copy going back
    # through the root, which the exclusion removes: deficit 1
    host = EvolvingGraph.from_edges(4, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)])
    t = build_tree(F, 2, host, K3)
    rep = check_good(t, host, K3)
    assert rep.ok
    assert rep.max_deficit == 1
    assert rep.deficit_histogram == {0: 1, 1: 4}
    assert rep.max_deficit_node is not None
    assert t.depth[rep.max_deficit_node] == 2
    strict = check_good(t, host, K3, threshold=0)
    assert not strict.p3_ok
    assert strict.p1_ok and strict.p2_ok
    assert not strict.ok


def test_dense_host_tree_is_not_good():
    host = complete_host(5)
    t = build_tree(F, 2, host, K3)
    rep = check_good(t, host, K3)
    assert rep.p1_ok
    assert not rep.p2_ok
    a, b, shared = rep.p2_witness
    assert shared in t.copy_label[a] and shared in t.copy_label[b]
    assert a != b


def test_extension_band():
    host = complete_host(5)
    params = asymptotic_params(
        5, K3, boost=1.0, rho=0.5, window_factor=1, tree_depth=1, copy_density=3.0
    )
    rep = check_E1(host, K3, params)
    assert rep.ok
    assert np.all(rep.counts == 3)
    assert rep.histogram() == {3: 10}
    off = asymptotic_params(
        5, K3, boost=1.0, rho=0.5, window_factor=1, tree_depth=1, copy_density=10.0
    )
    rep2 = check_E1(host, K3, off)
    assert not rep2.ok
    assert len(rep2.violations) == 10
    assert rep2.violations[0][1] == 3


# ---------------------------------------------------------------------------
# canonical labels and bad sequences
# ---------------------------------------------------------------------------


def test_canonical_label_known_forms():
    assert canonical_label([(0, 1), (0, 2), (1, 2)]) == "v3:01,02,12"
    assert canonical_label([(0, 1), (1, 2)]) == "v3:01,02"
    assert canonical_label([(5, 7), (7, 9)]) == "v3:01,02"
    assert canonical_label([(3, 8)]) == "v2:01"


def test_canonical_label_isomorphism_invariance():
    square = [(0, 1), (1, 2), (2, 3), (0, 3)]
    relabeled = [(4, 9), (9, 2), (2, 7), (4, 7)]
    assert canonical_label(square) == canonical_label(relabeled)
    assert canonical_label(square) != canonical_label([(0, 1), (1, 2), (2, 3), (1, 3)])


def test_canonical_label_limits():
    with pytest.raises(CapabilityError):
        canonical_label([(2 * i, 2 * i + 1) for i in range(6)])
    with pytest.raises(ParameterError):
        canonical_label([(1, 1)])


def test_bad_sequences_absent_on_disjoint_triangles():
    out = find_bad_sequences(two_triangle_host(), F, K3)
    assert out == []
    assert out.complete
    assert out.explored > 0


def test_bad_sequences_found_in_booked_host():
    out = find_bad_sequences(booked_host(), F, K3)
    assert out.complete
    assert len(out) > 0
    for s in out:
        assert len(s.copies) >= 2
        assert s.shared_vertices >= 3
        assert s.shared_edges <= K3.num_edges - 2
        assert len(s.anchors) == len(s.copies)
        assert s.anchors[-1] in s.overlap_edges
    # every overlap here is an anchor plus one earlier edge meeting at a vertex
    assert {s.overlap_type for s in out} == {"v3:01,02"}


def test_bad_sequences_cap_and_short_window():
    out = find_bad_sequences(booked_host(), F, K3, cap=3)
    assert not out.complete
    assert out.explored == 4
    empty = find_bad_sequences(booked_host(), F, K3, max_len=1)
    assert empty == [] and empty.complete


# ---------------------------------------------------------------------------
# pruning and the blocked-edge recursion
# ---------------------------------------------------------------------------


def test_prune_identity_when_target_matches():
    host = two_triangle_host()
    t = build_tree(F, 2, host, K3)
    rt = prune_to_RT(t, 2)
    assert rt.num_nodes == t.num_nodes
    assert rt.edge_label == t.edge_label
    assert rt.copy_label == t.copy_label
    assert rt.parent == t.parent
    assert rt.lambda_count == t.lambda_count


def test_prune_keeps_lexicographically_smallest():
    t = build_tree(F, 1, complete_host(5), K3)
    rt = prune_to_RT(t, 2)
    kept = {rt.copy_label[c] for c in rt.children[0]}
    assert kept == {
        frozenset({(0, 2), (1, 2)}),
        frozenset({(0, 3), (1, 3)}),
    }
    for c in rt.children[0]:
        assert len(rt.children[c]) == 2
    root_only = prune_to_RT(t, 0)
    assert root_only.num_nodes == 1
    with pytest.raises(ParameterError):
        prune_to_RT(t, 4)
    with pytest.raises(ParameterError):
        prune_to_RT(t, -1)


def chain_host() -> EvolvingGraph:
    # triangle 012 off the root edge, triangle 023 hanging off its edge (0,2)
    return EvolvingGraph.from_edges(4, [(0, 2), (1, 2), (0, 3), (2, 3)])


def test_eval_B_depth_one():
    host = two_triangle_host()
    t = build_tree(F, 1, host, K3)
    early = beta_from(4, {F: 0.9, (0, 2): 0.1, (1, 2): 0.2})
    vals = eval_B(t, early)
    assert vals[0]
    late = beta_from(4, {F: 0.05})
    assert not eval_B(t, late)[0]


def test_eval_B_chain_flips_root():
    host = chain_host()
    t = build_tree(F, 2, host, K3)
    base = {F: 0.9, (0, 2): 0.1, (1, 2): 0.2}
    # the deeper triangle blocks (0,2), which unblocks nothing above it
    blocked_below = beta_from(4, {**base, (0, 3): 0.01, (2, 3): 0.02})
    assert not eval_B(t, blocked_below)[0]
    free_below = beta_from(4, {**base, (0, 3): 0.5, (2, 3): 0.02})
    assert eval_B(t, free_below)[0]


def test_eval_B_input_checks():
    t = build_tree(F, 1, two_triangle_host(), K3)
    with pytest.raises(DataError):
        eval_B(t, Birthtimes(n=5, beta=np.full(10, 0.5)))
    partial = build_tree(F, 1, two_triangle_host(), K3)
    partial.children[1] = partial.children[1][:1]
    with pytest.raises(DataError):
        eval_B(partial, beta_from(4, {}))


# ---------------------------------------------------------------------------
# conflict graphs
# ---------------------------------------------------------------------------


def test_conflict_stats_disjoint_family():
    fam = [frozenset({(0, 1), (0, 2)}), frozenset({(3, 4), (3, 5)}), frozenset({(6, 7), (6, 8)})]
    st = conflict_graph_stats(fam)
    assert st.lambda_size == 3
    assert st.independent == 3
    assert st.induced_matching == 0
    assert st.max_degree == 0
    assert st.bound == 3
    assert st.ok


def test_conflict_stats_one_overlap():
    fam = [
        frozenset({(0, 1), (0, 2)}),
        frozenset({(0, 2), (2, 3)}),
        frozenset({(5, 6), (6, 7)}),
    ]
    st = conflict_graph_stats(fam)
    assert st.independent == 2
    assert st.induced_matching == 1
    assert st.max_degree == 1
    assert st.bound == 2 + 2 * 1 * 1
    assert st.ok


def test_conflict_stats_modes_and_limits():
    fam = [frozenset({(i, i + 1)}) for i in range(0, 9, 3)]
    deg = conflict_graph_stats(fam, degree_only=True)
    assert deg.independent is None and deg.induced_matching is None
    assert deg.ok is None
    with pytest.raises(CapabilityError):
        conflict_graph_stats(fam, limit=2)


def test_conflict_stats_accepts_extension_set():
    ext = enumerate_extensions(complete_host(6), F, K3)
    st = conflict_graph_stats(ext)
    assert st.lambda_size == 4
    # completions through one edge pairwise share no edges
    assert st.independent == 4
    assert st.ok


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_conflict_bound_on_random_hosts(seed):
    rng = np.random.default_rng(seed)
    n = 12
    g = EvolvingGraph(n)
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) != F and rng.random() < 0.35:
                g.add_edge(u, v)
    st = conflict_graph_stats(enumerate_extensions(g, F, K3))
    assert st.ok
