from itertools import combinations, permutations

from hypothesis import given, settings
from hypothesis import strategies as st

from hfree.analysis import canonical_label
from hfree.embedding import contains_copy_full, find_completion, iter_completions
from hfree.graphs import EvolvingGraph
from hfree.patterns import parse_pattern

K3 = parse_pattern("K3")
C4 = parse_pattern("C4")


def brute_contains(g: EvolvingGraph, h) -> bool:
    for sub in combinations(range(g.n), h.num_vertices):
        for perm in permutations(sub):
            if all(g.has_edge(perm[u], perm[v]) for u, v in h.edges):
                return True
    return False


def complete_graph(n: int) -> EvolvingGraph:
    return EvolvingGraph.from_edges(n, combinations(range(n), 2))


def test_triangle_completions_in_k4():
    g = complete_graph(4)
    comps = list(iter_completions(g, 0, 1, K3))
    assert len(comps) == 2
    for c in comps:
        assert len(c) == 2
        assert (0, 1) not in c


def test_c4_completions_in_k4():
    g = complete_graph(4)
    comps = set(iter_completions(g, 0, 1, C4))
    assert comps == {
        frozenset({(0, 3), (1, 2), (2, 3)}),
        frozenset({(0, 2), (1, 3), (2, 3)}),
    }


def test_anchor_need_not_be_present():
    # host holds a path 0-2-1; the anchor (0,1) completes a triangle anyway
    g = EvolvingGraph.from_edges(3, [(0, 2), (1, 2)])
    comps = list(iter_completions(g, 0, 1, K3))
    assert comps == [frozenset({(0, 2), (1, 2)})]


def test_forbidden_edge_excluded():
    g = complete_graph(4)
    with_forbidden = set(iter_completions(g, 0, 1, K3, forbidden_edge=(1, 2)))
    assert with_forbidden == {frozenset({(0, 3), (1, 3)})}


def test_find_completion_none_when_absent():
    g = EvolvingGraph.from_edges(4, [(0, 1), (1, 2)])
    assert find_completion(g, 0, 3, K3) is None
    assert find_completion(g, 0, 2, K3) is not None


@st.composite
def hosts(draw):
    n = draw(st.integers(min_value=4, max_value=7))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), max_size=14, unique=True))
    return EvolvingGraph.from_edges(n, edges)


@given(hosts(), st.sampled_from([K3, C4]))
@settings(max_examples=60, deadline=None)
def test_contains_copy_matches_brute_force(g, h):
    assert contains_copy_full(g, h) == brute_contains(g, h)


@given(hosts(), st.sampled_from([K3, C4]), st.data())
@settings(max_examples=60, deadline=None)
def test_completions_form_copies(g, h, data):
    u = data.draw(st.integers(min_value=0, max_value=g.n - 2))
    v = data.draw(st.integers(min_value=u + 1, max_value=g.n - 1))
    target = canonical_label(h.edges)
    for c in iter_completions(g, u, v, h):
        assert (u, v) not in c
        assert all(g.has_edge(*e) for e in c)
        assert canonical_label(set(c) | {(u, v)}) == target
