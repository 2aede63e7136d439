from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hfree.errors import ParameterError
from hfree.patterns import (
    PatternGraph,
    automorphism_count,
    automorphisms,
    balance_report,
    epsilon_gap,
    is_strictly_two_balanced,
    make_catalog,
    ordered_edge_orbits,
    parse_pattern,
    pattern_from_file,
    require_admissible,
    two_density,
)

PAW = PatternGraph(4, [(0, 1), (0, 2), (1, 2), (2, 3)], name="paw")


def test_catalog_constructors():
    assert parse_pattern("K3").edges == ((0, 1), (0, 2), (1, 2))
    assert parse_pattern("C4").num_edges == 4
    assert parse_pattern("Q3").num_vertices == 8
    assert parse_pattern("K_{3,3}").num_edges == 9
    assert parse_pattern("K3,3") == parse_pattern("K_{3,3}")
    assert make_catalog("complete", 4) == parse_pattern("K4")
    assert make_catalog("star", 4) == parse_pattern("K_{1,4}")


def test_parse_rejects_garbage():
    with pytest.raises(ParameterError):
        parse_pattern("H5")
    with pytest.raises(ParameterError):
        make_catalog("complete", 4, 4)


def test_pattern_from_file(tmp_path):
    path = tmp_path / "bowtie.txt"
    path.write_text("5\n# two triangles sharing vertex 2\n0 1\n0 2\n1 2\n2 3\n2 4\n3 4\n")
    h = pattern_from_file(path)
    assert h.num_vertices == 5
    assert h.num_edges == 6
    assert h.label() == "bowtie"


@pytest.mark.parametrize(
    "name,density,gap,aut",
    [
        ("K3", Fraction(2), Fraction(1, 2), 6),
        ("C4", Fraction(3, 2), Fraction(1, 3), 8),
        ("K4", Fraction(5, 2), Fraction(1, 5), 24),
        ("K_{3,3}", Fraction(2), Fraction(1, 2), 72),
        ("Q3", Fraction(11, 6), Fraction(4, 11), 48),
    ],
)
def test_admissible_catalog_constants(name, density, gap, aut):
    h = parse_pattern(name)
    rep = require_admissible(h)
    assert rep.is_regular and rep.is_strictly_two_balanced
    assert two_density(h) == density
    assert epsilon_gap(h) == gap
    assert automorphism_count(h) == aut


def test_star_fails_with_witness():
    rep = balance_report(parse_pattern("K_{1,4}"))
    assert not rep.is_regular
    assert not rep.is_strictly_two_balanced
    assert not rep.is_admissible
    # the witness subgraph must actually violate the strict density inequality
    v_w = len(rep.witness_vertices)
    e_w = len(rep.witness_edges)
    assert Fraction(e_w - 1, v_w - 2) >= rep.two_density
    assert rep.reason


def test_paw_fails_strictness():
    rep = balance_report(PAW)
    assert not rep.is_strictly_two_balanced
    assert set(rep.witness_vertices) == {0, 1, 2}
    with pytest.raises(ParameterError):
        epsilon_gap(PAW)
    with pytest.raises(ParameterError):
        require_admissible(PAW)


def test_tiny_patterns_never_admissible():
    single = PatternGraph(2, [(0, 1)])
    assert not is_strictly_two_balanced(single)
    with pytest.raises(ParameterError):
        require_admissible(single)


def test_automorphisms_are_permutations():
    h = parse_pattern("C4")
    perms = automorphisms(h)
    assert len(perms) == 8
    assert len(set(perms)) == 8
    edge_set = set(h.edges)
    for perm in perms:
        mapped = {tuple(sorted((perm[u], perm[v]))) for u, v in h.edges}
        assert mapped == edge_set


def test_edge_orbits_cover_all_ordered_edges():
    h = parse_pattern("K4")
    orbits = ordered_edge_orbits(h)
    total = sum(size for _, size in orbits)
    assert total == 2 * h.num_edges
    # K4 is edge-transitive, so a single orbit
    assert len(orbits) == 1


@st.composite
def small_graphs(draw):
    n = draw(st.integers(min_value=3, max_value=7))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), min_size=3, unique=True))
    used = sorted({v for e in edges for v in e})
    if len(used) < n:
        # compress labels so every vertex is used; keeps PatternGraph happy
        relabel = {v: i for i, v in enumerate(used)}
        edges = [(relabel[u], relabel[v]) for u, v in edges]
        n = len(used)
    if n < 3:
        return PatternGraph(3, [(0, 1), (0, 2), (1, 2)])
    return PatternGraph(n, edges)


@given(small_graphs(), st.randoms(use_true_random=False))
def test_balance_is_isomorphism_invariant(h, rnd):
    perm = list(range(h.num_vertices))
    rnd.shuffle(perm)
    relabeled = PatternGraph(
        h.num_vertices, [(perm[u], perm[v]) for u, v in h.edges]
    )
    assert is_strictly_two_balanced(h) == is_strictly_two_balanced(relabeled)
    if h.num_vertices >= 3:
        assert two_density(h) == two_density(relabeled)
        assert automorphism_count(h) == automorphism_count(relabeled)


@given(small_graphs())
def test_witness_certifies_failure(h):
    rep = balance_report(h)
    if rep.witness_vertices is None:
        return
    v_w, e_w = len(rep.witness_vertices), len(rep.witness_edges)
    assert 3 <= v_w < h.num_vertices or (v_w == h.num_vertices and e_w < h.num_edges)
    assert Fraction(e_w - 1, v_w - 2) >= two_density(h)
