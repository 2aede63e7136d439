from fractions import Fraction
from math import comb, factorial

import pytest

from hfree.errors import CapabilityError, ParameterError
from hfree.oracle import blocking_masks, copy_family, exact_expectation, exact_extremal
from hfree.patterns import parse_pattern

K3 = parse_pattern("K3")
C4 = parse_pattern("C4")
K4 = parse_pattern("K4")
K33 = parse_pattern("K_{3,3}")

# values computed once by the permutation oracle and cross-checked against the
# state recursion; frozen here so a regression in either method is caught
EXPECTED = {
    ("K3", 3): Fraction(2),
    ("K3", 4): Fraction(56, 15),
    ("K3", 5): Fraction(5456, 945),
    ("K3", 6): Fraction(115075112, 14189175),
    ("C4", 3): Fraction(3),
    ("C4", 4): Fraction(4),
    ("C4", 5): Fraction(155, 28),
    ("C4", 6): Fraction(632, 91),
    ("K4", 3): Fraction(3),
    ("K4", 4): Fraction(5),
    ("K4", 5): Fraction(71, 9),
}


@pytest.mark.parametrize("label,n", sorted(EXPECTED))
def test_frozen_expectations(label, n):
    res = exact_expectation(parse_pattern(label), n)
    assert res.expectation == EXPECTED[(label, n)]
    assert res.n == n
    assert res.num_edges == comb(n, 2)


@pytest.mark.parametrize("h", [K3, C4, K4], ids=lambda h: h.label())
@pytest.mark.parametrize("n", [3, 4, 5])
def test_methods_agree(h, n):
    perm = exact_expectation(h, n, method="permutation")
    rec = exact_expectation(h, n, method="recursion")
    assert perm.expectation == rec.expectation
    assert perm.method == "full-permutation"
    assert rec.method == "state-recursion"
    assert perm.work == factorial(comb(n, 2))
    assert rec.work > 0
    if n >= 4:
        assert rec.work < perm.work


def test_auto_picks_a_feasible_method():
    assert exact_expectation(K3, 5).method == "full-permutation"
    assert exact_expectation(K3, 6).method == "state-recursion"


def test_pattern_too_large_to_ever_block():
    # K_{3,3} needs 6 vertices, so on 4 every edge is accepted
    res = exact_expectation(K33, 4)
    assert res.expectation == Fraction(6)
    assert res.num_copies == 0


def test_copy_family_counts():
    assert len(copy_family(4, K3)) == 4
    assert len(copy_family(5, K3)) == 10
    assert len(copy_family(4, C4)) == 3
    assert len(copy_family(4, K4)) == 1
    assert copy_family(3, K4) == []


def test_copy_masks_have_right_popcount():
    for mk in copy_family(5, C4):
        assert mk.bit_count() == 4
    per_edge = blocking_masks(4, K3)
    assert all(len(ms) == 2 for ms in per_edge)
    assert all(mk.bit_count() == 2 for ms in per_edge for mk in ms)


def test_caps_raise():
    with pytest.raises(CapabilityError):
        exact_expectation(K3, 6, method="permutation")
    with pytest.raises(CapabilityError):
        exact_expectation(K3, 7, method="recursion")
    with pytest.raises(CapabilityError):
        exact_extremal(K3, 8)


def test_bad_arguments():
    with pytest.raises(ParameterError):
        exact_expectation(K3, 1)
    with pytest.raises(ParameterError):
        exact_expectation(K3, 4, method="guesswork")
    with pytest.raises(ParameterError):
        exact_extremal(K3, 0)


@pytest.mark.parametrize("n,want", [(3, 2), (4, 4), (5, 6), (6, 9), (7, 12)])
def test_extremal_triangle(n, want):
    # bipartite bound n^2/4
    assert exact_extremal(K3, n) == want
    assert want == n * n // 4


@pytest.mark.parametrize("n,want", [(3, 3), (4, 4), (5, 6), (6, 7), (7, 9)])
def test_extremal_four_cycle(n, want):
    assert exact_extremal(C4, n) == want


def test_extremal_k4_matches_three_part_construction():
    for n in range(4, 8):
        sizes = [n // 3 + (1 if i < n % 3 else 0) for i in range(3)]
        want = comb(n, 2) - sum(comb(s, 2) for s in sizes)
        assert exact_extremal(K4, n) == want


def test_extremal_trivial_when_pattern_cannot_fit():
    assert exact_extremal(K33, 5) == comb(5, 2)
