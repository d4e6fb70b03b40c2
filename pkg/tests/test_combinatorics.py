import math
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from randintervals.combinatorics import (
    binomial,
    composition_mass,
    multinomial_coefficient,
    multinomial_prob,
    paper_uniform_mass,
    stirling2,
    weak_compositions,
)
from randintervals.model import LabelDistribution


def set_partitions_count(n, k):
    """Count restricted growth strings of length n with exactly k blocks."""
    def rec(i, used):
        if i == n:
            return 1 if used == k else 0
        total = 0
        for b in range(min(used + 1, k)):
            total += rec(i + 1, max(used, b + 1))
        return total
    if n == 0:
        return 1 if k == 0 else 0
    return rec(0, 0)


def brute_weak_compositions(n, m, k):
    return {x for x in product(range(n + 1), repeat=m) if sum(x) == n and sum(1 for v in x if v) == k}


@st.composite
def distributions(draw, max_m=4):
    m = draw(st.integers(1, max_m))
    weights = draw(st.lists(st.integers(1, 9), min_size=m, max_size=m))
    return LabelDistribution(tuple(Fraction(w, sum(weights)) for w in weights))


@pytest.mark.parametrize("n,k,expected", [(5, 2, 10), (0, 0, 1), (7, 0, 1), (4, 5, 0), (3, -1, 0)])
def test_binomial(n, k, expected):
    assert binomial(n, k) == expected


@pytest.mark.parametrize("x,expected", [((2, 1, 0), 3), ((1, 1, 1), 6), ((0, 0), 1), ((), 1), ((4,), 1)])
def test_multinomial_coefficient(x, expected):
    assert multinomial_coefficient(x) == expected


def test_stirling_values():
    assert stirling2(3, 2) == 3
    assert stirling2(4, 2) == 7
    assert stirling2(0, 0) == 1
    assert all(stirling2(n, 0) == 0 for n in range(1, 10))
    assert all(stirling2(n, 1) == 1 for n in range(1, 10))
    assert stirling2(3, 5) == 0


def test_stirling_recurrence():
    for n in range(1, 21):
        for k in range(1, n + 1):
            assert stirling2(n, k) == k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def test_stirling_against_set_partition_count():
    for n in range(0, 8):
        for k in range(0, n + 1):
            assert stirling2(n, k) == set_partitions_count(n, k)


def test_stirling_explicit_formula():
    for n in (10, 25, 60):
        for k in range(1, 8):
            explicit = sum((-1) ** j * math.comb(k, j) * (k - j) ** n for j in range(k + 1)) // math.factorial(k)
            assert stirling2(n, k) == explicit


def test_weak_composition_examples():
    assert set(weak_compositions(3, 2, 2)) == {(1, 2), (2, 1)}
    assert set(weak_compositions(2, 3, 1)) == {(2, 0, 0), (0, 2, 0), (0, 0, 2)}
    assert list(weak_compositions(0, 3, 0)) == [(0, 0, 0)]
    assert list(weak_compositions(3, 2, 0)) == []


def test_weak_compositions_match_brute_force_and_count():
    for n in range(0, 7):
        for m in range(0, 5):
            for k in range(0, m + 1):
                got = list(weak_compositions(n, m, k))
                assert len(got) == len(set(got))
                assert set(got) == brute_weak_compositions(n, m, k)
                if n >= 1:
                    assert len(got) == binomial(m, k) * binomial(n - 1, k - 1)


def test_weak_compositions_colex_order():
    got = list(weak_compositions(4, 3))
    assert got == sorted(got, key=lambda x: tuple(reversed(x)))


def test_weak_compositions_rejects_bad_k():
    with pytest.raises(ValueError):
        list(weak_compositions(3, 2, 3))


def test_positive_compositions_are_full_support():
    for n in range(1, 7):
        for m in range(1, 4):
            full = set(weak_compositions(n, m, m))
            assert full == {x for x in weak_compositions(n, m) if min(x) >= 1}


def test_multinomial_prob_examples():
    assert multinomial_prob((1, 2), LabelDistribution.parse("1/3,2/3")) == Fraction(4, 9)
    assert multinomial_prob((1, 1, 1), LabelDistribution.uniform(3)) == Fraction(2, 9)
    p = LabelDistribution.parse("1/5,3/10,1/2")
    assert multinomial_prob((4, 0, 0), p) == Fraction(1, 5) ** 4


def test_multinomial_prob_length_mismatch():
    with pytest.raises(ValueError):
        multinomial_prob((1, 1), LabelDistribution.uniform(3))


@settings(max_examples=40, deadline=None)
@given(distributions(), st.integers(0, 8))
def test_multinomial_probabilities_sum_to_one(p, n):
    assert sum(multinomial_prob(x, p) for x in weak_compositions(n, p.m)) == 1


@settings(max_examples=40, deadline=None)
@given(distributions(), st.integers(0, 7), st.data())
def test_composition_mass_routes_agree(p, n, data):
    k = data.draw(st.integers(0, p.m))
    enumerated = composition_mass(n, p, k, method="enumerate")
    assert composition_mass(n, p, k, method="inclusion-exclusion") == enumerated
    if p.is_uniform:
        assert composition_mass(n, p, k, method="uniform") == enumerated


def test_uniform_identity_with_color_choice_factor():
    for m in range(1, 5):
        u = LabelDistribution.uniform(m)
        for n in range(0, 8):
            for k in range(0, m + 1):
                direct = composition_mass(n, u, k, method="enumerate")
                assert direct == Fraction(binomial(m, k) * math.factorial(k) * stirling2(n, k), m**n)


def test_printed_uniform_identity_only_holds_at_full_support():
    for m in range(1, 5):
        u = LabelDistribution.uniform(m)
        for n in range(1, 8):
            assert paper_uniform_mass(n, m) == composition_mass(n, u, m, method="enumerate")
    # k < m: the printed form is off (missing C(m,k), k^n in place of m^n)
    u3 = LabelDistribution.uniform(3)
    assert paper_uniform_mass(4, 2) != composition_mass(4, u3, 2, method="enumerate")


def test_uniform_route_rejects_skewed_p():
    with pytest.raises(ValueError):
        composition_mass(3, LabelDistribution.parse("2/3,1/3"), 1, method="uniform")
