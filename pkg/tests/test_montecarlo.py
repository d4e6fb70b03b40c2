import math
from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from randintervals import montecarlo as mc
from randintervals.formulas import harmonic
from randintervals.model import (
    LabelDistribution,
    build_interval_graph,
    clique_number,
    derive_supports,
    first_complete_index,
    max_degree,
)
from randintervals.oracle import (
    CliqueNumberAtLeast,
    EdgePresent,
    EmptyGraphWithKVertices,
    IsComplete,
    MaxDegreeEquals,
    PointInInterval,
    enumerate_event_prob,
)

U = LabelDistribution.uniform


def test_sample_coloring_single_label():
    rng = mc.block_rng(3, 0)
    assert mc.sample_coloring(12, U(1), rng) == (1,) * 12


def test_sample_coloring_deterministic():
    p = LabelDistribution.parse("1/2,1/3,1/6")
    assert mc.sample_coloring(20, p, mc.block_rng(9, 4)) == mc.sample_coloring(20, p, mc.block_rng(9, 4))
    assert mc.sample_coloring(20, p, mc.block_rng(9, 4)) != mc.sample_coloring(20, p, mc.block_rng(9, 5))


def test_label_frequencies_within_three_sigma():
    draws = mc.sample_colorings(1000, U(4), mc.block_rng(11, 0), 1000).ravel()
    total = draws.size
    sigma = math.sqrt(0.25 * 0.75 / total)
    for label in range(1, 5):
        assert abs((draws == label).mean() - 0.25) < 3 * sigma


def test_skewed_frequencies():
    p = LabelDistribution.parse("0.7,0.2,0.1")
    draws = mc.sample_colorings(1000, p, mc.block_rng(12, 0), 1000).ravel()
    for label, pi in enumerate((0.7, 0.2, 0.1), start=1):
        sigma = math.sqrt(pi * (1 - pi) / draws.size)
        assert abs((draws == label).mean() - pi) < 4 * sigma


EVENTS = [
    EdgePresent(1, 2),
    EdgePresent(2, 3),
    EmptyGraphWithKVertices(2),
    EmptyGraphWithKVertices(3),
    MaxDegreeEquals(),
    MaxDegreeEquals(1),
    IsComplete(),
    PointInInterval(3, 2),
    CliqueNumberAtLeast(2),
    CliqueNumberAtLeast(3),
]


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 12), st.integers(3, 5), st.integers(0, 2**32))
def test_vectorized_events_match_model(n, m, seed):
    c = mc.sample_colorings(n, U(m), mc.block_rng(seed, 0), 64)
    first, last = mc.support_arrays(c, m)
    graphs = [build_interval_graph(derive_supports(tuple(int(v) for v in row), m)) for row in c]
    for q in EVENTS:
        if isinstance(q, PointInInterval) and q.x > n:
            continue
        assert mc.event_mask(q, first, last).tolist() == [q.holds(g) for g in graphs]
    assert mc.statistic_values("edges", first, last).tolist() == [len(g.edges) for g in graphs]
    assert mc.statistic_values("clique", first, last).tolist() == [clique_number(g) for g in graphs]
    assert mc.statistic_values("maxdeg", first, last).tolist() == [max_degree(g) for g in graphs]


def test_wilson_interval():
    lo, hi = mc.wilson_interval(0, 100)
    assert lo == 0 and 0 < hi < 0.05
    lo, hi = mc.wilson_interval(100, 100)
    assert hi == 1 and lo > 0.95
    lo, hi = mc.wilson_interval(30, 100)
    assert lo < 0.3 < hi
    # closed form at z = 1.96, 30/100
    assert lo == pytest.approx(0.2189, abs=1e-4) and hi == pytest.approx(0.3958, abs=1e-4)


def test_estimate_event_close_to_oracle():
    est = mc.estimate_event(3, U(2), EdgePresent(1, 2), 100_000, seed=1)
    assert est.ci_low <= 0.25 <= est.ci_high
    assert est.ci_low <= est.point_estimate <= est.ci_high
    est = mc.estimate_event(4, U(2), MaxDegreeEquals(1), 100_000, seed=2)
    assert abs(est.point_estimate - 0.5) < 0.01


def test_impossible_event_is_zero_every_trial():
    est = mc.estimate_event(2, U(3), IsComplete(), 10_000, seed=5)
    assert est.successes == 0 and est.ci_low == 0


def test_estimates_deterministic_and_worker_independent():
    p = LabelDistribution.parse("1/2,1/4,1/4")
    a = mc.estimate_event(6, p, IsComplete(), 10_000, seed=42)
    b = mc.estimate_event(6, p, IsComplete(), 10_000, seed=42, workers=2)
    assert a == b
    s1 = mc.estimate_statistic(9, U(4), "clique", 5000, seed=3)
    s2 = mc.estimate_statistic(9, U(4), "clique", 5000, seed=3, workers=3)
    assert s1 == s2
    w1 = mc.estimate_waiting_time(U(3), 5000, seed=8)
    w2 = mc.estimate_waiting_time(U(3), 5000, seed=8, workers=2)
    assert w1 == w2


def test_calibration_against_oracle():
    """The oracle value falls inside the Wilson interval in at least 90 of 100 runs."""
    cases = [
        (3, U(2), EdgePresent(1, 2)),
        (5, LabelDistribution.parse("1/2,1/4,1/4"), MaxDegreeEquals()),
    ]
    for n, p, q in cases:
        truth = float(enumerate_event_prob(n, p, q))
        hits = 0
        for run in range(100):
            est = mc.estimate_event(n, p, q, 100_000, seed=1000 + run)
            hits += est.ci_low <= truth <= est.ci_high
        assert hits >= 90, (str(q), hits)


def test_waiting_time_single_label():
    est = mc.estimate_waiting_time(U(1), 1000, seed=0)
    assert est.point_estimate == 1 and est.ci_low == est.ci_high == 1 and est.truncated == 0


def test_waiting_time_matches_scalar_replay():
    """Replay the block's draws through RunningSupports one observation at a time."""
    p = LabelDistribution.parse("1/2,1/3,1/6")
    trials, seed, cap = 300, 17, 200
    est = mc.estimate_waiting_time(p, trials, seed, cap=cap)
    rng = mc.block_rng(seed, 0)
    cdf = np.cumsum([0.5, 1 / 3, 1 / 6])
    cdf[-1] = 1.0
    draws = np.array([np.searchsorted(cdf, rng.random(trials), side="right") + 1 for _ in range(cap)])
    waits = [first_complete_index(draws[:, t].tolist(), 3) for t in range(trials)]
    assert None not in waits
    assert est.point_estimate == sum(waits) / trials


def test_waiting_time_truncation_reported():
    # completion needs at least 2m-1 = 7 observations
    est = mc.estimate_waiting_time(U(4), 2000, seed=1, cap=12)
    assert est.truncated > 0
    assert est.truncated < est.trials


def test_waiting_time_between_coupon_bounds():
    for m in (2, 3):
        est = mc.estimate_waiting_time(U(m), 20_000, seed=m)
        se = (est.ci_high - est.point_estimate) / mc.Z95
        assert float(m * harmonic(m)) - 3 * se <= est.point_estimate <= float(2 * m * harmonic(m)) + 3 * se
    assert mc.default_cap(2) == 120


def test_scheinerman_two_intervals_exact():
    """Of the orderings of 4 i.i.d. points, the two pairs are disjoint in exactly 1/3."""
    meets = 0
    orders = list(permutations(range(4)))
    for order in orders:
        a = sorted(order[:2])
        b = sorted(order[2:])
        meets += a[0] <= b[1] and b[0] <= a[1]
    assert Fraction(meets, len(orders)) == Fraction(2, 3)


def test_scheinerman_estimate():
    est = mc.scheinerman_max_degree_estimate(2, 100_000, seed=7)
    assert abs(est.point_estimate - 2 / 3) < 0.01
    assert est == mc.scheinerman_max_degree_estimate(2, 100_000, seed=7, workers=2)
    with pytest.raises(ValueError):
        mc.scheinerman_max_degree_estimate(1, 10, seed=0)
