"""Exhaustive enumeration of all m^n colorings with exact rational weights.

This is the ground truth the closed forms are checked against, so it only
uses the model module (supports, graph, nerve) and never the formulas.

Colorings are visited as a base-m counter (most significant position
first). Contributions are tallied per label-count vector, which fixes the
weight prod p_i^count_i, and converted to a rational at the end. Ranges of
the counter can be processed independently and merged by integer
addition, so the result does not depend on how the work is split.
"""
from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .model import (
    IntervalGraph,
    LabelDistribution,
    build_interval_graph,
    clique_number,
    derive_supports,
    max_degree,
)

DEFAULT_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    def __init__(self, required: int, budget: int):
        super().__init__(f"enumeration needs {required} colorings but the budget is {budget}")
        self.required = required
        self.budget = budget


@dataclass(frozen=True)
class EdgePresent:
    i: int
    j: int

    def holds(self, g: IntervalGraph) -> bool:
        return g.has_edge(self.i, self.j)

    def __str__(self):
        return f"edge:{self.i},{self.j}"


@dataclass(frozen=True)
class EmptyGraphWithKVertices:
    k: int

    def holds(self, g: IntervalGraph) -> bool:
        return len(g.vertices) == self.k and not g.edges

    def __str__(self):
        return f"empty:{self.k}"


@dataclass(frozen=True)
class MaxDegreeEquals:
    """Maximum degree equals ``d``; ``d=None`` means m - 1 (some support meets all others)."""

    d: Optional[int] = None

    def target(self, m: int) -> int:
        return m - 1 if self.d is None else self.d

    def holds(self, g: IntervalGraph) -> bool:
        return max_degree(g) == self.target(g.supports.m)

    def __str__(self):
        return "maxdeg" if self.d is None else f"maxdeg:{self.d}"


@dataclass(frozen=True)
class IsComplete:
    def holds(self, g: IntervalGraph) -> bool:
        return g.is_complete()

    def __str__(self):
        return "complete"


@dataclass(frozen=True)
class PointInInterval:
    x: int
    i: int

    def holds(self, g: IntervalGraph) -> bool:
        iv = g.supports[self.i]
        return iv is not None and iv[0] <= self.x <= iv[1]

    def __str__(self):
        return f"point:{self.x},{self.i}"


@dataclass(frozen=True)
class CliqueNumberAtLeast:
    t: int

    def holds(self, g: IntervalGraph) -> bool:
        return clique_number(g) >= self.t

    def __str__(self):
        return f"clique:{self.t}"


EventQuery = Union[
    EdgePresent, EmptyGraphWithKVertices, MaxDegreeEquals, IsComplete, PointInInterval, CliqueNumberAtLeast
]


def edge_count(g: IntervalGraph) -> int:
    return len(g.edges)


STATISTICS: dict[str, Callable[[IntervalGraph], int]] = {
    "edges": edge_count,
    "clique": clique_number,
    "maxdeg": max_degree,
}


def parse_event(text: str) -> EventQuery:
    """Parse ``edge:1,2``, ``empty:k``, ``maxdeg[:d]``, ``complete``, ``point:x,i``, ``clique:t``."""
    name, _, args = text.strip().partition(":")
    try:
        vals = [int(a) for a in args.split(",")] if args else []
    except ValueError:
        raise ValueError(f"malformed event {text!r}") from None
    shapes = {
        "edge": (EdgePresent, 2),
        "empty": (EmptyGraphWithKVertices, 1),
        "complete": (IsComplete, 0),
        "point": (PointInInterval, 2),
        "clique": (CliqueNumberAtLeast, 1),
    }
    if name == "maxdeg" and len(vals) <= 1:
        return MaxDegreeEquals(*vals)
    if name in shapes and len(vals) == shapes[name][1]:
        return shapes[name][0](*vals)
    raise ValueError(f"malformed event {text!r}")


def validate_event(q: EventQuery, n: int, m: int):
    bad = False
    if isinstance(q, EdgePresent):
        bad = not (1 <= q.i <= m and 1 <= q.j <= m and q.i != q.j)
    elif isinstance(q, EmptyGraphWithKVertices):
        bad = not 0 <= q.k <= m
    elif isinstance(q, PointInInterval):
        bad = not (1 <= q.x <= n and 1 <= q.i <= m)
    elif isinstance(q, MaxDegreeEquals):
        bad = q.d is not None and q.d < 0
    if bad:
        raise ValueError(f"event {q} is out of range for n={n}, m={m}")


def _digits(index: int, n: int, m: int) -> list[int]:
    digits = [0] * n
    for pos in range(n - 1, -1, -1):
        index, digits[pos] = divmod(index, m)
    return digits


def iter_colorings(n: int, m: int, start: int = 0, stop: Optional[int] = None):
    """Colorings (1-based labels) with counter index in [start, stop)."""
    total = m**n
    stop = total if stop is None else min(stop, total)
    if start >= stop:
        return
    digits = _digits(start, n, m)
    for _ in range(start, stop):
        yield tuple(d + 1 for d in digits)
        pos = n - 1
        while pos >= 0:
            digits[pos] += 1
            if digits[pos] < m:
                break
            digits[pos] = 0
            pos -= 1


def _label_counts(c: Sequence[int], m: int) -> tuple[int, ...]:
    counts = [0] * m
    for label in c:
        counts[label - 1] += 1
    return tuple(counts)


def _tally_range(args) -> list[Counter]:
    n, m, evaluators, start, stop = args
    tallies = [Counter() for _ in evaluators]
    for c in iter_colorings(n, m, start, stop):
        g = build_interval_graph(derive_supports(c, m))
        key = _label_counts(c, m)
        for tally, fn in zip(tallies, evaluators):
            v = int(fn(g))
            if v:
                tally[key] += v
    return tallies


def _weigh(tally: Counter, p: LabelDistribution) -> Fraction:
    total = Fraction(0)
    for counts in sorted(tally):
        w = Fraction(tally[counts])
        for c, pi in zip(counts, p.probs):
            if c:
                w *= pi**c
        total += w
    return total


def _run(n, p: LabelDistribution, evaluators, budget, workers) -> list[Fraction]:
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    m = p.m
    total = m**n
    if total > budget:
        raise BudgetExceeded(total, budget)
    if workers <= 1 or total < 4096:
        tallies = _tally_range((n, m, evaluators, 0, total))
    else:
        chunk = -(-total // workers)
        jobs = [(n, m, evaluators, s, s + chunk) for s in range(0, total, chunk)]
        tallies = [Counter() for _ in evaluators]
        with ProcessPoolExecutor(workers) as pool:
            for part in pool.map(_tally_range, jobs):
                for acc, t in zip(tallies, part):
                    acc.update(t)
    return [_weigh(t, p) for t in tallies]


def enumerate_event_probs(
    n: int,
    p: LabelDistribution,
    queries: Sequence[EventQuery],
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> list[Fraction]:
    for q in queries:
        validate_event(q, n, p.m)
    return _run(n, p, [q.holds for q in queries], budget, workers)


def enumerate_event_prob(
    n: int, p: LabelDistribution, q: EventQuery, budget: int = DEFAULT_BUDGET, workers: int = 1
) -> Fraction:
    """Exact P(q) as the weighted sum over every coloring of [n] with m labels."""
    return enumerate_event_probs(n, p, [q], budget, workers)[0]


def enumerate_expectations(
    n: int, p: LabelDistribution, statistics: Sequence[str], budget: int = DEFAULT_BUDGET, workers: int = 1
) -> list[Fraction]:
    try:
        fns = [STATISTICS[s] for s in statistics]
    except KeyError as exc:
        raise ValueError(f"unknown statistic {exc.args[0]!r}; choose from {sorted(STATISTICS)}") from None
    return _run(n, p, fns, budget, workers)


def enumerate_expectation(
    n: int, p: LabelDistribution, statistic: str, budget: int = DEFAULT_BUDGET, workers: int = 1
) -> Fraction:
    """Exact mean of ``statistic`` ("edges", "clique" or "maxdeg")."""
    return enumerate_expectations(n, p, [statistic], budget, workers)[0]


def pair_disjoint_prob_by_cases(n: int, p: LabelDistribution, i: int, j: int, budget: int = DEFAULT_BUDGET):
    """P(supports of i and j do not meet), split into the three disjoint cases.

    Returns (both absent, exactly one absent, both present and separated).
    Classification looks at raw positions, not at the support intervals.
    """
    m = p.m
    if m**n > budget:
        raise BudgetExceeded(m**n, budget)
    tallies = [Counter(), Counter(), Counter()]
    for c in iter_colorings(n, m):
        pos_i = [k for k, v in enumerate(c) if v == i]
        pos_j = [k for k, v in enumerate(c) if v == j]
        if not pos_i and not pos_j:
            case = 0
        elif not pos_i or not pos_j:
            case = 1
        elif pos_i[-1] < pos_j[0] or pos_j[-1] < pos_i[0]:
            case = 2
        else:
            continue
        tallies[case][_label_counts(c, m)] += 1
    return tuple(_weigh(t, p) for t in tallies)
