"""Colorings, empirical supports, interval graphs and nerves.

Sample points are the indices 1..n: the nerve of a coloring depends only
on the order of the points, so real-valued times add nothing.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

Coloring = tuple[int, ...]
Interval = tuple[int, int]


class InvalidDistribution(ValueError):
    pass


@dataclass(frozen=True)
class LabelDistribution:
    """Label probabilities p_1..p_m as exact rationals; all positive, summing to 1."""

    probs: tuple[Fraction, ...]

    def __post_init__(self):
        probs = tuple(Fraction(v) for v in self.probs)
        object.__setattr__(self, "probs", probs)
        if not probs:
            raise InvalidDistribution("distribution needs at least one label")
        if any(v <= 0 for v in probs):
            raise InvalidDistribution(f"all probabilities must be positive, got {format_probs(probs)}")
        if sum(probs) != 1:
            raise InvalidDistribution(f"probabilities sum to {sum(probs)}, not 1")

    @classmethod
    def uniform(cls, m: int) -> "LabelDistribution":
        if m < 1:
            raise InvalidDistribution(f"need m >= 1, got {m}")
        return cls((Fraction(1, m),) * m)

    @classmethod
    def parse(cls, text: str) -> "LabelDistribution":
        """Parse ``"1/2,1/4,1/4"`` or ``"0.5,0.25,0.25"``; decimals are taken literally."""
        try:
            probs = tuple(Fraction(tok.strip()) for tok in text.split(","))
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidDistribution(f"malformed probability vector {text!r}: {exc}") from None
        return cls(probs)

    @property
    def m(self) -> int:
        return len(self.probs)

    @property
    def is_uniform(self) -> bool:
        return len(set(self.probs)) == 1

    def __len__(self):
        return len(self.probs)

    def __iter__(self):
        return iter(self.probs)

    def __getitem__(self, label: int) -> Fraction:
        """Probability of ``label`` (1-based)."""
        return self.probs[label - 1]

    def __str__(self):
        return format_probs(self.probs)


def format_probs(probs: Iterable[Fraction]) -> str:
    return ",".join(str(v) for v in probs)


def parse_coloring(text: str) -> Coloring:
    return tuple(int(tok) for tok in text.split(","))


def format_coloring(c: Sequence[int]) -> str:
    return ",".join(str(v) for v in c)


@dataclass(frozen=True)
class SupportSet:
    """Per-label index interval [first, last], or None for unseen labels."""

    intervals: tuple[Optional[Interval], ...]

    @property
    def m(self) -> int:
        return len(self.intervals)

    def __getitem__(self, label: int) -> Optional[Interval]:
        return self.intervals[label - 1]

    def present(self) -> list[int]:
        return [i + 1 for i, iv in enumerate(self.intervals) if iv is not None]


def derive_supports(c: Sequence[int], m: int) -> SupportSet:
    """First and last occurrence (1-based) of every label in ``c``."""
    first: list[Optional[int]] = [None] * m
    last: list[Optional[int]] = [None] * m
    for pos, label in enumerate(c, start=1):
        if not 1 <= label <= m:
            raise ValueError(f"label {label} at position {pos} outside [1, {m}]")
        if first[label - 1] is None:
            first[label - 1] = pos
        last[label - 1] = pos
    return SupportSet(tuple(None if f is None else (f, l) for f, l in zip(first, last)))


def supports_at_times(times: Sequence[float], c: Sequence[int], m: int) -> SupportSet:
    """Supports as real intervals Conv{t_j : c_j = i} for observation times ``times``."""
    if len(times) != len(c):
        raise ValueError("need one time per observation")
    if any(a >= b for a, b in zip(times, times[1:])):
        raise ValueError("observation times must be strictly increasing")
    idx = derive_supports(c, m)
    return SupportSet(tuple(None if iv is None else (times[iv[0] - 1], times[iv[1] - 1]) for iv in idx.intervals))


def intervals_meet(a: Interval, b: Interval) -> bool:
    # closed intervals: a shared endpoint counts
    return a[0] <= b[1] and b[0] <= a[1]


@dataclass(frozen=True)
class IntervalGraph:
    supports: SupportSet
    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]]

    def neighbors(self, v: int) -> set[int]:
        return {b if a == v else a for a, b in self.edges if v in (a, b)}

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def is_complete(self) -> bool:
        """True when every one of the m labels is present and all pairs meet."""
        k = len(self.vertices)
        return k == self.supports.m and len(self.edges) == k * (k - 1) // 2


def build_interval_graph(s: SupportSet) -> IntervalGraph:
    present = s.present()
    edges = frozenset(
        (i, j) for i, j in combinations(present, 2) if intervals_meet(s[i], s[j])
    )
    return IntervalGraph(s, frozenset(present), edges)


@dataclass(frozen=True)
class NerveComplex:
    """Only maximal faces are stored; faces are all their subsets."""

    maximal_faces: frozenset[frozenset[int]]

    def sorted_faces(self) -> list[list[int]]:
        return sorted(sorted(f) for f in self.maximal_faces)

    @property
    def dimension(self) -> int:
        return max((len(f) for f in self.maximal_faces), default=0) - 1

    def contains(self, face: Iterable[int]) -> bool:
        face = frozenset(face)
        return any(face <= f for f in self.maximal_faces)

    def __str__(self):
        return "[" + ", ".join("{" + ",".join(map(str, f)) + "}" for f in self.sorted_faces()) + "]"


def build_nerve(g: IntervalGraph) -> NerveComplex:
    """Maximal cliques by a left-to-right sweep over interval endpoints.

    Starts sort before ends at equal positions (closed intervals). The
    active set is emitted as a maximal clique at the first end following
    at least one start.
    """
    events = []
    for v in g.vertices:
        lo, hi = g.supports[v]
        events.append((lo, 0, v))
        events.append((hi, 1, v))
    events.sort()

    faces = set()
    active: set[int] = set()
    grown = False
    for _, kind, v in events:
        if kind == 0:
            active.add(v)
            grown = True
        else:
            if grown:
                faces.add(frozenset(active))
                grown = False
            active.discard(v)
    return NerveComplex(frozenset(faces))


def clique_number(g: IntervalGraph) -> int:
    return max((len(f) for f in build_nerve(g).maximal_faces), default=0)


def max_degree(g: IntervalGraph) -> int:
    deg = dict.fromkeys(g.vertices, 0)
    for a, b in g.edges:
        deg[a] += 1
        deg[b] += 1
    return max(deg.values(), default=0)


def nerve_of(c: Sequence[int], m: int) -> NerveComplex:
    return build_nerve(build_interval_graph(derive_supports(c, m)))


class RunningSupports:
    """Empirical supports updated one observation at a time.

    Once every label has been seen, the nerve is the full simplex exactly
    when the latest first occurrence is no later than the earliest last
    occurrence (Helly on the line). First occurrences never move and last
    occurrences only grow, so completeness is permanent once reached.
    """

    def __init__(self, m: int):
        self.m = m
        self.n = 0
        self.first: list[Optional[int]] = [None] * m
        self.last: list[Optional[int]] = [None] * m
        self._unseen = m

    def observe(self, label: int) -> bool:
        if not 1 <= label <= self.m:
            raise ValueError(f"label {label} outside [1, {self.m}]")
        self.n += 1
        i = label - 1
        if self.first[i] is None:
            self.first[i] = self.n
            self._unseen -= 1
        self.last[i] = self.n
        return self.is_complete()

    def is_complete(self) -> bool:
        if self._unseen:
            return False
        return max(self.first) <= min(self.last)

    def supports(self) -> SupportSet:
        return SupportSet(tuple(None if f is None else (f, l) for f, l in zip(self.first, self.last)))


def first_complete_index(labels: Iterable[int], m: int) -> Optional[int]:
    """Smallest n at which the running nerve of ``labels`` is the full simplex."""
    running = RunningSupports(m)
    for label in labels:
        if running.observe(label):
            return running.n
    return None
