"""Seeded Monte Carlo estimates for the random interval graph and the Scheinerman model.

Random numbers come from numpy's PCG64. Trials are grouped in fixed blocks
of ``BLOCK`` consecutive trial indices; block ``b`` draws from the stream
``SeedSequence(seed, spawn_key=(b,))``. Results therefore depend only on
(seed, trials, parameters), never on how blocks are spread over workers,
and counts are combined by exact integer addition.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from statistics import NormalDist
from typing import Optional

import numpy as np

from .formulas import harmonic
from .model import LabelDistribution
from .oracle import (
    CliqueNumberAtLeast,
    EdgePresent,
    EmptyGraphWithKVertices,
    EventQuery,
    IsComplete,
    MaxDegreeEquals,
    PointInInterval,
    STATISTICS,
    validate_event,
)

BLOCK = 2048
Z95 = NormalDist().inv_cdf(0.975)


@dataclass(frozen=True)
class McEstimate:
    point_estimate: float
    ci_low: float
    ci_high: float
    trials: int
    seed: int
    successes: Optional[int] = None
    truncated: int = 0


def wilson_interval(successes: int, trials: int, z: float = Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("need at least one trial")
    phat = successes / trials
    z2 = z * z
    denom = 1 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    half = z / denom * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials))
    return max(0.0, min(center - half, phat)), min(1.0, max(center + half, phat))


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def _blocks(trials: int):
    return [(b, min(BLOCK, trials - b * BLOCK)) for b in range(-(-trials // BLOCK))]


def _map_blocks(fn, jobs, workers: int):
    if workers <= 1 or len(jobs) == 1:
        return [fn(job) for job in jobs]
    with ProcessPoolExecutor(workers) as pool:
        return list(pool.map(fn, jobs))


def _cdf(p: LabelDistribution) -> np.ndarray:
    cum = np.cumsum([float(v) for v in p.probs])
    cum[-1] = 1.0
    return cum


def sample_colorings(n: int, p: LabelDistribution, rng: np.random.Generator, size: int) -> np.ndarray:
    """``size`` colorings of length n as a (size, n) array of 1-based labels (inverse CDF)."""
    u = rng.random((size, n))
    return np.searchsorted(_cdf(p), u, side="right") + 1


def sample_coloring(n: int, p: LabelDistribution, rng: np.random.Generator) -> tuple[int, ...]:
    return tuple(int(v) for v in sample_colorings(n, p, rng, 1)[0])


def support_arrays(colorings: np.ndarray, m: int):
    """First and last positions per label, shape (B, m).

    Absent labels get first = n + 1 and last = 0, so every intersection
    test involving them is false without special-casing.
    """
    b, n = colorings.shape
    first = np.full((b, m), n + 1, dtype=np.int64)
    last = np.zeros((b, m), dtype=np.int64)
    for i in range(m):
        mask = colorings == i + 1
        present = mask.any(axis=1)
        first[present, i] = mask[present].argmax(axis=1) + 1
        last[present, i] = n - mask[present, ::-1].argmax(axis=1)
    return first, last


def adjacency(first: np.ndarray, last: np.ndarray) -> np.ndarray:
    adj = (first[:, :, None] <= last[:, None, :]) & (first[:, None, :] <= last[:, :, None])
    m = first.shape[1]
    adj[:, np.arange(m), np.arange(m)] = False
    return adj


def clique_numbers(first: np.ndarray, last: np.ndarray) -> np.ndarray:
    # a maximum clique is the set of supports covering some label's first point
    cover = (first[:, None, :] <= first[:, :, None]) & (first[:, :, None] <= last[:, None, :])
    return cover.sum(axis=2).max(axis=1)


def event_mask(q: EventQuery, first: np.ndarray, last: np.ndarray) -> np.ndarray:
    m = first.shape[1]
    present = last > 0
    if isinstance(q, EdgePresent):
        i, j = q.i - 1, q.j - 1
        return (first[:, i] <= last[:, j]) & (first[:, j] <= last[:, i])
    if isinstance(q, EmptyGraphWithKVertices):
        return (present.sum(axis=1) == q.k) & ~adjacency(first, last).any(axis=(1, 2))
    if isinstance(q, MaxDegreeEquals):
        return adjacency(first, last).sum(axis=2).max(axis=1) == q.target(m)
    if isinstance(q, IsComplete):
        return present.all(axis=1) & (first.max(axis=1) <= last.min(axis=1))
    if isinstance(q, PointInInterval):
        i = q.i - 1
        return (first[:, i] <= q.x) & (q.x <= last[:, i])
    if isinstance(q, CliqueNumberAtLeast):
        return clique_numbers(first, last) >= q.t
    raise TypeError(f"unsupported event {q!r}")


def statistic_values(name: str, first: np.ndarray, last: np.ndarray) -> np.ndarray:
    if name == "edges":
        return adjacency(first, last).sum(axis=(1, 2)) // 2
    if name == "clique":
        return clique_numbers(first, last)
    if name == "maxdeg":
        return adjacency(first, last).sum(axis=2).max(axis=1)
    raise ValueError(f"unknown statistic {name!r}; choose from {sorted(STATISTICS)}")


def _event_block(args) -> int:
    n, p, q, seed, block, size = args
    c = sample_colorings(n, p, block_rng(seed, block), size)
    first, last = support_arrays(c, p.m)
    return int(event_mask(q, first, last).sum())


def _statistic_block(args) -> tuple[int, int]:
    n, p, name, seed, block, size = args
    c = sample_colorings(n, p, block_rng(seed, block), size)
    first, last = support_arrays(c, p.m)
    v = statistic_values(name, first, last).astype(np.int64)
    return int(v.sum()), int((v * v).sum())


def _proportion(successes: int, trials: int, seed: int) -> McEstimate:
    lo, hi = wilson_interval(successes, trials)
    return McEstimate(successes / trials, lo, hi, trials, seed, successes=successes)


def _mean(total: int, total_sq: int, count: int, trials: int, seed: int, truncated: int = 0) -> McEstimate:
    if count == 0:
        nan = float("nan")
        return McEstimate(nan, nan, nan, trials, seed, truncated=truncated)
    mean = total / count
    var = (total_sq - total * total / count) / (count - 1) if count > 1 else 0.0
    half = Z95 * math.sqrt(max(var, 0.0) / count)
    return McEstimate(mean, mean - half, mean + half, trials, seed, truncated=truncated)


def estimate_event(
    n: int, p: LabelDistribution, q: EventQuery, trials: int, seed: int, workers: int = 1
) -> McEstimate:
    """Fraction of sampled colorings whose graph satisfies ``q``, with a 95% Wilson interval."""
    if trials < 1:
        raise ValueError("need at least one trial")
    validate_event(q, n, p.m)
    jobs = [(n, p, q, seed, b, size) for b, size in _blocks(trials)]
    return _proportion(sum(_map_blocks(_event_block, jobs, workers)), trials, seed)


def estimate_statistic(
    n: int, p: LabelDistribution, statistic: str, trials: int, seed: int, workers: int = 1
) -> McEstimate:
    """Sample mean of a graph statistic with a normal-approximation 95% interval."""
    if trials < 1:
        raise ValueError("need at least one trial")
    if statistic not in STATISTICS:
        raise ValueError(f"unknown statistic {statistic!r}; choose from {sorted(STATISTICS)}")
    jobs = [(n, p, statistic, seed, b, size) for b, size in _blocks(trials)]
    parts = _map_blocks(_statistic_block, jobs, workers)
    return _mean(sum(s for s, _ in parts), sum(s2 for _, s2 in parts), trials, trials, seed)


def default_cap(m: int) -> int:
    return math.ceil(40 * m * harmonic(m))


def _waiting_block(args):
    p, cap, seed, block, size = args
    rng = block_rng(seed, block)
    cdf = _cdf(p)
    m = p.m
    first = np.zeros((size, m), dtype=np.int64)
    last = np.zeros((size, m), dtype=np.int64)
    wait = np.zeros(size, dtype=np.int64)
    rows = np.arange(size)
    for t in range(1, cap + 1):
        labels = np.searchsorted(cdf, rng.random(size), side="right")
        fresh = first[rows, labels] == 0
        first[rows[fresh], labels[fresh]] = t
        last[rows, labels] = t
        complete = (first > 0).all(axis=1) & (first.max(axis=1) <= last.min(axis=1))
        wait[complete & (wait == 0)] = t
        if (wait > 0).all():
            break
    done = wait[wait > 0]
    return int(done.sum()), int((done * done).sum()), int(done.size), int(size - done.size)


def estimate_waiting_time(
    p: LabelDistribution, trials: int, seed: int, cap: Optional[int] = None, workers: int = 1
) -> McEstimate:
    """Mean first n at which the running nerve is the full simplex.

    The supports are updated one observation at a time. Trials still
    incomplete after ``cap`` observations are counted in ``truncated`` and
    left out of the mean.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    cap = default_cap(p.m) if cap is None else cap
    jobs = [(p, cap, seed, b, size) for b, size in _blocks(trials)]
    parts = _map_blocks(_waiting_block, jobs, workers)
    total, total_sq, count, truncated = (sum(col) for col in zip(*parts))
    return _mean(total, total_sq, count, trials, seed, truncated)


def _scheinerman_block(args) -> int:
    m, seed, block, size = args
    u = block_rng(seed, block).random((size, m, 2))
    lo, hi = u.min(axis=2), u.max(axis=2)
    # interval k meets every other one iff lo_k <= min hi and hi_k >= max lo
    spans = (lo <= hi.min(axis=1, keepdims=True)) & (hi >= lo.max(axis=1, keepdims=True))
    return int(spans.any(axis=1).sum())


def scheinerman_max_degree_estimate(m: int, trials: int, seed: int, workers: int = 1) -> McEstimate:
    """P(some interval meets all others) when m intervals have i.i.d. uniform endpoints."""
    if m < 2:
        raise ValueError(f"need m >= 2, got {m}")
    if trials < 1:
        raise ValueError("need at least one trial")
    jobs = [(m, seed, b, size) for b, size in _blocks(trials)]
    return _proportion(sum(_map_blocks(_scheinerman_block, jobs, workers)), trials, seed)
