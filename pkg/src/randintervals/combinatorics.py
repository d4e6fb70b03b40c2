"""Exact integer and rational combinatorial primitives.

Everything here works on Python ints and :class:`fractions.Fraction`;
nothing touches floating point.
"""
from __future__ import annotations

import math
import threading
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Sequence

WeakComposition = tuple[int, ...]


def binomial(n: int, k: int) -> int:
    """C(n, k), with 0 outside 0 <= k <= n."""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def multinomial_coefficient(x: Sequence[int]) -> int:
    """(x_1 + ... + x_m)! / (x_1! ... x_m!)."""
    total = 0
    coeff = 1
    for part in x:
        if part < 0:
            raise ValueError(f"negative part in composition {tuple(x)}")
        total += part
        coeff *= math.comb(total, part)
    return coeff


_stirling_rows: list[list[int]] = [[1]]
_stirling_lock = threading.Lock()


def _stirling_row(n: int) -> list[int]:
    if n < len(_stirling_rows):
        return _stirling_rows[n]
    with _stirling_lock:
        while len(_stirling_rows) <= n:
            prev = _stirling_rows[-1]
            i = len(_stirling_rows)
            row = [0] * (i + 1)
            for k in range(1, i + 1):
                # S(i, k) = k S(i-1, k) + S(i-1, k-1)
                row[k] = (k * prev[k] if k < i else 0) + prev[k - 1]
            _stirling_rows.append(row)
    return _stirling_rows[n]


def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind: partitions of an n-set into k blocks."""
    if n < 0 or k < 0 or k > n:
        return 0
    return _stirling_row(n)[k]


def weak_compositions(n: int, m: int, k: int | None = None) -> Iterator[WeakComposition]:
    """Lazily yield weak compositions of ``n`` into ``m`` parts.

    With ``k`` given, only those with exactly ``k`` nonzero parts are
    produced. Order is colexicographic (the last part varies slowest).
    """
    if n < 0 or m < 0:
        return
    if k is not None and not 0 <= k <= m:
        raise ValueError(f"nonzero-part count {k} outside [0, {m}]")
    yield from _colex(n, m, k)


def _colex(n: int, m: int, k: int | None) -> Iterator[WeakComposition]:
    if m == 0:
        if n == 0 and (k is None or k == 0):
            yield ()
        return
    if k is not None and (k > m or (k == 0) != (n == 0) or n < k):
        return
    for last in range(n + 1):
        if k is None:
            rest_k = None
        else:
            rest_k = k if last == 0 else k - 1
            if rest_k < 0:
                continue
        for head in _colex(n - last, m - 1, rest_k):
            yield head + (last,)


def _probs(p) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in getattr(p, "probs", p))


def multinomial_prob(x: Sequence[int], p) -> Fraction:
    """Probability that ``sum(x)`` i.i.d. draws from ``p`` land with counts ``x``."""
    probs = _probs(p)
    if len(x) != len(probs):
        raise ValueError(f"composition has {len(x)} parts but distribution has {len(probs)} labels")
    value = Fraction(multinomial_coefficient(x))
    for part, pi in zip(x, probs):
        if part:
            value *= pi**part
    return value


def composition_mass(n: int, p, k: int, method: str = "auto") -> Fraction:
    """Sum of ``multinomial_prob`` over weak compositions of n with k nonzero parts.

    Equivalently the probability that n draws use exactly k distinct labels.

    ``method``: "enumerate" sums over the compositions directly,
    "inclusion-exclusion" uses sums over label subsets, "uniform" uses
    C(m,k) k! S(n,k) / m^n (only valid for equal probabilities).
    "auto" picks uniform when applicable, otherwise inclusion-exclusion.
    """
    probs = _probs(p)
    m = len(probs)
    if not 0 <= k <= m:
        return Fraction(0)
    if method == "auto":
        method = "uniform" if len(set(probs)) <= 1 else "inclusion-exclusion"
    if method == "enumerate":
        return sum((multinomial_prob(x, probs) for x in weak_compositions(n, m, k)), Fraction(0))
    if method == "uniform":
        if len(set(probs)) > 1:
            raise ValueError("uniform route requires equal probabilities")
        return Fraction(binomial(m, k) * math.factorial(k) * stirling2(n, k), m**n)
    if method == "inclusion-exclusion":
        # sum_{|T| <= k} (-1)^(k-|T|) C(m-|T|, k-|T|) (sum_T p)^n
        total = Fraction(0)
        for t in range(k + 1):
            weight = (-1) ** (k - t) * binomial(m - t, k - t)
            if weight == 0:
                continue
            s = sum((sum(T, Fraction(0)) ** n for T in combinations(probs, t)), Fraction(0))
            total += weight * s
        return total
    raise ValueError(f"unknown method {method!r}")


def paper_uniform_mass(n: int, k: int) -> Fraction:
    """k! S(n,k) / k^n, the uniform identity as printed for the simplex theorem.

    Agrees with ``composition_mass(n, uniform(m), k)`` only when k == m.
    """
    if k == 0:
        return Fraction(1 if n == 0 else 0)
    return Fraction(math.factorial(k) * stirling2(n, k), k**n)
