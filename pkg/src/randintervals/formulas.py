"""Closed-form probabilities, expectations and bounds for the random interval graph.

General formulas take a :class:`LabelDistribution`; uniform shortcuts take
``m``. Everything is exact rational arithmetic except the coupon-collector
integral for non-uniform distributions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Union

from scipy import integrate

from .combinatorics import binomial, composition_mass, stirling2
from .model import LabelDistribution

Number = Union[Fraction, float]
Method = Literal["exact", "lower_bound", "upper_bound"]


def decimal12(value: Number) -> str:
    """Decimal with 12 significant digits, trailing zeros kept."""
    return format(float(value), "#.12g")


@dataclass(frozen=True)
class ProbabilityResult:
    value: Number
    method: Method
    formula: str

    def render(self) -> str:
        if isinstance(self.value, Fraction):
            return f"{self.value} ({decimal12(self.value)})"
        return decimal12(self.value)

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class PairComplement:
    """Probabilities of avoiding one label (q_i, q_j) or a pair of labels (q_ij)."""

    q_i: Fraction
    q_j: Fraction
    q_ij: Fraction

    @classmethod
    def of(cls, p_i, p_j=None) -> "PairComplement":
        p_i = Fraction(p_i)
        p_j = Fraction(0) if p_j is None else Fraction(p_j)
        return cls(1 - p_i, 1 - p_j, 1 - p_i - p_j)


def _check_n(n: int, low: int = 1):
    if n < low:
        raise ValueError(f"need n >= {low}, got {n}")


def empty_graph_prob(n: int, k: int, p: LabelDistribution) -> ProbabilityResult:
    """P(graph is k isolated vertices): exact when p is uniform, otherwise a lower bound.

    Disjoint supports mean every label's points are contiguous, so the
    configurations are compositions of n into k blocks, times the choice
    and order of the k labels.
    """
    _check_n(n)
    m = p.m
    if not 0 <= k <= m:
        raise ValueError(f"k={k} outside [0, {m}]")
    count = math.factorial(k) * binomial(m, k) * binomial(n - 1, k - 1)
    if p.is_uniform:
        return ProbabilityResult(Fraction(count, m**n), "exact", "empty-graph")
    return ProbabilityResult(min(p.probs) ** n * count, "lower_bound", "empty-graph")


def edge_prob(n: int, p_i, p_j) -> ProbabilityResult:
    """P(supports of labels i and j intersect) for general label probabilities."""
    _check_n(n)
    p_i, p_j = Fraction(p_i), Fraction(p_j)
    if p_i <= 0 or p_j <= 0 or p_i + p_j > 1:
        raise ValueError(f"degenerate pair probabilities {p_i}, {p_j}")
    q = PairComplement.of(p_i, p_j).q_ij
    miss = q**n
    for k in range(1, n + 1):
        inner = 2 * sum((p_i**r * p_j ** (k - r) for r in range(1, k)), Fraction(0))
        miss += binomial(n, k) * (inner + p_i**k + p_j**k) * q ** (n - k)
    return ProbabilityResult(1 - miss, "exact", "edge-prob")


def edge_prob_uniform(n: int, m: int) -> ProbabilityResult:
    _check_n(n)
    if m < 2:
        raise ValueError(f"an edge needs m >= 2, got {m}")
    value = 1 - Fraction(2 * n * (m - 1) ** (n - 1) + (m - 2) ** n, m**n)
    return ProbabilityResult(value, "exact", "edge-prob")


def expected_edge_count(n: int, p: LabelDistribution) -> ProbabilityResult:
    _check_n(n)
    m = p.m
    if m < 2:
        return ProbabilityResult(Fraction(0), "exact", "expected-edges")
    if p.is_uniform:
        value = binomial(m, 2) * edge_prob_uniform(n, m).value
    else:
        value = sum(
            (edge_prob(n, p.probs[i], p.probs[j]).value for i in range(m) for j in range(i + 1, m)),
            Fraction(0),
        )
    return ProbabilityResult(value, "exact", "expected-edges")


def point_in_interval_prob(n: int, x: int, p_i) -> ProbabilityResult:
    """P(position x lies in the support of a label with probability p_i)."""
    _check_n(n)
    if not 1 <= x <= n:
        raise ValueError(f"x={x} outside [1, {n}]")
    q = PairComplement.of(p_i).q_i
    return ProbabilityResult(1 - q**x - q ** (n - x + 1) + q**n, "exact", "point-in-interval")


def expected_clique_lower_bound(
    n: int, p: LabelDistribution, paper_verbatim: bool = False
) -> ProbabilityResult:
    """Lower bound on E[clique number]: expected number of supports covering ceil(n/2).

    ``paper_verbatim`` evaluates the printed uniform shortcut
    m - q^c - q^(n-c+1) + q^n instead, which drops the factor m on the
    power terms; it is kept only for comparison.
    """
    _check_n(n)
    c = -(-n // 2)
    if paper_verbatim:
        if not p.is_uniform:
            raise ValueError("paper-verbatim shortcut only exists for uniform p")
        m = p.m
        q = Fraction(m - 1, m)
        value = m - q**c - q ** (n - c + 1) + q**n
        return ProbabilityResult(value, "lower_bound", "clique-verbatim")
    value = sum((point_in_interval_prob(n, c, pi).value for pi in p.probs), Fraction(0))
    return ProbabilityResult(value, "lower_bound", "clique")


def _max_degree_first_factor(r: int, p: LabelDistribution) -> Fraction:
    m = p.m
    p_star = max(p.probs)
    total = Fraction(0)
    for k in range(1, m):
        total += (
            Fraction(k**r, m**r)
            * binomial(m, k)
            * composition_mass(r, p, k)
            * (m - k) ** r
            * p_star**r
        )
    return max(Fraction(0), 1 - total)


def _max_degree_first_factor_verbatim(r: int, m: int) -> Fraction:
    s = sum((Fraction((m - k) ** r, math.factorial(m - k)) * stirling2(r, k) for k in range(1, m)), Fraction(0))
    return max(Fraction(0), 1 - Fraction(math.factorial(m), m ** (2 * r)) * s)


def _max_degree_second_factor_verbatim(length: int, m: int) -> Fraction:
    value = Fraction(math.factorial(m) * stirling2(length, m), m**length)
    if m - 1 > 0:
        value += Fraction(math.factorial(m - 1) * stirling2(length, m - 1), (m - 1) ** length)
    elif length == 0:
        value += 1
    return value


def max_degree_bound_terms(n: int, p: LabelDistribution, paper_verbatim: bool = False):
    """(r, first factor, second factor) for every admissible split size r."""
    m = p.m
    if paper_verbatim and not p.is_uniform:
        raise ValueError("paper-verbatim shortcut only exists for uniform p")
    terms = []
    for r in range(1, (n - m) // 2 + 1):
        middle = n - 2 * r
        if paper_verbatim:
            a = _max_degree_first_factor_verbatim(r, m)
            b = _max_degree_second_factor_verbatim(middle, m)
        else:
            a = _max_degree_first_factor(r, p)
            b = composition_mass(middle, p, m) + composition_mass(middle, p, m - 1)
        terms.append((r, a, b))
    return terms


def max_degree_lower_bound(
    n: int, p: LabelDistribution, paper_verbatim: bool = False
) -> ProbabilityResult:
    """Bound on P(max degree = m - 1), maximized over the outer window size r.

    The sequence is split into disjoint windows [1..r], [r+1..n-r],
    [n-r+1..n]; the first factor bounds P(some label hits both outer
    windows) from below (clamped at 0), the second is P(the middle
    window shows at least m - 1 labels). Returns 0 when no r fits.
    """
    _check_n(n)
    terms = max_degree_bound_terms(n, p, paper_verbatim)
    value = max((a * b for _, a, b in terms), default=Fraction(0))
    return ProbabilityResult(value, "lower_bound", "max-degree-verbatim" if paper_verbatim else "max-degree")


def simplex_prob_lower_bound(
    n: int, p: LabelDistribution, paper_verbatim: bool = False
) -> ProbabilityResult:
    """Bound on P(nerve is the full simplex): both halves see every label.

    The printed uniform shortcut (m! S(h, m) / m^h)^2 coincides with the
    general formula, so ``paper_verbatim`` only changes how it is evaluated.
    """
    _check_n(n, 1)
    h = n // 2
    m = p.m
    if paper_verbatim:
        if not p.is_uniform:
            raise ValueError("paper-verbatim shortcut only exists for uniform p")
        half = Fraction(math.factorial(m) * stirling2(h, m), m**h)
    else:
        half = composition_mass(h, p, m)
    return ProbabilityResult(half * half, "lower_bound", "simplex")


def harmonic(m: int) -> Fraction:
    return sum((Fraction(1, i) for i in range(1, m + 1)), Fraction(0))


def coupon_integral(p: LabelDistribution, epsabs: float = 1e-12) -> float:
    """Integral of 1 - prod(1 - exp(-p_i x)) over [0, inf), by adaptive quadrature."""
    probs = [float(v) for v in p.probs]
    # sum_i exp(-p_i U) / p_i < 1e-14 bounds the discarded tail
    upper = max(math.log(len(probs) / (v * 1e-14)) / v for v in probs)

    def integrand(x):
        prod = 1.0
        for v in probs:
            prod *= -math.expm1(-v * x)
        return 1.0 - prod

    pmin = min(probs)
    breaks = [b / pmin for b in (1.0, 4.0, 16.0) if b / pmin < upper]
    value, _ = integrate.quad(integrand, 0.0, upper, epsabs=epsabs, epsrel=1e-13, limit=500, points=breaks)
    return value


def coupon_expected_time(p: LabelDistribution, method: str = "auto") -> ProbabilityResult:
    """Expected draws until every label has been seen (coupon collector).

    ``method``: "exact" gives m * H_m (uniform only), "integral" always
    integrates numerically, "auto" picks exact when p is uniform.
    """
    if method == "auto":
        method = "exact" if p.is_uniform else "integral"
    if method == "exact":
        if not p.is_uniform:
            raise ValueError("exact coupon time is only implemented for uniform p")
        return ProbabilityResult(p.m * harmonic(p.m), "exact", "coupon-time")
    if method == "integral":
        return ProbabilityResult(coupon_integral(p), "exact", "coupon-integral")
    raise ValueError(f"unknown method {method!r}")


def waiting_time_upper_bound(p: LabelDistribution, method: str = "auto") -> ProbabilityResult:
    """Upper bound on E[first n with a full-simplex nerve]: two full collections."""
    value = 2 * coupon_expected_time(p, method).value
    return ProbabilityResult(value, "upper_bound", "waiting-time")
