"""Random interval graphs generated by i.i.d. labeled point sequences.

Exact formulas, an enumeration oracle and seeded Monte Carlo for the
empirical-support interval graph (and its nerve) of a random coloring.
"""

from .combinatorics import (
    binomial,
    multinomial_coefficient,
    multinomial_prob,
    stirling2,
    weak_compositions,
)
from .model import (
    LabelDistribution,
    IntervalGraph,
    NerveComplex,
    SupportSet,
    build_interval_graph,
    build_nerve,
    clique_number,
    derive_supports,
    max_degree,
)

__all__ = [
    "binomial",
    "multinomial_coefficient",
    "multinomial_prob",
    "stirling2",
    "weak_compositions",
    "LabelDistribution",
    "IntervalGraph",
    "NerveComplex",
    "SupportSet",
    "build_interval_graph",
    "build_nerve",
    "clique_number",
    "derive_supports",
    "max_degree",
]

__version__ = "0.1.0"
