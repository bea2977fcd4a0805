"""Impartial selection mechanisms on single-nomination graphs.

Exact (rational) and Monte Carlo evaluation of five randomized selection
mechanisms, generators for the named adversarial graph families, and
exhaustive verifiers for their impartiality, guarantee, and ceiling
properties.
"""

__version__ = "0.1.0"

from .graphs import (
    AnyGraph,
    CapacityError,
    InputError,
    NominationGraph,
    PartialNominationGraph,
    Permutation,
    SelectionDistribution,
    graph_from_text,
    graph_to_text,
    graphs_from_text,
)
from .rng import SeedStream

__all__ = [
    "AnyGraph",
    "CapacityError",
    "InputError",
    "NominationGraph",
    "PartialNominationGraph",
    "Permutation",
    "SeedStream",
    "SelectionDistribution",
    "graph_from_text",
    "graph_to_text",
    "graphs_from_text",
    "__version__",
]
