"""Mixing rates and visit loads of simple and non-backtracking walks on regular graphs."""

from .errors import (
    Degree2Nb,
    GraphError,
    HorizonTooShort,
    NbwalkError,
    NumericsError,
    OverflowRisk,
)
from .evolve import MixingReport, claim23_sandwich, mixing_report
from .graph import (
    DecoratedGraph,
    RegularGraph,
    complete_graph,
    cycle_decorated_expander,
    cycle_graph,
    from_adjacency,
    girth,
    petersen_graph,
    random_regular,
    read_graph,
    write_graph,
)
from .montecarlo import (
    LoadReport,
    WalkTrace,
    balls_and_bins,
    cycle_trap_frequency,
    load_experiment,
    simulate_walk,
)
from .nbkernel import RatePair, nb_count_matrix, rates
from .spectra import Spectrum, eigenvalues_dense, lambda_star

__version__ = "0.1.0"

__all__ = [
    "Degree2Nb",
    "GraphError",
    "HorizonTooShort",
    "NbwalkError",
    "NumericsError",
    "OverflowRisk",
    "MixingReport",
    "claim23_sandwich",
    "mixing_report",
    "DecoratedGraph",
    "RegularGraph",
    "complete_graph",
    "cycle_decorated_expander",
    "cycle_graph",
    "from_adjacency",
    "girth",
    "petersen_graph",
    "random_regular",
    "read_graph",
    "write_graph",
    "LoadReport",
    "WalkTrace",
    "balls_and_bins",
    "cycle_trap_frequency",
    "load_experiment",
    "simulate_walk",
    "RatePair",
    "nb_count_matrix",
    "rates",
    "Spectrum",
    "eigenvalues_dense",
    "lambda_star",
]
