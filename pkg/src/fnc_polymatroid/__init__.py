"""
FNC Polymatroid - discrete polymatroids and fractional linear network coding.

This package provides:
- Rank oracles (explicit tables and subspace representations over prime fields)
- Bases, C-sets and axiom checks for discrete polymatroids
- Network construction from a polymatroid and a basis vector
- Verification, extraction and bounded search of fractional linear solutions
"""

__version__ = "0.1.0"

from .bridge import PolymatroidMap, check_dpn, extract_solution, polymatroid_from_solution
from .codec import FncSolution, rates, verify_solution
from .constructor import build_network, construct_and_solve, eligible_bases, replay
from .linalg import Field, Mat
from .matroid import Matroid
from .network import Edge, InputEdge, Network
from .polymatroid import DiscretePolymatroid, Representation, polymatroid_of
from .solver import best_average_rate, max_symmetric_rate, search_linear

__all__ = [
    "__version__",
    "DiscretePolymatroid",
    "Edge",
    "Field",
    "FncSolution",
    "InputEdge",
    "Mat",
    "Matroid",
    "Network",
    "PolymatroidMap",
    "Representation",
    "best_average_rate",
    "build_network",
    "check_dpn",
    "construct_and_solve",
    "eligible_bases",
    "extract_solution",
    "max_symmetric_rate",
    "polymatroid_from_solution",
    "polymatroid_of",
    "rates",
    "replay",
    "search_linear",
    "verify_solution",
]
