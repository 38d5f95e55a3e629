"""Edge colorings of hypercubes: avoiding, extending and cataloguing precolorings."""

from .coloring import ListAssignment, PartialColoring, ProperColoring, standard_coloring
from .hypercube import Edge, Hypercube, build
from .solver import SolveResult, Status, avoid_exact, extend_avoid_exact, extend_exact

__version__ = "0.1.0"

__all__ = [
    "Edge",
    "Hypercube",
    "ListAssignment",
    "PartialColoring",
    "ProperColoring",
    "SolveResult",
    "Status",
    "avoid_exact",
    "build",
    "extend_avoid_exact",
    "extend_exact",
    "standard_coloring",
]
