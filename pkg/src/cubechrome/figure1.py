"""The six minimal unavoidable proper 3-edge colorings of Q_3, as published drawings.

Each drawing labels twelve edges between eight positioned nodes; ``NODE``
fixes the node-to-vertex correspondence used for every drawing (the nodes
of one drawing are named ``11..14, 21..24`` by their position).
"""

from __future__ import annotations

from .coloring import PartialColoring
from .hypercube import build

NODE = {"11": 0b000, "12": 0b001, "13": 0b010, "23": 0b100, "14": 0b011, "24": 0b101, "21": 0b110, "22": 0b111}

# drawing position of each node (used by the plotting helpers)
POSITION = {
    "11": (-4, 0), "12": (-4, 6), "13": (-2, 2), "14": (-2, 4),
    "21": (0, 2), "22": (0, 4), "23": (2, 0), "24": (2, 6),
}

DRAWINGS: list[dict[tuple[str, str], int]] = [
    {("11", "12"): 1, ("11", "13"): 2, ("11", "23"): 3, ("12", "14"): 3,
     ("12", "24"): 2, ("21", "23"): 1, ("22", "24"): 1},
    {("11", "23"): 1, ("12", "14"): 3, ("12", "24"): 2, ("13", "14"): 1,
     ("21", "23"): 2, ("22", "24"): 1, ("23", "24"): 3},
    {("11", "13"): 2, ("11", "23"): 3, ("12", "14"): 3, ("12", "24"): 2,
     ("13", "14"): 1, ("21", "23"): 1, ("22", "24"): 1},
    {("11", "13"): 1, ("12", "14"): 2, ("12", "24"): 1, ("13", "14"): 3,
     ("21", "23"): 1, ("22", "24"): 3, ("23", "24"): 2},
    {("11", "12"): 1, ("11", "23"): 2, ("12", "14"): 3, ("13", "14"): 2,
     ("13", "21"): 1, ("22", "24"): 1, ("23", "24"): 3},
    {("11", "12"): 1, ("11", "13"): 3, ("12", "24"): 2, ("13", "14"): 2,
     ("13", "21"): 1, ("22", "24"): 1, ("23", "24"): 3},
]


def configurations() -> list[PartialColoring]:
    cube = build(3)
    out = []
    for drawing in DRAWINGS:
        assignment = {cube.edge_between(NODE[a], NODE[b]): c for (a, b), c in drawing.items()}
        out.append(PartialColoring.from_edges(cube, assignment, 3))
    return out
