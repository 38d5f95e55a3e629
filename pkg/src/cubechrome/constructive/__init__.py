"""Constructive avoidance and extension procedures for hypercube colorings."""

from ._blocks import BlockUnsolvable, HypothesisError, block_is_avoidable, solve_blocks
from .avoid import (
    BlockMode,
    avoid_block_decomposition,
    avoid_proper_partition,
    avoid_single_per_color,
    avoid_subcube,
    avoid_three_colors,
)
from .obstructions import (
    ExtendAvoidKind,
    ExtensionKind,
    Obstruction,
    classify_extend_avoid,
    classify_extension,
    extend_avoiding,
)
from .rebalance import RebalanceParams, RebalanceTrace, avoid_rebalance, max_colored_parallels

__all__ = [
    "BlockMode",
    "BlockUnsolvable",
    "ExtendAvoidKind",
    "ExtensionKind",
    "HypothesisError",
    "Obstruction",
    "RebalanceParams",
    "RebalanceTrace",
    "avoid_block_decomposition",
    "avoid_proper_partition",
    "avoid_rebalance",
    "avoid_single_per_color",
    "avoid_subcube",
    "avoid_three_colors",
    "block_is_avoidable",
    "classify_extend_avoid",
    "classify_extension",
    "extend_avoiding",
    "max_colored_parallels",
    "solve_blocks",
]
