"""Query solvers and the semantic oracle."""

from .common import SolveResult, SolveStats
from .elimination import joint_value_function, stage_function, ve_ax1, ve_ax2, ve_naive
from .oracle import ConditionalDistribution, completion, conditional, semantic_oracle
from .tree import tree_search

ALGORITHMS = {
    "tree": tree_search,
    "ve": ve_naive,
    "ve-ax1": ve_ax1,
    "ve-ax2": ve_ax2,
    "oracle": semantic_oracle,
}


def applicable(structure) -> list:
    """Names of the algorithms that accept networks on ``structure``."""
    out = ["tree", "ve"]
    if structure.ax1:
        out.append("ve-ax1")
    if structure.ax2:
        out.append("ve-ax2")
    if structure.conditionable:
        out.append("oracle")
    return out


__all__ = [
    "ALGORITHMS", "ConditionalDistribution", "SolveResult", "SolveStats", "applicable",
    "completion", "conditional", "joint_value_function", "semantic_oracle", "stage_function",
    "tree_search", "ve_ax1", "ve_ax2", "ve_naive",
]
